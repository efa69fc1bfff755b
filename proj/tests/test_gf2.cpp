#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "ainf/gf2.hpp"

using namespace ainf;

namespace {

F2Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double p = 0.4) {
  std::bernoulli_distribution b(p);
  F2Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (b(rng)) m.set(i, j);
  return m;
}

// 2^rank = number of distinct images of all 2^cols inputs
std::size_t rank_by_enumeration(const F2Matrix& m) {
  std::set<std::string> images;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m.cols()); ++mask) {
    BitVec v(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
      if ((mask >> j) & 1) v.set(j);
    images.insert(m.apply(v).str());
  }
  std::size_t r = 0;
  while ((std::size_t(1) << r) < images.size()) ++r;
  return r;
}

// random two-step graded complex C2 -> C1 -> C0 with d^2 = 0: d1 is random,
// d2 is built from kernel vectors of d1
std::shared_ptr<ChainComplex> random_complex(std::mt19937_64& rng, std::size_t n0, std::size_t n1, std::size_t n2) {
  F2Matrix d1 = random_matrix(n0, n1, rng);
  auto ker = kernel_basis(d1);
  std::bernoulli_distribution coin(0.5);
  std::size_t n = n0 + n1 + n2;
  F2Matrix d(n, n);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      if (d1.get(i, j)) d.set(i, n0 + j);
  for (std::size_t j = 0; j < n2; ++j) {
    BitVec col(n1);
    for (auto& k : ker)
      if (coin(rng)) col ^= k;
    for (std::size_t i = 0; i < n1; ++i)
      if (col.get(i)) d.set(n0 + i, n0 + n1 + j);
  }
  std::vector<std::string> labels;
  std::vector<int> deg;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back("b" + std::to_string(i));
    deg.push_back(i < n0 ? 0 : i < n0 + n1 ? 1 : 2);
  }
  return std::make_shared<ChainComplex>(labels, deg, d);
}

// h: degree +1 on the same basis
F2Matrix random_homotopy(const ChainComplex& c, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.3);
  F2Matrix h(c.dim(), c.dim());
  for (std::size_t i = 0; i < c.dim(); ++i)
    for (std::size_t j = 0; j < c.dim(); ++j)
      if (c.degrees()[i] == c.degrees()[j] + 1 && coin(rng)) h.set(i, j);
  return h;
}

}  // namespace

TEST_CASE("rank agrees with image enumeration") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 7, c = 1 + rng() % 9;
    auto m = random_matrix(r, c, rng);
    CHECK(rank(m) == rank_by_enumeration(m));
  }
}

TEST_CASE("kernel basis is independent, annihilated and of the right size") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = 1 + rng() % 10, c = 1 + rng() % 70;
    auto m = random_matrix(r, c, rng);
    auto k = kernel_basis(m);
    CHECK(k.size() + rank(m) == c);
    EchelonBasis eb(c);
    for (auto& v : k) {
      CHECK_FALSE(m.apply(v).any());
      CHECK(eb.insert(v));
    }
  }
}

TEST_CASE("matrix algebra") {
  auto a = F2Matrix::from_rows({{1, 1, 0}, {0, 1, 1}});
  auto b = F2Matrix::from_rows({{1, 0}, {1, 1}, {0, 1}});
  CHECK(a * b == F2Matrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(a.transpose().transpose() == a);
  CHECK((a + a).is_zero());
  CHECK(rank(F2Matrix::identity(130)) == 130);
}

TEST_CASE("echelon coordinates reconstruct the vector") {
  std::mt19937_64 rng(9);
  EchelonBasis eb(12);
  std::vector<BitVec> gens;
  for (int i = 0; i < 6; ++i) {
    auto m = random_matrix(1, 12, rng, 0.5);
    gens.push_back(m.row(0));
    eb.insert(gens.back());
  }
  for (int t = 0; t < 50; ++t) {
    BitVec v(12);
    for (auto& g : gens)
      if (rng() & 1) v ^= g;
    BitVec coeffs;
    CHECK_FALSE(eb.reduce(v, &coeffs).any());
    BitVec back(12);
    for (auto i : coeffs.ones()) back ^= gens[i];
    CHECK(back == v);
  }
}

TEST_CASE("homology of a hand complex") {
  // C1 = <a, b>, C0 = <c>, d a = d b = c: H1 = <a+b>, H0 = 0
  auto d = F2Matrix::from_rows({{0, 0, 0}, {0, 0, 0}, {1, 1, 0}});
  ChainComplex c({"a", "b", "c"}, {1, 1, 0}, d);
  auto h = homology(c);
  CHECK(h.dim() == 1);
  CHECK(h.dim(1) == 1);
  CHECK(h.dim(0) == 0);
  BitVec ab(3);
  ab.set(0);
  ab.set(1);
  CHECK_FALSE(h.is_boundary(ab));
  BitVec a(3);
  a.set(0);
  CHECK_THROWS(h.coordinates(a));
}

TEST_CASE("ungraded complex with square-zero endomorphism") {
  // x -> y, z free: H = <z>
  auto d = F2Matrix::from_rows({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}});
  ChainComplex c({"x", "y", "z"}, d);
  CHECK(homology(c).dim() == 1);
  auto bad = F2Matrix::from_rows({{0, 1}, {1, 0}});
  CHECK_THROWS(ChainComplex({"x", "y"}, bad).check());
}

TEST_CASE("cone of the identity is acyclic, dual complex has the same homology") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    auto c = random_complex(rng, 1 + rng() % 4, 1 + rng() % 5, rng() % 4);
    c->check();
    ChainMap id(c, c, F2Matrix::identity(c->dim()));
    CHECK(id.commutes());
    CHECK(homology(mapping_cone(id)).dim() == 0);
    auto h = homology(*c);
    auto hd = homology(dual_complex(*c));
    for (int p : c->degree_list()) CHECK(h.dim(p) == hd.dim(-p));
  }
}

TEST_CASE("quasi-iso by cone and by rank agree on homotopic maps") {
  std::mt19937_64 rng(13);
  int acyclic = 0, nonacyclic = 0;
  for (int t = 0; t < 60; ++t) {
    auto c = random_complex(rng, 1 + rng() % 4, 1 + rng() % 5, rng() % 4);
    auto h = random_homotopy(*c, rng);
    F2Matrix nullhom = c->d() * h + h * c->d();
    ChainMap f(c, c, F2Matrix::identity(c->dim()) + nullhom);
    ChainMap z(c, c, nullhom);
    REQUIRE(f.commutes());
    REQUIRE(z.commutes());
    auto rf = is_quasi_iso(f);
    CHECK(rf.agree());
    CHECK(rf.value());
    auto rz = is_quasi_iso(z);
    CHECK(rz.agree());
    bool zero_h = homology(*c).dim() == 0;
    CHECK(rz.value() == zero_h);
    (zero_h ? acyclic : nonacyclic)++;
  }
  CHECK(nonacyclic > 0);
}

TEST_CASE("induced map of a composite is the product") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    auto c = random_complex(rng, 2, 3, 2);
    auto h1 = random_homotopy(*c, rng), h2 = random_homotopy(*c, rng);
    ChainMap f(c, c, F2Matrix::identity(c->dim()) + c->d() * h1 + h1 * c->d());
    ChainMap g(c, c, c->d() * h2 + h2 * c->d());
    auto hc = homology(*c);
    CHECK(induced_map(f.then(g), hc, hc) == induced_map(g, hc, hc) * induced_map(f, hc, hc));
  }
}
