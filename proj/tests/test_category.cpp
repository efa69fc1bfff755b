#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ainf/corpus.hpp"

using namespace ainf;

namespace {

// Independent evaluator of the A-infinity relations on raw structure
// constants: sum over i + j + k = n of mu(x_1..x_i, mu(x_{i+1}..x_{i+j}), ..).
// Works on generator ids and std::set parity, not on the library's Vec.
using Parity = std::set<int>;

void toggle(Parity& p, int b) {
  if (!p.erase(b)) p.insert(b);
}

Parity eval_mu(const Category& c, const std::vector<Parity>& args) {
  Parity out;
  std::vector<int> word(args.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == args.size()) {
      auto it = c.mu.find(word);
      if (it != c.mu.end())
        for (int b : it->second) toggle(out, b);
      return;
    }
    for (int g : args[i]) {
      word[i] = g;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

bool path_composable(const Category& c, const std::vector<int>& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (c.gens[w[i]].tgt != c.gens[w[i + 1]].src) return false;
  return true;
}

bool oracle_relations_hold(const Category& c) {
  int top = 2 * c.arity_bound - 1;
  std::vector<int> w;
  bool ok = true;
  std::function<void()> rec = [&]() {
    if (!ok) return;
    if (!w.empty() && path_composable(c, w)) {
      int n = int(w.size());
      Parity total;
      for (int i = 0; i < n; ++i)
        for (int j = 1; i + j <= n; ++j) {
          std::vector<Parity> inner;
          for (int t = i; t < i + j; ++t) inner.push_back({w[t]});
          std::vector<Parity> outer;
          for (int t = 0; t < i; ++t) outer.push_back({w[t]});
          outer.push_back(eval_mu(c, inner));
          for (int t = i + j; t < n; ++t) outer.push_back({w[t]});
          for (int b : eval_mu(c, outer)) toggle(total, b);
        }
      if (!total.empty()) ok = false;
    }
    if (int(w.size()) == top) return;
    for (int g = 0; g < c.ngen(); ++g) {
      w.push_back(g);
      if (path_composable(c, w)) rec();
      w.pop_back();
    }
  };
  rec();
  return ok;
}

std::vector<MuCoordinate> all_coordinates(const Category& c) {
  std::vector<MuCoordinate> r;
  for (int k = 1; k <= c.arity_bound; ++k)
    for_each_chain(c, k, -1, -1, [&](const Word& w) {
      for (int b : c.hom(chain_start(c, w), chain_end(c, w))) r.push_back({w, b});
    });
  return r;
}

}  // namespace

TEST_CASE("corpus categories satisfy the relations") {
  for (auto& n : corpus_names()) {
    auto e = build_corpus(n);
    auto r = validate_relations(*e.cat);
    CAPTURE(n);
    CHECK(r.ok == !e.broken);
    CHECK(oracle_relations_hold(*e.cat) == !e.broken);
    if (e.cat->graded) CHECK(degree_audit(*e.cat).ok);
  }
}

TEST_CASE("the broken entry fails at arity 3 with a localized witness") {
  auto e = build_corpus("broken_dual_numbers");
  auto r = validate_relations(*e.cat);
  REQUIRE_FALSE(r.ok);
  REQUIRE_FALSE(r.witnesses.empty());
  for (auto& w : r.witnesses) {
    CHECK(w.arity == 3);
    CHECK(w.where.find("tuple") != std::string::npos);
  }
}

TEST_CASE("single-bit mutations: library verdict matches the independent oracle") {
  for (auto n : {"k_field", "dual_numbers", "exterior_graded", "a2_quiver", "nilpotent_mu3"}) {
    auto e = build_corpus(n);
    int caught = 0, survived = 0;
    for (auto& co : all_coordinates(*e.cat)) {
      auto m = mutate(e, co);
      bool lib = validate_relations(*m.cat).ok;
      CAPTURE(n);
      CAPTURE(m.description);
      CHECK(lib == oracle_relations_hold(*m.cat));
      (lib ? survived : caught)++;
    }
    CHECK(caught > 0);
  }
}

TEST_CASE("flip then flip back is the original") {
  auto e = build_corpus("dual_numbers");
  int one = e.cat->gen_index("1"), x = e.cat->gen_index("x");
  MuCoordinate co{{one, x}, one};  // the bit the broken entry carries
  auto once = mutate(e, co);
  CHECK_FALSE(*once.cat == *e.cat);
  CHECK_FALSE(validate_relations(*once.cat).ok);
  auto twice = mutate(once, co);
  CHECK(*twice.cat == *e.cat);
  CHECK_THROWS_AS(mutate(e, MuCoordinate{{}, one}), std::invalid_argument);
}

TEST_CASE("a flip that stays consistent passes") {
  // removing mu3(a,a,a) = b leaves the strictly unital algebra a^2 = b
  auto e = build_corpus("nilpotent_mu3");
  int a = e.cat->gen_index("a"), b = e.cat->gen_index("b");
  auto m = mutate(e, {{a, a, a}, b});
  CHECK(m.cat->mu_of({a, a, a}).empty());
  CHECK(validate_relations(*m.cat).ok);
  CHECK(oracle_relations_hold(*m.cat));
}

TEST_CASE("mutate rejects outputs in the wrong hom space") {
  auto e = build_corpus("a2_quiver");
  int eX = e.cat->gen_index("eX"), a = e.cat->gen_index("a");
  CHECK_THROWS_AS(mutate(e, {{eX, eX}, a}), std::invalid_argument);
  CHECK_THROWS_AS(mutate(e, {{a, eX}, a}), std::invalid_argument);
}

TEST_CASE("nilpotent_mu3 really uses mu3") {
  auto c = build_corpus("nilpotent_mu3").cat;
  bool has_mu3 = false;
  for (auto& [k, v] : c->mu) has_mu3 |= k.size() == 3 && !v.empty();
  CHECK(has_mu3);
  CHECK(c->arity_bound == 3);
  UnitAssignment u{Vec(c->gen_index("e"))};
  CHECK(check_strict_unit(*c, u).ok);
}

TEST_CASE("degree audit catches an inhomogeneous structure constant") {
  auto c = std::make_shared<Category>(*build_corpus("exterior_graded").cat);
  int one = c->gen_index("1"), xi = c->gen_index("xi");
  c->set_mu({xi, xi}, Vec(one));
  CHECK_FALSE(degree_audit(*c).ok);
}

TEST_CASE("homological category and units") {
  auto k = build_corpus("k_field").cat;
  auto hk = homological_category(k);
  CHECK(hk.H[0][0].dim() == 1);
  CHECK(hk.associative());
  for (auto& n : corpus_names()) {
    auto e = build_corpus(n);
    if (e.broken) continue;
    CAPTURE(n);
    auto u = find_homological_units(e.cat);
    REQUIRE(u.has_value());
    CHECK(homological_category(e.cat).associative());
  }

  // a unit plus a two-term acyclic piece u -> v: cohomology is spanned by e
  auto c = make_category("acyclic_piece", false, 0, 2, {"pt"},
                         {{"e", "pt", "pt", 0}, {"u", "pt", "pt", 0}, {"v", "pt", "pt", 0}},
                         {{{"u"}, {"v"}},
                          {{"e", "e"}, {"e"}},
                          {{"e", "u"}, {"u"}},
                          {{"u", "e"}, {"u"}},
                          {{"e", "v"}, {"v"}},
                          {{"v", "e"}, {"v"}}});
  REQUIRE(validate_relations(*c).ok);
  CHECK(homological_category(c).H[0][0].dim() == 1);
}

TEST_CASE("opposite and suspension are involutive up to shift") {
  for (auto n : {"dual_numbers", "exterior_graded", "a2_quiver", "nilpotent_mu3"}) {
    auto c = build_corpus(n).cat;
    CAPTURE(n);
    auto op = opposite(*c);
    CHECK(validate_relations(*op).ok);
    CHECK(*opposite(*op) == *c);
    if (c->graded) {
      auto s = suspend(*c, 3);
      CHECK(degree_audit(*s).ok);
      CHECK(*suspend(*s, -3) == *c);
    }
  }
}

TEST_CASE("ill-typed tensor entries are rejected") {
  auto c = std::make_shared<Category>(*build_corpus("a2_quiver").cat);
  int a = c->gen_index("a");
  c->set_mu({a, a}, Vec(a));
  CHECK_THROWS_AS(check_types(*c), std::invalid_argument);
}

TEST_CASE("suspension examples") {
  auto c = build_corpus("exterior_graded").cat;
  CHECK(*suspend(*c, 0) == *c);
  auto s = suspend(*c, 1);
  CHECK(s->N == c->N - 1);
  // shifting by one moves every generator down one degree, which keeps mu_k homogeneous
  for (int g = 0; g < c->ngen(); ++g) CHECK(s->gens[g].degree == c->gens[g].degree - 1);
  CHECK(degree_audit(*s).ok);
}

TEST_CASE("opposite examples") {
  auto k = build_corpus("k_field").cat;
  CHECK(*opposite(*k) == *k);
  auto a2 = build_corpus("a2_quiver").cat;
  auto op = opposite(*a2);
  int X = a2->object_index("X"), Y = a2->object_index("Y");
  CHECK(op->hom(Y, X).size() == 1);
  CHECK(op->hom(X, Y).empty());
}

TEST_CASE("strict unit examples on the dual numbers") {
  auto c = build_corpus("dual_numbers").cat;
  CHECK(check_strict_unit(*c, {Vec(c->gen_index("1"))}).ok);
  CHECK_FALSE(check_strict_unit(*c, {Vec(c->gen_index("x"))}).ok);
}

TEST_CASE("zero mu2 with nonzero homology has no homological unit") {
  auto c = make_category("no_product", false, 0, 2, {"pt"}, {{"z", "pt", "pt", 0}}, {});
  REQUIRE(validate_relations(*c).ok);
  CHECK_FALSE(find_homological_units(c).has_value());
}
