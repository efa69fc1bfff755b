#include "ainf/category.hpp"

#include <sstream>
#include <stdexcept>

namespace ainf {

int Category::add_object(const std::string& label) {
  if (object_index(label) >= 0) throw std::invalid_argument("duplicate object " + label);
  objects.push_back(label);
  return nobj() - 1;
}

int Category::add_gen(int src, int tgt, const std::string& label, int degree) {
  if (src < 0 || tgt < 0 || src >= nobj() || tgt >= nobj()) throw std::invalid_argument("generator " + label + ": bad objects");
  for (auto& g : gens)
    if (g.label == label) throw std::invalid_argument("duplicate basis label " + label);
  gens.push_back({label, src, tgt, degree});
  return ngen() - 1;
}

void Category::finalize() {
  int n = nobj();
  hom_.assign(n, std::vector<std::vector<int>>(n));
  out_.assign(n, {});
  in_.assign(n, {});
  local_.assign(gens.size(), 0);
  for (int g = 0; g < ngen(); ++g) {
    auto& G = gens[g];
    local_[g] = int(hom_[G.src][G.tgt].size());
    hom_[G.src][G.tgt].push_back(g);
    out_[G.src].push_back(g);
    in_[G.tgt].push_back(g);
  }
}

int Category::object_index(const std::string& label) const {
  for (int i = 0; i < nobj(); ++i)
    if (objects[i] == label) return i;
  return -1;
}

int Category::gen_index(const std::string& label) const {
  for (int i = 0; i < ngen(); ++i)
    if (gens[i].label == label) return i;
  return -1;
}

std::string Category::word_str(const Word& w) const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << gens[w[i]].label;
  os << ")";
  return os.str();
}

std::string Category::vec_str(const Vec& v) const {
  if (v.empty()) return "0";
  std::string s;
  for (int b : v) s += (s.empty() ? "" : "+") + gens[b].label;
  return s;
}

bool Category::same_shape(const Category& o) const {
  return graded == o.graded && (!graded || N == o.N) && objects == o.objects && gens == o.gens;
}

bool Category::operator==(const Category& o) const {
  return same_shape(o) && arity_bound == o.arity_bound && mu == o.mu;
}

CatPtr Category::ground() {
  static CatPtr g = [] {
    auto c = std::make_shared<Category>();
    c->name = "<ground>";
    c->graded = true;
    c->N = 0;
    c->arity_bound = 2;
    // the unit acts implicitly; no words over the ground side ever occur
    c->add_object("pt");
    c->finalize();
    return CatPtr(c);
  }();
  return g;
}

void for_each_chain(const Category& c, int len, int start, int end, const std::function<void(const Word&)>& f) {
  if (len <= 0) return;
  Word w;
  w.reserve(len);
  std::function<void(int)> rec = [&](int obj) {
    if (int(w.size()) == len) {
      if (end < 0 || obj == end) f(w);
      return;
    }
    for (int g : c.out(obj)) {
      w.push_back(g);
      rec(c.gens[g].tgt);
      w.pop_back();
    }
  };
  if (start >= 0) {
    rec(start);
  } else {
    for (int x = 0; x < c.nobj(); ++x) rec(x);
  }
}

bool composable(const Category& c, const Word& w) {
  for (int g : w)
    if (g < 0 || g >= c.ngen()) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (c.gens[w[i - 1]].tgt != c.gens[w[i]].src) return false;
  return true;
}

void check_types(const Category& c) {
  for (auto& [key, out] : c.mu) {
    if (key.empty()) throw std::invalid_argument("mu entry with empty input tuple");
    if (int(key.size()) > c.arity_bound)
      throw std::invalid_argument("mu entry " + c.word_str(key) + " exceeds the arity bound");
    if (!composable(c, key)) throw std::invalid_argument("mu entry on non-composable tuple " + c.word_str(key));
    int s = chain_start(c, key), t = chain_end(c, key);
    for (int b : out)
      if (b < 0 || b >= c.ngen() || c.gens[b].src != s || c.gens[b].tgt != t)
        throw std::invalid_argument("mu" + c.word_str(key) + " has output outside hom(" + c.objects[s] + "," +
                                    c.objects[t] + ")");
  }
}

namespace {

Vec relation_value(const Category& c, const Word& x) {
  int k = int(x.size());
  int K = c.arity_bound;
  Vec total;
  for (int s = 1; s <= std::min(k, K); ++s) {
    if (k - s + 1 > K) continue;
    for (int j = 0; j + s <= k; ++j) {
      Word inner(x.begin() + j, x.begin() + j + s);
      auto* v = lookup(c.mu, inner);
      if (!v) continue;
      Word outer(x.begin(), x.begin() + j);
      outer.push_back(0);
      outer.insert(outer.end(), x.begin() + j + s, x.end());
      for (int b : *v) {
        outer[j] = b;
        if (auto* o = lookup(c.mu, outer)) total += *o;
      }
    }
  }
  return total;
}

}  // namespace

Report validate_relations(const Category& c) {
  check_types(c);
  Report r;
  for (int k = 1; k <= 2 * c.arity_bound - 1; ++k) {
    for_each_chain(c, k, -1, -1, [&](const Word& x) {
      ++r.checked;
      auto v = relation_value(c, x);
      if (!v.empty()) r.fail(k, "objects " + c.objects[chain_start(c, x)] + "->" + c.objects[chain_end(c, x)] +
                                    " tuple " + c.word_str(x) + " relation sum " + c.vec_str(v));
    });
  }
  return r;
}

Report degree_audit(const Category& c) {
  Report r;
  if (!c.graded) {
    r.notes.push_back("ungraded mode: degree audit skipped");
    return r;
  }
  for (auto& [key, out] : c.mu) {
    int k = int(key.size());
    int want = c.mu_degree(k);
    for (int g : key) want += c.gens[g].degree;
    for (int b : out) {
      ++r.checked;
      if (c.gens[b].degree != want)
        r.fail(k, "mu" + c.word_str(key) + " -> " + c.gens[b].label + " has degree " +
                      std::to_string(c.gens[b].degree) + ", expected " + std::to_string(want));
    }
  }
  return r;
}

Report check_strict_unit(const Category& c, const UnitAssignment& u) {
  if (int(u.size()) != c.nobj()) throw std::invalid_argument("unit assignment must name one element per object");
  for (int x = 0; x < c.nobj(); ++x)
    for (int b : u[x])
      if (b < 0 || b >= c.ngen() || c.gens[b].src != x || c.gens[b].tgt != x)
        throw std::invalid_argument("unit element for " + c.objects[x] + " is not in hom(X,X)");
  Report r;
  for (int x = 0; x < c.nobj(); ++x) {
    ++r.checked;
    auto d = c.mu_apply({&u[x]});
    if (!d.empty()) r.fail(1, "mu1(e_" + c.objects[x] + ") = " + c.vec_str(d));
  }
  for (int g = 0; g < c.ngen(); ++g) {
    Vec x(g);
    auto& G = c.gens[g];
    r.checked += 2;
    auto right = c.mu_apply({&x, &u[G.tgt]});
    if (right != x) r.fail(2, "mu2(" + G.label + ", e) = " + c.vec_str(right));
    auto left = c.mu_apply({&u[G.src], &x});
    if (left != x) r.fail(2, "mu2(e, " + G.label + ") = " + c.vec_str(left));
  }
  for (int k = 3; k <= c.arity_bound; ++k) {
    for_each_chain(c, k - 1, -1, -1, [&](const Word& w) {
      for (int p = 0; p < k; ++p) {
        int obj = p == 0 ? c.gens[w[0]].src : c.gens[w[p - 1]].tgt;
        std::vector<Vec> single;
        for (int g : w) single.emplace_back(g);
        std::vector<const Vec*> args;
        for (int i = 0; i < k - 1; ++i) {
          if (i == p) args.push_back(&u[obj]);
          args.push_back(&single[i]);
        }
        if (p == k - 1) args.push_back(&u[obj]);
        ++r.checked;
        auto v = c.mu_apply(args);
        if (!v.empty()) r.fail(k, "unit inserted at position " + std::to_string(p) + " of " + c.word_str(w));
      }
    });
  }
  return r;
}

BitVec HomologicalCategory::to_local(int x, int y, const Vec& v) const {
  const auto& h = cat->hom(x, y);
  BitVec b(h.size());
  for (int g : v) {
    if (cat->gens[g].src != x || cat->gens[g].tgt != y) throw std::invalid_argument("element not in hom space");
    b.flip(cat->local(g));
  }
  return b;
}

Vec HomologicalCategory::to_global(int x, int y, const BitVec& b) const {
  Vec v;
  for (auto i : b.ones()) v.toggle(cat->hom(x, y)[i]);
  return v;
}

Vec HomologicalCategory::rep(int x, int y, const BitVec& coords) const {
  BitVec acc(cat->hom(x, y).size());
  for (auto i : coords.ones()) acc ^= H[x][y].reps[i];
  return to_global(x, y, acc);
}

BitVec HomologicalCategory::product(int x, int y, int z, const BitVec& a, const BitVec& b) const {
  Vec va = rep(x, y, a), vb = rep(y, z, b);
  Vec p = cat->mu_apply({&va, &vb});
  return H[x][z].coordinates(to_local(x, z, p));
}

bool HomologicalCategory::associative() const {
  int n = cat->nobj();
  for (int w = 0; w < n; ++w)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          auto dim = [&](int s, int t) { return H[s][t].dim(); };
          for (std::size_t i = 0; i < dim(w, x); ++i)
            for (std::size_t j = 0; j < dim(x, y); ++j)
              for (std::size_t k = 0; k < dim(y, z); ++k) {
                BitVec a(dim(w, x)), b(dim(x, y)), c(dim(y, z));
                a.set(i);
                b.set(j);
                c.set(k);
                if (product(w, y, z, product(w, x, y, a, b), c) != product(w, x, z, a, product(x, y, z, b, c)))
                  return false;
              }
        }
  return true;
}

HomologicalCategory homological_category(CatPtr c) {
  HomologicalCategory hc;
  hc.cat = c;
  int n = c->nobj();
  hc.complex.assign(n, std::vector<std::shared_ptr<ChainComplex>>(n));
  hc.H.assign(n, std::vector<Homology>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& h = c->hom(x, y);
      F2Matrix d(h.size(), h.size());
      std::vector<std::string> labels;
      std::vector<int> deg;
      for (std::size_t j = 0; j < h.size(); ++j) {
        labels.push_back(c->gens[h[j]].label);
        deg.push_back(c->gens[h[j]].degree);
        for (int b : c->mu_of({h[j]})) d.set(c->local(b), j);
      }
      hc.complex[x][y] = c->graded ? std::make_shared<ChainComplex>(labels, deg, d)
                                   : std::make_shared<ChainComplex>(labels, d);
      hc.H[x][y] = homology(*hc.complex[x][y]);
    }
  return hc;
}

std::optional<UnitAssignment> find_homological_units(CatPtr c) {
  auto hc = homological_category(c);
  int n = c->nobj();
  UnitAssignment out(n);
  for (int x = 0; x < n; ++x) {
    const auto& H = hc.H[x][x];
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < H.dim(); ++i)
      if (!c->graded || H.rep_degree[i] == c->N) pos.push_back(i);
    if (pos.size() > 20) throw std::runtime_error("find_homological_units: homology too large to scan");
    bool found = false;
    // lexicographic order on coordinate strings (first coordinate most significant)
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << pos.size()) && !found; ++v) {
      BitVec u(H.dim());
      for (std::size_t i = 0; i < pos.size(); ++i)
        if ((v >> (pos.size() - 1 - i)) & 1) u.set(pos[i]);
      bool ok = true;
      for (int y = 0; y < n && ok; ++y) {
        for (std::size_t i = 0; i < hc.H[y][x].dim() && ok; ++i) {
          BitVec a(hc.H[y][x].dim());
          a.set(i);
          ok = hc.product(y, x, x, a, u) == a;
        }
        for (std::size_t i = 0; i < hc.H[x][y].dim() && ok; ++i) {
          BitVec b(hc.H[x][y].dim());
          b.set(i);
          ok = hc.product(x, x, y, u, b) == b;
        }
      }
      if (ok) {
        found = true;
        out[x] = hc.rep(x, x, u);
      }
    }
    if (!found) return std::nullopt;
  }
  return out;
}

CatPtr opposite(const Category& c) {
  auto o = std::make_shared<Category>();
  o->name = c.name + "^opp";
  o->graded = c.graded;
  o->N = c.N;
  o->arity_bound = c.arity_bound;
  o->objects = c.objects;
  for (auto& g : c.gens) o->gens.push_back({g.label, g.tgt, g.src, g.degree});
  o->finalize();
  for (auto& [key, out] : c.mu) o->mu[Word(key.rbegin(), key.rend())] = out;
  return o;
}

CatPtr suspend(const Category& c, int j) {
  if (!c.graded) throw std::invalid_argument("suspend: category is ungraded");
  auto o = std::make_shared<Category>(c);
  if (j != 0) o->name = c.name + "[" + std::to_string(j) + "]";
  o->N = c.N - j;
  for (auto& g : o->gens) g.degree -= j;
  o->finalize();
  return o;
}

}  // namespace ainf
