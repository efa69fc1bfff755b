#include "ainf/bimodule.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace ainf {

int max_arity(const BiTensor& t) {
  int a = 0;
  for (auto& [k, v] : t) a = std::max(a, k.arity());
  return a;
}

int Bimodule::add_gen(int x, int y, const std::string& label, int degree, bool dual) {
  gens.push_back({label, x, y, degree, dual});
  return int(gens.size()) - 1;
}

void Bimodule::finalize() {
  value_.assign(A->nobj(), std::vector<std::vector<int>>(B->nobj()));
  for (int g = 0; g < ngen(); ++g) {
    auto& v = gens[g];
    if (v.x < 0 || v.x >= A->nobj() || v.y < 0 || v.y >= B->nobj())
      throw std::invalid_argument("bimodule " + name + ": value generator " + v.label + " has a bad object");
    value_[v.x][v.y].push_back(g);
  }
}

std::string Bimodule::key_str(const BiKey& k) const {
  std::string s = "(";
  for (int g : k.left) s += A->gens[g].label + ",";
  s += "[" + gens[k.w].label + (gens[k.w].dual ? "^" : "") + "]";
  for (int g : k.right) s += "," + B->gens[g].label;
  return s + ")";
}

std::string Bimodule::vec_str(const Vec& v) const {
  if (v.empty()) return "0";
  std::string s;
  for (int g : v) s += (s.empty() ? "" : "+") + gens[g].label + (gens[g].dual ? "^" : "");
  return s;
}

void for_each_key(const Bimodule& m, int max_arity, const std::function<void(const BiKey&)>& f) {
  BiKey key;
  for (int z = 0; z < m.ngen(); ++z) {
    key.w = z;
    int x = m.gens[z].x, y = m.gens[z].y;
    for (int k = 0; k <= max_arity; ++k) {
      auto with_left = [&](const Word& l) {
        key.left = l;
        for (int r = 0; r + k <= max_arity; ++r) {
          if (r == 0) {
            key.right.clear();
            f(key);
            continue;
          }
          for_each_chain(*m.B, r, y, -1, [&](const Word& rw) {
            key.right = rw;
            f(key);
          });
        }
      };
      if (k == 0)
        with_left({});
      else
        for_each_chain(*m.A, k, -1, x, with_left);
    }
  }
}

namespace {

int key_src(const Bimodule& m, const BiKey& k) { return k.left.empty() ? m.gens[k.w].x : m.A->gens[k.left.front()].src; }
int key_tgt(const Bimodule& m, const BiKey& k) { return k.right.empty() ? m.gens[k.w].y : m.B->gens[k.right.back()].tgt; }

void check_key(const Bimodule& m, const BiKey& k, const std::string& what) {
  if (k.w < 0 || k.w >= m.ngen()) throw std::invalid_argument(what + ": value index out of range");
  for (int g : k.left)
    if (g < 0 || g >= m.A->ngen()) throw std::invalid_argument(what + ": left input out of range");
  for (int g : k.right)
    if (g < 0 || g >= m.B->ngen()) throw std::invalid_argument(what + ": right input out of range");
  if (!k.left.empty() && (!composable(*m.A, k.left) || m.A->gens[k.left.back()].tgt != m.gens[k.w].x))
    throw std::invalid_argument(what + ": left word " + m.key_str(k) + " not composable");
  if (!k.right.empty() && (!composable(*m.B, k.right) || m.B->gens[k.right.front()].src != m.gens[k.w].y))
    throw std::invalid_argument(what + ": right word " + m.key_str(k) + " not composable");
}

void check_output(const Bimodule& in, const BiKey& k, const Vec& out, const Bimodule& to, const std::string& what) {
  int x = key_src(in, k), y = key_tgt(in, k);
  for (int o : out) {
    if (o < 0 || o >= to.ngen()) throw std::invalid_argument(what + ": output index out of range");
    if (to.gens[o].x != x || to.gens[o].y != y)
      throw std::invalid_argument(what + ": output of " + in.key_str(k) + " lands in the wrong value space");
  }
}

int input_degree(const Bimodule& m, const BiKey& k) {
  int d = m.gens[k.w].degree;
  for (int g : k.left) d += m.A->gens[g].degree;
  for (int g : k.right) d += m.B->gens[g].degree;
  return d;
}

std::vector<std::vector<const std::pair<const BiKey, Vec>*>> index_by_w(const BiTensor& t, int n) {
  std::vector<std::vector<const std::pair<const BiKey, Vec>*>> r(n);
  for (auto& e : t) r[e.first.w].push_back(&e);
  return r;
}

// out += sum outer(L1, inner(L2, z, R2), R1)
void nest(const BiTensor& outer, int nouter_w, const BiTensor& inner, int limit, BiTensor& out) {
  auto idx = index_by_w(outer, nouter_w);
  for (auto& [ik, iv] : inner)
    for (int o : iv)
      for (auto* e : idx[o]) {
        auto& ok = e->first;
        if (ik.arity() + ok.arity() >= limit) continue;
        BiKey k{concat(ok.left, ik.left), ik.w, concat(ik.right, ok.right)};
        add_entry(out, k, e->second);
      }
}

using Preimage = std::vector<std::vector<const Word*>>;

Preimage preimage(const Category& c) {
  Preimage p(c.ngen());
  for (auto& [k, v] : c.mu)
    for (int o : v) p[o].push_back(&k);
  return p;
}

// out += sum t(..., mu^C(S), ...) with the insertion on the left or right word
void insert_category(const BiTensor& t, const Category& c, bool left, int limit, BiTensor& out) {
  if (c.mu.empty()) return;
  auto pre = preimage(c);
  for (auto& [k, v] : t) {
    const Word& w = left ? k.left : k.right;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (auto* s : pre[w[i]]) {
        if (k.arity() - 1 + int(s->size()) >= limit) continue;
        Word nw(w.begin(), w.begin() + i);
        nw.insert(nw.end(), s->begin(), s->end());
        nw.insert(nw.end(), w.begin() + i + 1, w.end());
        BiKey nk = k;
        (left ? nk.left : nk.right) = std::move(nw);
        add_entry(out, nk, v);
      }
  }
}

std::vector<int> canonical_rank(const Bimodule& m) {
  std::vector<int> order(m.ngen());
  for (int i = 0; i < m.ngen(); ++i) order[i] = i;
  auto tup = [&](int i) {
    auto& g = m.gens[i];
    return std::tie(g.x, g.y, g.label, g.dual, g.degree);
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return tup(a) < tup(b); });
  std::vector<int> rank(m.ngen());
  for (int i = 0; i < m.ngen(); ++i) rank[order[i]] = i;
  return rank;
}

BiTensor relabel(const BiTensor& t, const std::vector<int>& rin, const std::vector<int>& rout, int limit) {
  BiTensor r;
  for (auto& [k, v] : t) {
    if (k.arity() >= limit) continue;
    BiKey nk = k;
    nk.w = rin[k.w];
    Vec nv;
    for (int o : v) nv.toggle(rout[o]);
    add_entry(r, nk, nv);
  }
  return r;
}

bool same_gens(const Bimodule& a, const Bimodule& b, const std::vector<int>& ra, const std::vector<int>& rb) {
  if (a.ngen() != b.ngen()) return false;
  std::vector<const ValueGen*> sa(a.ngen()), sb(b.ngen());
  for (int i = 0; i < a.ngen(); ++i) {
    sa[ra[i]] = &a.gens[i];
    sb[rb[i]] = &b.gens[i];
  }
  for (int i = 0; i < a.ngen(); ++i)
    if (!(*sa[i] == *sb[i])) return false;
  return true;
}

}  // namespace

void check_types(const Bimodule& m) {
  if (!m.A || !m.B) throw std::invalid_argument("bimodule " + m.name + ": missing category");
  for (auto& [k, v] : m.mu) {
    check_key(m, k, "bimodule " + m.name);
    check_output(m, k, v, m, "bimodule " + m.name);
  }
}

Report validate_bimodule(const Bimodule& m) {
  check_types(m);
  Report r;
  if (m.graded()) {
    for (auto& [k, v] : m.mu) {
      int want = input_degree(m, k) + m.mu_degree(int(k.left.size()), int(k.right.size()));
      for (int o : v) {
        ++r.checked;
        if (m.gens[o].degree != want) r.fail(k.arity(), "degree of mu" + m.key_str(k));
      }
    }
  }
  BiTensor rel;
  nest(m.mu, m.ngen(), m.mu, kExact, rel);
  insert_category(m.mu, *m.A, true, kExact, rel);
  insert_category(m.mu, *m.B, false, kExact, rel);
  int kk = m.span();
  int bound = std::max({2 * kk, kk + m.A->arity_bound - 1, kk + m.B->arity_bound - 1});
  for_each_key(m, bound, [&](const BiKey&) { ++r.checked; });
  for (auto& [k, v] : rel) r.fail(k.arity(), "tuple " + m.key_str(k) + " relation sum " + m.vec_str(v));
  return r;
}

bool same_bimodule(const Bimodule& a, const Bimodule& b) {
  if (&a == &b) return true;
  if (!(*a.A == *b.A) || !(*a.B == *b.B)) return false;
  auto ra = canonical_rank(a), rb = canonical_rank(b);
  if (!same_gens(a, b, ra, rb)) return false;
  return relabel(a.mu, ra, ra, kExact) == relabel(b.mu, rb, rb, kExact);
}

void check_types(const PreMorphism& v) {
  const auto& s = *v.src;
  const auto& t = *v.tgt;
  if (!(*s.A == *t.A) || !(*s.B == *t.B)) throw std::invalid_argument("pre-morphism between different categories");
  for (auto& [k, out] : v.comps) {
    check_key(s, k, "pre-morphism");
    check_output(s, k, out, t, "pre-morphism");
    if (k.arity() >= v.trunc) throw std::invalid_argument("pre-morphism entry beyond its truncation");
    if (s.graded()) {
      int want = input_degree(s, k) + v.degree + int(k.left.size()) * (1 - s.A->N) + int(k.right.size()) * (1 - s.B->N);
      for (int o : out)
        if (t.gens[o].degree != want) throw std::invalid_argument("pre-morphism entry " + s.key_str(k) + " has wrong degree");
    }
  }
}

bool same_premorphism(const PreMorphism& a, const PreMorphism& b) {
  if (a.degree != b.degree) return false;
  if (!same_bimodule(*a.src, *b.src) || !same_bimodule(*a.tgt, *b.tgt)) return false;
  int lim = std::min(a.trunc, b.trunc);
  auto rs = canonical_rank(*a.src), rt = canonical_rank(*a.tgt);
  auto qs = canonical_rank(*b.src), qt = canonical_rank(*b.tgt);
  return relabel(a.comps, rs, rt, lim) == relabel(b.comps, qs, qt, lim);
}

PreMorphism zero_premorphism(BimodPtr src, BimodPtr tgt, int degree, int trunc) {
  PreMorphism v;
  v.src = std::move(src);
  v.tgt = std::move(tgt);
  // ungraded morphisms all live in degree 0
  v.degree = v.src->graded() && v.tgt->graded() ? degree : 0;
  v.trunc = trunc;
  return v;
}

PreMorphism unit_morphism(BimodPtr m) {
  PreMorphism v = zero_premorphism(m, m, 0);
  for (int z = 0; z < m->ngen(); ++z) v.comps[{{}, z, {}}] = Vec(z);
  return v;
}

PreMorphism random_premorphism(BimodPtr src, BimodPtr tgt, int degree, int trunc, std::mt19937_64& rng,
                               double density) {
  if (trunc == kExact) throw std::invalid_argument("random_premorphism needs a finite truncation");
  PreMorphism v = zero_premorphism(src, tgt, degree, trunc);
  std::bernoulli_distribution coin(density);
  bool graded = src->graded();
  for_each_key(*src, trunc - 1, [&](const BiKey& k) {
    int x = key_src(*src, k), y = key_tgt(*src, k);
    int want = input_degree(*src, k) + degree + int(k.left.size()) * (1 - src->A->N) +
               int(k.right.size()) * (1 - src->B->N);
    Vec out;
    for (int o : tgt->value(x, y))
      if ((!graded || tgt->gens[o].degree == want) && coin(rng)) out.toggle(o);
    add_entry(v.comps, k, out);
  });
  return v;
}

PreMorphism restrict_to(const PreMorphism& v, int trunc) {
  PreMorphism r = zero_premorphism(v.src, v.tgt, v.degree, std::min(trunc, v.trunc));
  for (auto& [k, o] : v.comps)
    if (k.arity() < r.trunc) r.comps.emplace(k, o);
  return r;
}

PreMorphism operator+(const PreMorphism& a, const PreMorphism& b) {
  if (a.degree != b.degree) throw std::invalid_argument("adding pre-morphisms of different degree");
  PreMorphism r = restrict_to(a, b.trunc);
  for (auto& [k, o] : b.comps)
    if (k.arity() < r.trunc) add_entry(r.comps, k, o);
  return r;
}

PreMorphism bimod_mu1(const PreMorphism& v, int L) {
  if (L == kExact) L = v.trunc;
  if (L > v.trunc) throw std::invalid_argument("bimod_mu1: truncation larger than the input's");
  PreMorphism r = zero_premorphism(v.src, v.tgt, v.degree - 1, L);
  nest(v.tgt->mu, v.tgt->ngen(), v.comps, L, r.comps);
  nest(v.comps, v.src->ngen(), v.src->mu, L, r.comps);
  insert_category(v.comps, *v.src->A, true, L, r.comps);
  insert_category(v.comps, *v.src->B, false, L, r.comps);
  return r;
}

PreMorphism bimod_mu2(const PreMorphism& v, const PreMorphism& w) {
  if (v.tgt != w.src && !same_bimodule(*v.tgt, *w.src))
    throw std::invalid_argument("bimod_mu2: target of the first is not the source of the second");
  int L = std::min(v.trunc, w.trunc);
  PreMorphism r = zero_premorphism(v.src, w.tgt, v.degree + w.degree, L);
  if (v.tgt == w.src) {
    nest(w.comps, w.src->ngen(), v.comps, L, r.comps);
  } else {
    // translate v's outputs into w.src's numbering
    auto rv = canonical_rank(*v.tgt), rw = canonical_rank(*w.src);
    std::vector<int> inv(rw.size());
    for (std::size_t i = 0; i < rw.size(); ++i) inv[rw[i]] = int(i);
    BiTensor tv;
    for (auto& [k, o] : v.comps) {
      Vec n;
      for (int g : o) n.toggle(inv[rv[g]]);
      add_entry(tv, k, n);
    }
    nest(w.comps, w.src->ngen(), tv, L, r.comps);
  }
  return r;
}

bool is_closed(const PreMorphism& v) { return bimod_mu1(v).is_zero(); }

BimodPtr zero_bimodule(CatPtr a, CatPtr b) {
  auto m = std::make_shared<Bimodule>();
  m->name = "0";
  m->A = a;
  m->B = b;
  m->finalize();
  return m;
}

BimodPtr diagonal_bimodule(CatPtr a) {
  auto m = std::make_shared<Bimodule>();
  m->name = a->name + "_diag";
  m->A = a;
  m->B = a;
  for (auto& g : a->gens) m->add_gen(g.src, g.tgt, g.label, g.degree);
  for (auto& [k, v] : a->mu)
    for (std::size_t i = 0; i < k.size(); ++i)
      m->mu[{Word(k.begin(), k.begin() + i), k[i], Word(k.begin() + i + 1, k.end())}] = v;
  m->finalize();
  return m;
}

BimodPtr dualize(const Bimodule& m) {
  auto d = std::make_shared<Bimodule>();
  d->name = m.name + "^";
  d->A = m.B;
  d->B = m.A;
  for (auto& g : m.gens) d->add_gen(g.y, g.x, g.label, -g.degree, !g.dual);
  for (auto& [k, out] : m.mu)
    for (int o : out) add_entry(d->mu, {k.right, o, k.left}, Vec(k.w));
  d->finalize();
  return d;
}

PreMorphism dualize(const PreMorphism& v, BimodPtr dsrc, BimodPtr dtgt) {
  // v: M -> N, result N^ -> M^
  if (!dsrc) dsrc = dualize(*v.tgt);
  if (!dtgt) dtgt = dualize(*v.src);
  PreMorphism r = zero_premorphism(dsrc, dtgt, v.degree, v.trunc);
  for (auto& [k, out] : v.comps)
    for (int o : out) add_entry(r.comps, {k.right, o, k.left}, Vec(k.w));
  return r;
}

BimodPtr suspend_bimodule(const Bimodule& m, int j) {
  if (!m.graded()) throw std::invalid_argument("suspend_bimodule: ungraded bimodule");
  auto s = std::make_shared<Bimodule>(m);
  if (j != 0) s->name = m.name + "[" + std::to_string(j) + "]";
  for (auto& g : s->gens) g.degree -= j;
  return s;
}

PreMorphism suspend_premorphism(const PreMorphism& v, int j) {
  PreMorphism r = v;
  r.src = suspend_bimodule(*v.src, j);
  r.tgt = suspend_bimodule(*v.tgt, j);
  return r;
}

BimodPtr rebase(const Bimodule& m, CatPtr a, CatPtr b) {
  if (a->objects != m.A->objects || a->ngen() != m.A->ngen() || b->objects != m.B->objects ||
      b->ngen() != m.B->ngen())
    throw std::invalid_argument("rebase: categories differ in shape");
  auto r = std::make_shared<Bimodule>(m);
  r->A = a;
  r->B = b;
  return r;
}

PreMorphism rebase(const PreMorphism& v, BimodPtr src, BimodPtr tgt) {
  PreMorphism r = v;
  r.src = src;
  r.tgt = tgt;
  return r;
}

namespace {

// sum of t over the product of left and right argument supports at value z
Vec apply_bi(const BiTensor& t, const std::vector<Vec>& left, int z, const std::vector<Vec>& right) {
  std::vector<const Vec*> la, ra;
  for (auto& v : left) la.push_back(&v);
  for (auto& v : right) ra.push_back(&v);
  Vec r;
  BiKey k;
  k.w = z;
  for_each_product(la, [&](const Word& l) {
    k.left = l;
    for_each_product(ra, [&](const Word& rr) {
      k.right = rr;
      if (auto* v = lookup(t, k)) r += *v;
    });
  });
  return r;
}

using PullIndex = PullbackIndex;

PullIndex pull_index(const Functor& f0, const Functor& f1, const Bimodule& m) {
  PullIndex p;
  int n = 0;
  for (int x = 0; x < f0.src->nobj(); ++x)
    for (int y = 0; y < f1.src->nobj(); ++y)
      for (int z : m.value(f0.objmap[x], f1.objmap[y])) {
        p.id[{x, y, z}] = n++;
        p.base.push_back(z);
      }
  return p;
}

void check_pullback_types(const Functor& f0, const Functor& f1, const Bimodule& m) {
  if (!(*f0.tgt == *m.A) || !(*f1.tgt == *m.B))
    throw std::invalid_argument("pullback: functor targets do not match the bimodule");
}

// Pulls back the tensor t (a structure map or pre-morphism from src to
// tgt) to the keys of ps up to the given arity bound.
BiTensor pull_tensor(const Functor& f0, const Functor& f1, const BiTensor& t, const PullIndex& ps,
                     const PullIndex& pt, const Bimodule& pulled_src, int max_arity) {
  BiTensor out;
  for_each_key(pulled_src, max_arity, [&](const BiKey& k) {
    int z = ps.base[k.w];
    int x0 = key_src(pulled_src, k), y0 = key_tgt(pulled_src, k);
    Vec acc;
    for_each_slicing(f0, k.left, [&](const std::vector<Vec>& pre) {
      for_each_slicing(f1, k.right, [&](const std::vector<Vec>& post) { acc += apply_bi(t, pre, z, post); });
    });
    Vec mapped;
    for (int o : acc) mapped.toggle(pt.id.at({x0, y0, o}));
    add_entry(out, k, mapped);
  });
  return out;
}

}  // namespace

PullbackIndex pullback_index(const Functor& f0, const Functor& f1, const Bimodule& m) { return pull_index(f0, f1, m); }

BimodPtr pullback(const Functor& f0, const Functor& f1, const Bimodule& m) {
  check_pullback_types(f0, f1, m);
  auto p = pull_index(f0, f1, m);
  auto r = std::make_shared<Bimodule>();
  r->name = m.name + "*";
  r->A = f0.src;
  r->B = f1.src;
  for (auto& [key, id] : p.id) {
    (void)id;
    auto [x, y, z] = key;
    auto& g = m.gens[z];
    r->add_gen(x, y, g.label, g.degree, g.dual);
  }
  // map ordering coincides with id assignment order
  r->finalize();
  int kf = std::max(f0.arity_bound, f1.arity_bound);
  r->mu = pull_tensor(f0, f1, m.mu, p, p, *r, m.span() * kf);
  return r;
}

PreMorphism pullback(const Functor& f0, const Functor& f1, const PreMorphism& v, BimodPtr src, BimodPtr tgt) {
  check_pullback_types(f0, f1, *v.src);
  if (!src) src = pullback(f0, f1, *v.src);
  if (!tgt) tgt = pullback(f0, f1, *v.tgt);
  auto ps = pull_index(f0, f1, *v.src);
  auto pt = pull_index(f0, f1, *v.tgt);
  int kf = std::max(f0.arity_bound, f1.arity_bound);
  int bound = v.trunc == kExact ? v.span() * kf : v.trunc - 1;
  PreMorphism r = zero_premorphism(src, tgt, v.degree, v.trunc);
  r.comps = pull_tensor(f0, f1, v.comps, ps, pt, *src, bound);
  return r;
}

PreMorphism reexpress(const PreMorphism& v, BimodPtr src, BimodPtr tgt) {
  if (v.src == src && v.tgt == tgt) return v;
  if (!same_bimodule(*v.src, *src) || !same_bimodule(*v.tgt, *tgt))
    throw std::invalid_argument("reexpress: endpoints are not the same bimodules");
  auto inv = [](const std::vector<int>& r) {
    std::vector<int> i(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) i[r[k]] = int(k);
    return i;
  };
  auto rs = canonical_rank(*v.src), rt = canonical_rank(*v.tgt);
  auto is = inv(canonical_rank(*src)), it = inv(canonical_rank(*tgt));
  PreMorphism r = zero_premorphism(src, tgt, v.degree, v.trunc);
  for (auto& [k, o] : v.comps) {
    BiKey nk = k;
    nk.w = is[rs[k.w]];
    Vec n;
    for (int g : o) n.toggle(it[rt[g]]);
    add_entry(r.comps, nk, n);
  }
  return r;
}

void accumulate(PreMorphism& acc, const PreMorphism& v) {
  if (acc.degree != v.degree) throw std::invalid_argument("accumulate: degrees differ");
  const PreMorphism& w = (acc.src == v.src && acc.tgt == v.tgt) ? v : reexpress(v, acc.src, acc.tgt);
  acc.trunc = std::min(acc.trunc, w.trunc);
  BiTensor keep;
  for (auto& [k, o] : acc.comps)
    if (k.arity() < acc.trunc) keep.emplace(k, o);
  for (auto& [k, o] : w.comps)
    if (k.arity() < acc.trunc) add_entry(keep, k, o);
  acc.comps = std::move(keep);
}

int find_gen(const Bimodule& m, int x, int y, const std::string& label, bool dual) {
  for (int g : m.value(x, y))
    if (m.gens[g].label == label && m.gens[g].dual == dual) return g;
  throw std::invalid_argument("find_gen: no generator " + label + " in " + m.name);
}

ConeData cone_of(const PreMorphism& v) {
  if (v.trunc != kExact) throw std::invalid_argument("cone_of: needs a finitely supported morphism");
  if (!is_closed(v)) throw std::invalid_argument("cone_of: morphism is not closed");
  const auto& M = *v.src;
  const auto& N = *v.tgt;
  auto c = std::make_shared<Bimodule>();
  c->name = "cone(" + M.name + "->" + N.name + ")";
  c->A = M.A;
  c->B = M.B;
  int nm = M.ngen();
  for (auto& g : M.gens) c->add_gen(g.x, g.y, "s:" + g.label, g.degree + v.degree + 1, g.dual);
  for (auto& g : N.gens) c->add_gen(g.x, g.y, "t:" + g.label, g.degree, g.dual);
  auto shift = [&](const Vec& o, int by) {
    Vec r;
    for (int g : o) r.toggle(g + by);
    return r;
  };
  for (auto& [k, o] : M.mu) add_entry(c->mu, k, o);
  for (auto& [k, o] : v.comps) add_entry(c->mu, k, shift(o, nm));
  for (auto& [k, o] : N.mu) add_entry(c->mu, {k.left, k.w + nm, k.right}, shift(o, nm));
  c->finalize();
  ConeData d;
  d.cone = c;
  d.incl = zero_premorphism(v.tgt, c, 0);
  for (int z = 0; z < N.ngen(); ++z) d.incl.comps[{{}, z, {}}] = Vec(z + nm);
  d.proj = zero_premorphism(c, v.src, -(v.degree + 1));
  for (int z = 0; z < nm; ++z) d.proj.comps[{{}, z, {}}] = Vec(z);
  return d;
}

BitVec to_local(const Bimodule& m, int x, int y, const Vec& v) {
  auto& ids = m.value(x, y);
  BitVec b(ids.size());
  for (int g : v) {
    auto it = std::lower_bound(ids.begin(), ids.end(), g);
    if (it == ids.end() || *it != g) throw std::invalid_argument("to_local: element outside the value space");
    b.flip(it - ids.begin());
  }
  return b;
}

Vec to_global(const Bimodule& m, int x, int y, const BitVec& b) {
  auto& ids = m.value(x, y);
  Vec v;
  for (auto i : b.ones()) v.toggle(ids[i]);
  return v;
}

ComplexPtr value_complex(const Bimodule& m, int x, int y) {
  auto& ids = m.value(x, y);
  std::vector<std::string> labels;
  std::vector<int> degrees;
  F2Matrix d(ids.size(), ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    auto& g = m.gens[ids[j]];
    labels.push_back(g.label + (g.dual ? "^" : ""));
    degrees.push_back(g.degree);
    for (auto i : to_local(m, x, y, m.mu_of({{}, ids[j], {}})).ones()) d.set(i, j);
  }
  if (m.graded()) return std::make_shared<ChainComplex>(labels, degrees, d);
  return std::make_shared<ChainComplex>(labels, d);
}

ChainMap value_map(const PreMorphism& v, int x, int y, ComplexPtr s, ComplexPtr t) {
  if (!s) s = value_complex(*v.src, x, y);
  if (!t) t = value_complex(*v.tgt, x, y);
  auto& ids = v.src->value(x, y);
  F2Matrix m(v.tgt->value(x, y).size(), ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j)
    for (auto i : to_local(*v.tgt, x, y, v.at({{}, ids[j], {}})).ones()) m.set(i, j);
  return ChainMap(s, t, m, v.src->graded() ? v.degree : 0);
}

Report check_bimod_quasi_iso(const PreMorphism& v) {
  Report r;
  for (int x = 0; x < v.src->A->nobj(); ++x)
    for (int y = 0; y < v.src->B->nobj(); ++y) {
      ++r.checked;
      auto q = is_quasi_iso(value_map(v, x, y));
      if (!q.agree()) r.fail(0, "cone and rank verdicts disagree at " + v.src->A->objects[x] + "," + v.src->B->objects[y]);
      if (!q.value())
        r.fail(0, "component at (" + v.src->A->objects[x] + "," + v.src->B->objects[y] + ") not a quasi-isomorphism (H " +
                      std::to_string(q.hsource) + " -> " + std::to_string(q.htarget) + ", rank " +
                      std::to_string(q.induced_rank) + ")");
    }
  return r;
}

Report check_homological_unitality(const Bimodule& m, const UnitAssignment& ua, const UnitAssignment& ub) {
  Report r;
  auto closed = [](const Category& c, const Vec& e) { return c.mu_apply({&e}).empty(); };
  if (!m.A->is_ground())
    for (auto& e : ua)
      if (!closed(*m.A, e)) throw std::invalid_argument("unit representative is not closed");
  if (!m.B->is_ground())
    for (auto& e : ub)
      if (!closed(*m.B, e)) throw std::invalid_argument("unit representative is not closed");
  for (int x = 0; x < m.A->nobj(); ++x)
    for (int y = 0; y < m.B->nobj(); ++y) {
      auto c = value_complex(m, x, y);
      auto h = homology(*c);
      for (std::size_t i = 0; i < h.dim(); ++i) {
        Vec w = to_global(m, x, y, h.reps[i]);
        auto act = [&](bool left) {
          Vec out;
          const Vec& e = left ? ua[x] : ub[y];
          for (int g : e)
            for (int z : w) out += m.mu_of(left ? BiKey{{g}, z, {}} : BiKey{{}, z, {g}});
          return h.coordinates(to_local(m, x, y, out));
        };
        BitVec want(h.dim());
        want.set(i);
        for (int side = 0; side < 2; ++side) {
          bool left = side == 0;
          if ((left && m.A->is_ground()) || (!left && m.B->is_ground())) continue;
          ++r.checked;
          if (act(left) != want)
            r.fail(1, std::string(left ? "left" : "right") + " unit does not fix class " + std::to_string(i) + " at (" +
                          m.A->objects[x] + "," + m.B->objects[y] + ")");
        }
      }
    }
  return r;
}

}  // namespace ainf
