#include "ainf/modfun.hpp"

#include <algorithm>
#include <stdexcept>

namespace ainf {

namespace {

bool graded_pair(const Category& b, const Category& a) { return b.graded && a.graded; }

int chain_degree(const Category& b, const Word& c) {
  int d = int(c.size()) * (1 - b.N);
  for (int g : c) d += b.gens[g].degree;
  return d;
}

template <class M>
int max_chain(const M& comps) {
  int k = 0;
  for (auto& [c, v] : comps) k = std::max(k, int(c.size()));
  return k;
}

void for_each_chain_upto(const Category& b, int maxlen, const std::function<void(const Word&)>& f) {
  for (int m = 1; m <= maxlen; ++m) for_each_chain(b, m, -1, -1, f);
}

std::vector<const Vec*> ptrs(const std::vector<Vec>& v) {
  std::vector<const Vec*> r;
  for (auto& x : v) r.push_back(&x);
  return r;
}

// Per-object gen numbering of Phi(F): id[Y][local gen] -> global gen.
struct PhiIndex {
  std::vector<std::vector<int>> id;
};

PhiIndex phi_index(const ModFunctor& f) {
  PhiIndex p;
  int n = 0;
  for (auto& m : f.obj) {
    p.id.emplace_back();
    for (int g = 0; g < m->ngen(); ++g) p.id.back().push_back(n++);
  }
  return p;
}

Vec map_ids(const Vec& v, const std::vector<int>& to) {
  Vec r;
  for (int g : v) r.toggle(to[g]);
  return r;
}

void check_side(const Bimodule& m, Side s, const std::string& who) {
  if (s == Side::Left ? !m.is_left_module() : !m.is_right_module())
    throw std::invalid_argument(who + ": " + m.name + " is not a " + (s == Side::Left ? "left" : "right") + " module");
}

// module-side truncation of a component at chain length m
int sub_trunc(int trunc, int m) { return trunc == kExact ? kExact : trunc - m; }

}  // namespace

int ModFunctor::span() const { return max_chain(comps); }

int ModFunctor::comp_degree(const Word& c) const {
  if (!graded_pair(*src, *base)) return 0;
  return -1 + chain_degree(*src, c);
}

int ModPreNat::span() const { return max_chain(comps); }

int ModPreNat::comp_degree(const Word& c) const {
  if (!graded_pair(*F0->src, *F0->base)) return 0;
  return degree + chain_degree(*F0->src, c);
}

BimodPtr ModPreNat::from(const Word& c) const {
  const auto& b = *F0->src;
  return F0->side == Side::Left ? F0->obj[chain_start(b, c)] : F1->obj[chain_end(b, c)];
}
BimodPtr ModPreNat::to(const Word& c) const {
  const auto& b = *F0->src;
  return F0->side == Side::Left ? F1->obj[chain_end(b, c)] : F0->obj[chain_start(b, c)];
}
BimodPtr ModPreNat::from(int y) const { return F0->side == Side::Left ? F0->obj[y] : F1->obj[y]; }
BimodPtr ModPreNat::to(int y) const { return F0->side == Side::Left ? F1->obj[y] : F0->obj[y]; }

// ---- equality ----

bool same_modfunctor(const ModFunctor& a, const ModFunctor& b) {
  if (a.side != b.side || !(*a.src == *b.src) || !(*a.base == *b.base) || a.obj.size() != b.obj.size()) return false;
  for (std::size_t y = 0; y < a.obj.size(); ++y)
    if (!same_bimodule(*a.obj[y], *b.obj[y])) return false;
  for (auto& [c, v] : a.comps) {
    auto* w = b.at(c);
    if (!w ? !v.is_zero() : !same_premorphism(v, *w)) return false;
  }
  for (auto& [c, w] : b.comps)
    if (!a.at(c) && !w.is_zero()) return false;
  return true;
}

bool same_modprenat(const ModPreNat& a, const ModPreNat& b) {
  if (a.degree != b.degree || a.t0.size() != b.t0.size()) return false;
  int lim = std::min(a.trunc, b.trunc);
  for (std::size_t y = 0; y < a.t0.size(); ++y)
    if (!same_premorphism(restrict_to(a.t0[y], lim), restrict_to(b.t0[y], lim))) return false;
  auto cmp = [&](const ModPreNat& p, const ModPreNat& q) {
    for (auto& [c, v] : p.comps) {
      if (int(c.size()) >= lim) continue;
      int t = sub_trunc(lim, int(c.size()));
      auto* w = q.at(c);
      if (!w) {
        if (!restrict_to(v, t).is_zero()) return false;
      } else if (!same_premorphism(restrict_to(v, t), restrict_to(*w, t))) {
        return false;
      }
    }
    return true;
  };
  return cmp(a, b) && cmp(b, a);
}

// ---- dg structure ----

namespace {

// mu^B inserted into the chain c, summed over T (F) components
template <class Get>
void insert_source_mu(const Category& b, const Word& c, const Get& get, PreMorphism& acc) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j <= c.size(); ++j) {
      Vec out = b.mu_of(Word(c.begin() + i, c.begin() + j));
      for (int o : out) {
        Word n(c.begin(), c.begin() + i);
        n.push_back(o);
        n.insert(n.end(), c.begin() + j, c.end());
        if (auto* v = get(n)) accumulate(acc, *v);
      }
    }
}

}  // namespace

Report validate_modfunctor(const ModFunctor& f) {
  Report r;
  if (f.obj.size() != std::size_t(f.src->nobj())) throw std::invalid_argument("module functor: wrong number of objects");
  for (auto& m : f.obj) {
    check_side(*m, f.side, "module functor " + f.name);
    if (!(*(f.side == Side::Left ? m->A : m->B) == *f.base))
      throw std::invalid_argument("module functor " + f.name + ": module over the wrong category");
    r.merge(validate_bimodule(*m));
  }
  for (auto& [c, v] : f.comps) {
    if (c.empty() || !composable(*f.src, c)) throw std::invalid_argument("module functor: bad chain");
    if (v.src != f.from(c) && !same_bimodule(*v.src, *f.from(c)))
      throw std::invalid_argument("module functor: component has the wrong source");
    if (v.tgt != f.to(c) && !same_bimodule(*v.tgt, *f.to(c)))
      throw std::invalid_argument("module functor: component has the wrong target");
    if (v.degree != f.comp_degree(c)) throw std::invalid_argument("module functor: component has the wrong degree");
    check_types(v);
  }
  int kf = f.span();
  int bound = std::max({2 * kf, kf + f.src->arity_bound - 1, 1});
  bool left = f.side == Side::Left;
  for_each_chain_upto(*f.src, bound, [&](const Word& c) {
    ++r.checked;
    PreMorphism acc = zero_premorphism(f.from(c), f.to(c), f.comp_degree(c) - 1);
    if (auto* v = f.at(c)) accumulate(acc, bimod_mu1(*v));
    for (std::size_t s = 1; s < c.size(); ++s) {
      auto* a = f.at(Word(c.begin(), c.begin() + s));
      auto* b = f.at(Word(c.begin() + s, c.end()));
      if (a && b) accumulate(acc, left ? bimod_mu2(*a, *b) : bimod_mu2(*b, *a));
    }
    insert_source_mu(*f.src, c, [&](const Word& n) { return f.at(n); }, acc);
    if (!acc.is_zero()) r.fail(int(c.size()), "functor relation at chain " + f.src->word_str(c));
  });
  return r;
}

ModPreNat fun_mu1(const ModPreNat& t, int L) {
  if (L == kExact) L = t.trunc;
  if (L > t.trunc) throw std::invalid_argument("fun_mu1: truncation larger than the input's");
  const auto& F0 = *t.F0;
  const auto& F1 = *t.F1;
  bool left = F0.side == Side::Left;
  ModPreNat r = zero_modprenat(t.F0, t.F1, t.degree - 1, L);
  for (std::size_t y = 0; y < t.t0.size(); ++y) r.t0[y] = bimod_mu1(t.t0[y], L);
  int kt = t.span();
  int maxlen = L == kExact
                   ? std::max({kt + std::max(F0.span(), F1.span()), kt + F0.src->arity_bound - 1, std::max(F0.span(), F1.span())})
                   : L - 1;
  auto T = [&](const Word& c, int y) -> const PreMorphism* { return c.empty() ? &t.t0[y] : t.at(c); };
  const auto& b = *F0.src;
  for_each_chain_upto(b, maxlen, [&](const Word& c) {
    int m = int(c.size());
    PreMorphism acc = zero_premorphism(r.from(c), r.to(c), t.comp_degree(c) - 1, sub_trunc(L, m));
    if (auto* v = t.at(c)) accumulate(acc, bimod_mu1(*v, sub_trunc(L, m)));
    for (int s = 0; s <= m; ++s) {
      Word c1(c.begin(), c.begin() + s), c2(c.begin() + s, c.end());
      // F0(c1) then T(c2)
      if (s >= 1) {
        auto* f = F0.at(c1);
        auto* v = T(c2, chain_end(b, c1));
        if (f && v) accumulate(acc, left ? bimod_mu2(*f, *v) : bimod_mu2(*v, *f));
      }
      // T(c1) then F1(c2)
      if (s < m) {
        auto* v = T(c1, chain_start(b, c2));
        auto* f = F1.at(c2);
        if (f && v) accumulate(acc, left ? bimod_mu2(*v, *f) : bimod_mu2(*f, *v));
      }
    }
    insert_source_mu(b, c, [&](const Word& n) { return t.at(n); }, acc);
    if (!acc.is_zero()) r.comps.emplace(c, std::move(acc));
  });
  return r;
}

ModPreNat fun_mu2(const ModPreNat& t, const ModPreNat& u) {
  if (t.F1 != u.F0 && !same_modfunctor(*t.F1, *u.F0))
    throw std::invalid_argument("fun_mu2: target of the first is not the source of the second");
  bool left = t.F0->side == Side::Left;
  int L = std::min(t.trunc, u.trunc);
  ModPreNat r = zero_modprenat(t.F0, u.F1, t.degree + u.degree, L);
  auto comp = [&](const PreMorphism& a, const PreMorphism& b) { return left ? bimod_mu2(a, b) : bimod_mu2(b, a); };
  for (std::size_t y = 0; y < t.t0.size(); ++y) r.t0[y] = restrict_to(comp(t.t0[y], u.t0[y]), L);
  const auto& b = *t.F0->src;
  int maxlen = std::min(t.span() + u.span(), L == kExact ? kExact : L - 1);
  for_each_chain_upto(b, maxlen, [&](const Word& c) {
    int m = int(c.size());
    PreMorphism acc = zero_premorphism(r.from(c), r.to(c), r.comp_degree(c), sub_trunc(L, m));
    for (int s = 0; s <= m; ++s) {
      Word c1(c.begin(), c.begin() + s), c2(c.begin() + s, c.end());
      const PreMorphism* a = s == 0 ? &t.t0[chain_start(b, c)] : t.at(c1);
      const PreMorphism* v = s == m ? &u.t0[chain_end(b, c)] : u.at(c2);
      if (a && v) accumulate(acc, comp(*a, *v));
    }
    if (!acc.is_zero()) r.comps.emplace(c, std::move(acc));
  });
  return r;
}

bool is_zero(const ModPreNat& t) {
  for (auto& v : t.t0)
    if (!v.is_zero()) return false;
  for (auto& [c, v] : t.comps)
    if (!v.is_zero()) return false;
  return true;
}

bool check_nat_transformation(const ModPreNat& t, int L) { return is_zero(fun_mu1(t, L)); }

Report check_nat_quasi_iso(const ModPreNat& t) {
  Report r;
  for (std::size_t y = 0; y < t.t0.size(); ++y) {
    auto q = check_bimod_quasi_iso(t.t0[y]);
    for (auto& w : q.witnesses) w.where = "object " + t.F0->src->objects[y] + ": " + w.where;
    r.merge(q);
  }
  return r;
}

ModPreNat zero_modprenat(ModFunPtr f0, ModFunPtr f1, int degree, int trunc) {
  if (f0->side != f1->side || f0->obj.size() != f1->obj.size())
    throw std::invalid_argument("pre-natural transformation between incompatible functors");
  ModPreNat t;
  t.F0 = f0;
  t.F1 = f1;
  t.degree = graded_pair(*f0->src, *f0->base) ? degree : 0;
  t.trunc = trunc;
  for (std::size_t y = 0; y < f0->obj.size(); ++y) t.t0.push_back(zero_premorphism(t.from(int(y)), t.to(int(y)), degree, trunc));
  return t;
}

ModPreNat unit_modprenat(ModFunPtr f) {
  ModPreNat t = zero_modprenat(f, f, 0, kExact);
  for (std::size_t y = 0; y < f->obj.size(); ++y) t.t0[y] = unit_morphism(f->obj[y]);
  return t;
}

ModPreNat random_modprenat(ModFunPtr f0, ModFunPtr f1, int degree, int trunc, std::mt19937_64& rng, double density) {
  if (trunc == kExact) throw std::invalid_argument("random_modprenat needs a finite truncation");
  ModPreNat t = zero_modprenat(f0, f1, degree, trunc);
  for (std::size_t y = 0; y < t.t0.size(); ++y)
    t.t0[y] = random_premorphism(t.from(int(y)), t.to(int(y)), degree, trunc, rng, density);
  for_each_chain_upto(*f0->src, trunc - 1, [&](const Word& c) {
    auto v = random_premorphism(t.from(c), t.to(c), t.comp_degree(c), trunc - int(c.size()), rng, density);
    if (!v.is_zero()) t.comps.emplace(c, std::move(v));
  });
  return t;
}

ModPreNat restrict_to(const ModPreNat& t, int trunc) {
  ModPreNat r = t;
  r.trunc = std::min(t.trunc, trunc);
  for (auto& v : r.t0) v = restrict_to(v, r.trunc);
  std::map<Word, PreMorphism> keep;
  for (auto& [c, v] : t.comps)
    if (int(c.size()) < r.trunc) {
      auto w = restrict_to(v, sub_trunc(r.trunc, int(c.size())));
      if (!w.is_zero()) keep.emplace(c, std::move(w));
    }
  r.comps = std::move(keep);
  return r;
}

// ---- Yoneda and Serre ----

namespace {

std::shared_ptr<Bimodule> new_module(const std::string& name, CatPtr a, Side s) {
  auto m = std::make_shared<Bimodule>();
  m->name = name;
  m->A = s == Side::Left ? a : Category::ground();
  m->B = s == Side::Left ? Category::ground() : a;
  return m;
}

}  // namespace

ModFunPtr yoneda_left(CatPtr a) {
  auto f = std::make_shared<ModFunctor>();
  f->name = "Y^l(" + a->name + ")";
  f->side = Side::Left;
  f->src = a;
  f->base = a;
  // M^l_X(Y) = A(Y, X)
  std::vector<std::shared_ptr<Bimodule>> mods;
  std::vector<int> local(a->ngen());
  for (int x = 0; x < a->nobj(); ++x) mods.push_back(new_module("Y^l(" + a->objects[x] + ")", a, Side::Left));
  for (int g = 0; g < a->ngen(); ++g) {
    auto& gen = a->gens[g];
    local[g] = mods[gen.tgt]->add_gen(gen.src, 0, gen.label, gen.degree);
  }
  auto loc = [&](const Vec& v) { return map_ids(v, local); };
  for (auto& [k, out] : a->mu) {
    int x = chain_end(*a, k);
    add_entry(mods[x]->mu, {Word(k.begin(), k.end() - 1), local[k.back()], {}}, loc(out));
  }
  for (auto& m : mods) m->finalize();
  for (auto& m : mods) f->obj.push_back(m);
  // (Y^l)(c)(L, w) = mu(L, w, c)
  for (auto& [k, out] : a->mu)
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      Word c(k.begin() + i + 1, k.end());
      auto it = f->comps.find(c);
      if (it == f->comps.end())
        it = f->comps.emplace(c, zero_premorphism(f->from(c), f->to(c), f->comp_degree(c))).first;
      add_entry(it->second.comps, {Word(k.begin(), k.begin() + i), local[k[i]], {}}, loc(out));
    }
  return f;
}

ModFunPtr yoneda_right(CatPtr a) {
  auto f = std::make_shared<ModFunctor>();
  f->name = "Y^r(" + a->name + ")";
  f->side = Side::Right;
  f->src = a;
  f->base = a;
  // M^r_X(Y) = A(X, Y)
  std::vector<std::shared_ptr<Bimodule>> mods;
  std::vector<int> local(a->ngen());
  for (int x = 0; x < a->nobj(); ++x) mods.push_back(new_module("Y^r(" + a->objects[x] + ")", a, Side::Right));
  for (int g = 0; g < a->ngen(); ++g) {
    auto& gen = a->gens[g];
    local[g] = mods[gen.src]->add_gen(0, gen.tgt, gen.label, gen.degree);
  }
  auto loc = [&](const Vec& v) { return map_ids(v, local); };
  for (auto& [k, out] : a->mu) add_entry(mods[chain_start(*a, k)]->mu, {{}, local[k.front()], Word(k.begin() + 1, k.end())}, loc(out));
  for (auto& m : mods) m->finalize();
  for (auto& m : mods) f->obj.push_back(m);
  // (Y^r)(c)(z, y) = mu(c, z, y)
  for (auto& [k, out] : a->mu)
    for (std::size_t i = 1; i < k.size(); ++i) {
      Word c(k.begin(), k.begin() + i);
      auto it = f->comps.find(c);
      if (it == f->comps.end())
        it = f->comps.emplace(c, zero_premorphism(f->from(c), f->to(c), f->comp_degree(c))).first;
      add_entry(it->second.comps, {{}, local[k[i]], Word(k.begin() + i + 1, k.end())}, loc(out));
    }
  return f;
}

ModFunPtr serre_left_direct(CatPtr a) {
  auto f = std::make_shared<ModFunctor>();
  f->name = "S^l(" + a->name + ")";
  f->side = Side::Left;
  f->src = a;
  f->base = a;
  // N_X(Y) = A(X, Y)^
  std::vector<std::shared_ptr<Bimodule>> mods;
  std::vector<int> local(a->ngen());
  for (int x = 0; x < a->nobj(); ++x) mods.push_back(new_module("S^l(" + a->objects[x] + ")", a, Side::Left));
  for (int g = 0; g < a->ngen(); ++g) {
    auto& gen = a->gens[g];
    local[g] = mods[gen.src]->add_gen(gen.tgt, 0, gen.label, -gen.degree, true);
  }
  // <mu(y, f), w> = <f, mu(w, y)>
  for (auto& [k, out] : a->mu) {
    int x = chain_start(*a, k);
    for (int o : out) add_entry(mods[x]->mu, {Word(k.begin() + 1, k.end()), local[o], {}}, Vec(local[k.front()]));
  }
  for (auto& m : mods) m->finalize();
  for (auto& m : mods) f->obj.push_back(m);
  // <rho_c(y, f), w> = <f, mu(c, w, y)>
  for (auto& [k, out] : a->mu)
    for (std::size_t i = 1; i < k.size(); ++i) {
      Word c(k.begin(), k.begin() + i);
      auto it = f->comps.find(c);
      if (it == f->comps.end())
        it = f->comps.emplace(c, zero_premorphism(f->from(c), f->to(c), f->comp_degree(c))).first;
      for (int o : out) add_entry(it->second.comps, {Word(k.begin() + i + 1, k.end()), local[o], {}}, Vec(local[k[i]]));
    }
  return f;
}

ModFunPtr serre_left(CatPtr a) {
  auto d = dualize_functor(*yoneda_right(a));
  auto f = std::make_shared<ModFunctor>(*d);
  f->name = "S^l(" + a->name + ")";
  return f;
}

// ---- Phi ----

BimodPtr phi(const ModFunctor& f) {
  bool left = f.side == Side::Left;
  auto p = phi_index(f);
  auto k = std::make_shared<Bimodule>();
  k->name = (left ? "Phi^l(" : "Phi^r(") + f.name + ")";
  k->A = left ? f.base : f.src;
  k->B = left ? f.src : f.base;
  for (int y = 0; y < int(f.obj.size()); ++y)
    for (auto& g : f.obj[y]->gens) {
      if (left)
        k->add_gen(g.x, y, g.label, g.degree, g.dual);
      else
        k->add_gen(y, g.y, g.label, g.degree, g.dual);
    }
  for (int y = 0; y < int(f.obj.size()); ++y)
    for (auto& [key, out] : f.obj[y]->mu)
      add_entry(k->mu, {key.left, p.id[y][key.w], key.right}, map_ids(out, p.id[y]));
  const auto& b = *f.src;
  for (auto& [c, v] : f.comps) {
    int from = left ? chain_start(b, c) : chain_end(b, c);
    int to = left ? chain_end(b, c) : chain_start(b, c);
    for (auto& [key, out] : v.comps) {
      BiKey nk = left ? BiKey{key.left, p.id[from][key.w], c} : BiKey{c, p.id[from][key.w], key.right};
      add_entry(k->mu, nk, map_ids(out, p.id[to]));
    }
  }
  k->finalize();
  return k;
}

ModFunPtr phi_inverse(const Bimodule& k, Side side) {
  bool left = side == Side::Left;
  auto f = std::make_shared<ModFunctor>();
  f->name = (left ? "Phi^l-1(" : "Phi^r-1(") + k.name + ")";
  f->side = side;
  f->src = left ? k.B : k.A;
  f->base = left ? k.A : k.B;
  int ny = f->src->nobj();
  std::vector<std::shared_ptr<Bimodule>> mods;
  std::vector<int> local(k.ngen());
  for (int y = 0; y < ny; ++y) mods.push_back(new_module(k.name + "(" + f->src->objects[y] + ")", f->base, side));
  for (int g = 0; g < k.ngen(); ++g) {
    auto& v = k.gens[g];
    local[g] = left ? mods[v.y]->add_gen(v.x, 0, v.label, v.degree, v.dual) : mods[v.x]->add_gen(0, v.y, v.label, v.degree, v.dual);
  }
  for (auto& [key, out] : k.mu) {
    const Word& c = left ? key.right : key.left;
    if (!c.empty()) continue;
    int y = left ? k.gens[key.w].y : k.gens[key.w].x;
    add_entry(mods[y]->mu, {key.left, local[key.w], key.right}, map_ids(out, local));
  }
  for (auto& m : mods) m->finalize();
  for (auto& m : mods) f->obj.push_back(m);
  for (auto& [key, out] : k.mu) {
    const Word& c = left ? key.right : key.left;
    if (c.empty()) continue;
    auto it = f->comps.find(c);
    if (it == f->comps.end()) it = f->comps.emplace(c, zero_premorphism(f->from(c), f->to(c), f->comp_degree(c))).first;
    BiKey nk = left ? BiKey{key.left, local[key.w], {}} : BiKey{{}, local[key.w], key.right};
    add_entry(it->second.comps, nk, map_ids(out, local));
  }
  return f;
}

PreMorphism phi1(const ModPreNat& t) {
  bool left = t.F0->side == Side::Left;
  auto& fs = left ? *t.F0 : *t.F1;
  auto& ft = left ? *t.F1 : *t.F0;
  auto ps = phi_index(fs), pt = phi_index(ft);
  PreMorphism r = zero_premorphism(phi(fs), phi(ft), t.degree, t.trunc);
  for (int y = 0; y < int(t.t0.size()); ++y)
    for (auto& [key, out] : t.t0[y].comps) add_entry(r.comps, {key.left, ps.id[y][key.w], key.right}, map_ids(out, pt.id[y]));
  const auto& b = *t.F0->src;
  for (auto& [c, v] : t.comps) {
    int from = left ? chain_start(b, c) : chain_end(b, c);
    int to = left ? chain_end(b, c) : chain_start(b, c);
    for (auto& [key, out] : v.comps) {
      BiKey nk = left ? BiKey{key.left, ps.id[from][key.w], c} : BiKey{c, ps.id[from][key.w], key.right};
      if (nk.arity() < t.trunc) add_entry(r.comps, nk, map_ids(out, pt.id[to]));
    }
  }
  return r;
}

ModPreNat phi1_inverse(const PreMorphism& v0, ModFunPtr f0, ModFunPtr f1) {
  bool left = f0->side == Side::Left;
  auto& fs = left ? *f0 : *f1;
  auto& ft = left ? *f1 : *f0;
  PreMorphism v = reexpress(v0, phi(fs), phi(ft));
  // global gen -> (object, local)
  auto back = [](const ModFunctor& f) {
    std::vector<std::pair<int, int>> r;
    for (int y = 0; y < int(f.obj.size()); ++y)
      for (int g = 0; g < f.obj[y]->ngen(); ++g) r.emplace_back(y, g);
    return r;
  };
  auto bs = back(fs), bt = back(ft);
  ModPreNat t = zero_modprenat(f0, f1, v.degree, v.trunc);
  for (auto& [key, out] : v.comps) {
    const Word& c = left ? key.right : key.left;
    Vec lo;
    for (int o : out) lo.toggle(bt[o].second);
    BiKey nk = left ? BiKey{key.left, bs[key.w].second, {}} : BiKey{{}, bs[key.w].second, key.right};
    if (c.empty()) {
      add_entry(t.t0[bs[key.w].first].comps, nk, lo);
      continue;
    }
    auto it = t.comps.find(c);
    if (it == t.comps.end())
      it = t.comps.emplace(c, zero_premorphism(t.from(c), t.to(c), t.comp_degree(c), sub_trunc(t.trunc, int(c.size())))).first;
    add_entry(it->second.comps, nk, lo);
  }
  return t;
}

// ---- functorial operations ----

ModFunPtr dualize_functor(const ModFunctor& f) {
  auto d = std::make_shared<ModFunctor>();
  d->name = "D(" + f.name + ")";
  d->side = f.side == Side::Left ? Side::Right : Side::Left;
  d->src = f.src;
  d->base = f.base;
  for (auto& m : f.obj) d->obj.push_back(dualize(*m));
  for (auto& [c, v] : f.comps) d->comps.emplace(c, dualize(v, d->from(c), d->to(c)));
  return d;
}

ModPreNat dualize_prenat(const ModPreNat& t, ModFunPtr df0, ModFunPtr df1) {
  ModPreNat r = zero_modprenat(df0, df1, t.degree, t.trunc);
  for (std::size_t y = 0; y < t.t0.size(); ++y) r.t0[y] = dualize(t.t0[y], r.from(int(y)), r.to(int(y)));
  for (auto& [c, v] : t.comps) r.comps.emplace(c, dualize(v, r.from(c), r.to(c)));
  return r;
}

ModFunPtr suspend_functor(const ModFunctor& f, int j) {
  auto s = std::make_shared<ModFunctor>(f);
  if (j != 0) s->name = f.name + "[" + std::to_string(j) + "]";
  for (auto& m : s->obj) m = suspend_bimodule(*m, j);
  for (auto& [c, v] : s->comps) v = rebase(v, s->from(c), s->to(c));
  return s;
}

ModPreNat suspend_prenat(const ModPreNat& t, ModFunPtr sf0, ModFunPtr sf1) {
  ModPreNat r = t;
  r.F0 = sf0;
  r.F1 = sf1;
  for (std::size_t y = 0; y < r.t0.size(); ++y) r.t0[y] = rebase(t.t0[y], r.from(int(y)), r.to(int(y)));
  for (auto& [c, v] : r.comps) v = rebase(v, r.from(c), r.to(c));
  return r;
}

ModFunPtr rebase_functor(const ModFunctor& f, CatPtr base) {
  auto s = std::make_shared<ModFunctor>(f);
  s->base = base;
  auto g = Category::ground();
  for (auto& m : s->obj) m = f.side == Side::Left ? rebase(*m, base, g) : rebase(*m, g, base);
  for (auto& [c, v] : s->comps) v = rebase(v, s->from(c), s->to(c));
  return s;
}

ModPreNat rebase_prenat(const ModPreNat& t, ModFunPtr f0, ModFunPtr f1) { return suspend_prenat(t, f0, f1); }

namespace {

PreMorphism pull_side(const Functor& f, Side side, const PreMorphism& v, BimodPtr s, BimodPtr t) {
  static FunPtr idg = identity_functor(Category::ground());
  return side == Side::Left ? pullback(f, *idg, v, s, t) : pullback(*idg, f, v, s, t);
}

BimodPtr pull_side(const Functor& f, Side side, const Bimodule& m) {
  static FunPtr idg = identity_functor(Category::ground());
  return side == Side::Left ? pullback(f, *idg, m) : pullback(*idg, f, m);
}

}  // namespace

ModFunPtr pullback_functor(FunPtr f, const ModFunctor& h) {
  auto p = std::make_shared<ModFunctor>();
  p->name = f->name + "*" + h.name;
  p->side = h.side;
  p->src = h.src;
  p->base = f->src;
  for (auto& m : h.obj) p->obj.push_back(pull_side(*f, h.side, *m));
  for (auto& [c, v] : h.comps) {
    auto w = pull_side(*f, h.side, v, p->from(c), p->to(c));
    if (!w.is_zero()) p->comps.emplace(c, std::move(w));
  }
  return p;
}

ModPreNat pullback_prenat(FunPtr f, const ModPreNat& t, ModFunPtr p0, ModFunPtr p1) {
  ModPreNat r = zero_modprenat(p0, p1, t.degree, t.trunc);
  Side side = t.F0->side;
  for (std::size_t y = 0; y < t.t0.size(); ++y) r.t0[y] = pull_side(*f, side, t.t0[y], r.from(int(y)), r.to(int(y)));
  for (auto& [c, v] : t.comps) {
    auto w = pull_side(*f, side, v, r.from(c), r.to(c));
    if (!w.is_zero()) r.comps.emplace(c, std::move(w));
  }
  return r;
}

namespace {

// sum over slicings of c of h(f-slices), h given on chains of f.tgt
template <class Get>
void slice_sum(const Functor& f, const Word& c, const Get& get, PreMorphism& acc) {
  for_each_slicing(f, c, [&](const std::vector<Vec>& vals) {
    for_each_product(ptrs(vals), [&](const Word& w) {
      if (auto* v = get(w)) accumulate(acc, *v);
    });
  });
}

}  // namespace

ModFunPtr precompose_functor(const ModFunctor& h, FunPtr f) {
  if (!(*f->tgt == *h.src)) throw std::invalid_argument("precompose: functor target is not the module functor's source");
  auto r = std::make_shared<ModFunctor>();
  r->name = h.name + "o" + f->name;
  r->side = h.side;
  r->src = f->src;
  r->base = h.base;
  for (int y = 0; y < f->src->nobj(); ++y) r->obj.push_back(h.obj[f->objmap[y]]);
  for_each_chain_upto(*f->src, h.span() * f->arity_bound, [&](const Word& c) {
    PreMorphism acc = zero_premorphism(r->from(c), r->to(c), r->comp_degree(c));
    slice_sum(*f, c, [&](const Word& w) { return h.at(w); }, acc);
    if (!acc.is_zero()) r->comps.emplace(c, std::move(acc));
  });
  return r;
}

ModPreNat precompose_prenat(const ModPreNat& t, FunPtr f, ModFunPtr r0, ModFunPtr r1) {
  ModPreNat r = zero_modprenat(r0, r1, t.degree, t.trunc);
  for (int y = 0; y < f->src->nobj(); ++y) r.t0[y] = reexpress(t.t0[f->objmap[y]], r.from(y), r.to(y));
  int maxlen = t.trunc == kExact ? t.span() * f->arity_bound : t.trunc - 1;
  for_each_chain_upto(*f->src, maxlen, [&](const Word& c) {
    PreMorphism acc = zero_premorphism(r.from(c), r.to(c), r.comp_degree(c), sub_trunc(t.trunc, int(c.size())));
    slice_sum(*f, c, [&](const Word& w) { return t.at(w); }, acc);
    if (!acc.is_zero()) r.comps.emplace(c, std::move(acc));
  });
  return r;
}

ModFunPtr g_left(FunPtr f0, FunPtr f1, const ModFunctor& h) { return pullback_functor(f0, *precompose_functor(h, f1)); }
ModFunPtr g_right(FunPtr f0, FunPtr f1, const ModFunctor& h) { return pullback_functor(f1, *precompose_functor(h, f0)); }

ModPreNat g_left(FunPtr f0, FunPtr f1, const ModPreNat& t, ModFunPtr g0, ModFunPtr g1) {
  auto r0 = precompose_functor(*t.F0, f1), r1 = precompose_functor(*t.F1, f1);
  return pullback_prenat(f0, precompose_prenat(t, f1, r0, r1), g0, g1);
}

ModPreNat g_right(FunPtr f0, FunPtr f1, const ModPreNat& t, ModFunPtr g0, ModFunPtr g1) {
  auto r0 = precompose_functor(*t.F0, f0), r1 = precompose_functor(*t.F1, f0);
  return pullback_prenat(f1, precompose_prenat(t, f0, r0, r1), g0, g1);
}

}  // namespace ainf
