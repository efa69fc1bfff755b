#include "ainf/diagrams.hpp"

#include <stdexcept>

namespace ainf {

const char* diagram_name(Diagram d) {
  switch (d) {
    case Diagram::DualizationPhi: return "dualization-phi";
    case Diagram::PullbackDualization: return "pullback-dualization";
    case Diagram::GPullback: return "g-pullback";
    case Diagram::GDualization: return "g-dualization";
  }
  return "?";
}

std::optional<Diagram> parse_diagram(const std::string& s) {
  for (auto d : {Diagram::DualizationPhi, Diagram::PullbackDualization, Diagram::GPullback, Diagram::GDualization})
    if (s == diagram_name(d)) return d;
  return std::nullopt;
}

namespace {

void cmp(Report& r, bool same, const std::string& what) {
  ++r.checked;
  if (!same) r.fail(0, what);
}

bool same_mor(const PreMorphism& a, const PreMorphism& b) {
  int lim = std::min(a.trunc, b.trunc);
  return same_premorphism(restrict_to(a, lim), restrict_to(b, lim));
}

BimodPtr reverse_left(const Bimodule& k) {
  auto r = std::make_shared<Bimodule>(k);
  r->mu.clear();
  for (auto& [key, out] : k.mu) {
    BiKey n = key;
    std::reverse(n.left.begin(), n.left.end());
    add_entry(r->mu, n, out);
  }
  return r;
}

PreMorphism reverse_left(const PreMorphism& v) {
  PreMorphism r = zero_premorphism(v.src, v.tgt, v.degree, v.trunc);
  for (auto& [key, out] : v.comps) {
    BiKey n = key;
    std::reverse(n.left.begin(), n.left.end());
    add_entry(r.comps, n, out);
  }
  return r;
}

BimodPtr phi_r(const ModFunctor& f, bool mutant) { return mutant ? reverse_left(*phi(f)) : phi(f); }
PreMorphism phi1_r(const ModPreNat& t, bool mutant) { return mutant ? reverse_left(phi1(t)) : phi1(t); }

}  // namespace

Report verify_diagram(Diagram which, const DiagramInstance& in) {
  Report r;
  switch (which) {
    case Diagram::DualizationPhi: {
      // Phi^l o L_D = D o Phi^r
      auto d0 = dualize_functor(*in.right0), d1 = dualize_functor(*in.right1);
      cmp(r, same_bimodule(*phi(*d0), *dualize(*phi(*in.right0))), "objects: Phi^l(L_D F0) vs D(Phi^r F0)");
      cmp(r, same_bimodule(*phi(*d1), *dualize(*phi(*in.right1))), "objects: Phi^l(L_D F1) vs D(Phi^r F1)");
      auto dt = dualize_prenat(in.tright, d0, d1);
      cmp(r, same_mor(phi1(dt), dualize(phi1(in.tright))), "morphisms: Phi^l_1(L_D T) vs D(Phi^r_1 T)");
      break;
    }
    case Diagram::PullbackDualization: {
      // D o (F0 x F1)^* = (F1 x F0)^* o D
      const auto& f0 = *in.fa;
      const auto& f1 = *in.fb;
      cmp(r, same_bimodule(*dualize(*pullback(f0, f1, *in.M)), *pullback(f1, f0, *dualize(*in.M))), "objects: M");
      cmp(r, same_bimodule(*dualize(*pullback(f0, f1, *in.M2)), *pullback(f1, f0, *dualize(*in.M2))), "objects: M'");
      cmp(r, same_mor(dualize(pullback(f0, f1, in.v)), pullback(f1, f0, dualize(in.v))), "morphisms: v");
      break;
    }
    case Diagram::GPullback: {
      // Phi^l o G^l_{fa,fb} = (fa x fb)^* o Phi^l
      auto g0 = g_left(in.fa, in.fb, *in.left0), g1 = g_left(in.fa, in.fb, *in.left1);
      cmp(r, same_bimodule(*phi(*g0), *pullback(*in.fa, *in.fb, *phi(*in.left0))), "left objects: F0");
      cmp(r, same_bimodule(*phi(*g1), *pullback(*in.fa, *in.fb, *phi(*in.left1))), "left objects: F1");
      auto gt = g_left(in.fa, in.fb, in.tleft, g0, g1);
      cmp(r, same_mor(phi1(gt), pullback(*in.fa, *in.fb, phi1(in.tleft))), "left morphisms: T");
      // Phi^r o G^r_{fb,fa} = (fb x fa)^* o Phi^r
      bool mut = in.transposed_phi_r;
      auto h0 = g_right(in.fb, in.fa, *in.right0), h1 = g_right(in.fb, in.fa, *in.right1);
      cmp(r, same_bimodule(*phi_r(*h0, mut), *pullback(*in.fb, *in.fa, *phi(*in.right0))), "right objects: F0");
      cmp(r, same_bimodule(*phi_r(*h1, mut), *pullback(*in.fb, *in.fa, *phi(*in.right1))), "right objects: F1");
      auto ht = g_right(in.fb, in.fa, in.tright, h0, h1);
      cmp(r, same_mor(phi1_r(ht, mut), pullback(*in.fb, *in.fa, phi1(in.tright))), "right morphisms: T");
      break;
    }
    case Diagram::GDualization: {
      // L_D o G^r_{fb,fa} = G^l_{fa,fb} o L_D
      auto h0 = g_right(in.fb, in.fa, *in.right0), h1 = g_right(in.fb, in.fa, *in.right1);
      auto lhs0 = dualize_functor(*h0), lhs1 = dualize_functor(*h1);
      auto d0 = dualize_functor(*in.right0), d1 = dualize_functor(*in.right1);
      auto rhs0 = g_left(in.fa, in.fb, *d0), rhs1 = g_left(in.fa, in.fb, *d1);
      cmp(r, same_modfunctor(*lhs0, *rhs0), "objects: F0");
      cmp(r, same_modfunctor(*lhs1, *rhs1), "objects: F1");
      auto lt = dualize_prenat(g_right(in.fb, in.fa, in.tright, h0, h1), lhs0, lhs1);
      auto rt = g_left(in.fa, in.fb, dualize_prenat(in.tright, d0, d1), rhs0, rhs1);
      cmp(r, same_modprenat(lt, rt), "morphisms: T");
      break;
    }
  }
  return r;
}

FunPtr random_functor(CatPtr src, CatPtr tgt, std::mt19937_64& rng, int tries) {
  std::uniform_int_distribution<int> obj(0, tgt->nobj() - 1);
  std::bernoulli_distribution half(0.5), sparse(0.15);
  int arity = src->arity_bound >= 2 || tgt->arity_bound >= 2 ? 2 : 1;
  bool graded = src->graded && tgt->graded;
  auto f = std::make_shared<Functor>();
  f->name = "F";
  f->src = src;
  f->tgt = tgt;
  f->arity_bound = arity;
  for (int t = 0; t < tries; ++t) {
    f->objmap.assign(src->nobj(), 0);
    for (auto& y : f->objmap) y = obj(rng);
    f->comps.clear();
    bool with2 = half(rng);
    for (int k = 1; k <= arity; ++k) {
      if (k == 2 && !with2) break;
      for_each_chain(*src, k, -1, -1, [&](const Word& w) {
        int s = f->objmap[chain_start(*src, w)], e = f->objmap[chain_end(*src, w)];
        int want = f->degree(k);
        for (int g : w) want += src->gens[g].degree;
        Vec out;
        for (int b : tgt->hom(s, e))
          if ((!graded || tgt->gens[b].degree == want) && (k == 1 ? half(rng) : sparse(rng))) out.toggle(b);
        add_entry(f->comps, w, out);
      });
    }
    if (f->comps.empty()) continue;
    if (is_functor(*f)) return f;
  }
  f->comps.clear();
  return f;
}

namespace {

// negative degrees populate the longer chain components in graded mode
ModPreNat random_t(ModFunPtr a, ModFunPtr b, int trunc, std::mt19937_64& rng) {
  int deg = std::uniform_int_distribution<int>(-2, 0)(rng);
  return random_modprenat(a, b, deg, trunc, rng);
}

template <class T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

}  // namespace

DiagramInstance random_instance(CatPtr a, std::mt19937_64& rng, int trunc) {
  DiagramInstance in;
  in.A = a;
  in.B = a;
  in.fa = random_functor(a, a, rng);
  in.fb = random_functor(a, a, rng);
  auto diag = diagonal_bimodule(a);
  auto ddiag = dualize(*diag);
  std::vector<ModFunPtr> lefts = {yoneda_left(a), serre_left(a), phi_inverse(*diag, Side::Left)};
  std::vector<ModFunPtr> rights = {yoneda_right(a), phi_inverse(*ddiag, Side::Right), phi_inverse(*diag, Side::Right)};
  in.left0 = pick(lefts, rng);
  in.left1 = pick(lefts, rng);
  in.tleft = random_t(in.left0, in.left1, trunc, rng);
  in.right0 = pick(rights, rng);
  in.right1 = pick(rights, rng);
  in.tright = random_t(in.right0, in.right1, trunc, rng);
  std::vector<BimodPtr> ms = {diag, ddiag};
  in.M = pick(ms, rng);
  in.M2 = pick(ms, rng);
  in.v = random_premorphism(in.M, in.M2, std::uniform_int_distribution<int>(-2, 0)(rng), trunc, rng);
  return in;
}

DiagramInstance cross_instance(FunPtr fb, std::mt19937_64& rng, int trunc) {
  CatPtr b = fb->src, a = fb->tgt;
  DiagramInstance in;
  in.A = a;
  in.B = b;
  in.fa = random_functor(a, a, rng);
  in.fb = random_functor(b, b, rng);
  in.left0 = precompose_functor(*yoneda_left(a), fb);
  in.left1 = precompose_functor(*serre_left(a), fb);
  in.tleft = random_t(in.left0, in.left1, trunc, rng);
  in.right0 = precompose_functor(*yoneda_right(a), fb);
  in.right1 = in.right0;
  in.tright = random_t(in.right0, in.right1, trunc, rng);
  auto ida = identity_functor(a);
  in.M = pullback(*ida, *fb, *diagonal_bimodule(a));
  in.M2 = pullback(*ida, *fb, *dualize(*diagonal_bimodule(a)));
  in.v = random_premorphism(in.M, in.M2, std::uniform_int_distribution<int>(-2, 0)(rng), trunc, rng);
  return in;
}

}  // namespace ainf
