#include "ainf/cy.hpp"

#include <sstream>

namespace ainf {

namespace {

std::string dims(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

BitVec transpose_apply(const F2Matrix& m, const BitVec& v) { return m.transpose().apply(v); }

BimodPtr dual_diag(CatPtr c) { return dualize(*diagonal_bimodule(c)); }

PreMorphism cochain_to_premorphism(const HochschildComplex& cc2, const BitVec& v, int fallback_degree) {
  auto diag = diagonal_bimodule(cc2.A);
  std::optional<int> deg;
  for (auto i : v.ones()) {
    int d = cc2.complex->graded() ? cc2.complex->degrees()[i] : 0;
    if (deg && *deg != d) throw std::invalid_argument("candidate is not homogeneous");
    deg = d;
  }
  PreMorphism r = zero_premorphism(diag, cc2.M, deg.value_or(fallback_degree), cc2.L);
  for (auto i : v.ones()) {
    auto& k = cc2.basis[i];
    add_entry(r.comps, {k.x, k.w, k.y}, Vec(k.z));
  }
  return r;
}

BitVec premorphism_to_cochain(const HochschildComplex& cc2, const PreMorphism& v) {
  BitVec r(cc2.dim());
  for (auto& [k, out] : v.comps) {
    if (k.arity() >= cc2.L) continue;
    for (int o : out) {
      int i = cc2.find({k.left, k.w, k.right, o});
      if (i < 0) throw std::logic_error("pre-morphism entry outside the cochain basis");
      r.flip(std::size_t(i));
    }
  }
  return r;
}

// degree of the length-zero support of sigma, if any
std::optional<int> sigma_degree(const HochschildComplex& cc, const BitVec& sigma) {
  if (!cc.complex->graded()) return std::nullopt;
  for (auto i : sigma.ones())
    if (cc.basis[i].x.empty()) return cc.M->gens[cc.basis[i].w].degree;
  return std::nullopt;
}

void require_cocycle(const HochschildComplex& cc, const BitVec& sigma) {
  if (!is_cocycle(cc, sigma)) throw NotClosed("sigma is not closed on the truncated chain complex");
}

}  // namespace

BitVec sigma_from_gens(const HochschildComplex& cc, const Vec& gens) {
  if (cc.kind != HKind::Chains) throw std::invalid_argument("sigma lives on a Hochschild chain complex");
  BitVec s(cc.dim());
  for (int g : gens) {
    if (g < 0 || g >= cc.M->ngen()) throw std::invalid_argument("sigma: no such generator");
    auto& v = cc.M->gens[g];
    if (v.x != v.y) throw std::invalid_argument("sigma: generator " + v.label + " is not an endomorphism");
    s.flip(std::size_t(cc.find({{}, g, {}, -1})));
  }
  return s;
}

bool is_cocycle(const HochschildComplex& cc, const BitVec& sigma) {
  return !transpose_apply(cc.complex->d(), sigma).any();
}

Verdict check_nondegenerate(const HochschildComplex& cc, const BitVec& sigma) {
  require_cocycle(cc, sigma);
  Verdict v;
  v.value = true;
  const auto& A = *cc.A;
  const auto& M = *cc.M;
  auto hc = homological_category(cc.A);
  for (int X = 0; X < A.nobj(); ++X)
    for (int Xp = 0; Xp < A.nobj(); ++Xp) {
      ++v.report.checked;
      // H(A(X', X)) against H(M(X, X'))
      const auto& ha = hc.H[Xp][X];
      auto hm = homology(*value_complex(M, X, Xp));
      F2Matrix p(ha.dim(), hm.dim());
      for (std::size_t r = 0; r < ha.dim(); ++r) {
        Vec a = hc.to_global(Xp, X, ha.reps[r]);
        for (std::size_t c = 0; c < hm.dim(); ++c) {
          Vec z = to_global(M, X, Xp, hm.reps[c]);
          bool bit = false;
          for (int ai : a)
            for (int zi : z)
              for (int u : M.mu_of({{ai}, zi, {}})) bit ^= sigma.get(std::size_t(cc.find({{}, u, {}, -1})));
          p.set(r, c, bit);
        }
      }
      std::size_t rk = rank(p);
      if (p.rows() != p.cols() || rk != p.rows())
        v.report.fail(1, "objects (" + A.objects[Xp] + ", " + A.objects[X] + "): pairing matrix " +
                             dims(p.rows(), p.cols()) + " of rank " + std::to_string(rk));
    }
  v.value = v.report.ok;
  return v;
}

ChainMap gamma_t_dual_map(const HochschildComplex& cc, const HochschildComplex& cc2dual) {
  if (cc.kind != HKind::Chains || cc2dual.kind != HKind::TwoCochains || cc.L != cc2dual.L || cc.L < 1)
    throw std::invalid_argument("gamma_t_dual_map: needs CC_ and 2CC^ with dual coefficients at the same L >= 1");
  int L = cc.L;
  auto t2 = build_2cc_chains(cc.A, cc.M, L);
  auto t2s = build_2cc_chains(cc.A, cc.M, L - 1);
  auto T = map_T(*t2, cc);
  auto incl = truncation_inclusion(*t2s, *t2);
  auto G = map_Gamma(*t2s, cc2dual);
  F2Matrix m = G.matrix() * (incl.matrix().transpose() * T.matrix().transpose());
  auto dsrc = std::make_shared<ChainComplex>(dual_complex(*cc.complex));
  return ChainMap(dsrc, cc2dual.complex, std::move(m), G.shift());
}

PreMorphism gamma_t_dual(const HochschildComplex& cc, const BitVec& sigma) {
  auto cc2 = build_2cc_cochains(cc.A, dualize(*cc.M), cc.L);
  auto g = gamma_t_dual_map(cc, *cc2);
  int fallback = -sigma_degree(cc, sigma).value_or(0) - cc.A->N;
  return cochain_to_premorphism(*cc2, g.matrix().apply(sigma), fallback);
}

Verdict check_wcy_bimodule(const PreMorphism& phi) {
  if (!is_closed(phi)) throw NotClosed("phi is not closed");
  Verdict v;
  v.report = check_bimod_quasi_iso(phi);
  if (phi.src->graded()) {
    ++v.report.checked;
    int want = -phi.src->A->N;
    if (phi.degree != want)
      v.report.fail(0, "degree " + std::to_string(phi.degree) + ", expected " + std::to_string(want));
  } else {
    v.report.notes.push_back("ungraded: dimension condition skipped");
  }
  v.value = v.report.ok;
  return v;
}

LemmaCheck check_lemma_nondeg_equivalence(const HochschildComplex& cc, const BitVec& sigma) {
  LemmaCheck r;
  r.nondegenerate = check_nondegenerate(cc, sigma);
  r.bimodule = check_wcy_bimodule(gamma_t_dual(cc, sigma));
  return r;
}

ModFunPtr serre_for(const Bimodule& mdual) {
  if (mdual.A == mdual.B || *mdual.A == *mdual.B) {
    auto sd = dual_diag(mdual.A);
    if (same_bimodule(*sd, mdual)) return serre_left(mdual.A);
  }
  return phi_inverse(mdual, Side::Left);
}

ModPreNat yoneda_form(const PreMorphism& phi) {
  return phi1_inverse(phi, yoneda_left(phi.src->A), serre_for(*phi.tgt));
}

Verdict check_yoneda(const ModPreNat& delta) {
  Verdict v;
  ++v.report.checked;
  if (!check_nat_transformation(delta, delta.trunc)) v.report.fail(0, "delta is not natural");
  v.report.merge(check_nat_quasi_iso(delta));
  const auto& B = *delta.F0->src;
  if (B.graded && delta.F0->base->graded) {
    ++v.report.checked;
    int want = -delta.F0->base->N;
    if (delta.degree != want)
      v.report.fail(0, "degree " + std::to_string(delta.degree) + ", expected " + std::to_string(want));
  } else {
    v.report.notes.push_back("ungraded: dimension condition skipped");
  }
  v.value = v.report.ok;
  return v;
}

ThreeForms check_three_forms(const HochschildComplex& cc, const BitVec& sigma) {
  ThreeForms r;
  r.hochschild = check_nondegenerate(cc, sigma);
  auto phi = gamma_t_dual(cc, sigma);
  r.bimodule = check_wcy_bimodule(phi);
  r.yoneda = check_yoneda(yoneda_form(phi));
  return r;
}

// ---- relative ----

PreMorphism canonical_i(const Functor& I) {
  auto bd = diagonal_bimodule(I.src);
  auto ad = diagonal_bimodule(I.tgt);
  auto tgt = pullback(I, I, *ad);
  auto pi = pullback_index(I, I, *ad);
  PreMorphism r = zero_premorphism(bd, tgt, 0);
  const auto& B = *I.src;
  for_each_key(*bd, I.arity_bound - 1, [&](const BiKey& k) {
    Word w = k.left;
    w.push_back(k.w);
    w.insert(w.end(), k.right.begin(), k.right.end());
    int x = chain_start(B, w), y = chain_end(B, w);
    Vec out;
    for (int o : I.of(w)) out.toggle(pi.id.at({x, y, o}));
    add_entry(r.comps, k, out);
  });
  return r;
}

RelativeData absolute_data(CatPtr a, const Vec& sigma) {
  RelativeData d;
  d.A = a;
  d.B = a;
  d.j = 0;
  d.Aj = a;
  d.I = identity_functor(a);
  d.Arel = diagonal_bimodule(a);
  d.irel = canonical_i(*d.I);
  d.sigmaA = sigma;
  d.sigmaB = sigma;
  return d;
}

void check_relative_data(const RelativeData& d) {
  if (d.j != 0) throw std::invalid_argument("relative pairings are implemented for j = 0 only");
  if (!d.I || !(*d.I->src == *d.B) || !(*d.I->tgt == *d.A)) throw std::invalid_argument("I must be a functor B -> A");
  if (d.A->graded && d.B->graded && d.A->N != d.B->N + d.j)
    throw std::invalid_argument("degrees do not match: N_A != N_B + j");
  if (!validate_functor(*d.I).ok) throw std::invalid_argument("I is not an A-infinity functor");
  if (!(*d.Arel->A == *d.A) || !(*d.Arel->B == *d.A)) throw std::invalid_argument("A_rel must be an A-A bimodule");
  if (!same_bimodule(*d.irel.src, *diagonal_bimodule(d.B)) || !same_bimodule(*d.irel.tgt, *pullback(*d.I, *d.I, *d.Arel)))
    throw std::invalid_argument("i_rel must run B_diag -> I^*A_rel");
}

PreMorphism psi(const RelativeData& d, const PreMorphism& alpha) {
  auto i = canonical_i(*d.I);
  auto pa = pullback(*d.I, *d.I, alpha);
  auto direl = dualize(d.irel);
  return bimod_mu2(bimod_mu2(i, pa), direl);
}

ChainMap psi_map(const RelativeData& d, const HochschildComplex& src, const HochschildComplex& tgt) {
  auto i = canonical_i(*d.I);
  auto direl = dualize(d.irel);
  auto adiag = diagonal_bimodule(d.A);
  auto bdiag = diagonal_bimodule(d.B);
  auto pdiag = pullback(*d.I, *d.I, *adiag);
  auto pdual = pullback(*d.I, *d.I, *src.M);
  F2Matrix m(tgt.dim(), src.dim());
  for (std::size_t j = 0; j < src.dim(); ++j) {
    auto& k = src.basis[j];
    int deg = src.complex->graded() ? src.complex->degrees()[j] : 0;
    PreMorphism a = zero_premorphism(adiag, src.M, deg, src.L);
    a.comps[{k.x, k.w, k.y}] = Vec(k.z);
    auto pa = pullback(*d.I, *d.I, a, pdiag, pdual);
    auto r = reexpress(bimod_mu2(bimod_mu2(i, pa), direl), bdiag, tgt.M);
    auto col = premorphism_to_cochain(tgt, r);
    for (auto row : col.ones()) m.set(row, j);
  }
  return ChainMap(src.complex, tgt.complex, std::move(m), 0);
}

RelativeComplexes relative_complexes(const RelativeData& d, int L) {
  RelativeComplexes c;
  c.L = L;
  c.ccB = build_cc_chains(d.B, diagonal_bimodule(d.B), L);
  c.ccBpull = build_cc_chains(d.B, d.irel.tgt, L);
  c.ccA = build_cc_chains(d.A, d.Arel, L);
  return c;
}

ChainMap irel_pushforward(const RelativeData& d, const RelativeComplexes& c) {
  return pushforward_nu(d.irel, *c.ccB, *c.ccBpull).then(pushforward_F(*d.I, *c.ccBpull, *c.ccA));
}

Verdict check_psi_irel_square(const RelativeData& d, int L) {
  check_relative_data(d);
  Verdict v;
  ++v.report.checked;
  if (!is_closed(d.irel)) {
    v.report.fail(0, "i_rel is not closed, so neither path is a chain map");
    return v;
  }
  auto c = relative_complexes(d, L);
  auto cc2A = build_2cc_cochains(d.A, dualize(*d.Arel), L);
  auto cc2B = build_2cc_cochains(d.B, dual_diag(d.B), L);
  auto gA = gamma_t_dual_map(*c.ccA, *cc2A);
  auto gB = gamma_t_dual_map(*c.ccB, *cc2B);
  auto top = gA.then(psi_map(d, *cc2A, *cc2B));
  auto bottom = dual_map(irel_pushforward(d, c), gA.source_ptr(), gB.source_ptr()).then(gB);
  if (!top.commutes() || !bottom.commutes()) v.report.fail(0, "a path of the square is not a chain map");
  auto hs = homology(top.source());
  auto ht = homology(top.target());
  auto mt = induced_map(top, hs, ht);
  auto mb = induced_map(bottom, hs, ht);
  if (mt != mb) v.report.fail(0, "induced maps differ on homology at L = " + std::to_string(L));
  v.report.notes.push_back(std::string("chain level: ") + (top.matrix() == bottom.matrix() ? "equal" : "differ"));
  v.value = v.report.ok;
  return v;
}

RelativeVerdict check_relative_pairing(const RelativeData& d, int L) {
  check_relative_data(d);
  if (!is_closed(d.irel)) throw NotClosed("i_rel is not closed");
  RelativeVerdict r;
  auto c = relative_complexes(d, L);
  auto sA = sigma_from_gens(*c.ccA, d.sigmaA);
  require_cocycle(*c.ccA, sA);
  auto Irel = irel_pushforward(d, c);
  auto sB = transpose_apply(Irel.matrix(), sA);
  r.sigmaA_nondeg = check_nondegenerate(*c.ccA, sA);
  r.sigmaB_induced_nondeg = check_nondegenerate(*c.ccB, sB);
  auto phiA = gamma_t_dual(*c.ccA, sA);
  r.phiA_qiso = check_wcy_bimodule(phiA);
  auto ps = psi(d, phiA);
  r.psi_qiso = check_wcy_bimodule(ps);
  auto delta = yoneda_form(phiA);
  r.deltaA_qiso = check_yoneda(delta);
  auto P = p_rel(d, delta);
  r.prel_qiso = check_yoneda(P);
  auto lhs = phi1(P);
  int lim = std::min(lhs.trunc, ps.trunc);
  r.prel_matches_psi = same_premorphism(restrict_to(lhs, lim), restrict_to(ps, lim));
  return r;
}

Verdict check_compatibility(const RelativeData& d, const Vec& sigmaB, int L) {
  check_relative_data(d);
  auto c = relative_complexes(d, L);
  auto sA = sigma_from_gens(*c.ccA, d.sigmaA);
  require_cocycle(*c.ccA, sA);
  auto sB = sigma_from_gens(*c.ccB, sigmaB);
  require_cocycle(*c.ccB, sB);
  auto induced = transpose_apply(irel_pushforward(d, c).matrix(), sA);
  auto dual = dual_complex(*c.ccB->complex);
  auto h = homology(dual);
  Verdict v;
  ++v.report.checked;
  if (!h.is_boundary(induced ^ sB)) v.report.fail(0, "classes differ in the dual of CC_(B) at L = " + std::to_string(L));
  v.value = v.report.ok;
  return v;
}

ModPreNat s_I(FunPtr I) {
  return phi1_inverse(canonical_i(*I), yoneda_left(I->src), g_left(I, I, *yoneda_left(I->tgt)));
}

ModPreNat p_rel(const RelativeData& d, const ModPreNat& deltaA) {
  auto SI = s_I(d.I);
  auto g0 = g_left(d.I, d.I, *deltaA.F0), g1 = g_left(d.I, d.I, *deltaA.F1);
  auto Gd = g_left(d.I, d.I, deltaA, g0, g1);
  auto f0 = phi_inverse(*d.irel.tgt, Side::Right), f1 = phi_inverse(*d.irel.src, Side::Right);
  auto srel = phi1_inverse(d.irel, f0, f1);
  auto LD = dualize_prenat(srel, dualize_functor(*f0), dualize_functor(*f1));
  return fun_mu2(fun_mu2(SI, Gd), LD);
}

}  // namespace ainf
