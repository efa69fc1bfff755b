// Weak Calabi-Yau structures and relative weak Calabi-Yau pairings, in
// Hochschild, bimodule and Yoneda form.
//
// A Hochschild-form candidate is a functional sigma on CC_(A, M) at a
// truncation L (a BitVec over the chain basis).  The bimodule form is
// phi = Gamma o T^(sigma): A_diag -> M^, the Yoneda form the pre-natural
// transformation delta with Phi^l(delta) = phi.
#pragma once

#include <optional>
#include <stdexcept>

#include "ainf/corpus.hpp"
#include "ainf/hochschild.hpp"
#include "ainf/modfun.hpp"

namespace ainf {

// Thrown when a candidate fails its closedness precondition.
struct NotClosed : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Verdict {
  bool value = false;
  Report report;
  std::string str() const { return std::string(value ? "true" : "false") + " " + report.str(); }
};

// sigma supported on length-zero words (w) with w in the given gens of cc.M
BitVec sigma_from_gens(const HochschildComplex& cc, const Vec& gens);
// sigma o d on the truncated chain complex
bool is_cocycle(const HochschildComplex& cc, const BitVec& sigma);

// pairing H(A(X',X)) x H(M(X,X')) -> F2 through mu_{1|1|0}, iota and sigma
Verdict check_nondegenerate(const HochschildComplex& cc, const BitVec& sigma);

// sigma o T restricted to 2CC_ at L-1, then Gamma; a pre-morphism A_diag -> M^
// truncated at arity < L.  Degree -|sigma| - N when sigma is zero.
PreMorphism gamma_t_dual(const HochschildComplex& cc, const BitVec& sigma);
// the same as a chain map dual(CC_(A,M)_L) -> 2CC^(A, M^)_L
ChainMap gamma_t_dual_map(const HochschildComplex& cc, const HochschildComplex& cc2dual);

// phi closed; every phi_{0|1|0} a quasi-iso; degree -N_A in graded mode
Verdict check_wcy_bimodule(const PreMorphism& phi);

struct LemmaCheck {
  Verdict nondegenerate, bimodule;
  bool agree() const { return nondegenerate.value == bimodule.value; }
};
LemmaCheck check_lemma_nondeg_equivalence(const HochschildComplex& cc, const BitVec& sigma);

// Left module functor with Phi^l = mdual (the abstract Serre functor for the dual diagonal)
ModFunPtr serre_for(const Bimodule& mdual);
// delta = (Phi^l_1)^{-1}(phi): Y^l -> serre_for(M^)
ModPreNat yoneda_form(const PreMorphism& phi);
Verdict check_yoneda(const ModPreNat& delta);

struct ThreeForms {
  Verdict hochschild, bimodule, yoneda;
  bool agree() const { return hochschild.value == bimodule.value && bimodule.value == yoneda.value; }
};
ThreeForms check_three_forms(const HochschildComplex& cc, const BitVec& sigma);

// ---- relative pairings (j = 0) ----

// i_{k|1|m}(L, z, R) = I_{k+m+1}(L, z, R): B_diag -> I^*(A_diag)
PreMorphism canonical_i(const Functor& I);
// RelativeData for B = A, I = id, A_rel = A_diag, i_rel = i
RelativeData absolute_data(CatPtr a, const Vec& sigma);
void check_relative_data(const RelativeData& d);

// i_rel^ o I^*alpha o i, alpha: A_diag -> A_rel^
PreMorphism psi(const RelativeData& d, const PreMorphism& alpha);
// Psi on the whole cochain complex, 2CC^(A, A_rel^)_L -> 2CC^(B, B^)_L
ChainMap psi_map(const RelativeData& d, const HochschildComplex& src, const HochschildComplex& tgt);

struct RelativeComplexes {
  int L = 0;
  HCPtr ccB, ccBpull, ccA;  // CC_(B, B_diag), CC_(B, I^*A_rel), CC_(A, A_rel)
};
RelativeComplexes relative_complexes(const RelativeData& d, int L);
// nu_* of i_rel, then F_* of I
ChainMap irel_pushforward(const RelativeData& d, const RelativeComplexes& c);

Verdict check_psi_irel_square(const RelativeData& d, int L);

struct RelativeVerdict {
  Verdict sigmaA_nondeg, sigmaB_induced_nondeg;  // Hochschild form
  Verdict phiA_qiso, psi_qiso;                   // bimodule form
  Verdict deltaA_qiso, prel_qiso;                // Yoneda form
  bool prel_matches_psi = false;
  bool hochschild() const { return sigmaA_nondeg.value && sigmaB_induced_nondeg.value; }
  bool bimodule() const { return phiA_qiso.value && psi_qiso.value; }
  bool yoneda() const { return deltaA_qiso.value && prel_qiso.value; }
  bool is_pairing() const { return hochschild() && bimodule() && yoneda(); }
  bool induced_wcy_on_B() const { return sigmaB_induced_nondeg.value && psi_qiso.value && prel_qiso.value; }
  bool agree() const { return hochschild() == bimodule() && bimodule() == yoneda() && prel_matches_psi; }
};
RelativeVerdict check_relative_pairing(const RelativeData& d, int L);

// [sigma^A o I^rel_*] = [sigma^B] in the homology of the dual of CC_(B)_L
Verdict check_compatibility(const RelativeData& d, const Vec& sigmaB, int L);

// S_I: Y^l_B -> G^l_I(Y^l_A), with Phi^l_1(S_I) = canonical_i(I)
ModPreNat s_I(FunPtr I);
// L_D(S_rel) o G^l_I(delta) o S_I
ModPreNat p_rel(const RelativeData& d, const ModPreNat& deltaA);

}  // namespace ainf
