// Functors into module categories, their pre-natural transformations, and
// the dg-isomorphisms Phi^l / Phi^r with bimodules.
//
// A Left functor F: B -> A-mod has components F(c): F(start c) -> F(end c).
// A Right functor F: B -> (mod-A)^opp has components F(c): F(end c) -> F(start c).
// Pre-natural transformations T: F0 -> F1 follow the same convention:
//   Left:  T(c): F0(start c) -> F1(end c)
//   Right: T(c): F1(end c) -> F0(start c)
// with T_0 per object in the same direction.
#pragma once

#include <map>
#include <random>

#include "ainf/bimodule.hpp"

namespace ainf {

enum class Side { Left, Right };

class ModFunctor {
 public:
  std::string name;
  Side side = Side::Left;
  CatPtr src;   // B
  CatPtr base;  // modules are over (base, ground) or (ground, base)
  std::vector<BimodPtr> obj;
  std::map<Word, PreMorphism> comps;

  const PreMorphism* at(const Word& c) const {
    auto it = comps.find(c);
    return it == comps.end() ? nullptr : &it->second;
  }
  // longest chain with a component
  int span() const;
  // endpoints of the component (or transformation component) at chain c
  BimodPtr from(const Word& c) const { return obj[side == Side::Left ? chain_start(*src, c) : chain_end(*src, c)]; }
  BimodPtr to(const Word& c) const { return obj[side == Side::Left ? chain_end(*src, c) : chain_start(*src, c)]; }
  // graded degree of the component at c
  int comp_degree(const Word& c) const;
};

using ModFunPtr = std::shared_ptr<const ModFunctor>;

class ModPreNat {
 public:
  ModFunPtr F0, F1;
  int degree = 0;
  // total arity (chain length + module arity) < trunc is meaningful
  int trunc = kExact;
  std::vector<PreMorphism> t0;
  std::map<Word, PreMorphism> comps;

  const PreMorphism* at(const Word& c) const {
    auto it = comps.find(c);
    return it == comps.end() ? nullptr : &it->second;
  }
  int span() const;
  int comp_degree(const Word& c) const;
  BimodPtr from(const Word& c) const;
  BimodPtr to(const Word& c) const;
  BimodPtr from(int y) const;
  BimodPtr to(int y) const;
};

Report validate_modfunctor(const ModFunctor& f);
bool same_modfunctor(const ModFunctor& a, const ModFunctor& b);
bool same_modprenat(const ModPreNat& a, const ModPreNat& b);

ModFunPtr yoneda_left(CatPtr a);
ModFunPtr yoneda_right(CatPtr a);
// built from the rho formulas
ModFunPtr serre_left_direct(CatPtr a);
// built as D^opp o Y^r
ModFunPtr serre_left(CatPtr a);

BimodPtr phi(const ModFunctor& f);
ModFunPtr phi_inverse(const Bimodule& k, Side side);
// Left: Phi(F0) -> Phi(F1); Right: Phi(F1) -> Phi(F0)
PreMorphism phi1(const ModPreNat& t);
ModPreNat phi1_inverse(const PreMorphism& v, ModFunPtr f0, ModFunPtr f1);

// L_D: dualize every module (Left <-> Right)
ModFunPtr dualize_functor(const ModFunctor& f);
ModPreNat dualize_prenat(const ModPreNat& t, ModFunPtr df0, ModFunPtr df1);
ModFunPtr suspend_functor(const ModFunctor& f, int j);
ModPreNat suspend_prenat(const ModPreNat& t, ModFunPtr sf0, ModFunPtr sf1);
ModFunPtr rebase_functor(const ModFunctor& f, CatPtr base);
ModPreNat rebase_prenat(const ModPreNat& t, ModFunPtr f0, ModFunPtr f1);
// L_{F^*}: pull every module back along f: A -> base
ModFunPtr pullback_functor(FunPtr f, const ModFunctor& h);
ModPreNat pullback_prenat(FunPtr f, const ModPreNat& t, ModFunPtr p0, ModFunPtr p1);
// R_F: h o f for f: B -> h.src
ModFunPtr precompose_functor(const ModFunctor& h, FunPtr f);
ModPreNat precompose_prenat(const ModPreNat& t, FunPtr f, ModFunPtr r0, ModFunPtr r1);
// G^l_{F0,F1} = L_{F0*} o R_{F1};  G^r_{F0,F1} = L_{F1*} o R_{F0}
ModFunPtr g_left(FunPtr f0, FunPtr f1, const ModFunctor& h);
ModFunPtr g_right(FunPtr f0, FunPtr f1, const ModFunctor& h);
ModPreNat g_left(FunPtr f0, FunPtr f1, const ModPreNat& t, ModFunPtr g0, ModFunPtr g1);
ModPreNat g_right(FunPtr f0, FunPtr f1, const ModPreNat& t, ModFunPtr g0, ModFunPtr g1);

ModPreNat zero_modprenat(ModFunPtr f0, ModFunPtr f1, int degree, int trunc);
ModPreNat unit_modprenat(ModFunPtr f);
ModPreNat random_modprenat(ModFunPtr f0, ModFunPtr f1, int degree, int trunc, std::mt19937_64& rng,
                           double density = 0.3);
ModPreNat restrict_to(const ModPreNat& t, int trunc);

// dg structure of fun(B, A-mod) and fun(B, (mod-A)^opp)
ModPreNat fun_mu1(const ModPreNat& t, int L = kExact);
ModPreNat fun_mu2(const ModPreNat& t, const ModPreNat& u);
bool is_zero(const ModPreNat& t);
bool check_nat_transformation(const ModPreNat& t, int L = kExact);
// every (T_0)_Y is a quasi-isomorphism of modules
Report check_nat_quasi_iso(const ModPreNat& t);

}  // namespace ainf
