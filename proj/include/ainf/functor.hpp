// A-infinity functors between finite categories and pre-natural
// transformations between them.
#pragma once

#include <climits>
#include <memory>
#include <random>

#include "ainf/category.hpp"

namespace ainf {

constexpr int kExact = INT_MAX;

class Functor {
 public:
  std::string name;
  CatPtr src, tgt;
  std::vector<int> objmap;
  int arity_bound = 1;
  // F_k on composable basis tuples of src, k = key length
  Tensor comps;

  Vec of(const Word& w) const {
    auto* v = lookup(comps, w);
    return v ? *v : Vec();
  }
  Vec apply(const std::vector<const Vec*>& args) const { return apply_tensor(comps, args); }
  int degree(int k) const { return -1 + k * (1 - src->N) + tgt->N; }
  bool operator==(const Functor& o) const;
};

using FunPtr = std::shared_ptr<const Functor>;

void check_types(const Functor& f);
Report validate_functor(const Functor& f);
// validate_functor(f).ok, stopping at the first failing tuple
bool is_functor(const Functor& f);
FunPtr identity_functor(CatPtr a);
FunPtr compose_functors(const Functor& g, const Functor& f);
// Same data seen as a functor B -> A[j] (only degrees change).
FunPtr retarget(const Functor& f, CatPtr tgt);

// Partition sums used throughout: calls back with the list of F-values
// of the consecutive slices of w, one list per composition of |w|.
void for_each_slicing(const Functor& f, std::span<const int> w, const std::function<void(const std::vector<Vec>&)>& cb);

// Pre-natural transformation between functors with finite target.
class PreNat {
 public:
  FunPtr F0, F1;
  int degree = 0;
  // components with arity < trunc are meaningful; kExact means finite support
  int trunc = kExact;
  std::vector<Vec> t0;  // per source object
  Tensor comps;         // arity >= 1

  Vec at(const Word& w) const {
    auto* v = lookup(comps, w);
    return v ? *v : Vec();
  }
  bool is_zero() const;
  bool operator==(const PreNat& o) const { return degree == o.degree && t0 == o.t0 && comps == o.comps; }
};

PreNat zero_prenat(FunPtr f0, FunPtr f1, int degree, int trunc);
// (T_0)_X = e_{F X}, higher components zero
PreNat unit_prenat(FunPtr f, const UnitAssignment& target_units);
PreNat random_prenat(FunPtr f0, FunPtr f1, int degree, int trunc, std::mt19937_64& rng, double density = 0.3);
PreNat fun_mu1(const PreNat& t, int L);
bool check_nat_transformation(const PreNat& t, int L);
// every [(T_0)_X] invertible in the homological category of the target
bool check_nat_quasi_iso(const PreNat& t);
// L_F(T) for F after the targets of T; R_F(S) for F before the sources of S
PreNat apply_LF(FunPtr f, const PreNat& t);
PreNat apply_RF(FunPtr f, const PreNat& s);
// Composition functor on objects: (H o F).
inline FunPtr precompose(FunPtr h, FunPtr f) { return compose_functors(*h, *f); }

}  // namespace ainf
