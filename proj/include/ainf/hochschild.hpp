// Hochschild chain and cochain complexes, one- and two-pointed, with an
// explicit word-length truncation L, and the comparison maps between them.
//
// Truncation semantics:
//   chains and tensor products: words with total length <= L (subcomplex)
//   cochains and 2-pointed cochains: arity < L (quotient complex)
#pragma once

#include <map>

#include "ainf/bimodule.hpp"

namespace ainf {

enum class HKind { Cochains, Chains, TwoCochains, Tensor };

// One basis element.  Fields in use per kind:
//   Cochains     (x, z):       g(x) = z
//   Chains       (x, w):       x_1..x_k (x) w
//   TwoCochains  (x, w, y, z): entry (x, w, y) -> z
//   Tensor       (x, w, y, z): w (x) y (x) z (x) x
struct HKey {
  Word x;
  int w = -1;
  Word y;
  int z = -1;
  auto operator<=>(const HKey&) const = default;
};

class HochschildComplex {
 public:
  HKind kind;
  CatPtr A, B;        // B only for tensor products
  BimodPtr M, M2;     // M2 only for tensor products
  int L = 0;
  bool quotient = false;
  std::vector<HKey> basis;
  std::map<HKey, int> index;
  ComplexPtr complex;

  int find(const HKey& k) const {
    auto it = index.find(k);
    return it == index.end() ? -1 : it->second;
  }
  std::size_t dim() const { return basis.size(); }
  std::string key_str(const HKey& k) const;
  // length of a chain-side word, arity of a cochain-side key
  int length(const HKey& k) const { return int(k.x.size() + k.y.size()); }
};

using HCPtr = std::shared_ptr<const HochschildComplex>;

HCPtr build_cc_cochains(CatPtr a, BimodPtr m, int L);
HCPtr build_cc_chains(CatPtr a, BimodPtr m, int L);
HCPtr build_2cc_cochains(CatPtr a, BimodPtr m, int L);
// n: A-B bimodule, n2: B-A bimodule
HCPtr bimodule_tensor(BimodPtr n, BimodPtr n2, int L);
HCPtr build_2cc_chains(CatPtr a, BimodPtr m, int L);

// CC^(A,M) -> 2CC^(A,M), same L
ChainMap map_S(const HochschildComplex& cc, const HochschildComplex& cc2);
// 2CC_(A,M) -> CC_(A,M), same L
ChainMap map_T(const HochschildComplex& t2, const HochschildComplex& cc);
// dual of 2CC_(A,M) at L-1 -> 2CC^(A, M^) at L
ChainMap map_Gamma(const HochschildComplex& t2, const HochschildComplex& cc2dual);
// M(X,X) -> CC_(A,M)
ChainMap iota(const HochschildComplex& cc, int X);
// nu: M -> M' closed; CC_(A,M) -> CC_(A,M')
ChainMap pushforward_nu(const PreMorphism& nu, const HochschildComplex& src, const HochschildComplex& tgt);
// f: A -> B; CC_(A, f^*N) -> CC_(B, N)
ChainMap pushforward_F(const Functor& f, const HochschildComplex& src, const HochschildComplex& tgt);

// basis-preserving maps between truncations of the same complex
ChainMap truncation_inclusion(const HochschildComplex& small, const HochschildComplex& big);
ChainMap truncation_projection(const HochschildComplex& big, const HochschildComplex& small);

// chain-side words never grow under d
Report check_length_filtration(const HochschildComplex& c);

// Stable homology: image of H(C_L) -> H(C_{L+1}) for chains, of
// H(C_{L+1}) -> H(C_L) for cochains.
std::size_t stable_homology_dim(const HochschildComplex& at_L, const HochschildComplex& at_L1);

struct StableQuasiIso {
  QuasiIsoReport raw;       // the map at L alone
  std::size_t stable_src = 0, stable_tgt = 0, stable_rank = 0;
  bool by_rank = false;
  bool by_cone = false;     // stable image of the cone homology vanishes
  bool value() const { return by_rank && by_cone; }
  bool agree() const { return by_rank == by_cone; }
  std::string str() const;
};

// f: C_L -> D_L and g: C_{L+1} -> D_{L+1}, both chain-side (sub) or both
// cochain-side (quotient) truncations of the same pair of complexes.
StableQuasiIso stable_quasi_iso(const ChainMap& f, const ChainMap& g, const HochschildComplex& cL,
                                const HochschildComplex& cL1, const HochschildComplex& dL,
                                const HochschildComplex& dL1);

// f^T between the dual complexes, same shift
ChainMap dual_map(const ChainMap& f, ComplexPtr dual_src = nullptr, ComplexPtr dual_tgt = nullptr);

}  // namespace ainf
