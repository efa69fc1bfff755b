// Bimodules over finite A-infinity categories and their pre-morphisms.
// Left and right modules are bimodules over (A, ground) and (ground, A).
#pragma once

#include <compare>
#include <memory>
#include <random>
#include <tuple>

#include "ainf/category.hpp"
#include "ainf/functor.hpp"

namespace ainf {

struct ValueGen {
  std::string label;
  int x = 0;  // object of the left category
  int y = 0;  // object of the right category
  int degree = 0;
  bool dual = false;
  bool operator==(const ValueGen&) const = default;
};

// mu_{k|1|m}(left, w, right): left is a chain in A ending at x(w), right a
// chain in B starting at y(w), both stored in composition order.
struct BiKey {
  Word left;
  int w = 0;
  Word right;
  auto operator<=>(const BiKey&) const = default;
  int arity() const { return int(left.size() + right.size()); }
};

using BiTensor = std::map<BiKey, Vec>;

inline void add_entry(BiTensor& t, const BiKey& key, const Vec& v) {
  if (v.empty()) return;
  auto& slot = t[key];
  slot += v;
  if (slot.empty()) t.erase(key);
}
inline const Vec* lookup(const BiTensor& t, const BiKey& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}
inline void add_into(BiTensor& t, const BiTensor& o) {
  for (auto& [k, v] : o) add_entry(t, k, v);
}
int max_arity(const BiTensor& t);

class Bimodule {
 public:
  std::string name;
  CatPtr A, B;
  std::vector<ValueGen> gens;
  BiTensor mu;

  int add_gen(int x, int y, const std::string& label, int degree = 0, bool dual = false);
  void set_mu(const BiKey& key, const Vec& out) { add_entry(mu, key, out); }
  void finalize();

  int ngen() const { return int(gens.size()); }
  const std::vector<int>& value(int x, int y) const { return value_[x][y]; }
  Vec mu_of(const BiKey& k) const {
    auto* v = lookup(mu, k);
    return v ? *v : Vec();
  }
  bool graded() const { return A->graded && B->graded; }
  int mu_degree(int k, int m) const { return -1 + k * (1 - A->N) + m * (1 - B->N); }
  // largest k+m carrying a nonzero structure map
  int span() const { return max_arity(mu); }
  bool is_left_module() const { return B->is_ground(); }
  bool is_right_module() const { return A->is_ground(); }

  std::string key_str(const BiKey& k) const;
  std::string vec_str(const Vec& v) const;

 private:
  std::vector<std::vector<std::vector<int>>> value_;
};

using BimodPtr = std::shared_ptr<const Bimodule>;

// Every key (left, w, right) with |left| + |right| <= max_arity.
void for_each_key(const Bimodule& m, int max_arity, const std::function<void(const BiKey&)>& f);

void check_types(const Bimodule& m);
Report validate_bimodule(const Bimodule& m);
// Gens matched by (x, y, label, dual, degree) rather than by index.
bool same_bimodule(const Bimodule& a, const Bimodule& b);

class PreMorphism {
 public:
  BimodPtr src, tgt;
  int degree = 0;
  // entries with k+m < trunc are meaningful
  int trunc = kExact;
  BiTensor comps;

  Vec at(const BiKey& k) const {
    auto* v = lookup(comps, k);
    return v ? *v : Vec();
  }
  bool is_zero() const { return comps.empty(); }
  int span() const { return max_arity(comps); }
};

void check_types(const PreMorphism& v);
bool same_premorphism(const PreMorphism& a, const PreMorphism& b);
PreMorphism zero_premorphism(BimodPtr src, BimodPtr tgt, int degree, int trunc = kExact);
PreMorphism unit_morphism(BimodPtr m);
PreMorphism random_premorphism(BimodPtr src, BimodPtr tgt, int degree, int trunc, std::mt19937_64& rng,
                               double density = 0.3);
PreMorphism restrict_to(const PreMorphism& v, int trunc);
PreMorphism operator+(const PreMorphism& a, const PreMorphism& b);

// dg structure of A-mod-B; L defaults to the input truncation (or exact)
PreMorphism bimod_mu1(const PreMorphism& v, int L = kExact);
PreMorphism bimod_mu2(const PreMorphism& v, const PreMorphism& w);
bool is_closed(const PreMorphism& v);

BimodPtr zero_bimodule(CatPtr a, CatPtr b);
BimodPtr diagonal_bimodule(CatPtr a);
BimodPtr dualize(const Bimodule& m);
// v: M -> N gives N^ -> M^; endpoints may be supplied to share them
PreMorphism dualize(const PreMorphism& v, BimodPtr dsrc = nullptr, BimodPtr dtgt = nullptr);
BimodPtr suspend_bimodule(const Bimodule& m, int j);
PreMorphism suspend_premorphism(const PreMorphism& v, int j);
// the same data over categories of identical shape (e.g. suspensions)
BimodPtr rebase(const Bimodule& m, CatPtr a, CatPtr b);
PreMorphism rebase(const PreMorphism& v, BimodPtr src, BimodPtr tgt);
BimodPtr pullback(const Functor& f0, const Functor& f1, const Bimodule& m);
PreMorphism pullback(const Functor& f0, const Functor& f1, const PreMorphism& v, BimodPtr src = nullptr,
                     BimodPtr tgt = nullptr);

// Pulled-back gen ids: (x, y, original gen) -> id, and id -> original gen.
struct PullbackIndex {
  std::map<std::tuple<int, int, int>, int> id;
  std::vector<int> base;
};
PullbackIndex pullback_index(const Functor& f0, const Functor& f1, const Bimodule& m);

// The same morphism with endpoints replaced by canonically equal bimodules.
PreMorphism reexpress(const PreMorphism& v, BimodPtr src, BimodPtr tgt);
// acc += v, re-expressing v if its endpoints are different objects
void accumulate(PreMorphism& acc, const PreMorphism& v);
int find_gen(const Bimodule& m, int x, int y, const std::string& label, bool dual);

struct ConeData {
  BimodPtr cone;
  PreMorphism incl;  // M' -> Cone, degree 0
  PreMorphism proj;  // Cone -> M, degree -(|v|+1)
};
ConeData cone_of(const PreMorphism& v);

// value complex (K(x,y), mu_{0|1|0})
ComplexPtr value_complex(const Bimodule& m, int x, int y);
// v_{0|1|0} on K(x,y)
ChainMap value_map(const PreMorphism& v, int x, int y, ComplexPtr s = nullptr, ComplexPtr t = nullptr);
// closed v is a quasi-isomorphism iff every v_{0|1|0} is
Report check_bimod_quasi_iso(const PreMorphism& v);
Report check_homological_unitality(const Bimodule& m, const UnitAssignment& ua, const UnitAssignment& ub);

BitVec to_local(const Bimodule& m, int x, int y, const Vec& v);
Vec to_global(const Bimodule& m, int x, int y, const BitVec& b);

}  // namespace ainf
