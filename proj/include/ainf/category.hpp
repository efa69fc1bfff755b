// Finite A-infinity categories over F2.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ainf/gf2.hpp"
#include "ainf/report.hpp"
#include "ainf/vec.hpp"

namespace ainf {

struct Gen {
  std::string label;
  int src = 0;
  int tgt = 0;
  int degree = 0;
  bool operator==(const Gen&) const = default;
};

class Category {
 public:
  std::string name;
  bool graded = false;
  int N = 0;
  int arity_bound = 2;
  std::vector<std::string> objects;
  std::vector<Gen> gens;
  // mu_k on composable basis tuples, k = key length
  Tensor mu;

  int add_object(const std::string& label);
  int add_gen(int src, int tgt, const std::string& label, int degree = 0);
  // toggles the given output vector into mu(key)
  void set_mu(const Word& key, const Vec& out) { add_entry(mu, key, out); }
  void finalize();

  int nobj() const { return int(objects.size()); }
  int ngen() const { return int(gens.size()); }
  const std::vector<int>& hom(int x, int y) const { return hom_[x][y]; }
  const std::vector<int>& out(int x) const { return out_[x]; }
  const std::vector<int>& in(int y) const { return in_[y]; }
  int object_index(const std::string& label) const;
  int gen_index(const std::string& label) const;
  // position of gen g inside hom(src, tgt)
  int local(int g) const { return local_[g]; }

  Vec mu_of(const Word& key) const {
    auto* v = lookup(mu, key);
    return v ? *v : Vec();
  }
  Vec mu_apply(const std::vector<const Vec*>& args) const { return apply_tensor(mu, args); }
  // degree of mu_k in graded mode
  int mu_degree(int k) const { return -2 + k * (1 - N) + N; }

  std::string word_str(const Word& w) const;
  std::string vec_str(const Vec& v) const;

  bool same_shape(const Category& o) const;
  bool operator==(const Category& o) const;

  static std::shared_ptr<const Category> ground();
  bool is_ground() const { return name == "<ground>"; }

 private:
  std::vector<std::vector<std::vector<int>>> hom_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> local_;
};

using CatPtr = std::shared_ptr<const Category>;

// Every composable basis chain of the given length (>= 1); start/end = -1 for any.
void for_each_chain(const Category& c, int len, int start, int end, const std::function<void(const Word&)>& f);
inline int chain_start(const Category& c, const Word& w) { return c.gens[w.front()].src; }
inline int chain_end(const Category& c, const Word& w) { return c.gens[w.back()].tgt; }
bool composable(const Category& c, const Word& w);

// Throws std::invalid_argument on ill-typed tensor entries.
void check_types(const Category& c);
Report validate_relations(const Category& c);
Report degree_audit(const Category& c);

using UnitAssignment = std::vector<Vec>;
Report check_strict_unit(const Category& c, const UnitAssignment& u);

struct HomologicalCategory {
  CatPtr cat;
  std::vector<std::vector<std::shared_ptr<ChainComplex>>> complex;
  std::vector<std::vector<Homology>> H;
  BitVec to_local(int x, int y, const Vec& v) const;
  Vec to_global(int x, int y, const BitVec& b) const;
  Vec rep(int x, int y, const BitVec& coords) const;
  BitVec product(int x, int y, int z, const BitVec& a, const BitVec& b) const;
  bool associative() const;
};

HomologicalCategory homological_category(CatPtr c);
std::optional<UnitAssignment> find_homological_units(CatPtr c);

CatPtr opposite(const Category& c);
CatPtr suspend(const Category& c, int j);

}  // namespace ainf
