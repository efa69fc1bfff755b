// Sparse vectors over F2 on a global basis index, and multilinear tensors.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace ainf {

class Vec {
 public:
  Vec() = default;
  explicit Vec(int b) : v_{b} {}
  static Vec of(std::vector<int> ids);

  void toggle(int b) {
    auto it = std::lower_bound(v_.begin(), v_.end(), b);
    if (it != v_.end() && *it == b)
      v_.erase(it);
    else
      v_.insert(it, b);
  }
  Vec& operator+=(const Vec& o);
  Vec operator+(const Vec& o) const {
    Vec r = *this;
    r += o;
    return r;
  }
  bool contains(int b) const { return std::binary_search(v_.begin(), v_.end(), b); }
  bool empty() const { return v_.empty(); }
  std::size_t size() const { return v_.size(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<int>& ids() const { return v_; }
  bool operator==(const Vec& o) const { return v_ == o.v_; }
  bool operator!=(const Vec& o) const { return v_ != o.v_; }
  bool operator<(const Vec& o) const { return v_ < o.v_; }

 private:
  std::vector<int> v_;
};

using Word = std::vector<int>;

// Multilinear map given on basis tuples.
using Tensor = std::map<Word, Vec>;

inline void add_entry(Tensor& t, const Word& key, const Vec& v) {
  if (v.empty()) return;
  auto& slot = t[key];
  slot += v;
  if (slot.empty()) t.erase(key);
}

inline const Vec* lookup(const Tensor& t, const Word& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

// Calls f on every basis tuple in the product of the supports.
void for_each_product(const std::vector<const Vec*>& args, const std::function<void(const Word&)>& f);

// Sum of t over the product of supports.
Vec apply_tensor(const Tensor& t, const std::vector<const Vec*>& args);

inline Word concat(std::span<const int> a, std::span<const int> b) {
  Word r(a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

// compositions of n into parts in [lo, hi]
void for_each_composition(int n, int lo, int hi, const std::function<void(const std::vector<int>&)>& f);

}  // namespace ainf
