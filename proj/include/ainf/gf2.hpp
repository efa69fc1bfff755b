// Dense bit-packed linear algebra over the two-element field.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ainf {

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  std::size_t nwords() const { return w_.size(); }
  const std::uint64_t* data() const { return w_.data(); }
  std::uint64_t* data() { return w_.data(); }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    std::uint64_t m = std::uint64_t(1) << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  BitVec& operator^=(const BitVec& o);
  BitVec operator^(const BitVec& o) const {
    BitVec r = *this;
    r ^= o;
    return r;
  }
  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  bool any() const;
  std::size_t popcount() const;
  // parity of the bitwise and
  bool dot(const BitVec& o) const;
  std::optional<std::size_t> lowest() const;
  std::vector<std::size_t> ones() const;
  // grows or truncates, keeping low bits
  BitVec resized(std::size_t n) const;
  std::string str() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Row-major: row(r) is a BitVec of length cols().
class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(std::size_t r, std::size_t c) : rows_(r, BitVec(c)), cols_(c) {}
  static F2Matrix identity(std::size_t n);
  static F2Matrix from_rows(const std::vector<std::vector<int>>& rows);
  static F2Matrix from_columns(std::size_t rows, const std::vector<BitVec>& cols);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
  void flip(std::size_t r, std::size_t c) { rows_[r].flip(c); }
  const BitVec& row(std::size_t r) const { return rows_[r]; }
  BitVec& row(std::size_t r) { return rows_[r]; }
  BitVec column(std::size_t c) const;

  BitVec apply(const BitVec& v) const;
  F2Matrix operator*(const F2Matrix& o) const;
  F2Matrix operator+(const F2Matrix& o) const;
  F2Matrix transpose() const;
  bool is_zero() const;
  bool operator==(const F2Matrix& o) const { return cols_ == o.cols_ && rows_ == o.rows_; }
  bool operator!=(const F2Matrix& o) const { return !(*this == o); }

  F2Matrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const;

 private:
  std::vector<BitVec> rows_;
  std::size_t cols_ = 0;
};

std::size_t rank(const F2Matrix& m);
std::vector<BitVec> kernel_basis(const F2Matrix& m);

// Incremental echelon basis. Each stored vector remembers which inserted
// generators it combines, so reduce() can report coordinates.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t dim) : dim_(dim) {}
  // returns true if v was independent of what is already stored
  bool insert(const BitVec& v);
  std::size_t size() const { return ngen_; }
  std::size_t rank() const { return piv_.size(); }
  // remainder after elimination; coeffs (over inserted generators) such that
  // v = remainder + sum coeffs[i]*gen_i when the remainder is zero
  BitVec reduce(const BitVec& v, BitVec* coeffs = nullptr) const;
  bool contains(const BitVec& v) const { return !reduce(v).any(); }

 private:
  std::size_t dim_;
  std::size_t ngen_ = 0;
  std::vector<BitVec> rows_;
  std::vector<BitVec> combo_;
  std::vector<std::size_t> piv_;
};

class ChainComplex {
 public:
  ChainComplex() = default;
  // ungraded: single space with square-zero endomorphism
  ChainComplex(std::vector<std::string> labels, F2Matrix d);
  // graded: degrees[i] is the degree of basis element i; d lowers degree by one
  ChainComplex(std::vector<std::string> labels, std::vector<int> degrees, F2Matrix d);

  bool graded() const { return graded_; }
  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const F2Matrix& d() const { return d_; }
  std::vector<int> degree_list() const;
  std::vector<std::size_t> indices(int degree) const;
  // differential restricted to C_p -> C_{p-1}
  F2Matrix block(int p) const;
  bool square_zero() const;
  // throws if d does not lower degree by one, or d^2 != 0
  void check() const;

 private:
  bool graded_ = false;
  std::vector<std::string> labels_;
  std::vector<int> degrees_;
  F2Matrix d_;
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;

struct Homology {
  // representatives, as vectors in the ambient basis, grouped by degree
  std::vector<BitVec> reps;
  std::vector<int> rep_degree;
  std::size_t ambient = 0;

  std::size_t dim() const { return reps.size(); }
  std::size_t dim(int degree) const;
  // coordinates of a cycle; throws if v is not a cycle
  BitVec coordinates(const BitVec& cycle) const;
  bool is_boundary(const BitVec& cycle) const;

  // boundaries inserted first, then reps
  std::shared_ptr<EchelonBasis> basis;
  std::size_t nboundary = 0;
};

Homology homology(const ChainComplex& c);

class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(ComplexPtr src, ComplexPtr tgt, F2Matrix m, int shift = 0);
  const ChainComplex& source() const { return *src_; }
  const ChainComplex& target() const { return *tgt_; }
  ComplexPtr source_ptr() const { return src_; }
  ComplexPtr target_ptr() const { return tgt_; }
  const F2Matrix& matrix() const { return m_; }
  int shift() const { return shift_; }
  bool commutes() const;
  bool respects_degrees() const;
  ChainMap then(const ChainMap& g) const;

 private:
  ComplexPtr src_, tgt_;
  F2Matrix m_;
  int shift_ = 0;
};

F2Matrix induced_map(const ChainMap& f, const Homology& hs, const Homology& ht);
F2Matrix induced_map(const ChainMap& f);

ChainComplex mapping_cone(const ChainMap& f);

struct QuasiIsoReport {
  bool by_cone = false;
  bool by_rank = false;
  std::size_t hsource = 0, htarget = 0, induced_rank = 0, cone_homology = 0;
  bool agree() const { return by_cone == by_rank; }
  bool value() const { return by_cone && by_rank; }
};
QuasiIsoReport is_quasi_iso(const ChainMap& f);

ChainComplex dual_complex(const ChainComplex& c);

}  // namespace ainf
