#include "ainf/gf2.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace ainf {

BitVec& BitVec::operator^=(const BitVec& o) {
  if (o.n_ != n_) throw std::invalid_argument("BitVec size mismatch");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  return *this;
}

bool BitVec::any() const {
  for (auto x : w_)
    if (x) return true;
  return false;
}

std::size_t BitVec::popcount() const {
  std::size_t c = 0;
  for (auto x : w_) c += std::popcount(x);
  return c;
}

bool BitVec::dot(const BitVec& o) const {
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
  return std::popcount(acc) & 1;
}

std::optional<std::size_t> BitVec::lowest() const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i]) return i * 64 + std::countr_zero(w_[i]);
  return std::nullopt;
}

std::vector<std::size_t> BitVec::ones() const {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    std::uint64_t x = w_[i];
    while (x) {
      r.push_back(i * 64 + std::countr_zero(x));
      x &= x - 1;
    }
  }
  return r;
}

BitVec BitVec::resized(std::size_t n) const {
  BitVec r(n);
  std::size_t k = std::min(r.w_.size(), w_.size());
  for (std::size_t i = 0; i < k; ++i) r.w_[i] = w_[i];
  if (n % 64 && !r.w_.empty()) r.w_.back() &= (std::uint64_t(1) << (n % 64)) - 1;
  return r;
}

std::string BitVec::str() const {
  std::string s;
  for (std::size_t i = 0; i < n_; ++i) s.push_back(get(i) ? '1' : '0');
  return s;
}

F2Matrix F2Matrix::identity(std::size_t n) {
  F2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

F2Matrix F2Matrix::from_rows(const std::vector<std::vector<int>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  F2Matrix m(rows.size(), c);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != c) throw std::invalid_argument("ragged rows");
    for (std::size_t j = 0; j < c; ++j)
      if (rows[r][j] & 1) m.set(r, j);
  }
  return m;
}

F2Matrix F2Matrix::from_columns(std::size_t rows, const std::vector<BitVec>& cols) {
  F2Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (auto i : cols[j].ones()) m.set(i, j);
  return m;
}

BitVec F2Matrix::column(std::size_t c) const {
  BitVec v(rows());
  for (std::size_t r = 0; r < rows(); ++r)
    if (get(r, c)) v.set(r);
  return v;
}

BitVec F2Matrix::apply(const BitVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
  BitVec r(rows());
  for (std::size_t i = 0; i < rows(); ++i)
    if (rows_[i].dot(v)) r.set(i);
  return r;
}

F2Matrix F2Matrix::operator*(const F2Matrix& o) const {
  if (cols_ != o.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  F2Matrix r(rows(), o.cols());
  for (std::size_t i = 0; i < rows(); ++i)
    for (auto k : rows_[i].ones()) r.rows_[i] ^= o.rows_[k];
  return r;
}

F2Matrix F2Matrix::operator+(const F2Matrix& o) const {
  if (rows() != o.rows() || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  F2Matrix r = *this;
  for (std::size_t i = 0; i < rows(); ++i) r.rows_[i] ^= o.rows_[i];
  return r;
}

F2Matrix F2Matrix::transpose() const {
  F2Matrix t(cols_, rows());
  for (std::size_t i = 0; i < rows(); ++i)
    for (auto j : rows_[i].ones()) t.set(j, i);
  return t;
}

bool F2Matrix::is_zero() const {
  for (auto& r : rows_)
    if (r.any()) return false;
  return true;
}

F2Matrix F2Matrix::submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
  F2Matrix m(rs.size(), cs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (get(rs[i], cs[j])) m.set(i, j);
  return m;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<BitVec>& rows, std::size_t cols) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t s = r;
    while (s < rows.size() && !rows[s].get(c)) ++s;
    if (s == rows.size()) continue;
    std::swap(rows[r], rows[s]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
    piv.push_back(c);
    ++r;
  }
  return piv;
}

}  // namespace

std::size_t rank(const F2Matrix& m) {
  std::vector<BitVec> rows;
  rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (m.row(i).any()) rows.push_back(m.row(i));
  // forward elimination on leading bits is enough for the rank
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < rows.size(); ++c) {
    std::size_t s = r;
    while (s < rows.size() && !rows[s].get(c)) ++s;
    if (s == rows.size()) continue;
    std::swap(rows[r], rows[s]);
    for (std::size_t i = r + 1; i < rows.size(); ++i)
      if (rows[i].get(c)) rows[i] ^= rows[r];
    ++r;
  }
  return r;
}

std::vector<BitVec> kernel_basis(const F2Matrix& m) {
  std::vector<BitVec> rows;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (m.row(i).any()) rows.push_back(m.row(i));
  auto piv = rref(rows, m.cols());
  std::vector<char> is_piv(m.cols(), 0);
  for (auto c : piv) is_piv[c] = 1;
  std::vector<BitVec> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    BitVec v(m.cols());
    v.set(f);
    for (std::size_t i = 0; i < piv.size(); ++i)
      if (rows[i].get(f)) v.set(piv[i]);
    out.push_back(std::move(v));
  }
  return out;
}

bool EchelonBasis::insert(const BitVec& v) {
  if (v.size() != dim_) throw std::invalid_argument("EchelonBasis: dimension mismatch");
  BitVec c;
  BitVec r = reduce(v, &c);
  if (!r.any()) return false;
  c = c.resized(ngen_ + 1);
  c.set(ngen_);
  piv_.push_back(*r.lowest());
  rows_.push_back(std::move(r));
  combo_.push_back(std::move(c));
  ++ngen_;
  return true;
}

BitVec EchelonBasis::reduce(const BitVec& v, BitVec* coeffs) const {
  BitVec r = v;
  BitVec c(ngen_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (r.get(piv_[i])) {
      r ^= rows_[i];
      if (coeffs) c ^= combo_[i].resized(ngen_);
    }
  }
  if (coeffs) *coeffs = std::move(c);
  return r;
}

ChainComplex::ChainComplex(std::vector<std::string> labels, F2Matrix d)
    : graded_(false), labels_(std::move(labels)), degrees_(labels_.size(), 0), d_(std::move(d)) {
  if (d_.rows() != labels_.size() || d_.cols() != labels_.size())
    throw std::invalid_argument("ChainComplex: differential shape does not match basis");
}

ChainComplex::ChainComplex(std::vector<std::string> labels, std::vector<int> degrees, F2Matrix d)
    : graded_(true), labels_(std::move(labels)), degrees_(std::move(degrees)), d_(std::move(d)) {
  if (degrees_.size() != labels_.size()) throw std::invalid_argument("ChainComplex: degree list length");
  if (d_.rows() != labels_.size() || d_.cols() != labels_.size())
    throw std::invalid_argument("ChainComplex: differential shape does not match basis");
}

std::vector<int> ChainComplex::degree_list() const {
  std::set<int> s(degrees_.begin(), degrees_.end());
  return {s.begin(), s.end()};
}

std::vector<std::size_t> ChainComplex::indices(int degree) const {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < degrees_.size(); ++i)
    if (degrees_[i] == degree) r.push_back(i);
  return r;
}

F2Matrix ChainComplex::block(int p) const {
  if (!graded_) return d_;
  return d_.submatrix(indices(p - 1), indices(p));
}

bool ChainComplex::square_zero() const { return (d_ * d_).is_zero(); }

void ChainComplex::check() const {
  if (graded_) {
    for (std::size_t j = 0; j < dim(); ++j)
      for (auto i : d_.column(j).ones())
        if (degrees_[i] != degrees_[j] - 1)
          throw std::invalid_argument("differential does not lower degree by one at " + labels_[j]);
  }
  if (!square_zero()) throw std::invalid_argument("differential does not square to zero");
}

std::size_t Homology::dim(int degree) const {
  return std::count(rep_degree.begin(), rep_degree.end(), degree);
}

BitVec Homology::coordinates(const BitVec& cycle) const {
  BitVec c;
  BitVec r = basis->reduce(cycle, &c);
  if (r.any()) throw std::invalid_argument("homology coordinates requested for a non-cycle");
  BitVec out(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (c.get(nboundary + i)) out.set(i);
  return out;
}

bool Homology::is_boundary(const BitVec& cycle) const {
  auto c = coordinates(cycle);
  return !c.any();
}

Homology homology(const ChainComplex& c) {
  c.check();
  Homology h;
  h.ambient = c.dim();
  h.basis = std::make_shared<EchelonBasis>(c.dim());
  const auto& d = c.d();
  for (std::size_t j = 0; j < c.dim(); ++j) {
    auto col = d.column(j);
    if (col.any() && h.basis->insert(col)) ++h.nboundary;
  }
  auto add_cycles = [&](const std::vector<std::size_t>& idx, const F2Matrix& blk, int deg) {
    for (auto& k : kernel_basis(blk)) {
      BitVec v(c.dim());
      for (auto i : k.ones()) v.set(idx[i]);
      if (h.basis->insert(v)) {
        h.reps.push_back(std::move(v));
        h.rep_degree.push_back(deg);
      }
    }
  };
  if (!c.graded()) {
    std::vector<std::size_t> all(c.dim());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    add_cycles(all, d, 0);
  } else {
    for (int p : c.degree_list()) add_cycles(c.indices(p), c.block(p), p);
  }
  return h;
}

ChainMap::ChainMap(ComplexPtr src, ComplexPtr tgt, F2Matrix m, int shift)
    : src_(std::move(src)), tgt_(std::move(tgt)), m_(std::move(m)), shift_(shift) {
  if (m_.rows() != tgt_->dim() || m_.cols() != src_->dim())
    throw std::invalid_argument("ChainMap: matrix shape does not match complexes");
}

bool ChainMap::commutes() const { return m_ * src_->d() == tgt_->d() * m_; }

bool ChainMap::respects_degrees() const {
  if (!src_->graded() || !tgt_->graded()) return true;
  for (std::size_t j = 0; j < src_->dim(); ++j)
    for (auto i : m_.column(j).ones())
      if (tgt_->degrees()[i] != src_->degrees()[j] + shift_) return false;
  return true;
}

ChainMap ChainMap::then(const ChainMap& g) const {
  return ChainMap(src_, g.tgt_, g.m_ * m_, shift_ + g.shift_);
}

F2Matrix induced_map(const ChainMap& f, const Homology& hs, const Homology& ht) {
  F2Matrix m(ht.dim(), hs.dim());
  for (std::size_t j = 0; j < hs.dim(); ++j) {
    auto img = f.matrix().apply(hs.reps[j]);
    auto c = ht.coordinates(img);
    for (auto i : c.ones()) m.set(i, j);
  }
  return m;
}

F2Matrix induced_map(const ChainMap& f) {
  return induced_map(f, homology(f.source()), homology(f.target()));
}

ChainComplex mapping_cone(const ChainMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  std::size_t n = s.dim() + t.dim();
  F2Matrix d(n, n);
  // [[d_s, 0], [f, d_t]] acting on (s, t)
  for (std::size_t j = 0; j < s.dim(); ++j) {
    for (auto i : s.d().column(j).ones()) d.set(i, j);
    for (auto i : f.matrix().column(j).ones()) d.set(s.dim() + i, j);
  }
  for (std::size_t j = 0; j < t.dim(); ++j)
    for (auto i : t.d().column(j).ones()) d.set(s.dim() + i, s.dim() + j);
  std::vector<std::string> labels;
  for (auto& l : s.labels()) labels.push_back("s:" + l);
  for (auto& l : t.labels()) labels.push_back("t:" + l);
  if (s.graded() && t.graded()) {
    std::vector<int> deg;
    for (int p : s.degrees()) deg.push_back(p + f.shift() + 1);
    for (int p : t.degrees()) deg.push_back(p);
    return ChainComplex(std::move(labels), std::move(deg), std::move(d));
  }
  return ChainComplex(std::move(labels), std::move(d));
}

QuasiIsoReport is_quasi_iso(const ChainMap& f) {
  if (!f.commutes()) throw std::invalid_argument("is_quasi_iso: not a chain map");
  if (!f.respects_degrees()) throw std::invalid_argument("is_quasi_iso: map does not respect the stated degree shift");
  QuasiIsoReport r;
  auto hs = homology(f.source());
  auto ht = homology(f.target());
  auto m = induced_map(f, hs, ht);
  r.hsource = hs.dim();
  r.htarget = ht.dim();
  r.induced_rank = rank(m);
  r.by_rank = hs.dim() == ht.dim() && r.induced_rank == hs.dim();
  auto hc = homology(mapping_cone(f));
  r.cone_homology = hc.dim();
  r.by_cone = hc.dim() == 0;
  return r;
}

ChainComplex dual_complex(const ChainComplex& c) {
  std::vector<std::string> labels;
  for (auto& l : c.labels()) labels.push_back(l + "^");
  if (c.graded()) {
    std::vector<int> deg;
    for (int p : c.degrees()) deg.push_back(-p);
    return ChainComplex(std::move(labels), std::move(deg), c.d().transpose());
  }
  return ChainComplex(std::move(labels), c.d().transpose());
}

}  // namespace ainf
