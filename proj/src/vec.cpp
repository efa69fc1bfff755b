#include "ainf/vec.hpp"

namespace ainf {

Vec Vec::of(std::vector<int> ids) {
  Vec r;
  for (int b : ids) r.toggle(b);
  return r;
}

Vec& Vec::operator+=(const Vec& o) {
  std::vector<int> out;
  out.reserve(v_.size() + o.v_.size());
  std::set_symmetric_difference(v_.begin(), v_.end(), o.v_.begin(), o.v_.end(), std::back_inserter(out));
  v_ = std::move(out);
  return *this;
}

void for_each_product(const std::vector<const Vec*>& args, const std::function<void(const Word&)>& f) {
  for (auto* a : args)
    if (a->empty()) return;
  Word w(args.size());
  std::vector<std::size_t> idx(args.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < args.size(); ++i) w[i] = args[i]->ids()[idx[i]];
    f(w);
    std::size_t i = args.size();
    while (i > 0) {
      --i;
      if (++idx[i] < args[i]->size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (args.empty()) return;
  }
}

Vec apply_tensor(const Tensor& t, const std::vector<const Vec*>& args) {
  Vec r;
  for_each_product(args, [&](const Word& w) {
    if (auto* v = lookup(t, w)) r += *v;
  });
  return r;
}

void for_each_composition(int n, int lo, int hi, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> parts;
  std::function<void(int)> rec = [&](int rest) {
    if (rest == 0) {
      f(parts);
      return;
    }
    for (int p = lo; p <= std::min(hi, rest); ++p) {
      parts.push_back(p);
      rec(rest - p);
      parts.pop_back();
    }
  };
  if (n == 0) {
    f(parts);
    return;
  }
  if (lo < 1) lo = 1;
  rec(n);
}

}  // namespace ainf
