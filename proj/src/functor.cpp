#include "ainf/functor.hpp"

#include <stdexcept>

namespace ainf {

bool Functor::operator==(const Functor& o) const {
  return *src == *o.src && *tgt == *o.tgt && objmap == o.objmap && comps == o.comps;
}

void check_types(const Functor& f) {
  if (int(f.objmap.size()) != f.src->nobj()) throw std::invalid_argument("functor " + f.name + ": object map size");
  for (int y : f.objmap)
    if (y < 0 || y >= f.tgt->nobj()) throw std::invalid_argument("functor " + f.name + ": object image not in target");
  for (auto& [key, out] : f.comps) {
    if (key.empty() || int(key.size()) > f.arity_bound)
      throw std::invalid_argument("functor " + f.name + ": component arity out of range");
    if (!composable(*f.src, key)) throw std::invalid_argument("functor " + f.name + ": non-composable input");
    int s = f.objmap[chain_start(*f.src, key)], t = f.objmap[chain_end(*f.src, key)];
    for (int b : out)
      if (f.tgt->gens[b].src != s || f.tgt->gens[b].tgt != t)
        throw std::invalid_argument("functor " + f.name + ": output of F" + f.src->word_str(key) + " in wrong hom");
  }
}

void for_each_slicing(const Functor& f, std::span<const int> w, const std::function<void(const std::vector<Vec>&)>& cb) {
  int n = int(w.size());
  if (n == 0) {
    cb({});
    return;
  }
  std::vector<Vec> vals;
  std::function<void(int)> rec = [&](int pos) {
    if (pos == n) {
      cb(vals);
      return;
    }
    for (int p = 1; p <= std::min(f.arity_bound, n - pos); ++p) {
      Vec v = f.of(Word(w.begin() + pos, w.begin() + pos + p));
      if (v.empty()) continue;
      vals.push_back(std::move(v));
      rec(pos + p);
      vals.pop_back();
    }
  };
  rec(0);
}

namespace {

std::vector<const Vec*> ptrs(const std::vector<Vec>& v) {
  std::vector<const Vec*> r;
  for (auto& x : v) r.push_back(&x);
  return r;
}

Vec functor_relation(const Functor& f, const Word& x) {
  Vec total;
  const auto& A = *f.src;
  const auto& B = *f.tgt;
  for_each_slicing(f, x, [&](const std::vector<Vec>& vals) {
    if (int(vals.size()) <= B.arity_bound) total += B.mu_apply(ptrs(vals));
  });
  int k = int(x.size());
  for (int q = 1; q <= std::min(k, A.arity_bound); ++q)
    for (int j = 0; j + q <= k; ++j) {
      auto* inner = lookup(A.mu, Word(x.begin() + j, x.begin() + j + q));
      if (!inner) continue;
      Word key(x.begin(), x.begin() + j);
      key.push_back(0);
      key.insert(key.end(), x.begin() + j + q, x.end());
      for (int c : *inner) {
        key[j] = c;
        total += f.of(key);
      }
    }
  return total;
}

}  // namespace

Report validate_functor(const Functor& f) {
  check_types(f);
  Report r;
  if (f.src->graded && f.tgt->graded) {
    for (auto& [key, out] : f.comps) {
      int want = f.degree(int(key.size()));
      for (int g : key) want += f.src->gens[g].degree;
      for (int b : out) {
        ++r.checked;
        if (f.tgt->gens[b].degree != want) r.fail(int(key.size()), "degree of F" + f.src->word_str(key));
      }
    }
  }
  int bound = std::max(f.tgt->arity_bound * f.arity_bound, f.arity_bound + f.src->arity_bound - 1);
  for (int k = 1; k <= bound; ++k)
    for_each_chain(*f.src, k, -1, -1, [&](const Word& x) {
      ++r.checked;
      auto v = functor_relation(f, x);
      if (!v.empty()) r.fail(k, "tuple " + f.src->word_str(x) + " relation sum " + f.tgt->vec_str(v));
    });
  return r;
}

bool is_functor(const Functor& f) {
  check_types(f);
  if (f.src->graded && f.tgt->graded)
    for (auto& [key, out] : f.comps) {
      int want = f.degree(int(key.size()));
      for (int g : key) want += f.src->gens[g].degree;
      for (int b : out)
        if (f.tgt->gens[b].degree != want) return false;
    }
  int bound = std::max(f.tgt->arity_bound * f.arity_bound, f.arity_bound + f.src->arity_bound - 1);
  bool ok = true;
  for (int k = 1; k <= bound && ok; ++k)
    for_each_chain(*f.src, k, -1, -1, [&](const Word& x) {
      if (ok && !functor_relation(f, x).empty()) ok = false;
    });
  return ok;
}

FunPtr identity_functor(CatPtr a) {
  auto f = std::make_shared<Functor>();
  f->name = "id";
  f->src = a;
  f->tgt = a;
  f->arity_bound = 1;
  for (int x = 0; x < a->nobj(); ++x) f->objmap.push_back(x);
  for (int g = 0; g < a->ngen(); ++g) f->comps[{g}] = Vec(g);
  return f;
}

FunPtr compose_functors(const Functor& g, const Functor& f) {
  if (!(*f.tgt == *g.src)) throw std::invalid_argument("compose_functors: target of f is not the source of g");
  auto h = std::make_shared<Functor>();
  h->name = g.name + "o" + f.name;
  h->src = f.src;
  h->tgt = g.tgt;
  h->arity_bound = g.arity_bound * f.arity_bound;
  for (int x = 0; x < f.src->nobj(); ++x) h->objmap.push_back(g.objmap[f.objmap[x]]);
  for (int k = 1; k <= h->arity_bound; ++k)
    for_each_chain(*f.src, k, -1, -1, [&](const Word& x) {
      Vec v;
      for_each_slicing(f, x, [&](const std::vector<Vec>& vals) {
        if (int(vals.size()) <= g.arity_bound) v += g.apply(ptrs(vals));
      });
      add_entry(h->comps, x, v);
    });
  int top = 0;
  for (auto& [k, v] : h->comps) top = std::max(top, int(k.size()));
  h->arity_bound = std::max(top, 1);
  return h;
}

FunPtr retarget(const Functor& f, CatPtr tgt) {
  if (tgt->objects != f.tgt->objects || tgt->ngen() != f.tgt->ngen())
    throw std::invalid_argument("retarget: categories differ in shape");
  auto h = std::make_shared<Functor>(f);
  h->tgt = tgt;
  return h;
}

bool PreNat::is_zero() const {
  for (auto& v : t0)
    if (!v.empty()) return false;
  return comps.empty();
}

PreNat zero_prenat(FunPtr f0, FunPtr f1, int degree, int trunc) {
  PreNat t;
  t.F0 = f0;
  t.F1 = f1;
  t.degree = degree;
  t.trunc = trunc;
  t.t0.assign(f0->src->nobj(), Vec());
  return t;
}

PreNat unit_prenat(FunPtr f, const UnitAssignment& u) {
  PreNat t = zero_prenat(f, f, 0, kExact);
  for (int x = 0; x < f->src->nobj(); ++x) t.t0[x] = u[f->objmap[x]];
  return t;
}

PreNat random_prenat(FunPtr f0, FunPtr f1, int degree, int trunc, std::mt19937_64& rng, double density) {
  if (trunc == kExact) throw std::invalid_argument("random_prenat needs a finite truncation");
  PreNat t = zero_prenat(f0, f1, degree, trunc);
  const auto& A = *f0->src;
  const auto& B = *f0->tgt;
  bool graded = A.graded && B.graded;
  std::bernoulli_distribution coin(density);
  auto pick = [&](int s, int e, int want) {
    Vec v;
    for (int b : B.hom(s, e))
      if ((!graded || B.gens[b].degree == want) && coin(rng)) v.toggle(b);
    return v;
  };
  for (int x = 0; x < A.nobj(); ++x) t.t0[x] = pick(f0->objmap[x], f1->objmap[x], degree);
  for (int k = 1; k < trunc; ++k)
    for_each_chain(A, k, -1, -1, [&](const Word& w) {
      int want = degree + k * (1 - A.N);
      for (int g : w) want += A.gens[g].degree;
      add_entry(t.comps, w, pick(f0->objmap[chain_start(A, w)], f1->objmap[chain_end(A, w)], want));
    });
  return t;
}

namespace {

int max_arity(const Tensor& t) {
  int a = 0;
  for (auto& [k, v] : t) a = std::max(a, int(k.size()));
  return a;
}

// Sum over slot patterns (F0-slices, one T-slot of length >= 0, F1-slices)
// fed into an outer multilinear map of bounded arity.
template <class Outer>
Vec slot_sum(const Word& x, const Functor& f0, const Functor& f1, const PreNat& t, int outer_bound, int x_obj_at,
             const Outer& outer) {
  (void)x_obj_at;
  const auto& A = *f0.src;
  int k = int(x.size());
  Vec total;
  std::span<const int> xs(x);
  for (int a = 0; a <= k; ++a)
    for (int len = 0; a + len <= k; ++len) {
      Vec mid;
      if (len == 0) {
        int obj = a == 0 ? A.gens[x[0]].src : A.gens[x[a - 1]].tgt;
        mid = t.t0[obj];
      } else {
        mid = t.at(Word(x.begin() + a, x.begin() + a + len));
      }
      if (mid.empty()) continue;
      for_each_slicing(f0, xs.subspan(0, a), [&](const std::vector<Vec>& pre) {
        for_each_slicing(f1, xs.subspan(a + len), [&](const std::vector<Vec>& post) {
          int s = int(pre.size() + 1 + post.size());
          if (s > outer_bound) return;
          std::vector<const Vec*> args;
          for (auto& v : pre) args.push_back(&v);
          args.push_back(&mid);
          for (auto& v : post) args.push_back(&v);
          total += outer(args);
        });
      });
    }
  return total;
}

}  // namespace

PreNat fun_mu1(const PreNat& t, int L) {
  const auto& A = *t.F0->src;
  const auto& B = *t.F0->tgt;
  if (L > t.trunc) throw std::invalid_argument("fun_mu1: truncation larger than the input's");
  if (L == kExact) {
    int a = max_arity(t.comps);
    int kf = std::max(t.F0->arity_bound, t.F1->arity_bound);
    L = std::max(a + A.arity_bound - 1, (B.arity_bound - 1) * kf + a) + 1;
  }
  PreNat r = zero_prenat(t.F0, t.F1, t.degree - 1, t.trunc == kExact ? kExact : L);
  for (int x = 0; x < A.nobj(); ++x) r.t0[x] = B.mu_apply({&t.t0[x]});
  for (int k = 1; k < L; ++k)
    for_each_chain(A, k, -1, -1, [&](const Word& x) {
      Vec v = slot_sum(x, *t.F0, *t.F1, t, B.arity_bound, 0,
                       [&](const std::vector<const Vec*>& args) { return B.mu_apply(args); });
      for (int q = 1; q <= std::min(k, A.arity_bound); ++q)
        for (int j = 0; j + q <= k; ++j) {
          auto* inner = lookup(A.mu, Word(x.begin() + j, x.begin() + j + q));
          if (!inner) continue;
          Word key(x.begin(), x.begin() + j);
          key.push_back(0);
          key.insert(key.end(), x.begin() + j + q, x.end());
          for (int c : *inner) {
            key[j] = c;
            v += t.at(key);
          }
        }
      add_entry(r.comps, x, v);
    });
  return r;
}

bool check_nat_transformation(const PreNat& t, int L) { return fun_mu1(t, L).is_zero(); }

bool check_nat_quasi_iso(const PreNat& t) {
  auto hc = homological_category(t.F0->tgt);
  const auto& B = *t.F0->tgt;
  for (int x = 0; x < t.F0->src->nobj(); ++x) {
    int s = t.F0->objmap[x], e = t.F1->objmap[x];
    BitVec c = hc.H[s][e].coordinates(hc.to_local(s, e, t.t0[x]));
    // left and right multiplication by [T_0] must be bijective on every hom
    for (int y = 0; y < B.nobj(); ++y) {
      F2Matrix m1(hc.H[s][y].dim(), hc.H[e][y].dim());
      for (std::size_t j = 0; j < hc.H[e][y].dim(); ++j) {
        BitVec b(hc.H[e][y].dim());
        b.set(j);
        auto p = hc.product(s, e, y, c, b);
        for (auto i : p.ones()) m1.set(i, j);
      }
      if (m1.rows() != m1.cols() || rank(m1) != m1.rows()) return false;
      F2Matrix m2(hc.H[y][e].dim(), hc.H[y][s].dim());
      for (std::size_t j = 0; j < hc.H[y][s].dim(); ++j) {
        BitVec b(hc.H[y][s].dim());
        b.set(j);
        auto p = hc.product(y, s, e, b, c);
        for (auto i : p.ones()) m2.set(i, j);
      }
      if (m2.rows() != m2.cols() || rank(m2) != m2.rows()) return false;
    }
  }
  return true;
}

PreNat apply_LF(FunPtr f, const PreNat& t) {
  if (!(*f->src == *t.F0->tgt)) throw std::invalid_argument("apply_LF: functor source is not the target of T");
  auto g0 = compose_functors(*f, *t.F0);
  auto g1 = compose_functors(*f, *t.F1);
  int shift = (f->src->graded && f->tgt->graded) ? f->tgt->N - f->src->N : 0;
  PreNat r = zero_prenat(g0, g1, t.degree + shift, t.trunc);
  const auto& A = *t.F0->src;
  for (int x = 0; x < A.nobj(); ++x) r.t0[x] = f->apply({&t.t0[x]});
  int L = t.trunc;
  if (L == kExact) {
    int kf = std::max(t.F0->arity_bound, t.F1->arity_bound);
    L = (f->arity_bound - 1) * kf + max_arity(t.comps) + 1;
  }
  for (int k = 1; k < L; ++k)
    for_each_chain(A, k, -1, -1, [&](const Word& x) {
      Vec v = slot_sum(x, *t.F0, *t.F1, t, f->arity_bound, 0,
                       [&](const std::vector<const Vec*>& args) { return f->apply(args); });
      add_entry(r.comps, x, v);
    });
  return r;
}

PreNat apply_RF(FunPtr f, const PreNat& s) {
  if (!(*f->tgt == *s.F0->src)) throw std::invalid_argument("apply_RF: functor target is not the source of S");
  auto h0 = compose_functors(*s.F0, *f);
  auto h1 = compose_functors(*s.F1, *f);
  PreNat r = zero_prenat(h0, h1, s.degree, s.trunc);
  const auto& A = *f->src;
  for (int x = 0; x < A.nobj(); ++x) r.t0[x] = s.t0[f->objmap[x]];
  int L = s.trunc;
  if (L == kExact) L = f->arity_bound * max_arity(s.comps) + 1;
  int sb = max_arity(s.comps);
  for (int k = 1; k < L; ++k)
    for_each_chain(A, k, -1, -1, [&](const Word& x) {
      Vec v;
      for_each_slicing(*f, x, [&](const std::vector<Vec>& vals) {
        if (int(vals.size()) <= sb) v += apply_tensor(s.comps, ptrs(vals));
      });
      add_entry(r.comps, x, v);
    });
  return r;
}

}  // namespace ainf
