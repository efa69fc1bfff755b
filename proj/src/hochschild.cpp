#include "ainf/hochschild.hpp"

#include <algorithm>
#include <stdexcept>

namespace ainf {

namespace {

int deg_sum(const Category& c, const Word& w) {
  int d = 0;
  for (int g : w) d += c.gens[g].degree;
  return d;
}

// preimages of each gen under mu^A: words S with mu(S) containing g
std::vector<std::vector<const Word*>> mu_preimage(const Category& c) {
  std::vector<std::vector<const Word*>> p(c.ngen());
  for (auto& [k, v] : c.mu)
    for (int o : v) p[o].push_back(&k);
  return p;
}

std::vector<std::vector<const std::pair<const BiKey, Vec>*>> by_value(const Bimodule& m) {
  std::vector<std::vector<const std::pair<const BiKey, Vec>*>> r(m.ngen());
  for (auto& e : m.mu) r[e.first.w].push_back(&e);
  return r;
}

Word slice(const Word& w, std::size_t a, std::size_t b) { return Word(w.begin() + a, w.begin() + b); }

Word join(std::initializer_list<const Word*> parts) {
  Word r;
  for (auto* p : parts) r.insert(r.end(), p->begin(), p->end());
  return r;
}

// all chains of length 0..maxlen from start to end (-1 for any); length 0
// only when start == end and both given
void chains_between(const Category& c, int maxlen, int start, int end, int minlen,
                    const std::function<void(const Word&)>& f) {
  if (minlen <= 0 && start >= 0 && start == end) f({});
  for (int k = std::max(1, minlen); k <= maxlen; ++k) for_each_chain(c, k, start, end, f);
}

std::shared_ptr<HochschildComplex> skeleton(HKind kind, CatPtr a, BimodPtr m, int L) {
  auto h = std::make_shared<HochschildComplex>();
  h->kind = kind;
  h->A = a;
  h->M = m;
  h->L = L;
  h->quotient = kind == HKind::Cochains || kind == HKind::TwoCochains;
  return h;
}

void add_basis(HochschildComplex& h, const HKey& k) {
  h.index.emplace(k, int(h.basis.size()));
  h.basis.push_back(k);
}

// Realizes the complex from a per-basis boundary callback.
void realize(HochschildComplex& h, const std::function<int(const HKey&)>& degree,
             const std::function<void(const HKey&, const std::function<void(const HKey&)>&)>& boundary, bool graded) {
  std::size_t n = h.basis.size();
  F2Matrix d(n, n);
  std::vector<std::string> labels;
  std::vector<int> degs;
  for (std::size_t j = 0; j < n; ++j) {
    labels.push_back(h.key_str(h.basis[j]));
    if (graded) degs.push_back(degree(h.basis[j]));
    boundary(h.basis[j], [&](const HKey& k) {
      int i = h.find(k);
      if (i < 0) {
        // beyond the truncation: dropped for quotients, impossible for subcomplexes
        if (!h.quotient) throw std::logic_error("Hochschild differential leaves the truncated subcomplex at " + h.key_str(k));
        return;
      }
      d.flip(i, j);
    });
  }
  auto c = graded ? std::make_shared<ChainComplex>(labels, degs, d) : std::make_shared<ChainComplex>(labels, d);
  c->check();
  h.complex = c;
}

int bkey_src(const Bimodule& m, const Word& left, int w) { return left.empty() ? m.gens[w].x : m.A->gens[left.front()].src; }
int bkey_tgt(const Bimodule& m, int w, const Word& right) { return right.empty() ? m.gens[w].y : m.B->gens[right.back()].tgt; }

}  // namespace

std::string HochschildComplex::key_str(const HKey& k) const {
  auto mg = [](const Bimodule& m, int g) { return m.gens[g].label + (m.gens[g].dual ? "^" : ""); };
  auto word = [](const Category& c, const Word& w) {
    std::string s;
    for (int g : w) s += c.gens[g].label + "|";
    return s;
  };
  switch (kind) {
    case HKind::Cochains:
      return "g(" + word(*A, k.x) + ")=" + mg(*M, k.z);
    case HKind::Chains:
      return word(*A, k.x) + mg(*M, k.w);
    case HKind::TwoCochains:
      return "(" + word(*A, k.x) + "[" + A->gens[k.w].label + "]|" + word(*A, k.y) + ")->" + mg(*M, k.z);
    case HKind::Tensor:
      return mg(*M, k.w) + "|" + word(*B, k.y) + mg(*M2, k.z) + "|" + word(*A, k.x);
  }
  return "";
}

// ---- builders ----

HCPtr build_cc_cochains(CatPtr a, BimodPtr m, int L) {
  if (L < 1) throw std::invalid_argument("cochain truncation must be at least 1");
  auto h = skeleton(HKind::Cochains, a, m, L);
  // (x, z) with z in M(start x, end x)
  for (int z = 0; z < m->ngen(); ++z) {
    auto& g = m->gens[z];
    chains_between(*a, L - 1, g.x, g.y, 0, [&](const Word& x) { add_basis(*h, {x, -1, {}, z}); });
  }
  auto pre = mu_preimage(*a);
  auto byv = by_value(*m);
  int N = a->N;
  realize(
      *h,
      [&](const HKey& k) { return m->gens[k.z].degree - deg_sum(*a, k.x) - N - int(k.x.size()) * (1 - N); },
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        // mu^M(L1, g(x), R1)
        for (auto* e : byv[k.z]) {
          Word nx = join({&e->first.left, &k.x, &e->first.right});
          if (int(nx.size()) >= L) continue;
          for (int u : e->second) emit({nx, -1, {}, u});
        }
        // g(... mu^A(S) ...)
        for (std::size_t i = 0; i < k.x.size(); ++i)
          for (auto* s : pre[k.x[i]]) {
            if (int(k.x.size() - 1 + s->size()) >= L) continue;
            Word a0 = slice(k.x, 0, i), a1 = slice(k.x, i + 1, k.x.size());
            emit({join({&a0, s, &a1}), -1, {}, k.z});
          }
      },
      m->graded() && a->graded);
  return h;
}

HCPtr build_cc_chains(CatPtr a, BimodPtr m, int L) {
  if (L < 0) throw std::invalid_argument("chain truncation must be non-negative");
  auto h = skeleton(HKind::Chains, a, m, L);
  // x from X_0 to X_k with w in M(X_k, X_0)
  for (int w = 0; w < m->ngen(); ++w) {
    auto& g = m->gens[w];
    chains_between(*a, L, g.y, g.x, 0, [&](const Word& x) { add_basis(*h, {x, w, {}, -1}); });
  }
  int N = a->N;
  realize(
      *h, [&](const HKey& k) { return deg_sum(*a, k.x) + m->gens[k.w].degree - N + int(k.x.size()) * (1 - N); },
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        std::size_t n = k.x.size();
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j <= n; ++j)
            for (int o : a->mu_of(slice(k.x, i, j))) {
              Word a0 = slice(k.x, 0, i), a1 = slice(k.x, j, n), mid{o};
              emit({join({&a0, &mid, &a1}), k.w, {}, -1});
            }
        // mid (x) mu^M(suffix, w, prefix)
        for (std::size_t j = 0; j <= n; ++j)
          for (std::size_t i = j; i <= n; ++i)
            for (int u : m->mu_of({slice(k.x, i, n), k.w, slice(k.x, 0, j)})) emit({slice(k.x, j, i), u, {}, -1});
      },
      m->graded() && a->graded);
  return h;
}

HCPtr build_2cc_cochains(CatPtr a, BimodPtr m, int L) {
  if (L < 1) throw std::invalid_argument("cochain truncation must be at least 1");
  auto h = skeleton(HKind::TwoCochains, a, m, L);
  auto diag = diagonal_bimodule(a);
  for_each_key(*diag, L - 1, [&](const BiKey& k) {
    for (int z : m->value(bkey_src(*diag, k.left, k.w), bkey_tgt(*diag, k.w, k.right))) add_basis(*h, {k.left, k.w, k.right, z});
  });
  int N = a->N;
  realize(
      *h,
      [&](const HKey& k) {
        return m->gens[k.z].degree - deg_sum(*a, k.x) - a->gens[k.w].degree - deg_sum(*a, k.y) -
               int(k.x.size() + k.y.size()) * (1 - N);
      },
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        PreMorphism v = zero_premorphism(diag, m, 0, L);
        v.comps[{k.x, k.w, k.y}] = Vec(k.z);
        for (auto& [bk, out] : bimod_mu1(v, L).comps)
          for (int o : out) emit({bk.left, bk.w, bk.right, o});
      },
      m->graded() && a->graded);
  return h;
}

HCPtr bimodule_tensor(BimodPtr n, BimodPtr n2, int L) {
  if (L < 0) throw std::invalid_argument("tensor truncation must be non-negative");
  if (!(*n->A == *n2->B) || !(*n->B == *n2->A)) throw std::invalid_argument("bimodule_tensor: categories do not match");
  auto h = skeleton(HKind::Tensor, n->A, n, L);
  h->B = n->B;
  h->M2 = n2;
  const auto& A = *n->A;
  const auto& B = *n->B;
  // w in N(X, Y), y in B from Y to Y', z in N'(Y', X'), x in A from X' to X
  for (int w = 0; w < n->ngen(); ++w) {
    int X = n->gens[w].x, Y = n->gens[w].y;
    for (int m = 0; m <= L; ++m) {
      auto with_y = [&](const Word& y) {
        int Y1 = y.empty() ? Y : chain_end(B, y);
        for (int z = 0; z < n2->ngen(); ++z) {
          if (n2->gens[z].x != Y1) continue;
          int X1 = n2->gens[z].y;
          for (int k = 0; k + m <= L; ++k) {
            if (k == 0) {
              if (X1 == X) add_basis(*h, {{}, w, y, z});
              continue;
            }
            for_each_chain(A, k, X1, X, [&](const Word& x) { add_basis(*h, {x, w, y, z}); });
          }
        }
      };
      if (m == 0)
        with_y({});
      else
        for_each_chain(B, m, Y, -1, with_y);
    }
  }
  int NA = A.N, NB = B.N;
  realize(
      *h,
      [&](const HKey& k) {
        return deg_sum(A, k.x) + n->gens[k.w].degree + deg_sum(B, k.y) + n2->gens[k.z].degree +
               int(k.x.size()) * (1 - NA) + int(k.y.size()) * (1 - NB) - NA - NB;
      },
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        std::size_t nx = k.x.size(), ny = k.y.size();
        // mu^N(x suffix, w, y prefix)
        for (std::size_t i = 0; i <= nx; ++i)
          for (std::size_t j = 0; j <= ny; ++j)
            for (int u : n->mu_of({slice(k.x, i, nx), k.w, slice(k.y, 0, j)}))
              emit({slice(k.x, 0, i), u, slice(k.y, j, ny), k.z});
        // mu^N'(y suffix, z, x prefix)
        for (std::size_t i = 0; i <= ny; ++i)
          for (std::size_t j = 0; j <= nx; ++j)
            for (int u : n2->mu_of({slice(k.y, i, ny), k.z, slice(k.x, 0, j)}))
              emit({slice(k.x, j, nx), k.w, slice(k.y, 0, i), u});
        // mu^A in x, mu^B in y
        for (std::size_t i = 0; i < nx; ++i)
          for (std::size_t j = i + 1; j <= nx; ++j)
            for (int o : A.mu_of(slice(k.x, i, j))) {
              Word a0 = slice(k.x, 0, i), a1 = slice(k.x, j, nx), mid{o};
              emit({join({&a0, &mid, &a1}), k.w, k.y, k.z});
            }
        for (std::size_t i = 0; i < ny; ++i)
          for (std::size_t j = i + 1; j <= ny; ++j)
            for (int o : B.mu_of(slice(k.y, i, j))) {
              Word a0 = slice(k.y, 0, i), a1 = slice(k.y, j, ny), mid{o};
              emit({k.x, k.w, join({&a0, &mid, &a1}), k.z});
            }
      },
      n->graded() && n2->graded());
  return h;
}

HCPtr build_2cc_chains(CatPtr a, BimodPtr m, int L) { return bimodule_tensor(diagonal_bimodule(a), m, L); }

// ---- maps ----

namespace {

bool graded_complexes(const HochschildComplex& s, const HochschildComplex& t) {
  return s.complex->graded() && t.complex->graded();
}

ChainMap assemble(const HochschildComplex& s, const HochschildComplex& t, int shift,
                  const std::function<void(const HKey&, const std::function<void(const HKey&)>&)>& image,
                  bool drop_outside) {
  F2Matrix m(t.dim(), s.dim());
  for (std::size_t j = 0; j < s.dim(); ++j)
    image(s.basis[j], [&](const HKey& k) {
      int i = t.find(k);
      if (i < 0) {
        if (drop_outside) return;
        throw std::logic_error("map lands outside the target truncation at " + t.key_str(k));
      }
      m.flip(i, j);
    });
  return ChainMap(s.complex, t.complex, std::move(m), graded_complexes(s, t) ? shift : 0);
}

}  // namespace

ChainMap map_S(const HochschildComplex& cc, const HochschildComplex& cc2) {
  if (cc.kind != HKind::Cochains || cc2.kind != HKind::TwoCochains || cc.L != cc2.L)
    throw std::invalid_argument("map_S: needs CC^ and 2CC^ at the same truncation");
  const auto& M = *cc.M;
  auto byv = by_value(M);
  return assemble(
      cc, cc2, 0,
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        // mu^M(L1, g(x), R_a, w, R_b)
        for (auto* e : byv[k.z]) {
          const Word& r1 = e->first.right;
          for (std::size_t p = 0; p < r1.size(); ++p) {
            Word ra = slice(r1, 0, p), rb = slice(r1, p + 1, r1.size());
            Word left = join({&e->first.left, &k.x, &ra});
            if (int(left.size() + rb.size()) >= cc.L) continue;
            for (int u : e->second) emit({left, r1[p], rb, u});
          }
        }
      },
      false);
}

ChainMap map_T(const HochschildComplex& t2, const HochschildComplex& cc) {
  if (t2.kind != HKind::Tensor || cc.kind != HKind::Chains || t2.L != cc.L)
    throw std::invalid_argument("map_T: needs 2CC_ and CC_ at the same truncation");
  const auto& M = *cc.M;
  return assemble(
      t2, cc, 0,
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        std::size_t n = k.x.size();
        Word wv{k.w};
        for (std::size_t j = 0; j <= n; ++j)
          for (std::size_t i = j; i <= n; ++i) {
            Word suf = slice(k.x, i, n);
            Word left = join({&suf, &wv, &k.y});
            for (int u : M.mu_of({left, k.z, slice(k.x, 0, j)})) emit({slice(k.x, j, i), u, {}, -1});
          }
      },
      false);
}

ChainMap map_Gamma(const HochschildComplex& t2, const HochschildComplex& cc2dual) {
  if (t2.kind != HKind::Tensor || cc2dual.kind != HKind::TwoCochains || t2.L + 1 != cc2dual.L)
    throw std::invalid_argument("map_Gamma: needs 2CC_ at L-1 and 2CC^ with dual coefficients at L");
  auto dsrc = std::make_shared<ChainComplex>(dual_complex(*t2.complex));
  F2Matrix m(cc2dual.dim(), t2.dim());
  for (std::size_t j = 0; j < t2.dim(); ++j) {
    auto& k = t2.basis[j];
    int i = cc2dual.find({k.x, k.w, k.y, k.z});
    if (i < 0) throw std::logic_error("map_Gamma: no matching cochain coordinate");
    m.set(i, j);
  }
  int shift = dsrc->graded() && cc2dual.complex->graded() ? -2 * t2.A->N : 0;
  return ChainMap(dsrc, cc2dual.complex, std::move(m), shift);
}

ChainMap iota(const HochschildComplex& cc, int X) {
  if (cc.kind != HKind::Chains) throw std::invalid_argument("iota: needs a chain complex");
  if (X < 0 || X >= cc.A->nobj()) throw std::invalid_argument("iota: not an object");
  auto vc = value_complex(*cc.M, X, X);
  auto& ids = cc.M->value(X, X);
  F2Matrix m(cc.dim(), ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) m.set(cc.find({{}, ids[j], {}, -1}), j);
  return ChainMap(vc, cc.complex, std::move(m), vc->graded() && cc.complex->graded() ? -cc.A->N : 0);
}

ChainMap pushforward_nu(const PreMorphism& nu, const HochschildComplex& src, const HochschildComplex& tgt) {
  if (src.kind != HKind::Chains || tgt.kind != HKind::Chains) throw std::invalid_argument("pushforward_nu: needs chain complexes");
  if (!is_closed(nu)) throw std::invalid_argument("pushforward_nu: morphism is not closed");
  PreMorphism v = reexpress(nu, src.M, tgt.M);
  return assemble(
      src, tgt, nu.degree,
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        std::size_t n = k.x.size();
        for (std::size_t j = 0; j <= n; ++j)
          for (std::size_t i = j; i <= n; ++i)
            for (int u : v.at({slice(k.x, i, n), k.w, slice(k.x, 0, j)})) emit({slice(k.x, j, i), u, {}, -1});
      },
      false);
}

ChainMap pushforward_F(const Functor& f, const HochschildComplex& src, const HochschildComplex& tgt) {
  if (src.kind != HKind::Chains || tgt.kind != HKind::Chains) throw std::invalid_argument("pushforward_F: needs chain complexes");
  if (!(*src.A == *f.src) || !(*tgt.A == *f.tgt)) throw std::invalid_argument("pushforward_F: categories do not match");
  auto pulled = pullback(f, f, *tgt.M);
  if (!same_bimodule(*pulled, *src.M)) throw std::invalid_argument("pushforward_F: source coefficients are not the pullback");
  auto pi = pullback_index(f, f, *tgt.M);
  // src.M may number its gens differently from the fresh pullback
  std::vector<int> base(src.M->ngen());
  for (int g = 0; g < src.M->ngen(); ++g) {
    auto& v = src.M->gens[g];
    int found = -1;
    for (int q : pulled->value(v.x, v.y))
      if (pulled->gens[q].label == v.label && pulled->gens[q].dual == v.dual && pulled->gens[q].degree == v.degree) found = q;
    base[g] = pi.base[found];
  }
  return assemble(
      src, tgt, src.A->N - tgt.A->N,
      [&](const HKey& k, const std::function<void(const HKey&)>& emit) {
        int z = base[k.w];
        for_each_slicing(f, k.x, [&](const std::vector<Vec>& vals) {
          std::vector<const Vec*> p;
          for (auto& v : vals) p.push_back(&v);
          for_each_product(p, [&](const Word& w) { emit({w, z, {}, -1}); });
        });
      },
      false);
}

ChainMap truncation_inclusion(const HochschildComplex& small, const HochschildComplex& big) {
  if (small.kind != big.kind || small.L > big.L) throw std::invalid_argument("truncation_inclusion: incompatible complexes");
  return assemble(small, big, 0, [](const HKey& k, const std::function<void(const HKey&)>& emit) { emit(k); }, false);
}

ChainMap truncation_projection(const HochschildComplex& big, const HochschildComplex& small) {
  if (small.kind != big.kind || small.L > big.L) throw std::invalid_argument("truncation_projection: incompatible complexes");
  return assemble(big, small, 0, [](const HKey& k, const std::function<void(const HKey&)>& emit) { emit(k); }, true);
}

Report check_length_filtration(const HochschildComplex& c) {
  Report r;
  const auto& d = c.complex->d();
  for (std::size_t j = 0; j < c.dim(); ++j) {
    ++r.checked;
    for (auto i : d.column(j).ones())
      if (c.length(c.basis[i]) > c.length(c.basis[j]))
        r.fail(c.length(c.basis[j]), "d(" + c.key_str(c.basis[j]) + ") contains the longer " + c.key_str(c.basis[i]));
  }
  return r;
}

// ---- stable homology ----

namespace {

// the structural map between the L and L+1 truncations, oriented as it runs
ChainMap structural(const HochschildComplex& at_L, const HochschildComplex& at_L1) {
  return at_L.quotient ? truncation_projection(at_L1, at_L) : truncation_inclusion(at_L, at_L1);
}

std::size_t induced_rank(const ChainMap& f) { return rank(induced_map(f)); }

ChainMap block_diagonal(const ChainMap& a, const ChainMap& b, ComplexPtr src, ComplexPtr tgt) {
  F2Matrix m(tgt->dim(), src->dim());
  for (std::size_t j = 0; j < a.source().dim(); ++j)
    for (auto i : a.matrix().column(j).ones()) m.set(i, j);
  for (std::size_t j = 0; j < b.source().dim(); ++j)
    for (auto i : b.matrix().column(j).ones()) m.set(a.target().dim() + i, a.source().dim() + j);
  return ChainMap(src, tgt, std::move(m), 0);
}

}  // namespace

std::size_t stable_homology_dim(const HochschildComplex& at_L, const HochschildComplex& at_L1) {
  return induced_rank(structural(at_L, at_L1));
}

std::string StableQuasiIso::str() const {
  std::string s = value() ? "stable quasi-iso" : "not a stable quasi-iso";
  s += " (stable H " + std::to_string(stable_src) + " -> " + std::to_string(stable_tgt) + ", rank " +
       std::to_string(stable_rank) + "; cone " + (by_cone ? "stably acyclic" : "not stably acyclic") + "; raw " +
       (raw.value() ? "quasi-iso" : "not quasi-iso") + ", H " + std::to_string(raw.hsource) + " -> " +
       std::to_string(raw.htarget) + ")";
  return s;
}

StableQuasiIso stable_quasi_iso(const ChainMap& f, const ChainMap& g, const HochschildComplex& cL,
                                const HochschildComplex& cL1, const HochschildComplex& dL,
                                const HochschildComplex& dL1) {
  StableQuasiIso r;
  r.raw = is_quasi_iso(f);
  auto sc = structural(cL, cL1);
  auto sd = structural(dL, dL1);
  r.stable_src = induced_rank(sc);
  r.stable_tgt = induced_rank(sd);
  // the map between stable images is the common composite
  r.stable_rank = cL.quotient ? induced_rank(sc.then(f)) : induced_rank(f.then(sd));
  r.by_rank = r.stable_src == r.stable_rank && r.stable_tgt == r.stable_rank;
  auto coneL = std::make_shared<ChainComplex>(mapping_cone(f));
  auto coneL1 = std::make_shared<ChainComplex>(mapping_cone(g));
  ChainMap between = cL.quotient ? block_diagonal(sc, sd, coneL1, coneL) : block_diagonal(sc, sd, coneL, coneL1);
  r.by_cone = induced_rank(between) == 0;
  return r;
}

ChainMap dual_map(const ChainMap& f, ComplexPtr dual_src, ComplexPtr dual_tgt) {
  if (!dual_src) dual_src = std::make_shared<ChainComplex>(dual_complex(f.target()));
  if (!dual_tgt) dual_tgt = std::make_shared<ChainComplex>(dual_complex(f.source()));
  return ChainMap(dual_src, dual_tgt, f.matrix().transpose(), f.shift());
}

}  // namespace ainf
