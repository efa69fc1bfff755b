#include "ainf/corpus.hpp"

#include <stdexcept>

namespace ainf {

CatPtr make_category(const std::string& name, bool graded, int N, int arity_bound,
                     const std::vector<std::string>& objects,
                     const std::vector<std::tuple<std::string, std::string, std::string, int>>& gens,
                     const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& mu) {
  auto c = std::make_shared<Category>();
  c->name = name;
  c->graded = graded;
  c->N = N;
  c->arity_bound = arity_bound;
  for (auto& o : objects) c->add_object(o);
  for (auto& [label, s, t, d] : gens) c->add_gen(c->object_index(s), c->object_index(t), label, d);
  c->finalize();
  for (auto& [key, out] : mu) {
    Word w;
    for (auto& l : key) w.push_back(c->gen_index(l));
    std::vector<int> o;
    for (auto& l : out) o.push_back(c->gen_index(l));
    c->set_mu(w, Vec::of(o));
  }
  return c;
}

namespace {

FunPtr make_functor(const std::string& name, CatPtr src, CatPtr tgt, std::vector<int> objmap, int arity_bound,
                    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& comps) {
  auto f = std::make_shared<Functor>();
  f->name = name;
  f->src = src;
  f->tgt = tgt;
  f->objmap = std::move(objmap);
  f->arity_bound = arity_bound;
  for (auto& [key, out] : comps) {
    Word w;
    for (auto& l : key) w.push_back(src->gen_index(l));
    std::vector<int> o;
    for (auto& l : out) o.push_back(tgt->gen_index(l));
    add_entry(f->comps, w, Vec::of(o));
  }
  return f;
}

CatPtr k_field() {
  return make_category("k_field", true, 0, 2, {"pt"}, {{"1", "pt", "pt", 0}}, {{{"1", "1"}, {"1"}}});
}

CatPtr dual_numbers(bool broken = false) {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> mu = {
      {{"1", "1"}, {"1"}}, {{"1", "x"}, {"x"}}, {{"x", "1"}, {"x"}}};
  // one extra bit in mu2(1, x) breaks associativity
  if (broken) mu[1].second.push_back("1");
  return make_category(broken ? "broken_dual_numbers" : "dual_numbers", true, 0, 2, {"pt"},
                       {{"1", "pt", "pt", 0}, {"x", "pt", "pt", 0}}, mu);
}

CatPtr exterior_graded() {
  // F2[xi]/xi^2 with N = 2: the unit has degree 2, xi degree 0
  return make_category("exterior_graded", true, 2, 2, {"pt"}, {{"1", "pt", "pt", 2}, {"xi", "pt", "pt", 0}},
                       {{{"1", "1"}, {"1"}}, {{"1", "xi"}, {"xi"}}, {{"xi", "1"}, {"xi"}}});
}

CatPtr a2_quiver() {
  return make_category("a2_quiver", false, 0, 2, {"X", "Y"},
                       {{"eX", "X", "X", 0}, {"eY", "Y", "Y", 0}, {"a", "X", "Y", 0}},
                       {{{"eX", "eX"}, {"eX"}}, {{"eY", "eY"}, {"eY"}}, {{"eX", "a"}, {"a"}}, {{"a", "eY"}, {"a"}}});
}

CatPtr nilpotent_mu3() {
  // first hit of tools/search_mu3: strictly unital, mu2(a,a) = b, mu3(a,a,a) = b
  return make_category("nilpotent_mu3", false, 0, 3, {"pt"},
                       {{"e", "pt", "pt", 0}, {"a", "pt", "pt", 0}, {"b", "pt", "pt", 0}},
                       {{{"e", "e"}, {"e"}},
                        {{"e", "a"}, {"a"}},
                        {{"a", "e"}, {"a"}},
                        {{"e", "b"}, {"b"}},
                        {{"b", "e"}, {"b"}},
                        {{"a", "a"}, {"b"}},
                        {{"a", "a", "a"}, {"b"}}});
}

CatPtr interval_A() {
  return make_category("interval_A", true, 0, 2, {"W"}, {{"e", "W", "W", 0}}, {{{"e", "e"}, {"e"}}});
}

Pairing pairing(const std::string& name, CatPtr c, BimodPtr m, const std::vector<std::string>& on, bool expect) {
  Pairing p;
  p.name = name;
  p.cat = c;
  p.coeff = m;
  std::vector<int> ids;
  for (auto& l : on)
    for (int g = 0; g < m->ngen(); ++g)
      if (m->gens[g].label == l) ids.push_back(g);
  p.sigma = Vec::of(ids);
  p.expect_nondegenerate = expect;
  return p;
}

std::shared_ptr<Bimodule> left_module(const std::string& name, CatPtr a) {
  auto m = std::make_shared<Bimodule>();
  m->name = name;
  m->A = a;
  m->B = Category::ground();
  return m;
}

CorpusEntry category_entry(const std::string& name, CatPtr c, const std::string& desc) {
  CorpusEntry e;
  e.name = name;
  e.description = desc;
  e.cat = c;
  e.functors.push_back(identity_functor(c));
  e.bimodules.push_back(diagonal_bimodule(c));
  e.bimodules.push_back(dualize(*e.bimodules[0]));
  e.morphisms.push_back(unit_morphism(e.bimodules[0]));
  return e;
}

CorpusEntry surgery_cone_toy() {
  auto k = k_field();
  CorpusEntry e;
  e.name = "surgery_cone_toy";
  e.description = "three complexes C3, C2, C1 over the ground field with maps whose iterated cone has a lower-triangular differential";
  e.cat = k;
  int one = k->gen_index("1");
  auto unital = [&](std::shared_ptr<Bimodule>& m) {
    for (int g = 0; g < m->ngen(); ++g) m->set_mu({{one}, g, {}}, Vec(g));
  };
  auto c1 = left_module("C1", k);
  int q = c1->add_gen(0, 0, "q", 0), q1 = c1->add_gen(0, 0, "q'", 1);
  c1->set_mu({{}, q1, {}}, Vec(q));
  unital(c1);
  c1->finalize();
  auto c2 = left_module("C2", k);
  int p = c2->add_gen(0, 0, "p", 1);
  unital(c2);
  c2->finalize();
  auto c3 = left_module("C3", k);
  int s = c3->add_gen(0, 0, "s", 2);
  unital(c3);
  c3->finalize();
  PreMorphism r21 = zero_premorphism(c2, c1, -1);
  r21.comps[{{}, p, {}}] = Vec(q);
  auto cone21 = cone_of(r21);
  // rho3 = (rho32, rho31): C3 -> cone(rho21)
  PreMorphism r3 = zero_premorphism(c3, cone21.cone, -1);
  r3.comps[{{}, s, {}}] = Vec::of({find_gen(*cone21.cone, 0, 0, "s:p", false), find_gen(*cone21.cone, 0, 0, "t:q'", false)});
  e.bimodules = {c1, c2, c3, cone21.cone};
  e.morphisms = {r21, r3};
  e.expect = {"cone(rho3) differential is block lower-triangular with blocks (rho32, rho31, rho21, d1)"};
  return e;
}

CorpusEntry interval_relative_toy() {
  auto A = interval_A();
  auto B = k_field();
  CorpusEntry e;
  e.name = "interval_relative_toy";
  e.description = "one-object A with regular relative diagonal, B the ground field included by the unit";
  e.cat = A;
  RelativeData r;
  r.A = A;
  r.B = B;
  r.j = 0;
  r.Aj = A;
  r.I = make_functor("I", B, A, {0}, 1, {{{"1"}, {"e"}}});
  auto rel = std::make_shared<Bimodule>();
  rel->name = "A_rel";
  rel->A = A;
  rel->B = A;
  int rr = rel->add_gen(0, 0, "r", 0);
  int ee = A->gen_index("e");
  rel->set_mu({{ee}, rr, {}}, Vec(rr));
  rel->set_mu({{}, rr, {ee}}, Vec(rr));
  rel->finalize();
  r.Arel = rel;
  auto bdiag = diagonal_bimodule(B);
  auto pulled = pullback(*r.I, *r.I, *rel);
  r.irel = zero_premorphism(bdiag, pulled, 0);
  r.irel.comps[{{}, 0, {}}] = Vec(find_gen(*pulled, 0, 0, "r", false));
  r.sigmaA = Vec(rr);
  r.sigmaB = Vec(0);
  e.relative = r;
  e.functors = {r.I, identity_functor(A)};
  e.bimodules = {diagonal_bimodule(A), rel, dualize(*rel)};
  e.pairings.push_back(pairing("interval_trace", A, diagonal_bimodule(A), {"e"}, true));
  e.expect = {"relative pairing", "Psi(phi) is a quasi-isomorphism", "compatible with sigma^B(1) = 1"};
  return e;
}

}  // namespace

const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> n = {"k_field",         "dual_numbers",          "exterior_graded",
                                             "a2_quiver",       "nilpotent_mu3",         "interval_relative_toy",
                                             "surgery_cone_toy", "broken_dual_numbers",  "degenerate_trace"};
  return n;
}

CorpusEntry build_corpus(const std::string& name) {
  if (name == "k_field") {
    auto c = k_field();
    auto e = category_entry(name, c, "the ground field as a one-object category");
    e.pairings.push_back(pairing("k_trace", c, e.bimodules[0], {"1"}, true));
    return e;
  }
  if (name == "dual_numbers" || name == "degenerate_trace") {
    auto c = dual_numbers();
    auto e = category_entry(name, c, "F2[x]/x^2 in degree 0");
    if (name == "dual_numbers")
      e.pairings.push_back(pairing("dual_trace", c, e.bimodules[0], {"x"}, true));
    else
      e.description = "dual numbers with the trace tr(1) = 1, tr(x) = 0";
    e.pairings.push_back(pairing("dual_degenerate_trace", c, e.bimodules[0], {"1"}, false));
    return e;
  }
  if (name == "exterior_graded") {
    auto c = exterior_graded();
    auto e = category_entry(name, c, "F2[xi]/xi^2 graded with N = 2, |1| = 2, |xi| = 0");
    e.pairings.push_back(pairing("exterior_trace", c, e.bimodules[0], {"xi"}, true));
    e.pairings.push_back(pairing("exterior_degenerate_trace", c, e.bimodules[0], {"1"}, false));
    return e;
  }
  if (name == "a2_quiver") {
    auto c = a2_quiver();
    auto e = category_entry(name, c, "path category of X -> Y, ungraded");
    e.functors.push_back(make_functor("incl_X", k_field(), c, {0}, 1, {{{"1"}, {"eX"}}}));
    e.pairings.push_back(pairing("a2_trace", c, e.bimodules[0], {"eX", "eY"}, false));
    return e;
  }
  if (name == "nilpotent_mu3") return category_entry(name, nilpotent_mu3(), "strictly unital with a nonzero mu3");
  if (name == "interval_relative_toy") return interval_relative_toy();
  if (name == "surgery_cone_toy") return surgery_cone_toy();
  if (name == "broken_dual_numbers") {
    CorpusEntry e;
    e.name = name;
    e.description = "dual numbers with mu2(1, x) = x + 1";
    e.cat = dual_numbers(true);
    e.broken = true;
    e.expect = {"validate_relations fails at arity 3"};
    return e;
  }
  throw std::invalid_argument("unknown corpus entry " + name);
}

CorpusEntry mutate(const CorpusEntry& e, const MuCoordinate& c) {
  if (!e.cat) throw std::invalid_argument("mutate: entry has no category");
  const auto& cat = *e.cat;
  if (c.key.empty() || !composable(cat, c.key)) throw std::invalid_argument("mutate: key is not a composable tuple");
  if (c.out < 0 || c.out >= cat.ngen() || cat.gens[c.out].src != chain_start(cat, c.key) ||
      cat.gens[c.out].tgt != chain_end(cat, c.key))
    throw std::invalid_argument("mutate: output is not in the right hom space");
  auto m = std::make_shared<Category>(cat);
  m->set_mu(c.key, Vec(c.out));
  CorpusEntry r;
  r.name = e.name + "+flip";
  r.description = e.description + " with mu" + cat.word_str(c.key) + " toggled at " + cat.gens[c.out].label;
  r.cat = m;
  return r;
}

}  // namespace ainf
