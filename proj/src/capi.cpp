#include "ainf/ainf.h"

#include <algorithm>
#include <cstdlib>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "ainf/cy.hpp"
#include "ainf/diagrams.hpp"
#include "ainf/specfile.hpp"

using json = nlohmann::ordered_json;
using namespace ainf;

struct ainf_session {
  SpecLoader loader;
};

struct ainf_result {
  ainf_status status = AINF_OK;
  std::string text;
  std::string json;
};

namespace {

json report_json(const Report& r) {
  json w = json::array();
  for (auto& x : r.witnesses) w.push_back({{"arity", x.arity}, {"where", x.where}});
  return {{"ok", r.ok}, {"checked", r.checked}, {"failing", r.nfail}, {"witnesses", w}, {"notes", r.notes}};
}

json verdict_json(const Verdict& v) { return {{"value", v.value}, {"report", report_json(v.report)}}; }

// Collects report lines and the structured variant side by side.
struct Out {
  std::ostringstream text;
  json j = json::object();
  ainf_status status = AINF_OK;

  void worst(ainf_status s) {
    if (s > status) status = s;
  }
  ainf_result* done(const std::string& command) {
    auto* r = new ainf_result;
    r->status = status;
    r->text = text.str();
    json top = {{"command", command}, {"status", int(status)}};
    for (auto& [k, v] : j.items()) top[k] = v;
    r->json = top.dump(2) + "\n";
    return r;
  }
};

ainf_result* error_result(const std::string& command, ainf_status status, const std::string& msg) {
  auto* r = new ainf_result;
  r->status = status;
  r->text = (status == AINF_NOT_CLOSED ? "NOT CLOSED: " : "error: ") + msg + "\n";
  r->json = json({{"command", command}, {"status", int(status)}, {"error", msg}}).dump(2) + "\n";
  return r;
}

// Exceptions become exit statuses: input problems 2, non-closed candidates 3.
template <class F>
ainf_result* guarded(const std::string& command, F&& f) {
  try {
    return f();
  } catch (const SpecError& e) {
    return error_result(command, AINF_INPUT_ERROR, e.what());
  } catch (const NotClosed& e) {
    return error_result(command, AINF_NOT_CLOSED, e.what());
  } catch (const std::invalid_argument& e) {
    return error_result(command, AINF_INPUT_ERROR, e.what());
  } catch (const std::exception& e) {
    return error_result(command, AINF_INPUT_ERROR, std::string("internal: ") + e.what());
  }
}

std::string str(const char* s) {
  if (!s) throw std::invalid_argument("missing argument");
  return s;
}

CatPtr category_of(const Entity& e) {
  if (e.kind == EntityKind::Category) return e.cat;
  if (e.kind == EntityKind::Corpus) return e.corpus->cat;
  throw SpecError(e.path, 1, 1, std::string("expected a category or corpus file, found a ") + kind_name(e.kind));
}

const char* pass(bool b) { return b ? "PASS" : "FAIL"; }

void line(Out& o, const std::string& name, const Report& r) {
  o.text << name << ": " << r.str() << "\n";
  o.j["checks"][name] = report_json(r);
  o.worst(r.ok ? AINF_OK : AINF_FAIL);
}

Report closed_report(const PreMorphism& v) {
  Report r;
  ++r.checked;
  if (!is_closed(v)) r.fail(v.span(), "mu1 of the morphism is nonzero");
  return r;
}

Report relation_report(const Category& c) {
  auto r = validate_relations(c);
  r.merge(degree_audit(c));
  return r;
}

void validate_entity(Out& o, const Entity& e) {
  switch (e.kind) {
    case EntityKind::Category:
      check_types(*e.cat);
      line(o, "category " + e.cat->name, relation_report(*e.cat));
      break;
    case EntityKind::Functor:
      check_types(*e.fun);
      line(o, "functor " + e.fun->name, validate_functor(*e.fun));
      break;
    case EntityKind::Bimodule:
      check_types(*e.bimod);
      line(o, "bimodule " + e.bimod->name, validate_bimodule(*e.bimod));
      break;
    case EntityKind::Morphism:
      check_types(*e.mor);
      line(o, "morphism " + e.mor->src->name + " -> " + e.mor->tgt->name, closed_report(*e.mor));
      break;
    case EntityKind::Pairing:
      line(o, "category " + e.pairing->cat->name, relation_report(*e.pairing->cat));
      line(o, "bimodule " + e.pairing->coeff->name, validate_bimodule(*e.pairing->coeff));
      break;
    case EntityKind::Relative: {
      auto& d = *e.relative;
      check_relative_data(d);
      line(o, "category A " + d.A->name, relation_report(*d.A));
      line(o, "category B " + d.B->name, relation_report(*d.B));
      line(o, "functor I " + d.I->name, validate_functor(*d.I));
      line(o, "bimodule A_rel " + d.Arel->name, validate_bimodule(*d.Arel));
      line(o, "morphism i_rel", closed_report(d.irel));
      break;
    }
    case EntityKind::Corpus: {
      auto& c = *e.corpus;
      line(o, "category " + c.cat->name, relation_report(*c.cat));
      for (auto& f : c.functors) line(o, "functor " + f->name, validate_functor(*f));
      for (auto& m : c.bimodules) line(o, "bimodule " + m->name, validate_bimodule(*m));
      for (auto& v : c.morphisms) line(o, "morphism " + v.src->name + " -> " + v.tgt->name, closed_report(v));
      for (auto& p : c.pairings) line(o, "bimodule " + p.coeff->name, validate_bimodule(*p.coeff));
      if (c.relative) {
        check_relative_data(*c.relative);
        line(o, "morphism i_rel", closed_report(c.relative->irel));
      }
      break;
    }
  }
}

json dims_json(const ChainComplex& c, const Homology& h, std::ostringstream& text) {
  json d = json::object();
  if (c.graded()) {
    std::set<int> degs(h.rep_degree.begin(), h.rep_degree.end());
    for (int p : degs) {
      d[std::to_string(p)] = h.dim(p);
      text << "  H_" << p << " = " << h.dim(p) << "\n";
    }
  }
  text << "  total = " << h.dim() << " (chain dim " << c.dim() << ")\n";
  return {{"graded", c.graded()}, {"by_degree", d}, {"total", h.dim()}, {"chain_dim", c.dim()}};
}

HCPtr build_complex(const std::string& kind, CatPtr a, BimodPtr m, int L) {
  if (kind == "cc-chains") return build_cc_chains(a, m, L);
  if (kind == "cc-cochains") return build_cc_cochains(a, m, L);
  if (kind == "2cc-chains") return build_2cc_chains(a, m, L);
  if (kind == "2cc-cochains") return build_2cc_cochains(a, m, L);
  throw std::invalid_argument("unknown complex '" + kind + "'");
}

void check_max_len(int L) {
  if (L < 0) throw std::invalid_argument("--max-len must be non-negative");
}

}  // namespace

extern "C" {

ainf_session* ainf_session_new(void) { return new (std::nothrow) ainf_session; }
void ainf_session_free(ainf_session* s) { delete s; }

ainf_status ainf_result_status(const ainf_result* r) { return r ? r->status : AINF_INPUT_ERROR; }
const char* ainf_result_text(const ainf_result* r) { return r ? r->text.c_str() : ""; }
const char* ainf_result_json(const ainf_result* r) { return r ? r->json.c_str() : "{}"; }
void ainf_result_free(ainf_result* r) { delete r; }

ainf_result* ainf_validate(ainf_session* s, const char* path) {
  return guarded("validate", [&] {
    Out o;
    const Entity& e = s->loader.load(str(path));
    o.j["kind"] = kind_name(e.kind);
    o.text << kind_name(e.kind) << " " << e.path << "\n";
    validate_entity(o, e);
    o.text << (o.status == AINF_OK ? "PASS" : "FAIL") << "\n";
    return o.done("validate");
  });
}

ainf_result* ainf_homology(ainf_session* s, const char* path, const char* complex, const char* coeff, int max_len) {
  return guarded("homology", [&] {
    Out o;
    check_max_len(max_len);
    CatPtr a = category_of(s->loader.load(str(path)));
    std::string kind = str(complex);
    o.j["complex"] = kind;
    if (kind == "hom") {
      auto hc = homological_category(a);
      o.text << "hom complexes of " << a->name << "\n";
      for (int x = 0; x < a->nobj(); ++x)
        for (int y = 0; y < a->nobj(); ++y) {
          o.text << "hom(" << a->objects[x] << "," << a->objects[y] << ")\n";
          o.j["spaces"][a->objects[x] + "," + a->objects[y]] = dims_json(*hc.complex[x][y], hc.H[x][y], o.text);
        }
      return o.done("homology");
    }
    std::string cf = coeff ? coeff : "diag";
    BimodPtr m = cf == "diag" ? diagonal_bimodule(a) : s->loader.load(cf, EntityKind::Bimodule).bimod;
    if (!(*m->A == *a) || !(*m->B == *a)) throw std::invalid_argument("coefficient is not a bimodule over " + a->name);
    auto c0 = build_complex(kind, a, m, max_len);
    auto c1 = build_complex(kind, a, m, max_len + 1);
    auto h0 = homology(*c0->complex), h1 = homology(*c1->complex);
    o.text << kind << " of " << a->name << " with coefficients " << m->name << "\n";
    o.text << "L = " << max_len << "\n";
    o.j["coefficient"] = m->name;
    o.j["L"] = max_len;
    o.j["at_L"] = dims_json(*c0->complex, h0, o.text);
    o.text << "L = " << max_len + 1 << "\n";
    o.j["at_L_plus_1"] = dims_json(*c1->complex, h1, o.text);
    auto stable = stable_homology_dim(*c0, *c1);
    bool same = h0.dim() == h1.dim();
    o.text << "stable part (L vs L+1) = " << stable << "; total dims " << (same ? "agree" : "differ") << "\n";
    o.j["stable"] = stable;
    o.j["dims_agree"] = same;
    return o.done("homology");
  });
}

ainf_result* ainf_check_cy(ainf_session* s, const char* path, const char* pairing, const char* form, int max_len,
                           int cross_check) {
  return guarded("check-cy", [&] {
    Out o;
    check_max_len(max_len);
    CatPtr a = category_of(s->loader.load(str(path)));
    const Pairing& p = *s->loader.load(str(pairing), EntityKind::Pairing).pairing;
    if (!(*p.cat == *a)) throw std::invalid_argument("pairing " + p.name + " is not over " + a->name);
    std::string f = str(form);
    if (f != "hochschild" && f != "bimodule" && f != "yoneda") throw std::invalid_argument("unknown form '" + f + "'");
    auto cc = build_cc_chains(p.cat, p.coeff, max_len);
    auto sigma = sigma_from_gens(*cc, p.sigma);
    if (!is_cocycle(*cc, sigma)) throw NotClosed("pairing " + p.name + " is not closed at L = " + std::to_string(max_len));
    o.j["pairing"] = p.name;
    o.j["L"] = max_len;
    o.j["form"] = f;
    bool value;
    if (cross_check) {
      auto t = check_three_forms(*cc, sigma);
      o.text << "hochschild: " << t.hochschild.str() << "\nbimodule: " << t.bimodule.str() << "\nyoneda: " << t.yoneda.str()
             << "\nagree: " << (t.agree() ? "yes" : "NO") << "\n";
      o.j["hochschild"] = verdict_json(t.hochschild);
      o.j["bimodule"] = verdict_json(t.bimodule);
      o.j["yoneda"] = verdict_json(t.yoneda);
      o.j["agree"] = t.agree();
      value = f == "hochschild" ? t.hochschild.value : f == "bimodule" ? t.bimodule.value : t.yoneda.value;
      if (!t.agree()) value = false;
    } else {
      Verdict v;
      if (f == "hochschild")
        v = check_nondegenerate(*cc, sigma);
      else if (f == "bimodule")
        v = check_wcy_bimodule(gamma_t_dual(*cc, sigma));
      else
        v = check_yoneda(yoneda_form(gamma_t_dual(*cc, sigma)));
      o.text << f << ": " << v.str() << "\n";
      o.j[f] = verdict_json(v);
      value = v.value;
    }
    o.text << pass(value) << "\n";
    o.worst(value ? AINF_OK : AINF_FAIL);
    return o.done("check-cy");
  });
}

ainf_result* ainf_check_relative(ainf_session* s, const ainf_relative_args* args) {
  return guarded("check-relative", [&] {
    if (!args) throw std::invalid_argument("missing arguments");
    Out o;
    check_max_len(args->max_len);
    auto& L = s->loader;
    RelativeData d;
    d.A = category_of(L.load(str(args->a)));
    d.B = category_of(L.load(str(args->b)));
    d.I = L.load(str(args->i), EntityKind::Functor).fun;
    d.irel = *L.load(str(args->irel), EntityKind::Morphism).mor;
    const Pairing& cand = *L.load(str(args->candidate), EntityKind::Pairing).pairing;
    if (!(*cand.cat == *d.A)) throw std::invalid_argument("candidate is not over A");
    d.Arel = cand.coeff;
    d.sigmaA = cand.sigma;
    d.j = 0;
    if (d.A->graded && d.B->graded && d.A->N != d.B->N)
      throw std::invalid_argument("mismatched degrees: N_A = " + std::to_string(d.A->N) + ", N_B = " + std::to_string(d.B->N) +
                                  " and only shift 0 is supported");
    d.Aj = d.A;
    check_relative_data(d);
    int Lm = args->max_len;
    auto v = check_relative_pairing(d, Lm);
    auto sq = check_psi_irel_square(d, Lm);
    std::map<std::string, std::pair<bool, json>> checks;
    checks["bimodule.phiA_quasi_iso"] = {v.phiA_qiso.value, verdict_json(v.phiA_qiso)};
    checks["bimodule.psi_quasi_iso"] = {v.psi_qiso.value, verdict_json(v.psi_qiso)};
    checks["hochschild.sigmaA_nondegenerate"] = {v.sigmaA_nondeg.value, verdict_json(v.sigmaA_nondeg)};
    checks["hochschild.sigmaB_induced_nondegenerate"] = {v.sigmaB_induced_nondeg.value, verdict_json(v.sigmaB_induced_nondeg)};
    checks["yoneda.deltaA_quasi_iso"] = {v.deltaA_qiso.value, verdict_json(v.deltaA_qiso)};
    checks["yoneda.prel_quasi_iso"] = {v.prel_qiso.value, verdict_json(v.prel_qiso)};
    checks["yoneda.prel_matches_psi"] = {v.prel_matches_psi, json(v.prel_matches_psi)};
    checks["psi_irel_square"] = {sq.value, verdict_json(sq)};
    if (args->sigma_b) {
      const Pairing& pb = *L.load(args->sigma_b, EntityKind::Pairing).pairing;
      if (!(*pb.cat == *d.B)) throw std::invalid_argument("sigma-b pairing is not over B");
      if (!same_bimodule(*pb.coeff, *diagonal_bimodule(d.B)))
        throw std::invalid_argument("sigma-b pairing must use the diagonal coefficient");
      auto c = check_compatibility(d, pb.sigma, Lm);
      checks["compatibility"] = {c.value, verdict_json(c)};
    }
    bool all = true;
    for (auto& [name, r] : checks) {
      o.text << name << ": " << pass(r.first) << "\n";
      o.j["checks"][name] = r.second;
      all = all && r.first;
    }
    o.j["is_pairing"] = v.is_pairing();
    o.j["forms_agree"] = v.agree();
    o.text << "relative pairing: " << (v.is_pairing() ? "yes" : "no") << "; forms agree: " << (v.agree() ? "yes" : "NO")
           << "\n"
           << pass(all) << "\n";
    o.worst(all ? AINF_OK : AINF_FAIL);
    return o.done("check-relative");
  });
}

ainf_result* ainf_diagram(ainf_session* s, const char* which, const char* path, int samples, unsigned long long seed) {
  return guarded("diagram", [&] {
    Out o;
    auto d = parse_diagram(str(which));
    if (!d) throw std::invalid_argument("unknown diagram '" + str(which) + "'");
    if (samples < 1) throw std::invalid_argument("--samples must be positive");
    const Entity& e = s->loader.load(str(path));
    CatPtr a = category_of(e);
    std::mt19937_64 rng(seed);
    Report all;
    for (int i = 0; i < samples; ++i) all.merge(verify_diagram(*d, random_instance(a, rng)));
    // instances pulled along the corpus functors between different categories
    if (e.kind == EntityKind::Corpus)
      for (auto& f : e.corpus->functors)
        if (!(*f->src == *f->tgt))
          for (int i = 0; i < samples; ++i) all.merge(verify_diagram(*d, cross_instance(f, rng)));
    o.j["which"] = diagram_name(*d);
    o.j["samples"] = samples;
    o.j["seed"] = seed;
    line(o, diagram_name(*d), all);
    o.text << pass(all.ok) << "\n";
    return o.done("diagram");
  });
}

ainf_result* ainf_corpus(const char* name, const char* out_dir) {
  return guarded("corpus", [&] {
    Out o;
    std::string n = str(name);
    auto& names = corpus_names();
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw std::invalid_argument("unknown corpus entry '" + n + "'");
    auto files = emit_corpus(build_corpus(n));
    write_files(files, str(out_dir));
    o.j["entry"] = n;
    for (auto& f : files) {
      o.text << f.name << "\n";
      o.j["files"].push_back(f.name);
    }
    return o.done("corpus");
  });
}

size_t ainf_corpus_count(void) { return corpus_names().size(); }
const char* ainf_corpus_name(size_t i) { return i < corpus_names().size() ? corpus_names()[i].c_str() : nullptr; }

int ainf_default_max_len(void) {
  const char* v = std::getenv("AINF_MAX_LEN");
  if (!v || !*v) return 3;
  char* end = nullptr;
  long L = std::strtol(v, &end, 10);
  if (*end || L < 0 || L > 64) return -1;
  return int(L);
}

}  // extern "C"
