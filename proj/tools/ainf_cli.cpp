// ainf: command-line front end over the C API.
// Exit codes: 0 pass, 1 check failure, 2 input error, 3 non-closed candidate.

#include <CLI11.hpp>
#include <cstdio>
#include <memory>
#include <string>

#include "ainf/ainf.h"

namespace {

struct ResultDeleter {
  void operator()(ainf_result* r) const { ainf_result_free(r); }
};
struct SessionDeleter {
  void operator()(ainf_session* s) const { ainf_session_free(s); }
};
using Result = std::unique_ptr<ainf_result, ResultDeleter>;

int emit(const Result& r, bool as_json) {
  if (!r) {
    std::fprintf(stderr, "error: out of memory\n");
    return AINF_INPUT_ERROR;
  }
  int status = ainf_result_status(r.get());
  if (as_json)
    std::fputs(ainf_result_json(r.get()), stdout);
  else
    std::fputs(ainf_result_text(r.get()), status >= AINF_INPUT_ERROR ? stderr : stdout);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  int default_len = ainf_default_max_len();
  if (default_len < 0) {
    std::fprintf(stderr, "error: AINF_MAX_LEN must be an integer in 0..64\n");
    return AINF_INPUT_ERROR;
  }

  CLI::App app{"Finite A-infinity categories, bimodules and weak Calabi-Yau pairings over F2"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "structured output");

  std::string path, complex = "cc-chains", coeff = "diag", pairing, form, which, name, out;
  int max_len = default_len, samples = 50;
  unsigned long long seed = 1;
  bool cross = false;
  std::string ra, rb, ri, rirel, rcand, sigma_b;

  auto* validate = app.add_subcommand("validate", "relation check of a spec file");
  validate->add_option("path", path)->required();

  auto* homology = app.add_subcommand("homology", "homology of hom or Hochschild complexes");
  homology->add_option("path", path, "category or corpus file")->required();
  homology->add_option("--complex", complex)
      ->check(CLI::IsMember({"hom", "cc-chains", "cc-cochains", "2cc-chains", "2cc-cochains"}));
  homology->add_option("--coeff", coeff, "bimodule file or diag");
  homology->add_option("--max-len", max_len);

  auto* cy = app.add_subcommand("check-cy", "weak Calabi-Yau check of a pairing candidate");
  cy->add_option("path", path, "category or corpus file")->required();
  cy->add_option("--pairing", pairing)->required();
  cy->add_option("--form", form)->required()->check(CLI::IsMember({"bimodule", "hochschild", "yoneda"}));
  cy->add_option("--max-len", max_len);
  cy->add_flag("--cross-check", cross, "run all three forms and require agreement");

  auto* rel = app.add_subcommand("check-relative", "relative weak Calabi-Yau pairing check");
  rel->add_option("A", ra, "category A")->required();
  rel->add_option("B", rb, "category B")->required();
  rel->add_option("I", ri, "functor B -> A")->required();
  rel->add_option("irel", rirel, "morphism B_diag -> I^*(A_rel)")->required();
  rel->add_option("candidate", rcand, "pairing over A with coefficient A_rel")->required();
  rel->add_option("--max-len", max_len);
  rel->add_option("--sigma-b", sigma_b, "pairing over B for the compatibility check");

  auto* diag = app.add_subcommand("diagram", "exact check of a compatibility diagram on random instances");
  diag->add_option("path", path, "category or corpus file")->required();
  diag->add_option("--which", which)
      ->required()
      ->check(CLI::IsMember({"dualization-phi", "pullback-dualization", "g-pullback", "g-dualization"}));
  diag->add_option("--samples", samples);
  diag->add_option("--seed", seed);

  auto* corpus = app.add_subcommand("corpus", "write the spec files of a corpus entry");
  corpus->add_option("name", name)->required();
  corpus->add_option("--out", out)->required();

  for (auto* sc : {validate, homology, cy, rel, diag, corpus}) sc->add_flag("--json", as_json, "structured output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return AINF_INPUT_ERROR;
  }

  std::unique_ptr<ainf_session, SessionDeleter> s(ainf_session_new());
  Result r;
  if (*validate)
    r.reset(ainf_validate(s.get(), path.c_str()));
  else if (*homology)
    r.reset(ainf_homology(s.get(), path.c_str(), complex.c_str(), coeff.c_str(), max_len));
  else if (*cy)
    r.reset(ainf_check_cy(s.get(), path.c_str(), pairing.c_str(), form.c_str(), max_len, cross));
  else if (*rel) {
    ainf_relative_args a{ra.c_str(), rb.c_str(), ri.c_str(), rirel.c_str(), rcand.c_str(),
                         sigma_b.empty() ? nullptr : sigma_b.c_str(), max_len};
    r.reset(ainf_check_relative(s.get(), &a));
  } else if (*diag)
    r.reset(ainf_diagram(s.get(), which.c_str(), path.c_str(), samples, seed));
  else
    r.reset(ainf_corpus(name.c_str(), out.c_str()));
  return emit(r, as_json);
}
