#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "ainf/ainf.h"

namespace fs = std::filesystem;

namespace {

struct Res {
  ainf_result* r;
  explicit Res(ainf_result* r) : r(r) { REQUIRE(r != nullptr); }
  ~Res() { ainf_result_free(r); }
  int status() const { return ainf_result_status(r); }
  std::string text() const { return ainf_result_text(r); }
  nlohmann::json json() const { return nlohmann::json::parse(ainf_result_json(r)); }
};

fs::path corpus_dir(const std::string& name) {
  fs::path d = fs::path(AINF_TEST_TMP) / "capi" / name;
  fs::remove_all(d);
  Res r(ainf_corpus(name.c_str(), d.string().c_str()));
  REQUIRE(r.status() == AINF_OK);
  return d;
}

std::string manifest(const fs::path& d, const std::string& name) { return (d / (name + ".corpus.ainf")).string(); }

}  // namespace

TEST_CASE("corpus listing") {
  REQUIRE(ainf_corpus_count() == 9);
  bool found = false;
  for (size_t i = 0; i < ainf_corpus_count(); ++i) found |= std::string(ainf_corpus_name(i)) == "nilpotent_mu3";
  CHECK(found);
  CHECK(ainf_corpus_name(99) == nullptr);
  Res r(ainf_corpus("no_such_entry", (fs::path(AINF_TEST_TMP) / "capi" / "none").string().c_str()));
  CHECK(r.status() == AINF_INPUT_ERROR);
}

TEST_CASE("validate: pass, fail with witness, parse error") {
  ainf_session* s = ainf_session_new();
  auto good = corpus_dir("dual_numbers");
  {
    Res r(ainf_validate(s, manifest(good, "dual_numbers").c_str()));
    CHECK(r.status() == AINF_OK);
    auto j = r.json();
    CHECK(j["status"] == 0);
    CHECK(j["kind"] == "corpus");
  }
  auto bad = corpus_dir("broken_dual_numbers");
  {
    Res r(ainf_validate(s, manifest(bad, "broken_dual_numbers").c_str()));
    CHECK(r.status() == AINF_FAIL);
    CHECK(r.text().find("arity 3") != std::string::npos);
    CHECK(r.text().find("tuple") != std::string::npos);
  }
  {
    fs::path p = fs::path(AINF_TEST_TMP) / "capi" / "garbage.ainf";
    std::ofstream(p) << "kind category\nname g\nobjects pt\nmode sideways\n";
    Res r(ainf_validate(s, p.string().c_str()));
    CHECK(r.status() == AINF_INPUT_ERROR);
    CHECK(r.text().find(":4:") != std::string::npos);
  }
  {
    Res r(ainf_validate(s, "/nonexistent/file.ainf"));
    CHECK(r.status() == AINF_INPUT_ERROR);
  }
  ainf_session_free(s);
}

TEST_CASE("check_cy: pass, fail, not closed") {
  ainf_session* s = ainf_session_new();
  auto d = corpus_dir("dual_numbers");
  auto m = manifest(d, "dual_numbers");
  {
    Res r(ainf_check_cy(s, m.c_str(), (d / "dual_trace.pairing.ainf").string().c_str(), "hochschild", 3, 1));
    CHECK(r.status() == AINF_OK);
  }
  {
    Res r(ainf_check_cy(s, m.c_str(), (d / "dual_degenerate_trace.pairing.ainf").string().c_str(), "bimodule", 3,
                        0));
    CHECK(r.status() == AINF_FAIL);
  }
  auto n = corpus_dir("nilpotent_mu3");
  fs::path p = n / "sigma_b.pairing.ainf";
  std::ofstream(p) << "kind pairing\nname sigma_b\ncategory nilpotent_mu3.category.ainf\n"
                      "coefficient nilpotent_mu3_diag.bimodule.ainf\nsigma pt pt b\nexpect nondegenerate\n";
  {
    Res r(ainf_check_cy(s, manifest(n, "nilpotent_mu3").c_str(), p.string().c_str(), "hochschild", 3, 0));
    CHECK(r.status() == AINF_NOT_CLOSED);
  }
  {
    Res r(ainf_check_cy(s, m.c_str(), (d / "dual_trace.pairing.ainf").string().c_str(), "sideways", 3, 0));
    CHECK(r.status() == AINF_INPUT_ERROR);
  }
  ainf_session_free(s);
}

TEST_CASE("homology and diagrams through the C API") {
  ainf_session* s = ainf_session_new();
  auto d = corpus_dir("k_field");
  auto m = manifest(d, "k_field");
  {
    Res r(ainf_homology(s, m.c_str(), "cc-cochains", "diag", 3));
    CHECK(r.status() == AINF_OK);
  }
  {
    Res r(ainf_homology(s, m.c_str(), "no-such-complex", "diag", 3));
    CHECK(r.status() == AINF_INPUT_ERROR);
  }
  {
    Res r(ainf_diagram(s, "g-pullback", m.c_str(), 5, 1));
    CHECK(r.status() == AINF_OK);
  }
  ainf_session_free(s);
}

TEST_CASE("relative check through the C API") {
  ainf_session* s = ainf_session_new();
  auto d = corpus_dir("interval_relative_toy");
  std::string man = manifest(d, "interval_relative_toy");
  Res v(ainf_validate(s, man.c_str()));
  CHECK(v.status() == AINF_OK);
  auto f = [&](const char* n) { return (d / n).string(); };
  std::string A = f("interval_A.category.ainf"), B = f("k_field.category.ainf"),
              I = f("I.k_field-interval_A.functor.ainf"), irel = f("k_field_diag-to-A_rel_pull.morphism.ainf"),
              cand = f("interval_relative_toy_sigma_A.pairing.ainf"), sb = f("interval_relative_toy_sigma_B.pairing.ainf");
  ainf_relative_args args{A.c_str(), B.c_str(), I.c_str(), irel.c_str(), cand.c_str(), sb.c_str(), 3};
  {
    Res r(ainf_check_relative(s, &args));
    CHECK(r.status() == AINF_OK);
    CHECK(r.text().find("compat") != std::string::npos);
  }
  // A and B swapped: I does not go B -> A
  ainf_relative_args swapped{B.c_str(), A.c_str(), I.c_str(), irel.c_str(), cand.c_str(), nullptr, 3};
  {
    Res r(ainf_check_relative(s, &swapped));
    CHECK(r.status() == AINF_INPUT_ERROR);
  }
  ainf_session_free(s);
}

TEST_CASE("default truncation from the environment") {
  unsetenv("AINF_MAX_LEN");
  CHECK(ainf_default_max_len() == 3);
  setenv("AINF_MAX_LEN", "5", 1);
  CHECK(ainf_default_max_len() == 5);
  setenv("AINF_MAX_LEN", "five", 1);
  CHECK(ainf_default_max_len() == -1);
  setenv("AINF_MAX_LEN", "-2", 1);
  CHECK(ainf_default_max_len() == -1);
  unsetenv("AINF_MAX_LEN");
}
