#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// runs the CLI with stderr folded into the captured output
Run run(const std::string& args) {
  std::string cmd = std::string(AINF_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path tmp(const std::string& name) {
  fs::path d = fs::path(AINF_TEST_TMP) / "cli" / name;
  fs::remove_all(d);
  fs::create_directories(d.parent_path());
  return d;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("validate").code == 2);
  CHECK(run("check-cy x --form nonsense --pairing y").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("corpus: unknown name exits 2, known names write a manifest") {
  auto d = tmp("unknown");
  CHECK(run("corpus no_such_entry --out " + q(d)).code == 2);
  auto k = tmp("k_field");
  auto r = run("corpus k_field --out " + q(k));
  CHECK(r.code == 0);
  CHECK(fs::exists(k / "k_field.corpus.ainf"));
}

TEST_CASE("validate exit codes and witness text") {
  auto g = tmp("good");
  REQUIRE(run("corpus a2_quiver --out " + q(g)).code == 0);
  CHECK(run("validate " + q(g / "a2_quiver.corpus.ainf")).code == 0);

  auto b = tmp("broken");
  REQUIRE(run("corpus broken_dual_numbers --out " + q(b)).code == 0);
  auto r = run("validate " + q(b / "broken_dual_numbers.category.ainf"));
  CHECK(r.code == 1);
  CHECK(r.out.find("arity 3") != std::string::npos);
  CHECK(r.out.find("tuple (") != std::string::npos);

  auto m = tmp("malformed");
  fs::create_directories(m);
  std::ofstream(m / "bad.category.ainf") << "kind category\nname x\nobjects pt\nhom pt pt 1\n";
  auto e = run("validate " + q(m / "bad.category.ainf"));
  CHECK(e.code == 2);
  CHECK(e.out.find("bad.category.ainf:4:") != std::string::npos);
}

TEST_CASE("check-cy over the CLI") {
  auto d = tmp("cy");
  REQUIRE(run("corpus dual_numbers --out " + q(d)).code == 0);
  auto man = q(d / "dual_numbers.corpus.ainf");
  CHECK(run("check-cy " + man + " --pairing " + q(d / "dual_trace.pairing.ainf") + " --form yoneda").code == 0);
  CHECK(run("check-cy " + man + " --pairing " + q(d / "dual_degenerate_trace.pairing.ainf") +
            " --form hochschild --cross-check")
            .code == 1);
  auto j = run("check-cy " + man + " --pairing " + q(d / "dual_trace.pairing.ainf") + " --form bimodule --json");
  CHECK(j.code == 0);
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["status"] == 0);
}

TEST_CASE("homology over the CLI") {
  auto d = tmp("hom");
  REQUIRE(run("corpus k_field --out " + q(d)).code == 0);
  auto man = q(d / "k_field.corpus.ainf");
  auto r = run("homology " + man + " --complex cc-cochains --max-len 3");
  CHECK(r.code == 0);
  CHECK(run("homology " + man + " --complex cc-chains --coeff " + q(d / "missing.bimodule.ainf")).code == 2);
  CHECK(run("homology " + man + " --complex hom").code == 0);
}

TEST_CASE("malformed AINF_MAX_LEN exits 2") {
  auto d = tmp("env");
  REQUIRE(run("corpus k_field --out " + q(d)).code == 0);
  CHECK(run("corpus k_field --out " + q(d)).code == 0);
  std::string cmd = "AINF_MAX_LEN=abc " + std::string(AINF_CLI) + " homology " + q(d / "k_field.corpus.ainf") +
                    " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(st) == 2);
}
