// Acceptance run: one PASS/FAIL line per criterion, each against its time limit.
// Exit status is the number of failing criteria.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "ainf/cy.hpp"
#include "ainf/diagrams.hpp"
#include "ainf/specfile.hpp"

using namespace ainf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  // records a failed expectation, keeping the first few for the report
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (ok || detail.tellp() < 600) detail << (ok ? "" : "; ") << what;
    ok = false;
  }
};

std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> r;
  for (auto& n : corpus_names()) r.push_back(build_corpus(n));
  return r;
}

const Diagram kDiagrams[] = {Diagram::DualizationPhi, Diagram::PullbackDualization, Diagram::GPullback,
                             Diagram::GDualization};

// ---- 1: relation soundness ----
void relation_soundness(Outcome& o) {
  int broken = 0, sound = 0;
  for (auto& e : corpus()) {
    auto r = validate_relations(*e.cat);
    if (e.broken) {
      ++broken;
      o.expect(!r.ok, e.name + ": relations pass");
      o.expect(!r.witnesses.empty() && r.witnesses[0].arity > 0 && !r.witnesses[0].where.empty(),
               e.name + ": no localized witness");
      continue;
    }
    ++sound;
    o.expect(r.ok, e.name + ": relations fail");
    for (auto& f : e.functors) o.expect(validate_functor(*f).ok, e.name + ": functor " + f->name);
    for (auto& b : e.bimodules) o.expect(validate_bimodule(*b).ok, e.name + ": bimodule " + b->name);
    if (e.relative) {
      o.expect(validate_functor(*e.relative->I).ok, e.name + ": I");
      o.expect(validate_bimodule(*e.relative->Arel).ok, e.name + ": A_rel");
    }
  }
  o.detail << sound << " sound entries, " << broken << " broken";
}

// ---- 2: mu1 squares to zero ----
void mu1_squares(Outcome& o) {
  const int L = 4, samples = 200;
  std::mt19937_64 rng(2);
  long total = 0;
  for (auto& e : corpus()) {
    if (e.broken) continue;
    auto yl = yoneda_left(e.cat);
    std::vector<ModFunPtr> funs = {yl, serre_left(e.cat)};
    auto& mods = e.bimodules;
    for (int s = 0; s < samples; ++s) {
      auto& m = mods[rng() % mods.size()];
      std::vector<BimodPtr> same;
      for (auto& n : mods)
        if (n->A == m->A && n->B == m->B) same.push_back(n);
      auto& n = same[rng() % same.size()];
      int deg = int(rng() % 3) - 1;
      auto v = random_premorphism(m, n, deg, L, rng);
      o.expect(bimod_mu1(bimod_mu1(v)).is_zero(), e.name + ": bimod_mu1^2 on " + m->name + " -> " + n->name);
      auto& f0 = funs[rng() % 2];
      auto& f1 = funs[rng() % 2];
      auto t = random_modprenat(f0, f1, deg, L, rng);
      o.expect(is_zero(fun_mu1(fun_mu1(t))), e.name + ": fun_mu1^2");
      total += 2;
    }
  }
  o.detail << total << " samples";
}

// ---- 3: diagrams ----
void diagrams(Outcome& o) {
  const int samples = 50;
  long checks = 0;
  for (auto& e : corpus()) {
    if (e.broken) continue;
    std::mt19937_64 rng(3);
    for (int s = 0; s < samples; ++s) {
      auto in = random_instance(e.cat, rng);
      for (auto d : kDiagrams) {
        auto r = verify_diagram(d, in);
        o.expect(r.ok, e.name + ": " + diagram_name(d) + " sample " + std::to_string(s));
        ++checks;
      }
    }
    for (auto& f : e.functors) {
      if (*f->src == *f->tgt) continue;
      for (int s = 0; s < samples; ++s) {
        auto in = cross_instance(f, rng);
        for (auto d : kDiagrams) {
          o.expect(verify_diagram(d, in).ok, e.name + ": " + diagram_name(d) + " along " + f->name);
          ++checks;
        }
      }
    }
  }
  o.detail << checks << " diagram checks";
}

// ---- 4: S and T are quasi-isomorphisms ----
void s_and_t(Outcome& o) {
  const int L = 4;
  for (auto n : {"k_field", "dual_numbers", "a2_quiver", "exterior_graded"}) {
    auto c = build_corpus(n).cat;
    auto d = diagonal_bimodule(c);
    auto c4 = build_cc_cochains(c, d, L), c5 = build_cc_cochains(c, d, L + 1);
    auto s4 = build_2cc_cochains(c, d, L), s5 = build_2cc_cochains(c, d, L + 1);
    auto qs = stable_quasi_iso(map_S(*c4, *s4), map_S(*c5, *s5), *c4, *c5, *s4, *s5);
    o.expect(qs.by_cone && qs.by_rank, std::string(n) + ": S " + qs.str());
    auto t4 = build_2cc_chains(c, d, L), t5 = build_2cc_chains(c, d, L + 1);
    auto h4 = build_cc_chains(c, d, L), h5 = build_cc_chains(c, d, L + 1);
    auto qt = stable_quasi_iso(map_T(*t4, *h4), map_T(*t5, *h5), *t4, *t5, *h4, *h5);
    o.expect(qt.by_cone && qt.by_rank, std::string(n) + ": T " + qt.str());
    o.detail << n << " S " << qs.stable_rank << "/" << qs.stable_src << " T " << qt.stable_rank << "/"
             << qt.stable_src << "; ";
  }
}

// ---- 5: Gamma ----
void gamma_map(Outcome& o) {
  int maps = 0;
  for (auto& e : corpus()) {
    if (e.broken) continue;
    auto d = diagonal_bimodule(e.cat);
    for (auto& m : {d, dualize(*d)})
      for (int L = 2; L <= 4; ++L) {
        auto g = map_Gamma(*build_2cc_chains(e.cat, m, L - 1), *build_2cc_cochains(e.cat, dualize(*m), L));
        std::string at = e.name + " " + m->name + " L=" + std::to_string(L);
        o.expect(g.matrix().rows() == g.matrix().cols() && rank(g.matrix()) == g.matrix().cols(), at + ": not bijective");
        o.expect(g.commutes(), at + ": does not commute");
        ++maps;
      }
  }
  o.detail << maps << " maps";
}

struct PairingCase {
  std::string entry;
  Pairing p;
};

std::vector<PairingCase> lemma_cases() {
  std::vector<PairingCase> r;
  for (auto n : {"dual_numbers", "exterior_graded", "degenerate_trace"})
    for (auto& p : build_corpus(n).pairings) r.push_back({n, p});
  return r;
}

// ---- 6: nondegeneracy vs the bimodule condition ----
void lemma(Outcome& o) {
  int n = 0, trace = 0, degenerate = 0;
  for (auto& [entry, p] : lemma_cases()) {
    for (int L = 2; L <= 4; ++L) {
      auto cc = build_cc_chains(p.cat, p.coeff, L);
      auto s = sigma_from_gens(*cc, p.sigma);
      bool nd = check_nondegenerate(*cc, s).value;
      bool bm = check_wcy_bimodule(gamma_t_dual(*cc, s)).value;
      std::string at = entry + "/" + p.name + " L=" + std::to_string(L);
      o.expect(nd == bm, at + ": forms disagree");
      o.expect(nd == p.expect_nondegenerate, at + ": unexpected verdict");
      ++n;
    }
    (p.expect_nondegenerate ? trace : degenerate)++;
  }
  o.expect(trace >= 2 && degenerate >= 2, "missing trace or degenerate cases");
  o.detail << n << " checks, " << trace << " traces, " << degenerate << " degenerate";
}

// ---- 7: three forms ----
void three_forms(Outcome& o) {
  int n = 0;
  for (auto& e : corpus())
    for (auto& p : e.pairings)
      for (int L = 2; L <= 4; ++L) {
        auto cc = build_cc_chains(p.cat, p.coeff, L);
        auto t = check_three_forms(*cc, sigma_from_gens(*cc, p.sigma));
        std::string at = e.name + "/" + p.name + " L=" + std::to_string(L);
        o.expect(t.agree(), at + ": forms disagree");
        o.expect(t.hochschild.value == p.expect_nondegenerate, at + ": unexpected verdict");
        ++n;
      }
  o.detail << n << " pairings x truncations";
}

// ---- 8: relative pairing ----
bool same_verdict(const Verdict& a, const Verdict& b) {
  return a.value == b.value && a.report.ok == b.report.ok && a.report.checked == b.report.checked &&
         a.report.nfail == b.report.nfail && a.report.str() == b.report.str();
}

void relative(Outcome& o) {
  auto e = build_corpus("interval_relative_toy");
  auto& d = *e.relative;
  for (int L = 2; L <= 4; ++L) {
    std::string at = "L=" + std::to_string(L);
    auto rv = check_relative_pairing(d, L);
    o.expect(rv.is_pairing() && rv.agree(), at + ": relative pairing");
    o.expect(check_psi_irel_square(d, L).value, at + ": psi/i_rel square");
    o.expect(check_compatibility(d, d.sigmaB, L).value, at + ": compatibility with sigma^B");
  }
  int n = 0;
  for (auto& [entry, p] : lemma_cases())
    for (int L = 2; L <= 4; ++L) {
      auto cc = build_cc_chains(p.cat, p.coeff, L);
      auto s = sigma_from_gens(*cc, p.sigma);
      auto nd = check_nondegenerate(*cc, s);
      auto bm = check_wcy_bimodule(gamma_t_dual(*cc, s));
      auto rv = check_relative_pairing(absolute_data(p.cat, p.sigma), L);
      std::string at = entry + "/" + p.name + " L=" + std::to_string(L);
      o.expect(same_verdict(rv.sigmaA_nondeg, nd), at + ": Hochschild verdict differs");
      o.expect(same_verdict(rv.phiA_qiso, bm), at + ": bimodule verdict differs");
      ++n;
    }
  o.detail << "interval toy at L=2..4, " << n << " absolute specializations";
}

// ---- 9: cones ----
void cones(Outcome& o) {
  int n = 0;
  for (auto& e : corpus()) {
    if (e.broken) continue;
    for (auto& m : e.bimodules) {
      auto c = cone_of(unit_morphism(m));
      for (int x = 0; x < m->A->nobj(); ++x)
        for (int y = 0; y < m->B->nobj(); ++y)
          o.expect(homology(*value_complex(*c.cone, x, y)).dim() == 0, e.name + ": cone(id " + m->name + ") not acyclic");
      o.expect(is_closed(c.incl) && is_closed(c.proj), e.name + ": cone maps of " + m->name + " not closed");
      ++n;
    }
  }
  auto e = build_corpus("surgery_cone_toy");
  auto top = cone_of(e.morphisms[1]);
  o.expect(is_closed(top.incl), "surgery: incl not closed");
  o.expect(is_closed(top.proj), "surgery: proj not closed");
  auto cx = value_complex(*top.cone, 0, 0);
  o.expect(cx->square_zero(), "surgery: differential does not square to zero");
  auto idx = [&](const std::string& l) { return std::size_t(find_gen(*top.cone, 0, 0, l, false)); };
  std::vector<std::size_t> b3{idx("s:s")}, b2{idx("t:s:p")}, b1{idx("t:t:q"), idx("t:t:q'")};
  auto blk = [&](const std::vector<std::size_t>& to, const std::vector<std::size_t>& from) {
    return cx->d().submatrix(to, from);
  };
  o.expect(blk(b3, b3).is_zero(), "d3 != 0");
  o.expect(blk(b2, b2).is_zero(), "d2 != 0");
  o.expect(blk(b1, b1) == F2Matrix::from_rows({{0, 1}, {0, 0}}), "d1 wrong");
  o.expect(blk(b3, b2).is_zero() && blk(b3, b1).is_zero() && blk(b2, b1).is_zero(), "upper blocks nonzero");
  o.expect(blk(b2, b3) == F2Matrix::from_rows({{1}}), "rho32 wrong");
  o.expect(blk(b1, b3) == F2Matrix::from_rows({{0}, {1}}), "rho31 wrong");
  o.expect(blk(b1, b2) == F2Matrix::from_rows({{1}, {0}}), "rho21 wrong");
  o.detail << n << " identity cones, surgery blocks as expected";
}

// ---- 10: Yoneda ----
void yoneda(Outcome& o) {
  int n = 0;
  for (auto& e : corpus()) {
    if (e.broken) continue;
    o.expect(same_bimodule(*phi(*yoneda_left(e.cat)), *diagonal_bimodule(e.cat)), e.name);
    ++n;
  }
  o.detail << n << " categories";
}

// ---- 11: CLI contract ----
struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(AINF_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t k;
  while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), k);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void cli(Outcome& o) {
  fs::path root = fs::path(AINF_TEST_TMP) / "acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  int files = 0, cases = 0;
  for (auto& n : corpus_names()) {
    fs::path dir = root / n;
    auto r = run("corpus " + n + " --out " + q(dir));
    o.expect(r.code == 0, "corpus " + n + " exit " + std::to_string(r.code));
    auto expected = emit_corpus(build_corpus(n));
    SpecLoader l;
    const auto& ent = l.load((dir / manifest_name(n)).string(), EntityKind::Corpus);
    auto again = emit_corpus(*ent.corpus);
    o.expect(again.size() == expected.size(), n + ": file count changed");
    for (std::size_t i = 0; i < expected.size() && i < again.size(); ++i) {
      auto disk = slurp(dir / expected[i].name);
      o.expect(disk == expected[i].text, n + ": " + expected[i].name + " differs from the in-process emission");
      o.expect(again[i].name == expected[i].name && again[i].text == disk, n + ": " + expected[i].name + " round trip");
      ++files;
    }
  }

  auto expect_code = [&](const std::string& args, int want, const std::string& must_contain = "") {
    auto r = run(args);
    o.expect(r.code == want, "'" + args + "' exit " + std::to_string(r.code) + ", expected " + std::to_string(want));
    if (!must_contain.empty())
      o.expect(r.out.find(must_contain) != std::string::npos, "'" + args + "' output lacks '" + must_contain + "'");
    ++cases;
  };
  fs::path dn = root / "dual_numbers", nil = root / "nilpotent_mu3", br = root / "broken_dual_numbers",
           it = root / "interval_relative_toy", kf = root / "k_field";
  std::ofstream(nil / "sigma_b.pairing.ainf") << "kind pairing\nname sigma_b\ncategory nilpotent_mu3.category.ainf\n"
                                                 "coefficient nilpotent_mu3_diag.bimodule.ainf\nsigma pt pt b\n"
                                                 "expect nondegenerate\n";
  std::ofstream(root / "malformed.category.ainf") << "kind category\nname m\nmode graded\nobjects pt\nhom pt pt 1:zero\n";

  // pass
  expect_code("validate " + q(dn / manifest_name("dual_numbers")), 0);
  expect_code("validate " + q(it / manifest_name("interval_relative_toy")), 0);
  expect_code("check-cy " + q(dn / manifest_name("dual_numbers")) + " --pairing " + q(dn / "dual_trace.pairing.ainf") +
                  " --form hochschild --cross-check",
              0);
  expect_code("check-relative " + q(it / "interval_A.category.ainf") + " " + q(it / "k_field.category.ainf") + " " +
                  q(it / "I.k_field-interval_A.functor.ainf") + " " + q(it / "k_field_diag-to-A_rel_pull.morphism.ainf") +
                  " " + q(it / "interval_relative_toy_sigma_A.pairing.ainf") + " --sigma-b " +
                  q(it / "interval_relative_toy_sigma_B.pairing.ainf"),
              0);
  expect_code("homology " + q(kf / manifest_name("k_field")) + " --complex cc-cochains --max-len 3", 0);
  expect_code("diagram " + q(dn / manifest_name("dual_numbers")) + " --which g-pullback --samples 5", 0);
  // fail
  expect_code("validate " + q(br / manifest_name("broken_dual_numbers")), 1, "arity 3");
  expect_code("validate " + q(br / "broken_dual_numbers.category.ainf"), 1, "tuple (");
  expect_code("check-cy " + q(dn / manifest_name("dual_numbers")) + " --pairing " +
                  q(dn / "dual_degenerate_trace.pairing.ainf") + " --form bimodule",
              1);
  expect_code("check-cy " + q(dn / manifest_name("dual_numbers")) + " --pairing " +
                  q(dn / "dual_degenerate_trace.pairing.ainf") + " --form yoneda --cross-check",
              1);
  // parse and usage errors
  expect_code("validate " + q(root / "malformed.category.ainf"), 2, "malformed.category.ainf:5:");
  expect_code("validate " + q(root / "missing.category.ainf"), 2);
  expect_code("corpus no_such_entry --out " + q(root / "none"), 2);
  expect_code("check-cy " + q(dn / manifest_name("dual_numbers")) + " --form bimodule", 2);
  expect_code("homology " + q(kf / manifest_name("k_field")) + " --complex sideways", 2);
  expect_code("frobnicate", 2);
  // not closed
  expect_code("check-cy " + q(nil / manifest_name("nilpotent_mu3")) + " --pairing " + q(nil / "sigma_b.pairing.ainf") +
                  " --form hochschild",
              3);
  expect_code("check-cy " + q(nil / manifest_name("nilpotent_mu3")) + " --pairing " + q(nil / "sigma_b.pairing.ainf") +
                  " --form bimodule --cross-check",
              3);
  o.detail << files << " files byte-identical, " << cases << " exit-code cases";
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  std::cout << std::unitbuf;
  const Criterion all[] = {
      {1, "relation soundness", 10, relation_soundness},
      {2, "mu1 squares to zero", 60, mu1_squares},
      {3, "compatibility diagrams", 120, diagrams},
      {4, "S and T quasi-isomorphisms", 120, s_and_t},
      {5, "Gamma bijective chain map", 60, gamma_map},
      {6, "nondegeneracy equivalence", 30, lemma},
      {7, "three-form agreement", 120, three_forms},
      {8, "relative pairing", 60, relative},
      {9, "cones", 10, cones},
      {10, "Yoneda is the diagonal", 10, yoneda},
      {11, "CLI contract", 30, cli},
  };
  int failed = 0;
  for (auto& c : all) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& ex) {
      o.expect(false, std::string("exception: ") + ex.what());
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = sec < c.limit;
    bool pass = o.ok && in_time;
    failed += !pass;
    char head[128];
    std::snprintf(head, sizeof head, "criterion %2d %s: %.2f s (limit %.0f s)", c.id, pass ? "PASS" : "FAIL", sec,
                  c.limit);
    std::cout << head << " " << c.name << " | " << (in_time ? "" : "over time; ") << o.detail.str() << "\n";
  }
  std::cout << (failed ? "acceptance: FAIL" : "acceptance: PASS") << " (" << 11 - failed << "/11)\n";
  return failed;
}
