#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ainf/specfile.hpp"

using namespace ainf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::path(AINF_TEST_TMP) / "spec" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// parse text as file `name` in dir and return the error it raises
SpecError parse_error(const fs::path& dir, const std::string& name, const std::string& text) {
  write(dir / name, text);
  SpecLoader l;
  try {
    l.load((dir / name).string());
  } catch (const SpecError& e) {
    return e;
  }
  FAIL("expected a parse error for " << name);
  return SpecError("", 0, 0, "");
}

const std::string kTwoObjects =
    "kind category\n"
    "name q\n"
    "mode ungraded\n"
    "degree 0\n"
    "arity_bound 2\n"
    "objects X Y\n"
    "hom X X eX:0\n"
    "hom Y Y eY:0\n"
    "hom X Y a:0\n";

}  // namespace

TEST_CASE("every corpus entry round-trips byte for byte") {
  for (auto& n : corpus_names()) {
    CAPTURE(n);
    auto e = build_corpus(n);
    auto files = emit_corpus(e);
    REQUIRE(!files.empty());
    CHECK(files.front().name == manifest_name(n));
    auto dir = scratch(n);
    write_files(files, dir.string());

    SpecLoader l;
    const auto& ent = l.load((dir / manifest_name(n)).string(), EntityKind::Corpus);
    REQUIRE(ent.corpus);
    auto again = emit_corpus(*ent.corpus);
    REQUIRE(again.size() == files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
      CHECK(again[i].name == files[i].name);
      CHECK(again[i].text == files[i].text);
    }

    const auto& c = *ent.corpus;
    CHECK(*c.cat == *e.cat);
    CHECK(c.broken == e.broken);
    REQUIRE(c.bimodules.size() == e.bimodules.size());
    for (std::size_t i = 0; i < e.bimodules.size(); ++i) CHECK(same_bimodule(*c.bimodules[i], *e.bimodules[i]));
    REQUIRE(c.functors.size() == e.functors.size());
    for (std::size_t i = 0; i < e.functors.size(); ++i) CHECK(*c.functors[i] == *e.functors[i]);
    REQUIRE(c.morphisms.size() == e.morphisms.size());
    for (std::size_t i = 0; i < e.morphisms.size(); ++i) CHECK(same_premorphism(c.morphisms[i], e.morphisms[i]));
    REQUIRE(c.pairings.size() == e.pairings.size());
    for (std::size_t i = 0; i < e.pairings.size(); ++i) {
      CHECK(c.pairings[i].sigma == e.pairings[i].sigma);
      CHECK(c.pairings[i].expect_nondegenerate == e.pairings[i].expect_nondegenerate);
    }
    CHECK(c.relative.has_value() == e.relative.has_value());
  }
}

TEST_CASE("emission is deterministic") {
  for (auto& n : corpus_names()) {
    auto a = emit_corpus(build_corpus(n));
    auto b = emit_corpus(build_corpus(n));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].text == b[i].text);
  }
}

TEST_CASE("shared references resolve to one object") {
  auto dir = scratch("shared");
  write_files(emit_corpus(build_corpus("dual_numbers")), dir.string());
  SpecLoader l;
  const auto& ent = l.load((dir / manifest_name("dual_numbers")).string());
  for (auto& b : ent.corpus->bimodules) CHECK(b->A == ent.corpus->cat);
  const auto& cat = l.load((dir / "dual_numbers.category.ainf").string());
  CHECK(cat.cat == ent.corpus->cat);
}

TEST_CASE("parse errors carry line and column") {
  auto dir = scratch("errors");

  SUBCASE("unknown generator") {
    auto e = parse_error(dir, "g.category.ainf", kTwoObjects + "mu 2 (X,X,Y) eX b -> a\n");
    CHECK(e.line == 10);
    CHECK(e.col == 17);
  }
  SUBCASE("output outside the hom space") {
    auto e = parse_error(dir, "h.category.ainf", kTwoObjects + "mu 2 (X,X,Y) eX a -> eX\n");
    CHECK(e.line == 10);
    CHECK(e.col == 22);
  }
  SUBCASE("tuple does not match the generators") {
    auto e = parse_error(dir, "t.category.ainf", kTwoObjects + "mu 2 (X,Y,Y) eX a -> a\n");
    CHECK(e.line == 10);
  }
  SUBCASE("unknown keyword") {
    auto e = parse_error(dir, "k.category.ainf", "kind category\nname q\ncolour red\nmode ungraded\nobjects X\n");
    CHECK(e.line == 3);
    CHECK(e.col == 1);
  }
  SUBCASE("unknown entity kind") {
    auto e = parse_error(dir, "u.ainf", "kind teapot\n");
    CHECK(e.line == 1);
    CHECK(e.col == 6);
  }
  SUBCASE("bad integer") {
    auto e = parse_error(dir, "i.category.ainf", "kind category\nname q\nmode graded\ndegree two\nobjects X\n");
    CHECK(e.line == 4);
    CHECK(e.col == 8);
  }
  SUBCASE("degree mismatch in graded mode") {
    auto e = parse_error(dir, "d.category.ainf",
                         "kind category\nname q\nmode graded\ndegree 0\narity_bound 2\nobjects X\n"
                         "hom X X e:0 f:1\nmu 2 (X,X,X) e e -> f\n");
    CHECK(e.line == 8);
    CHECK(e.col == 21);
  }
  SUBCASE("duplicate entry") {
    auto e = parse_error(dir, "p.category.ainf", kTwoObjects + "mu 2 (X,X,Y) eX a -> a\nmu 2 (X,X,Y) eX a -> a\n");
    CHECK(e.line == 11);
  }
  SUBCASE("missing referenced file is reported where it is referenced") {
    auto e = parse_error(dir, "m.functor.ainf",
                         "kind functor\nname f\nsource nowhere.category.ainf\ntarget nowhere.category.ainf\n");
    CHECK(e.line == 3);
    CHECK(e.col == 8);
    CHECK(std::string(e.what()).find("cannot open") != std::string::npos);
  }
  SUBCASE("reference cycle") {
    auto e = parse_error(dir, "self.corpus.ainf", "kind corpus\nname s\ncategory self.corpus.ainf\n");
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("cycle") != std::string::npos);
  }
  SUBCASE("reference of the wrong kind") {
    write(dir / "ok.category.ainf", kTwoObjects);
    write(dir / "ok.pairing.ainf",
          "kind pairing\nname p\ncategory ok.category.ainf\ncoefficient ok.category.ainf\nsigma X X eX\n"
          "expect degenerate\n");
    SpecLoader l;
    try {
      l.load((dir / "ok.pairing.ainf").string());
      FAIL("expected an error");
    } catch (const SpecError& e) {
      CHECK(e.file.find("ok.") != std::string::npos);
    }
  }
  SUBCASE("two entities in one file") {
    auto e = parse_error(dir, "two.category.ainf", kTwoObjects + "kind category\n");
    CHECK(e.line == 10);
  }
}

TEST_CASE("a hand-written category loads and validates") {
  auto dir = scratch("hand");
  write(dir / "a2.category.ainf", kTwoObjects +
                                      "# path algebra of X -> Y\n"
                                      "mu 2 (X,X,X) eX eX -> eX\n"
                                      "mu 2 (Y,Y,Y) eY eY -> eY\n"
                                      "mu 2 (X,X,Y) eX a -> a\n"
                                      "mu 2 (X,Y,Y) a eY -> a\n");
  SpecLoader l;
  auto c = l.load((dir / "a2.category.ainf").string(), EntityKind::Category).cat;
  CHECK(validate_relations(*c).ok);
  CHECK(c->nobj() == 2);
  CHECK(c->ngen() == 3);
}
