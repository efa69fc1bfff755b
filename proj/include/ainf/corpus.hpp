// Deterministic example instances and single-bit mutations.
#pragma once

#include <optional>

#include "ainf/bimodule.hpp"

namespace ainf {

// A dual Hochschild candidate supported on length-zero words of CC_(A, coeff).
struct Pairing {
  std::string name;
  CatPtr cat;
  BimodPtr coeff;
  Vec sigma;  // gens of coeff on which sigma is 1
  bool expect_nondegenerate = false;
};

struct RelativeData {
  CatPtr A, B;
  int j = 0;
  CatPtr Aj;       // A[j]
  FunPtr I;        // B -> A[j]
  BimodPtr Arel;   // over A
  PreMorphism irel;  // B_diag -> I^*(Arel[-j]), degree j
  Vec sigmaA;      // on length-zero words of CC_(A, Arel)
  Vec sigmaB;      // on length-zero words of CC_(B, B_diag)
};

struct CorpusEntry {
  std::string name;
  std::string description;
  CatPtr cat;
  bool broken = false;
  std::vector<FunPtr> functors;
  std::vector<BimodPtr> bimodules;
  std::vector<PreMorphism> morphisms;  // closed
  std::vector<Pairing> pairings;
  std::optional<RelativeData> relative;
  std::vector<std::string> expect;
};

const std::vector<std::string>& corpus_names();
CorpusEntry build_corpus(const std::string& name);

struct MuCoordinate {
  Word key;
  int out = 0;
};
// flips one structure-constant bit of the entry's category
CorpusEntry mutate(const CorpusEntry& e, const MuCoordinate& c);

// helpers shared with tests and tools
CatPtr make_category(const std::string& name, bool graded, int N, int arity_bound,
                     const std::vector<std::string>& objects,
                     const std::vector<std::tuple<std::string, std::string, std::string, int>>& gens,
                     const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& mu);

}  // namespace ainf
