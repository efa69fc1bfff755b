// The four strict compatibility diagrams between dualization, pullback,
// Phi^l/Phi^r and G^l/G^r, checked by computing both paths exactly.
#pragma once

#include <random>

#include "ainf/modfun.hpp"

namespace ainf {

enum class Diagram { DualizationPhi, PullbackDualization, GPullback, GDualization };

const char* diagram_name(Diagram d);
std::optional<Diagram> parse_diagram(const std::string& s);

// Everything the four diagrams need.  Module functors have source B and
// base A; fa: A' -> A and fb: B' -> B.
struct DiagramInstance {
  CatPtr A, B;
  FunPtr fa, fb;
  ModFunPtr left0, left1;    // B -> A-mod
  ModPreNat tleft;           // left0 -> left1
  ModFunPtr right0, right1;  // B -> (mod-A)^opp
  ModPreNat tright;          // right0 -> right1
  BimodPtr M, M2;            // A-B bimodules
  PreMorphism v;             // M -> M2
  // sanity mutant: Phi^r reads chains backwards
  bool transposed_phi_r = false;
};

Report verify_diagram(Diagram which, const DiagramInstance& inst);

// Valid functor of arity <= 2 by rejection sampling; the zero functor on a
// random object map when nothing else is found.
FunPtr random_functor(CatPtr src, CatPtr tgt, std::mt19937_64& rng, int tries = 400);

// Instance over a single category with random endofunctors and random
// truncated pre-natural transformations.
DiagramInstance random_instance(CatPtr a, std::mt19937_64& rng, int trunc = 3);
// Module functors on B pulled along fb: B -> A (e.g. a corpus inclusion)
DiagramInstance cross_instance(FunPtr fb, std::mt19937_64& rng, int trunc = 3);

}  // namespace ainf
