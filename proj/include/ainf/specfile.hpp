// Text spec files: one entity per file, cross-references by relative path.
//
//   kind category | functor | bimodule | morphism | pairing | relative | corpus
//
// Lines are whitespace-separated tokens; '#' starts a comment line.  Tensor
// entries name their arity, the object tuple they live over, the input basis
// word and the output vector ("a + b" or "0"), e.g.
//
//   mu 2 (pt,pt,pt) x x -> 0                  category
//   comp 1 (pt,pt) 1 -> e                     functor
//   mu 1|0 (pt,pt;pt) x | r | -> r            bimodule (left | value | right)
//   comp 0|0 (pt;pt) | p | -> q               morphism
//
// Value generators are referred to by label, with a trailing ^ for duals.
#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ainf/corpus.hpp"

namespace ainf {

struct SpecError : std::runtime_error {
  std::string file;
  int line = 0, col = 0;
  SpecError(std::string file, int line, int col, const std::string& msg);
};

enum class EntityKind { Category, Functor, Bimodule, Morphism, Pairing, Relative, Corpus };
const char* kind_name(EntityKind k);

struct Entity {
  EntityKind kind = EntityKind::Category;
  std::string path;
  CatPtr cat;
  FunPtr fun;
  BimodPtr bimod;
  std::shared_ptr<const PreMorphism> mor;
  std::shared_ptr<const Pairing> pairing;
  std::shared_ptr<const RelativeData> relative;
  std::shared_ptr<const CorpusEntry> corpus;
};

// Loads files and everything they reference, once per path, so shared
// references resolve to shared objects.  Throws SpecError.
class SpecLoader {
 public:
  const Entity& load(const std::string& path);
  const Entity& load(const std::string& path, EntityKind want);
  // parse text as if read from path (references resolve next to it)
  const Entity& load_text(const std::string& path, const std::string& text);

 private:
  std::map<std::string, Entity> cache_;
  std::vector<std::string> active_;
};

struct EmittedFile {
  std::string name;
  std::string text;
};

// Assigns file names and emits each entity once; add() returns the file name.
class SpecEmitter {
 public:
  std::string add(CatPtr c);
  std::string add(FunPtr f);
  std::string add(BimodPtr m);
  std::string add(const PreMorphism& v);
  std::string add(const Pairing& p);
  std::string add(const RelativeData& r, const std::string& name);
  std::string add(const CorpusEntry& e);
  const std::vector<EmittedFile>& files() const { return files_; }

 private:
  std::string put(const std::string& stem, const std::string& kind, const std::string& text);
  std::map<const void*, std::string> seen_;
  std::vector<EmittedFile> files_;
};

// manifest first
std::vector<EmittedFile> emit_corpus(const CorpusEntry& e);
std::string manifest_name(const std::string& entry);
void write_files(const std::vector<EmittedFile>& files, const std::string& dir);

}  // namespace ainf
