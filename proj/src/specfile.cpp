#include "ainf/specfile.hpp"

#include <cctype>
#include <filesystem>
#include <functional>
#include <fstream>
#include <set>
#include <sstream>

namespace ainf {

namespace fs = std::filesystem;

SpecError::SpecError(std::string f, int l, int c, const std::string& msg)
    : std::runtime_error(f + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
      file(std::move(f)),
      line(l),
      col(c) {}

const char* kind_name(EntityKind k) {
  switch (k) {
    case EntityKind::Category: return "category";
    case EntityKind::Functor: return "functor";
    case EntityKind::Bimodule: return "bimodule";
    case EntityKind::Morphism: return "morphism";
    case EntityKind::Pairing: return "pairing";
    case EntityKind::Relative: return "relative";
    case EntityKind::Corpus: return "corpus";
  }
  return "?";
}

namespace {

struct Tok {
  std::string s;
  int col = 1;
};

struct Line {
  int no = 0;
  std::vector<Tok> toks;
  std::string rest;  // text after the first token, trimmed
  int rest_col = 1;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    Line L;
    L.no = no;
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i >= raw.size()) break;
      std::size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      L.toks.push_back({raw.substr(i, j - i), int(i) + 1});
      i = j;
    }
    if (L.toks.empty() || L.toks[0].s[0] == '#') continue;
    std::size_t r = L.toks[0].col - 1 + L.toks[0].s.size();
    while (r < raw.size() && std::isspace(static_cast<unsigned char>(raw[r]))) ++r;
    L.rest = raw.substr(r);
    while (!L.rest.empty() && std::isspace(static_cast<unsigned char>(L.rest.back()))) L.rest.pop_back();
    L.rest_col = int(r) + 1;
    out.push_back(std::move(L));
  }
  return out;
}

bool plain_label(const std::string& s) {
  if (s.empty() || s == "0" || s == "+" || s == "->" || s == "|" || s[0] == '#') return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '^') return false;
  return true;
}

bool object_label(const std::string& s) {
  if (!plain_label(s)) return false;
  for (char c : s)
    if (c == ',' || c == ';' || c == '(' || c == ')') return false;
  return true;
}

// Parsing context for one file.
class Parser {
 public:
  Parser(SpecLoader& loader, std::string path, const std::string& text)
      : loader_(loader), path_(std::move(path)), lines_(tokenize(text)) {}

  Entity run();

 private:
  [[noreturn]] void fail(int line, int col, const std::string& msg) const { throw SpecError(path_, line, col, msg); }
  [[noreturn]] void fail(const Line& L, const Tok& t, const std::string& msg) const { fail(L.no, t.col, msg); }
  [[noreturn]] void fail(const Line& L, const std::string& msg) const { fail(L.no, 1, msg); }

  const Tok& arg(const Line& L, std::size_t i) const {
    if (i >= L.toks.size()) fail(L.no, L.toks.back().col + int(L.toks.back().s.size()), "missing argument to " + L.toks[0].s);
    return L.toks[i];
  }
  void nargs(const Line& L, std::size_t n) const {
    arg(L, n);
    if (L.toks.size() > n + 1) fail(L, L.toks[n + 1], "unexpected token '" + L.toks[n + 1].s + "'");
  }
  int integer(const Line& L, const Tok& t) const {
    try {
      std::size_t used = 0;
      int v = std::stoi(t.s, &used);
      if (used == t.s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(L, t, "expected an integer, got '" + t.s + "'");
  }
  // the single value of a header keyword, or nullptr when absent
  const Line* header(const std::string& key, bool required);
  std::string rest(const std::string& key, bool required) {
    auto* L = header(key, required);
    return L ? L->rest : std::string();
  }
  std::vector<const Line*> all(const std::string& key);
  void check_keys(const std::set<std::string>& allowed);

  const Entity& ref(const Line& L, std::size_t i, EntityKind want);
  CatPtr cat_ref(const Line& L, std::size_t i);

  // object tuple "(a,b,c)" or "(a,b;c,d)"
  std::vector<std::vector<int>> tuple(const Line& L, const Tok& t, const std::vector<const Category*>& cats);
  int gen_of(const Line& L, const Tok& t, const Category& c) const;
  // value generator label[^] in m(x, y)
  int value_of(const Line& L, const Tok& t, const Bimodule& m, int x, int y) const;
  // tokens from position i up to "->", then the output vector
  std::size_t find_arrow(const Line& L, std::size_t from) const;
  template <class Resolve>
  Vec vector(const Line& L, std::size_t from, Resolve res) const;
  void chain_matches(const Line& L, const Tok& t, const Category& c, const Word& w, const std::vector<int>& objs) const;

  Entity category();
  Entity functor();
  Entity bimodule();
  Entity morphism();
  Entity pairing();
  Entity relative();
  Entity corpus();

  BiKey bikey(const Line& L, const Bimodule& m, std::vector<std::vector<int>>& objs, std::size_t& arrow);
  Vec sigma_line(const Line& L, const Bimodule& m, Vec& acc);

  SpecLoader& loader_;
  std::string path_;
  std::vector<Line> lines_;
  std::set<std::size_t> used_;
};

const Line* Parser::header(const std::string& key, bool required) {
  const Line* found = nullptr;
  for (std::size_t i = 0; i < lines_.size(); ++i)
    if (lines_[i].toks[0].s == key) {
      if (found) fail(lines_[i], "duplicate '" + key + "' line");
      found = &lines_[i];
      used_.insert(i);
    }
  if (!found && required) fail(lines_.empty() ? 1 : lines_.back().no, 1, "missing '" + key + "' line");
  if (found && found->toks.size() < 2) fail(*found, "'" + key + "' needs a value");
  return found;
}

std::vector<const Line*> Parser::all(const std::string& key) {
  std::vector<const Line*> r;
  for (std::size_t i = 0; i < lines_.size(); ++i)
    if (lines_[i].toks[0].s == key) {
      r.push_back(&lines_[i]);
      used_.insert(i);
    }
  return r;
}

void Parser::check_keys(const std::set<std::string>& allowed) {
  for (auto& L : lines_)
    if (!allowed.count(L.toks[0].s) && L.toks[0].s != "kind")
      fail(L, L.toks[0], "unknown keyword '" + L.toks[0].s + "'");
}

const Entity& Parser::ref(const Line& L, std::size_t i, EntityKind want) {
  const Tok& t = arg(L, i);
  fs::path p = fs::path(path_).parent_path() / t.s;
  try {
    return loader_.load(p.string(), want);
  } catch (const SpecError& e) {
    if (e.file == p.string() && e.line == 0) fail(L, t, e.what());
    throw;
  }
}

CatPtr Parser::cat_ref(const Line& L, std::size_t i) {
  if (arg(L, i).s == "ground") return Category::ground();
  return ref(L, i, EntityKind::Category).cat;
}

std::vector<std::vector<int>> Parser::tuple(const Line& L, const Tok& t, const std::vector<const Category*>& cats) {
  const std::string& s = t.s;
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') fail(L, t, "expected an object tuple like (X,Y)");
  std::vector<std::vector<int>> parts(1);
  std::string cur;
  int col = t.col + 1;
  int start = col;
  auto flush = [&]() {
    std::size_t k = parts.size() - 1;
    if (k >= cats.size()) fail(L.no, start, "too many ';' groups in object tuple");
    int o = cats[k]->object_index(cur);
    if (o < 0) fail(L.no, start, "unknown object '" + cur + "'");
    parts.back().push_back(o);
    cur.clear();
  };
  for (std::size_t i = 1; i + 1 < s.size(); ++i, ++col) {
    char c = s[i];
    if (c == ',' || c == ';') {
      flush();
      if (c == ';') parts.emplace_back();
      start = col + 1;
    } else {
      cur += c;
    }
  }
  flush();
  if (parts.size() != cats.size()) fail(L, t, "object tuple needs " + std::to_string(cats.size()) + " ';'-separated groups");
  return parts;
}

int Parser::gen_of(const Line& L, const Tok& t, const Category& c) const {
  int g = c.gen_index(t.s);
  if (g < 0) fail(L, t, "unknown generator '" + t.s + "' of " + c.name);
  return g;
}

int Parser::value_of(const Line& L, const Tok& t, const Bimodule& m, int x, int y) const {
  bool dual = !t.s.empty() && t.s.back() == '^';
  std::string label = dual ? t.s.substr(0, t.s.size() - 1) : t.s;
  int g = find_gen(m, x, y, label, dual);
  if (g < 0)
    fail(L, t, "no value generator '" + t.s + "' in " + m.name + "(" + m.A->objects[x] + "," + m.B->objects[y] + ")");
  return g;
}

std::size_t Parser::find_arrow(const Line& L, std::size_t from) const {
  for (std::size_t i = from; i < L.toks.size(); ++i)
    if (L.toks[i].s == "->") return i;
  fail(L.no, L.toks.back().col + int(L.toks.back().s.size()), "missing '->'");
}

template <class Resolve>
Vec Parser::vector(const Line& L, std::size_t from, Resolve res) const {
  if (from >= L.toks.size()) fail(L.no, L.toks.back().col + 2, "missing output vector");
  if (L.toks[from].s == "0" && from + 1 == L.toks.size()) return Vec();
  Vec v;
  for (std::size_t i = from; i < L.toks.size(); ++i) {
    bool want_plus = (i - from) % 2 == 1;
    if (want_plus) {
      if (L.toks[i].s != "+") fail(L, L.toks[i], "expected '+'");
      continue;
    }
    int g = res(L.toks[i]);
    if (v.contains(g)) fail(L, L.toks[i], "repeated basis element '" + L.toks[i].s + "'");
    v.toggle(g);
  }
  if ((L.toks.size() - from) % 2 == 0) fail(L, L.toks.back(), "dangling '+'");
  return v;
}

void Parser::chain_matches(const Line& L, const Tok& t, const Category& c, const Word& w,
                           const std::vector<int>& objs) const {
  if (objs.size() != w.size() + 1) fail(L, t, "object tuple length does not match the arity");
  for (std::size_t i = 0; i < w.size(); ++i)
    if (c.gens[w[i]].src != objs[i] || c.gens[w[i]].tgt != objs[i + 1])
      fail(L, t, "generator " + c.gens[w[i]].label + " does not go " + c.objects[objs[i]] + " -> " + c.objects[objs[i + 1]]);
}

Entity Parser::category() {
  check_keys({"name", "mode", "degree", "arity_bound", "objects", "hom", "mu"});
  auto c = std::make_shared<Category>();
  c->name = rest("name", true);
  auto* mode = header("mode", true);
  nargs(*mode, 1);
  if (mode->toks[1].s != "graded" && mode->toks[1].s != "ungraded")
    fail(*mode, mode->toks[1], "mode must be graded or ungraded");
  c->graded = mode->toks[1].s == "graded";
  auto* deg = header("degree", true);
  nargs(*deg, 1);
  c->N = integer(*deg, deg->toks[1]);
  auto* ab = header("arity_bound", true);
  nargs(*ab, 1);
  c->arity_bound = integer(*ab, ab->toks[1]);
  if (c->arity_bound < 1) fail(*ab, ab->toks[1], "arity bound must be positive");
  auto* objs = header("objects", true);
  for (std::size_t i = 1; i < objs->toks.size(); ++i) {
    auto& t = objs->toks[i];
    if (!object_label(t.s)) fail(*objs, t, "bad object label '" + t.s + "'");
    if (c->object_index(t.s) >= 0) fail(*objs, t, "duplicate object '" + t.s + "'");
    c->add_object(t.s);
  }
  for (auto* L : all("hom")) {
    arg(*L, 3);
    int x = c->object_index(L->toks[1].s), y = c->object_index(L->toks[2].s);
    if (x < 0) fail(*L, L->toks[1], "unknown object '" + L->toks[1].s + "'");
    if (y < 0) fail(*L, L->toks[2], "unknown object '" + L->toks[2].s + "'");
    for (std::size_t i = 3; i < L->toks.size(); ++i) {
      auto& t = L->toks[i];
      auto colon = t.s.rfind(':');
      if (colon == std::string::npos) fail(*L, t, "expected label:degree");
      std::string label = t.s.substr(0, colon);
      if (!plain_label(label)) fail(*L, t, "bad generator label '" + label + "'");
      if (c->gen_index(label) >= 0) fail(*L, t, "duplicate generator '" + label + "'");
      Tok dt{t.s.substr(colon + 1), t.col + int(colon) + 1};
      int d = integer(*L, dt);
      if (!c->graded && d != 0) fail(*L, dt, "ungraded generators have degree 0");
      c->add_gen(x, y, label, d);
    }
  }
  c->finalize();
  for (auto* L : all("mu")) {
    int k = integer(*L, arg(*L, 1));
    if (k < 1 || k > c->arity_bound) fail(*L, L->toks[1], "arity outside 1.." + std::to_string(c->arity_bound));
    auto objs_t = tuple(*L, arg(*L, 2), {c.get()});
    std::size_t arrow = find_arrow(*L, 3);
    if (arrow != 3 + std::size_t(k)) fail(*L, L->toks[std::min(arrow, 3 + std::size_t(k))], "expected " + std::to_string(k) + " input generators");
    Word w;
    for (int i = 0; i < k; ++i) w.push_back(gen_of(*L, L->toks[3 + i], *c));
    chain_matches(*L, L->toks[2], *c, w, objs_t[0]);
    int s = objs_t[0].front(), e = objs_t[0].back();
    int want = c->mu_degree(k);
    for (int g : w) want += c->gens[g].degree;
    Vec out = vector(*L, arrow + 1, [&](const Tok& t) {
      int g = gen_of(*L, t, *c);
      if (c->gens[g].src != s || c->gens[g].tgt != e) fail(*L, t, "output '" + t.s + "' is not in hom(" + c->objects[s] + "," + c->objects[e] + ")");
      if (c->graded && c->gens[g].degree != want) fail(*L, t, "output '" + t.s + "' has degree " + std::to_string(c->gens[g].degree) + ", expected " + std::to_string(want));
      return g;
    });
    if (c->mu.count(w)) fail(*L, "duplicate mu entry");
    if (out.empty()) continue;
    c->set_mu(w, out);
  }
  Entity e;
  e.kind = EntityKind::Category;
  e.cat = c;
  return e;
}

Entity Parser::functor() {
  check_keys({"name", "source", "target", "arity_bound", "objmap", "comp"});
  auto f = std::make_shared<Functor>();
  f->name = rest("name", true);
  f->src = cat_ref(*header("source", true), 1);
  f->tgt = cat_ref(*header("target", true), 1);
  auto* ab = header("arity_bound", true);
  nargs(*ab, 1);
  f->arity_bound = integer(*ab, ab->toks[1]);
  if (f->arity_bound < 1) fail(*ab, ab->toks[1], "arity bound must be positive");
  f->objmap.assign(f->src->nobj(), -1);
  for (auto* L : all("objmap")) {
    nargs(*L, 2);
    int x = f->src->object_index(L->toks[1].s), y = f->tgt->object_index(L->toks[2].s);
    if (x < 0) fail(*L, L->toks[1], "unknown source object '" + L->toks[1].s + "'");
    if (y < 0) fail(*L, L->toks[2], "unknown target object '" + L->toks[2].s + "'");
    if (f->objmap[x] >= 0) fail(*L, L->toks[1], "object mapped twice");
    f->objmap[x] = y;
  }
  for (int x = 0; x < f->src->nobj(); ++x)
    if (f->objmap[x] < 0) fail(lines_.back().no, 1, "no objmap line for '" + f->src->objects[x] + "'");
  for (auto* L : all("comp")) {
    int k = integer(*L, arg(*L, 1));
    if (k < 1 || k > f->arity_bound) fail(*L, L->toks[1], "arity outside 1.." + std::to_string(f->arity_bound));
    auto objs_t = tuple(*L, arg(*L, 2), {f->src.get()});
    std::size_t arrow = find_arrow(*L, 3);
    if (arrow != 3 + std::size_t(k)) fail(*L, L->toks[std::min(arrow, 3 + std::size_t(k))], "expected " + std::to_string(k) + " input generators");
    Word w;
    for (int i = 0; i < k; ++i) w.push_back(gen_of(*L, L->toks[3 + i], *f->src));
    chain_matches(*L, L->toks[2], *f->src, w, objs_t[0]);
    int s = f->objmap[objs_t[0].front()], e = f->objmap[objs_t[0].back()];
    int want = f->degree(k);
    for (int g : w) want += f->src->gens[g].degree;
    bool graded = f->src->graded && f->tgt->graded;
    Vec out = vector(*L, arrow + 1, [&](const Tok& t) {
      int g = gen_of(*L, t, *f->tgt);
      if (f->tgt->gens[g].src != s || f->tgt->gens[g].tgt != e) fail(*L, t, "output '" + t.s + "' is not in the image hom space");
      if (graded && f->tgt->gens[g].degree != want) fail(*L, t, "output '" + t.s + "' has degree " + std::to_string(f->tgt->gens[g].degree) + ", expected " + std::to_string(want));
      return g;
    });
    if (f->comps.count(w)) fail(*L, "duplicate comp entry");
    add_entry(f->comps, w, out);
  }
  Entity e;
  e.kind = EntityKind::Functor;
  e.fun = f;
  return e;
}

BiKey Parser::bikey(const Line& L, const Bimodule& m, std::vector<std::vector<int>>& objs, std::size_t& arrow) {
  const Tok& ar = arg(L, 1);
  auto bar = ar.s.find('|');
  if (bar == std::string::npos) fail(L, ar, "expected arity k|m");
  Tok kt{ar.s.substr(0, bar), ar.col}, mt{ar.s.substr(bar + 1), ar.col + int(bar) + 1};
  int k = integer(L, kt), mm = integer(L, mt);
  if (k < 0 || mm < 0) fail(L, ar, "negative arity");
  objs = tuple(L, arg(L, 2), {m.A.get(), m.B.get()});
  arrow = find_arrow(L, 3);
  // k left gens, |, w, |, m right gens
  std::size_t want = 3 + std::size_t(k) + 3 + std::size_t(mm);
  if (arrow != want) fail(L, L.toks[std::min(arrow, want)], "expected " + std::to_string(k) + " | w | " + std::to_string(mm) + " inputs before '->'");
  if (L.toks[3 + k].s != "|") fail(L, L.toks[3 + k], "expected '|'");
  if (L.toks[5 + k].s != "|") fail(L, L.toks[5 + k], "expected '|'");
  BiKey key;
  for (int i = 0; i < k; ++i) key.left.push_back(gen_of(L, L.toks[3 + i], *m.A));
  for (int i = 0; i < mm; ++i) key.right.push_back(gen_of(L, L.toks[6 + k + i], *m.B));
  chain_matches(L, L.toks[2], *m.A, key.left, objs[0]);
  chain_matches(L, L.toks[2], *m.B, key.right, objs[1]);
  key.w = value_of(L, L.toks[4 + k], m, objs[0].back(), objs[1].front());
  return key;
}

namespace {
int input_degree(const Bimodule& m, const BiKey& k) {
  int d = m.gens[k.w].degree;
  for (int g : k.left) d += m.A->gens[g].degree;
  for (int g : k.right) d += m.B->gens[g].degree;
  return d;
}
}  // namespace

Entity Parser::bimodule() {
  check_keys({"name", "left", "right", "gen", "mu"});
  auto m = std::make_shared<Bimodule>();
  m->name = rest("name", true);
  m->A = cat_ref(*header("left", true), 1);
  m->B = cat_ref(*header("right", true), 1);
  for (auto* L : all("gen")) {
    arg(*L, 4);
    if (L->toks.size() > 6) fail(*L, L->toks[6], "unexpected token");
    bool dual = false;
    if (L->toks.size() == 6) {
      if (L->toks[5].s != "dual") fail(*L, L->toks[5], "expected 'dual'");
      dual = true;
    }
    if (!plain_label(L->toks[1].s)) fail(*L, L->toks[1], "bad value label '" + L->toks[1].s + "'");
    int x = m->A->object_index(L->toks[2].s), y = m->B->object_index(L->toks[3].s);
    if (x < 0) fail(*L, L->toks[2], "unknown left object '" + L->toks[2].s + "'");
    if (y < 0) fail(*L, L->toks[3], "unknown right object '" + L->toks[3].s + "'");
    int d = integer(*L, L->toks[4]);
    for (auto& g : m->gens)
      if (g.x == x && g.y == y && g.label == L->toks[1].s && g.dual == dual) fail(*L, L->toks[1], "duplicate value generator");
    m->add_gen(x, y, L->toks[1].s, d, dual);
  }
  m->finalize();
  for (auto* L : all("mu")) {
    std::vector<std::vector<int>> objs;
    std::size_t arrow;
    BiKey key = bikey(*L, *m, objs, arrow);
    int x0 = objs[0].front(), y1 = objs[1].back();
    int want = input_degree(*m, key) + m->mu_degree(int(key.left.size()), int(key.right.size()));
    Vec out = vector(*L, arrow + 1, [&](const Tok& t) {
      int g = value_of(*L, t, *m, x0, y1);
      if (m->graded() && m->gens[g].degree != want) fail(*L, t, "output '" + t.s + "' has degree " + std::to_string(m->gens[g].degree) + ", expected " + std::to_string(want));
      return g;
    });
    if (m->mu.count(key)) fail(*L, "duplicate mu entry");
    m->set_mu(key, out);
  }
  Entity e;
  e.kind = EntityKind::Bimodule;
  e.bimod = m;
  return e;
}

Entity Parser::morphism() {
  check_keys({"name", "source", "target", "degree", "truncation", "comp"});
  auto* s = header("source", true);
  auto* t = header("target", true);
  BimodPtr src = ref(*s, 1, EntityKind::Bimodule).bimod;
  BimodPtr tgt = ref(*t, 1, EntityKind::Bimodule).bimod;
  if (!(*src->A == *tgt->A) || !(*src->B == *tgt->B)) fail(*t, t->toks[1], "source and target live over different categories");
  auto* dl = header("degree", true);
  nargs(*dl, 1);
  auto v = std::make_shared<PreMorphism>(zero_premorphism(src, tgt, integer(*dl, dl->toks[1])));
  if (auto* tr = header("truncation", false)) {
    nargs(*tr, 1);
    v->trunc = tr->toks[1].s == "exact" ? kExact : integer(*tr, tr->toks[1]);
  }
  header("name", false);
  for (auto* L : all("comp")) {
    std::vector<std::vector<int>> objs;
    std::size_t arrow;
    BiKey key = bikey(*L, *src, objs, arrow);
    if (key.arity() >= v->trunc) fail(*L, L->toks[1], "entry beyond the truncation");
    int x0 = objs[0].front(), y1 = objs[1].back();
    int want = input_degree(*src, key) + v->degree + int(key.left.size()) * (1 - src->A->N) +
               int(key.right.size()) * (1 - src->B->N);
    Vec out = vector(*L, arrow + 1, [&](const Tok& tk) {
      int g = value_of(*L, tk, *tgt, x0, y1);
      if (src->graded() && tgt->gens[g].degree != want) fail(*L, tk, "output '" + tk.s + "' has degree " + std::to_string(tgt->gens[g].degree) + ", expected " + std::to_string(want));
      return g;
    });
    if (v->comps.count(key)) fail(*L, "duplicate comp entry");
    add_entry(v->comps, key, out);
  }
  Entity e;
  e.kind = EntityKind::Morphism;
  e.mor = v;
  return e;
}

Vec Parser::sigma_line(const Line& L, const Bimodule& m, Vec& acc) {
  nargs(L, 3);
  int x = m.A->object_index(L.toks[1].s), y = m.B->object_index(L.toks[2].s);
  if (x < 0) fail(L, L.toks[1], "unknown object '" + L.toks[1].s + "'");
  if (y < 0) fail(L, L.toks[2], "unknown object '" + L.toks[2].s + "'");
  int g = value_of(L, L.toks[3], m, x, y);
  if (acc.contains(g)) fail(L, L.toks[3], "repeated sigma generator");
  acc.toggle(g);
  return acc;
}

Entity Parser::pairing() {
  check_keys({"name", "category", "coefficient", "sigma", "expect"});
  auto p = std::make_shared<Pairing>();
  p->name = rest("name", true);
  p->cat = cat_ref(*header("category", true), 1);
  auto* co = header("coefficient", true);
  nargs(*co, 1);
  p->coeff = co->toks[1].s == "diag" ? diagonal_bimodule(p->cat) : ref(*co, 1, EntityKind::Bimodule).bimod;
  if (!(*p->coeff->A == *p->cat) || !(*p->coeff->B == *p->cat))
    fail(*co, co->toks[1], "coefficient is not a bimodule over " + p->cat->name);
  for (auto* L : all("sigma")) sigma_line(*L, *p->coeff, p->sigma);
  auto* ex = header("expect", false);
  if (ex) {
    nargs(*ex, 1);
    if (ex->toks[1].s != "nondegenerate" && ex->toks[1].s != "degenerate")
      fail(*ex, ex->toks[1], "expect must be nondegenerate or degenerate");
    p->expect_nondegenerate = ex->toks[1].s == "nondegenerate";
  }
  Entity e;
  e.kind = EntityKind::Pairing;
  e.pairing = p;
  return e;
}

Entity Parser::relative() {
  check_keys({"name", "A", "B", "shift", "I", "i_rel", "candidate", "sigma_B"});
  header("name", true);
  auto r = std::make_shared<RelativeData>();
  r->A = cat_ref(*header("A", true), 1);
  r->B = cat_ref(*header("B", true), 1);
  auto* sh = header("shift", true);
  nargs(*sh, 1);
  r->j = integer(*sh, sh->toks[1]);
  r->Aj = r->j == 0 ? r->A : suspend(*r->A, r->j);
  auto* il = header("I", true);
  r->I = ref(*il, 1, EntityKind::Functor).fun;
  if (!(*r->I->src == *r->B) || !(*r->I->tgt == *r->Aj)) fail(*il, il->toks[1], "I must go from B to A[shift]");
  auto* irl = header("i_rel", true);
  r->irel = *ref(*irl, 1, EntityKind::Morphism).mor;
  auto* cl = header("candidate", true);
  const Pairing& cand = *ref(*cl, 1, EntityKind::Pairing).pairing;
  if (!(*cand.cat == *r->A)) fail(*cl, cl->toks[1], "candidate must be a pairing over A");
  r->Arel = cand.coeff;
  r->sigmaA = cand.sigma;
  if (auto* sb = header("sigma_B", false)) {
    const Pairing& pb = *ref(*sb, 1, EntityKind::Pairing).pairing;
    if (!(*pb.cat == *r->B) || !same_bimodule(*pb.coeff, *diagonal_bimodule(r->B)))
      fail(*sb, sb->toks[1], "sigma_B must be a pairing over B with the diagonal coefficient");
    r->sigmaB = pb.sigma;
  }
  Entity e;
  e.kind = EntityKind::Relative;
  e.relative = r;
  return e;
}

Entity Parser::corpus() {
  check_keys({"name", "description", "broken", "category", "functor", "bimodule", "morphism", "pairing", "relative",
              "expect"});
  auto c = std::make_shared<CorpusEntry>();
  c->name = rest("name", true);
  c->description = rest("description", false);
  if (auto* b = header("broken", false)) {
    nargs(*b, 1);
    if (b->toks[1].s != "yes" && b->toks[1].s != "no") fail(*b, b->toks[1], "broken must be yes or no");
    c->broken = b->toks[1].s == "yes";
  }
  c->cat = cat_ref(*header("category", true), 1);
  for (auto* L : all("functor")) {
    nargs(*L, 1);
    c->functors.push_back(ref(*L, 1, EntityKind::Functor).fun);
  }
  for (auto* L : all("bimodule")) {
    nargs(*L, 1);
    c->bimodules.push_back(ref(*L, 1, EntityKind::Bimodule).bimod);
  }
  for (auto* L : all("morphism")) {
    nargs(*L, 1);
    c->morphisms.push_back(*ref(*L, 1, EntityKind::Morphism).mor);
  }
  for (auto* L : all("pairing")) {
    nargs(*L, 1);
    c->pairings.push_back(*ref(*L, 1, EntityKind::Pairing).pairing);
  }
  if (auto* L = header("relative", false)) {
    nargs(*L, 1);
    c->relative = *ref(*L, 1, EntityKind::Relative).relative;
  }
  for (auto* L : all("expect")) c->expect.push_back(L->rest);
  Entity e;
  e.kind = EntityKind::Corpus;
  e.corpus = c;
  return e;
}

Entity Parser::run() {
  if (lines_.empty()) fail(1, 1, "empty spec file");
  const Line& first = lines_[0];
  if (first.toks[0].s != "kind") fail(first, first.toks[0], "first line must be 'kind <entity>'");
  nargs(first, 1);
  used_.insert(0);
  for (std::size_t i = 1; i < lines_.size(); ++i)
    if (lines_[i].toks[0].s == "kind") fail(lines_[i], "one entity per file");
  const std::string& k = first.toks[1].s;
  Entity e;
  try {
    if (k == "category")
      e = category();
    else if (k == "functor")
      e = functor();
    else if (k == "bimodule")
      e = bimodule();
    else if (k == "morphism")
      e = morphism();
    else if (k == "pairing")
      e = pairing();
    else if (k == "relative")
      e = relative();
    else if (k == "corpus")
      e = corpus();
    else
      fail(first, first.toks[1], "unknown entity kind '" + k + "'");
  } catch (const std::invalid_argument& ex) {
    // library-side type checks without a finer position
    fail(first, first.toks[1], ex.what());
  }
  e.path = path_;
  return e;
}

}  // namespace

const Entity& SpecLoader::load(const std::string& path) {
  std::string key = fs::weakly_canonical(fs::path(path)).string();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_text(path, ss.str());
}

const Entity& SpecLoader::load(const std::string& path, EntityKind want) {
  const Entity& e = load(path);
  if (e.kind != want)
    throw SpecError(path, 1, 1, std::string("expected a ") + kind_name(want) + ", found a " + kind_name(e.kind));
  return e;
}

const Entity& SpecLoader::load_text(const std::string& path, const std::string& text) {
  std::string key = fs::weakly_canonical(fs::path(path)).string();
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  for (auto& a : active_)
    if (a == key) throw SpecError(path, 0, 0, "reference cycle");
  active_.push_back(key);
  try {
    Parser p(*this, path, text);
    Entity e = p.run();
    active_.pop_back();
    return cache_.emplace(key, std::move(e)).first->second;
  } catch (...) {
    active_.pop_back();
    throw;
  }
}

// ---- emission ----

namespace {

std::string sanitize(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '+')
      r += c;
    else if (c == '^')
      r += "_dual";
    else if (c == '*')
      r += "_pull";
    else if (c == ')' || c == '>')
      continue;
    else
      r += '_';
  }
  return r.empty() ? "unnamed" : r;
}

void need(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("cannot emit: " + what);
}

std::string vec_text(const Vec& v, const std::function<std::string(int)>& name) {
  if (v.empty()) return "0";
  std::string s;
  for (int g : v) s += (s.empty() ? "" : " + ") + name(g);
  return s;
}

std::string objs_text(const Category& c, const std::vector<int>& objs) {
  std::string s;
  for (std::size_t i = 0; i < objs.size(); ++i) s += (i ? "," : "") + c.objects[objs[i]];
  return s;
}

std::vector<int> chain_objs(const Category& c, const Word& w, int start) {
  std::vector<int> o = {start};
  for (int g : w) o.push_back(c.gens[g].tgt);
  return o;
}

std::string value_token(const Bimodule& m, int g) { return m.gens[g].label + (m.gens[g].dual ? "^" : ""); }

std::string bikey_text(const Bimodule& m, const BiKey& k) {
  const auto& w = m.gens[k.w];
  auto lo = k.left.empty() ? std::vector<int>{w.x} : chain_objs(*m.A, k.left, m.A->gens[k.left.front()].src);
  auto ro = chain_objs(*m.B, k.right, w.y);
  std::string s = std::to_string(k.left.size()) + "|" + std::to_string(k.right.size()) + " (" + objs_text(*m.A, lo) +
                  ";" + objs_text(*m.B, ro) + ")";
  for (int g : k.left) s += " " + m.A->gens[g].label;
  s += " | " + value_token(m, k.w) + " |";
  for (int g : k.right) s += " " + m.B->gens[g].label;
  return s;
}

void check_labels(const Category& c) {
  for (auto& o : c.objects) need(object_label(o), "object label '" + o + "'");
  for (auto& g : c.gens) need(plain_label(g.label), "generator label '" + g.label + "'");
}

}  // namespace

std::string SpecEmitter::put(const std::string& stem, const std::string& kind, const std::string& text) {
  std::string base = sanitize(stem);
  for (int n = 1;; ++n) {
    std::string name = base + (n > 1 ? "-" + std::to_string(n) : "") + "." + kind + ".ainf";
    bool clash = false;
    for (auto& f : files_)
      if (f.name == name) {
        if (f.text == text) return name;
        clash = true;
      }
    if (!clash) {
      files_.push_back({name, text});
      return name;
    }
  }
}

std::string SpecEmitter::add(CatPtr c) {
  if (c->is_ground()) return "ground";
  if (auto it = seen_.find(c.get()); it != seen_.end()) return it->second;
  check_labels(*c);
  std::ostringstream os;
  os << "kind category\nname " << c->name << "\nmode " << (c->graded ? "graded" : "ungraded") << "\ndegree " << c->N
     << "\narity_bound " << c->arity_bound << "\nobjects";
  for (auto& o : c->objects) os << " " << o;
  os << "\n";
  for (int g = 0; g < c->ngen();) {
    int s = c->gens[g].src, t = c->gens[g].tgt;
    os << "hom " << c->objects[s] << " " << c->objects[t];
    for (; g < c->ngen() && c->gens[g].src == s && c->gens[g].tgt == t; ++g)
      os << " " << c->gens[g].label << ":" << c->gens[g].degree;
    os << "\n";
  }
  for (auto& [w, out] : c->mu) {
    os << "mu " << w.size() << " (" << objs_text(*c, chain_objs(*c, w, chain_start(*c, w))) << ")";
    for (int g : w) os << " " << c->gens[g].label;
    os << " -> " << vec_text(out, [&](int g) { return c->gens[g].label; }) << "\n";
  }
  return seen_[c.get()] = put(c->name, "category", os.str());
}

std::string SpecEmitter::add(FunPtr f) {
  if (auto it = seen_.find(f.get()); it != seen_.end()) return it->second;
  std::string s = add(f->src), t = add(f->tgt);
  std::ostringstream os;
  os << "kind functor\nname " << f->name << "\nsource " << s << "\ntarget " << t << "\narity_bound " << f->arity_bound
     << "\n";
  for (int x = 0; x < f->src->nobj(); ++x)
    os << "objmap " << f->src->objects[x] << " " << f->tgt->objects[f->objmap[x]] << "\n";
  for (auto& [w, out] : f->comps) {
    os << "comp " << w.size() << " (" << objs_text(*f->src, chain_objs(*f->src, w, chain_start(*f->src, w))) << ")";
    for (int g : w) os << " " << f->src->gens[g].label;
    os << " -> " << vec_text(out, [&](int g) { return f->tgt->gens[g].label; }) << "\n";
  }
  return seen_[f.get()] = put(f->name + "." + f->src->name + "-" + f->tgt->name, "functor", os.str());
}

std::string SpecEmitter::add(BimodPtr m) {
  if (auto it = seen_.find(m.get()); it != seen_.end()) return it->second;
  std::string a = add(m->A), b = add(m->B);
  std::ostringstream os;
  os << "kind bimodule\nname " << m->name << "\nleft " << a << "\nright " << b << "\n";
  for (auto& g : m->gens) {
    need(plain_label(g.label), "value label '" + g.label + "'");
    os << "gen " << g.label << " " << m->A->objects[g.x] << " " << m->B->objects[g.y] << " " << g.degree
       << (g.dual ? " dual" : "") << "\n";
  }
  for (auto& [k, out] : m->mu)
    os << "mu " << bikey_text(*m, k) << " -> " << vec_text(out, [&](int g) { return value_token(*m, g); }) << "\n";
  return seen_[m.get()] = put(m->name, "bimodule", os.str());
}

// morphisms and pairings are value types; put() merges identical files
std::string SpecEmitter::add(const PreMorphism& v) {
  std::string s = add(v.src), t = add(v.tgt);
  std::ostringstream os;
  os << "kind morphism\nsource " << s << "\ntarget " << t << "\ndegree " << v.degree << "\ntruncation "
     << (v.trunc == kExact ? std::string("exact") : std::to_string(v.trunc)) << "\n";
  for (auto& [k, out] : v.comps)
    os << "comp " << bikey_text(*v.src, k) << " -> " << vec_text(out, [&](int g) { return value_token(*v.tgt, g); })
       << "\n";
  return put(v.src->name + "-to-" + v.tgt->name, "morphism", os.str());
}

std::string SpecEmitter::add(const Pairing& p) {
  std::string c = add(p.cat), m = add(p.coeff);
  std::ostringstream os;
  os << "kind pairing\nname " << p.name << "\ncategory " << c << "\ncoefficient " << m << "\n";
  for (int g : p.sigma)
    os << "sigma " << p.cat->objects[p.coeff->gens[g].x] << " " << p.cat->objects[p.coeff->gens[g].y] << " "
       << value_token(*p.coeff, g) << "\n";
  os << "expect " << (p.expect_nondegenerate ? "nondegenerate" : "degenerate") << "\n";
  return put(p.name, "pairing", os.str());
}

std::string SpecEmitter::add(const RelativeData& r, const std::string& name) {
  std::string a = add(r.A), b = add(r.B), i = add(r.I), ir = add(r.irel);
  Pairing cand{name + "_sigma_A", r.A, r.Arel, r.sigmaA, true};
  Pairing sb{name + "_sigma_B", r.B, r.irel.src, r.sigmaB, true};
  std::ostringstream os;
  os << "kind relative\nname " << name << "\nA " << a << "\nB " << b << "\nshift " << r.j << "\nI " << i << "\ni_rel "
     << ir << "\ncandidate " << add(cand) << "\nsigma_B " << add(sb) << "\n";
  return put(name, "relative", os.str());
}

std::string SpecEmitter::add(const CorpusEntry& e) {
  std::ostringstream os;
  os << "kind corpus\nname " << e.name << "\n";
  if (!e.description.empty()) os << "description " << e.description << "\n";
  os << "broken " << (e.broken ? "yes" : "no") << "\ncategory " << add(e.cat) << "\n";
  for (auto& f : e.functors) os << "functor " << add(f) << "\n";
  for (auto& m : e.bimodules) os << "bimodule " << add(m) << "\n";
  for (auto& v : e.morphisms) os << "morphism " << add(v) << "\n";
  for (auto& p : e.pairings) os << "pairing " << add(p) << "\n";
  if (e.relative) os << "relative " << add(*e.relative, e.name) << "\n";
  for (auto& x : e.expect) os << "expect " << x << "\n";
  std::string name = manifest_name(e.name);
  files_.insert(files_.begin(), {name, os.str()});
  return name;
}

std::string manifest_name(const std::string& entry) { return sanitize(entry) + ".corpus.ainf"; }

std::vector<EmittedFile> emit_corpus(const CorpusEntry& e) {
  SpecEmitter em;
  em.add(e);
  return em.files();
}

void write_files(const std::vector<EmittedFile>& files, const std::string& dir) {
  fs::create_directories(dir);
  for (auto& f : files) {
    std::ofstream out(fs::path(dir) / f.name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / f.name).string());
    out << f.text;
  }
}

}  // namespace ainf
