#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace ainf {

struct Witness {
  int arity = 0;
  std::string where;
};

// Outcome of an exhaustive check: pass/fail plus a few localized witnesses.
struct Report {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t nfail = 0;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  void fail(int arity, std::string where) {
    ok = false;
    ++nfail;
    if (witnesses.size() < 16) witnesses.push_back({arity, std::move(where)});
  }
  void merge(const Report& o) {
    ok = ok && o.ok;
    checked += o.checked;
    nfail += o.nfail;
    for (auto& w : o.witnesses)
      if (witnesses.size() < 16) witnesses.push_back(w);
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
  }
  std::string str() const {
    std::ostringstream os;
    os << (ok ? "pass" : "FAIL") << " (" << checked << " checked";
    if (!ok) os << ", " << nfail << " failing";
    os << ")";
    for (auto& w : witnesses) os << "\n  arity " << w.arity << ": " << w.where;
    for (auto& n : notes) os << "\n  note: " << n;
    return os.str();
  }
};

}  // namespace ainf
