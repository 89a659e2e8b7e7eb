#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace smf {

// A letter is a nonzero int: +id for a symbol, -id for its inverse.
// Symbol ids start at 1 so that 0 can mean "no letter".
using Letter = int;
using Word = std::vector<Letter>;

enum class ErrorKind {
  NotAdmissible,
  FailsAtStep,
  NotNormalizable,
  ShapeMismatch,
  AlreadyCyclic,
  EmptyAlphabet,
  InvalidParams,
  BudgetExceeded,
  NotAccepted,
  WitnessInvalid,
  EmptyHistory,
  EmptyWord,
  MixedCoordinates,
  UnknownSuite,
  NotNormalized,
  Parse,
  Invalid,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long detail = -1)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
        kind_(kind), detail_(detail) {}
  ErrorKind kind() const { return kind_; }
  // step index for FailsAtStep, partial count for BudgetExceeded
  long detail() const { return detail_; }

 private:
  ErrorKind kind_;
  long detail_;
};

inline Letter inv(Letter x) { return -x; }

inline Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& x : r) x = -x;
  return r;
}

// Append x to a reduced word, cancelling against the last letter.
inline void push_reduced(Word& w, Letter x) {
  if (!w.empty() && w.back() == -x)
    w.pop_back();
  else
    w.push_back(x);
}

inline Word reduce(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (Letter x : w) push_reduced(r, x);
  return r;
}

inline bool is_reduced(const Word& w) {
  for (size_t i = 1; i < w.size(); ++i)
    if (w[i] == -w[i - 1]) return false;
  return true;
}

inline Word concat(const Word& a, const Word& b) {
  Word r = a;
  for (Letter x : b) push_reduced(r, x);
  return r;
}

inline Word power(const Word& w, int k) {
  Word base = k < 0 ? inverse(w) : w;
  Word r;
  for (int i = 0; i < (k < 0 ? -k : k); ++i)
    for (Letter x : base) push_reduced(r, x);
  return r;
}

// Split a reduced word as c * core * c^{-1} with core cyclically reduced.
inline void cyclic_split(const Word& w, Word& conj, Word& core) {
  size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) { ++i; --j; }
  conj.assign(w.begin(), w.begin() + i);
  core.assign(w.begin() + i, w.begin() + j);
}

inline Word cyclic_reduce(const Word& w) {
  Word c, core;
  cyclic_split(reduce(w), c, core);
  return core;
}

// Unique k-th root of w in the free group, if any (k >= 1).
inline bool free_root(const Word& w, int k, Word& out) {
  if (k <= 0) return false;
  Word c, core;
  cyclic_split(reduce(w), c, core);
  if (core.size() % k) return false;
  size_t m = core.size() / k;
  for (size_t i = m; i < core.size(); ++i)
    if (core[i] != core[i - m]) return false;
  out = c;
  for (size_t i = 0; i < m; ++i) out.push_back(core[i]);
  for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back(-*it);
  return true;
}

}  // namespace smf
