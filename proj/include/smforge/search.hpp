#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smforge/machine.hpp"

namespace smf {

struct SearchBudget {
  int max_history_length = 8;
  int max_word_norm = 0;   // 0: no norm pruning
  long frontier_cap = 0;   // 0: no cap on computations of one length
  void validate() const;   // throws InvalidParams
};

// Worker count from SMFORGE_THREADS, defaulting to the hardware concurrency.
int worker_count();

// Every reduced computation from w0 within the budget, in length-lexicographic
// order of the history (rule indices).  The visitor may return false to stop.
// Returns the number of computations visited; throws BudgetExceeded with the
// partial count when one length holds more than frontier_cap computations.
long enumerate_reduced(const Machine& m, const AdmissibleWord& w0, const SearchBudget& budget,
                       const std::function<bool(const Computation&)>& visit);

// Number of reduced computations of each length 0..max_history_length whose
// final word satisfies the filter (all when null).  Parallel over first rules;
// the result does not depend on the worker count.
std::vector<long> count_reduced(const Machine& m, const AdmissibleWord& w0, const SearchBudget& budget,
                                const std::function<bool(const AdmissibleWord&)>& filter = nullptr,
                                int workers = 0);

enum class Outcome { Accepted, Rejected, Incomplete };
const char* outcome_name(Outcome o);

struct AcceptResult {
  Outcome outcome = Outcome::Incomplete;
  History witness;
  long explored = 0;
  std::string note;
};

// Shortest accepting computation by breadth-first search over words (states
// are deduplicated, which is fine for a yes/no answer).  Rejected means the
// whole reachable set within the budget was exhausted.
AcceptResult bounded_accept(const Machine& m, const AdmissibleWord& w0, const SearchBudget& budget);

struct M1Decision {
  Outcome outcome = Outcome::Incomplete;
  History witness;
  long accepting = 0;  // accepting reduced computations of length <= bound
  long bound = 0;
  long lemma_bound = 0;
  long branches = 0;
  std::string note;
};

// (30n^2+24n) * ||w||
long m1_length_bound(int n, const AdmissibleWord& w);

// Complete decision for M1.  Each maximal one-phase segment acts on the
// sectors by multiplying with a single free-group element, so a computation
// is a walk over phases with one group element per visit.  Free elements are
// kept as unknowns and eliminated by solving the emptiness equations that
// locks and the accept configuration impose.  bound < 0 uses m1_length_bound.
M1Decision decide_accept_m1(const Machine& m1, int n, const AdmissibleWord& w0, long bound = -1);

struct TimeRow {
  int size = 0;        // |W|_a limit
  int time = -1;       // max over accepted inputs of the min accepting time, -1 if none
  int accepted = 0;    // accepted inputs with this exact a-length
  int incomplete = 0;  // inputs whose search hit the budget
};

// Inputs are all reduced words over A whose input configuration has
// a-length <= size_limit.
std::vector<TimeRow> time_function(const Machine& m, int size_limit, const SearchBudget& budget);

}  // namespace smf
