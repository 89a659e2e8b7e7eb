#include <doctest.h>

#include <cstdlib>

#include "smforge/lemmas.hpp"
#include "smforge/search.hpp"
#include "smforge/tower.hpp"
#include "support.hpp"

using namespace smf;

TEST_CASE("budget validation") {
  SearchBudget b;
  b.max_history_length = -1;
  CHECK_THROWS_AS(b.validate(), Error);
  SearchBudget ok;
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("enumerate from the accept configuration") {
  Machine m = build_m1({"a"}, 2);
  AdmissibleWord acc = m.accept_config();
  SearchBudget b;
  b.max_history_length = 1;
  long admissible = 0;
  for (auto& r : m.rules) admissible += is_theta_admissible(m, acc, r);
  long seen = 0, empty = 0;
  enumerate_reduced(m, acc, b, [&](const Computation& c) {
    ++seen;
    empty += c.length() == 0;
    return true;
  });
  CHECK(empty == 1);
  CHECK(seen == admissible + 1);

  b.max_history_length = 0;
  CHECK(enumerate_reduced(m, acc, b, [](const Computation&) { return true; }) == 1);
}

TEST_CASE("enumeration order and content") {
  Machine m = build_m1({"a"}, 2);
  AdmissibleWord w0 = input_m1(m, {1, 1});
  History canon = canonical_accepting_m1(m, {1}, 2);
  SearchBudget b;
  b.max_history_length = 7;
  bool found = false;
  History prev;
  bool ordered = true;
  enumerate_reduced(m, w0, b, [&](const Computation& c) {
    if (c.history == canon) found = true;
    if (prev.size() > c.history.size() || (prev.size() == c.history.size() && !(prev < c.history) && !prev.empty()))
      ordered = false;
    prev = c.history;
    if (!is_reduced_history(m, c.history)) ordered = false;
    return true;
  });
  CHECK(found);
  CHECK(ordered);

  b.frontier_cap = 2;
  try {
    enumerate_reduced(m, w0, b, [](const Computation&) { return true; });
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
    CHECK(e.detail() >= 0);
  }
}

TEST_CASE("counts do not depend on the worker count") {
  Machine m = build_m1({"a", "b"}, 2);
  AdmissibleWord w0 = input_m1(m, {1, 2, 1, 2});
  SearchBudget b;
  b.max_history_length = 9;
  auto at_end = [&](const AdmissibleWord& w) { return w.q == m.end_config().q; };
  auto c1 = count_reduced(m, w0, b, at_end, 1);
  auto c4 = count_reduced(m, w0, b, at_end, 4);
  CHECK(c1 == c4);
  CHECK(count_reduced(m, w0, b, nullptr, 1) == count_reduced(m, w0, b, nullptr, 3));

  long n = 0;
  enumerate_reduced(m, w0, b, [&](const Computation& c) {
    n += at_end(c.final());
    return true;
  });
  long total = 0;
  for (long x : c1) total += x;
  CHECK(total == n);
}

TEST_CASE("M1 decider") {
  Machine m = build_m1({"a", "b"}, 2);
  M1Decision d = decide_accept_m1(m, 2, input_m1(m, {1, 1}));
  CHECK(d.outcome == Outcome::Accepted);
  CHECK(d.witness.size() == 7);
  CHECK(d.accepting == 1);
  CHECK(d.bound == m1_length_bound(2, input_m1(m, {1, 1})));
  CHECK(d.bound == (30 * 4 + 24 * 2) * 7);

  CHECK(decide_accept_m1(m, 2, input_m1(m, {1, 1, 1})).outcome == Outcome::Rejected);
  M1Decision acc = decide_accept_m1(m, 2, m.accept_config());
  CHECK(acc.outcome == Outcome::Accepted);
  CHECK(acc.witness.empty());

  Word a{1}, b{2};
  CheckResult r = check_m1_uniqueness({"a", "b"}, 2, {concat(a, b), Word{1, 1, 2}, Word{1, 1, 1}});
  CHECK_MESSAGE(r.ok(), r.detail);
}

TEST_CASE("decider agrees with root extraction") {
  for (int n : {2, 3}) {
    CheckResult r = check_m1_language({"a", "b"}, n, 4);
    CHECK_MESSAGE(r.ok(), r.detail);
    CHECK(r.cases == 1 + 4 + 12 + 36 + 108);
  }
}

TEST_CASE("bounded acceptance") {
  Machine m = build_m1({"a"}, 2);
  SearchBudget b;
  b.max_history_length = 7;
  AcceptResult r = bounded_accept(m, input_m1(m, {1, 1}), b);
  REQUIRE(r.outcome == Outcome::Accepted);
  CHECK(run(m, input_m1(m, {1, 1}), r.witness).final() == m.accept_config());
  CHECK(r.witness.size() == 7);

  b.max_history_length = 6;
  CHECK(bounded_accept(m, input_m1(m, {1, 1}), b).outcome == Outcome::Incomplete);

  TowerParams p;
  p.n = 2;
  p.k = 2;
  CheckResult m3 = check_m3_bounded_accept(p);
  CHECK_MESSAGE(m3.ok(), m3.detail);
}

TEST_CASE("time function") {
  Machine m = build_m1({"a"}, 2);
  SearchBudget b;
  b.max_history_length = 12;
  auto rows = time_function(m, 2, b);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].time == 3);
  CHECK(rows[2].time == 7);
  CHECK(rows[1].accepted == 0);
  CHECK(rows[2].accepted == 2);  // a^2 and a^-2
}

TEST_CASE("worker count from the environment") {
  setenv("SMFORGE_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("SMFORGE_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  unsetenv("SMFORGE_THREADS");
}

TEST_CASE("decider counts match enumeration at small bounds") {
  Machine m = build_m1({"a", "b"}, 2);
  auto at_accept = [&](const AdmissibleWord& w) { return w == m.accept_config(); };
  for (const Word& w : {Word{}, Word{1}, Word{1, 1}, Word{2, 2}, Word{1, 2}, Word{1, -2}}) {
    AdmissibleWord w0 = input_m1(m, w);
    for (int bound : {7, 9}) {
      SearchBudget b;
      b.max_history_length = bound;
      long brute = 0;
      for (long x : count_reduced(m, w0, b, at_accept)) brute += x;
      M1Decision d = decide_accept_m1(m, 2, w0, bound);
      CHECK_MESSAGE(d.accepting == brute, "w length " << w.size() << " bound " << bound);
    }
  }
}
