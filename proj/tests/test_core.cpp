#include <doctest.h>

#include <algorithm>

#include "smforge/combinators.hpp"
#include "smforge/search.hpp"
#include "smforge/serialize.hpp"
#include "smforge/tower.hpp"
#include "support.hpp"

using namespace smf;

namespace {

const Machine& m1a() {
  static Machine m = build_m1({"a"}, 2);
  return m;
}

AdmissibleWord w(const Machine& m, const std::string& s) { return parse_admissible(m.hardware(), s); }

// Two parts and one sector over {x, y}; rule mul(c) multiplies the sector by
// c on the left (left=true) or on the right.
Machine multiplier(bool left) {
  auto hw = std::make_shared<Hardware>();
  hw->add_part("P");
  hw->add_part("Q");
  hw->init_sectors();
  int p = hw->add_state(0, "p");
  int q = hw->add_state(1, "q");
  hw->parts[0].start = hw->parts[0].end = p;
  hw->parts[1].start = hw->parts[1].end = q;
  int x = hw->add_tape(1, "x");
  int y = hw->add_tape(1, "y");
  RawMachine raw;
  raw.name = "Mul";
  raw.hw = hw;
  for (auto [c, id] : {std::pair{x, "mul(x)"}, std::pair{y, "mul(y)"}}) {
    RawRule r;
    r.id = id;
    r.step = "m";
    if (left)
      r.parts = {{Word{p}, Word{p, c}}, {Word{q}, Word{q}}};
    else
      r.parts = {{Word{p}, Word{p}}, {Word{q}, Word{c, q}}};
    raw.rules.push_back(r);
  }
  return normalize_rules(raw);
}

}  // namespace

TEST_CASE("theta-admissibility") {
  const Machine& m = m1a();
  AdmissibleWord W = w(m, "q0(1) a1 q1(1) q2(1) q3(1) q4(1)");
  CHECK(is_theta_admissible(m, W, m.rule("tau1(a)")));
  CHECK_FALSE(is_theta_admissible(m, W, m.rule("sigma(23)")));
  AdmissibleWord V = w(m, "q0(1) a1 q1(1) a2 q2(1) q3(1) q4(1)");
  std::string why;
  CHECK_FALSE(is_theta_admissible(m, V, m.rule("tau1(a)"), &why));
  CHECK(why.find("Q1Q2") != std::string::npos);
}

TEST_CASE("apply") {
  const Machine& m = m1a();
  AdmissibleWord W = w(m, "q0(1) a1 q1(1) q2(1) q3(1) q4(1)");
  CHECK(apply(m, W, m.rule("tau1(a)")) == w(m, "q0(1) q1(1) q2(1) a3 q3(1) q4(1)"));

  Machine l = lr({"a"});
  CHECK(apply(l, w(l, "q(1) a1 p(1) q(2)"), l.rule("zeta1(a)")) == w(l, "q(1) p(1) a2 q(2)"));

  try {
    apply(m, m.accept_config(), m.rule("tau1(a)"));
    FAIL("expected NotAdmissible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAdmissible);
  }
}

TEST_CASE("inverse involution on random admissible pairs") {
  auto g = testing::rng(1);
  Machine m = build_m1({"a", "b"}, 2);
  int pairs = 0;
  while (pairs < 200) {
    Word u = testing::random_word(g, 2, static_cast<int>(g() % 3));
    Computation c = testing::random_walk(m, input_m1(m, power(u, 2)), 1 + static_cast<int>(g() % 12), g);
    for (int i = 0; i < c.length(); ++i, ++pairs) {
      const Rule& r = m.rules[c.history[i]];
      CHECK(m.rules[r.inverse].inverse == c.history[i]);
      CHECK(apply(m, c.words[i + 1], m.rules[r.inverse]) == c.words[i]);
    }
  }
}

TEST_CASE("run") {
  const Machine& m = m1a();
  History h = canonical_accepting_m1(m, {1}, 2);
  Computation c = run(m, input_m1(m, {1, 1}), h);
  CHECK(c.length() == 7);
  CHECK(c.final() == m.accept_config());
  CHECK(static_cast<int>(c.words.size()) == c.length() + 1);

  Computation e = run(m, m.accept_config(), {});
  CHECK(e.length() == 0);
  CHECK(e.words.size() == 1);

  try {
    run(m, m.accept_config(), {m.rule_index("tau1(a)")});
    FAIL("expected FailsAtStep");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::FailsAtStep);
    CHECK(err.detail() == 0);
  }
}

TEST_CASE("base preservation along random computations") {
  auto g = testing::rng(2);
  TowerParams p;
  p.n = 2;
  p.k = 2;
  for (const Machine& m : {build_m1({"a", "b"}, 3), build_m2(p), build_m3(p)}) {
    for (int t = 0; t < 30; ++t) {
      Word u = testing::random_word(g, 2, static_cast<int>(g() % 3));
      Computation c = testing::random_walk(m, m.input_config(u), 20, g);
      Base b = base_of(m.hardware(), c.initial());
      for (auto& x : c.words) {
        CHECK(base_of(m.hardware(), x) == b);
        CHECK(is_admissible(m.hardware(), x));
      }
    }
  }
}

TEST_CASE("step history") {
  const Machine& m = m1a();
  History h{m.rule_index("tau1(a)"), m.rule_index("sigma(12)"), m.rule_index("tau2(a)")};
  CHECK(step_str(step_history(m, h)) == "(1)(12)(2)");
  CHECK(step_history(m, {}).empty());
  CHECK(step_str(step_history(m, canonical_accepting_m1(m, {1}, 2))) == "(1)(12)(2)(23)(3)(34)(4)");
}

TEST_CASE("projection onto F(A)") {
  const Machine& m = m1a();
  CHECK(project_to_A(m.hardware(), w(m, "q0(1) a1 q1(1) q2(1) a3^-1 q3(1) q4(1)")).empty());
  CHECK(project_to_A(m.hardware(), input_m1(m, {1, 1})) == Word{1, 1});

  auto g = testing::rng(3);
  Machine mb = build_m1({"a", "b"}, 2);
  int tau1[] = {mb.rule_index("tau1(a)"), mb.rule_index("tau1(a)^-1"), mb.rule_index("tau1(b)"),
                mb.rule_index("tau1(b)^-1")};
  int applied = 0;
  for (int t = 0; t < 400; ++t) {
    AdmissibleWord x = input_m1(mb, testing::random_word(g, 2, static_cast<int>(g() % 6)));
    for (int r : tau1) {
      AdmissibleWord y;
      if (!try_apply(mb, x, mb.rules[r], y)) continue;
      CHECK(project_to_A(mb.hardware(), y) == project_to_A(mb.hardware(), x));
      ++applied;
      x = y;
    }
  }
  CHECK(applied > 100);
}

TEST_CASE("rule normalization") {
  const Machine& m = m1a();
  CHECK(write_machine(normalize_rules(m)) == write_machine(m));

  RawMachine raw;
  raw.name = "tau2";
  raw.hw = m.hw;
  const Hardware& h = m.hardware();
  auto id = [&](const char* s) { return h.id(s); };
  RawRule r;
  r.id = "tau2(a)";
  r.step = "(2)";
  r.parts = {{Word{id("q0(2)")}, Word{id("q0(2)")}},
             {Word{id("q1(2)")}, Word{id("q1(2)")}},
             {Word{id("q2(2)"), id("q3(2)")}, Word{id("a2"), id("q2(2)"), -id("a3"), id("q3(2)")}},
             {Word{id("q4(2)")}, Word{id("q4(2)")}}};
  r.locks = {4};
  raw.rules.push_back(r);
  Machine n = normalize_rules(raw);
  const Rule& got = n.rules[0];
  const Rule& want = m.rule("tau2(a)");
  CHECK(got.parts == want.parts);
  CHECK(got.locks == want.locks);

  RawMachine empty;
  empty.name = "E";
  empty.hw = m.hw;
  CHECK(normalize_rules(empty).rules.empty());

  RawRule bad = r;
  bad.parts[2] = {Word{id("q2(2)")}, Word{id("a2"), id("a2"), id("q2(2)")}};
  RawMachine badm = raw;
  badm.rules = {bad};
  CHECK_THROWS_AS(normalize_rules(badm), Error);
}

TEST_CASE("multiply one letter") {
  for (bool left : {true, false}) {
    Machine m = multiplier(left);
    const Hardware& h = m.hardware();
    auto g = testing::rng(left ? 4 : 5);
    for (int t = 0; t < 40; ++t) {
      Word u0 = testing::random_word(g, 2, static_cast<int>(g() % 4));
      for (Letter& x : u0) x = x > 0 ? h.tape[1][x - 1] : -h.tape[1][-x - 1];
      AdmissibleWord w0;
      w0.q = {h.parts[0].start, h.parts[1].start};
      w0.tape = {u0};
      SearchBudget b;
      b.max_history_length = 5;
      enumerate_reduced(m, w0, b, [&](const Computation& c) {
        const Word& ut = c.final().tape[0];
        // (a) the history is a copy of u_t u_0^-1 read right to left, or of
        // u_0^-1 u_t read left to right
        Word expect = left ? reduce(concat(ut, inverse(u0))) : reduce(concat(inverse(u0), ut));
        if (left) std::reverse(expect.begin(), expect.end());
        Word hist;
        for (int r : c.history) {
          const RulePart& rp = m.rules[r].parts[left ? 0 : 1];
          hist.push_back(left ? rp.right : rp.left);
        }
        CHECK(hist == expect);
        // (b), (d)
        size_t n0 = u0.size(), nt = ut.size();
        CHECK(c.history.size() <= n0 + nt);
        for (auto& x : c.words) CHECK(x.tape[0].size() <= std::max(n0, nt));
        // (c)
        for (int j = 1; j + 1 < static_cast<int>(c.words.size()); ++j)
          if (c.words[j - 1].tape[0].size() < c.words[j].tape[0].size())
            CHECK(c.words[j].tape[0].size() < c.words[j + 1].tape[0].size());
        return true;
      });
    }
  }
}

TEST_CASE("unreduced base") {
  Machine m = multiplier(true);
  const Hardware& h = m.hardware();
  int p = h.parts[0].start;
  auto g = testing::rng(6);
  long checked = 0;
  for (int t = 0; t < 40; ++t) {
    Word u0 = testing::random_word(g, 2, 1 + static_cast<int>(g() % 4));
    for (Letter& x : u0) x = x > 0 ? h.tape[1][x - 1] : -h.tape[1][-x - 1];
    AdmissibleWord w0;
    w0.q = {p, -p};
    w0.tape = {u0};
    REQUIRE(is_admissible(h, w0));
    SearchBudget b;
    b.max_history_length = 6;
    enumerate_reduced(m, w0, b, [&](const Computation& c) {
      size_t n0 = u0.size(), nt = c.final().tape[0].size();
      for (auto& x : c.words) CHECK(x.tape[0].size() <= std::max(n0, nt));
      // H = H1 H2^l H3 with |H1| <= n0/2, |H3| <= nt/2, |H2| <= min(n0, nt)
      const History& H = c.history;
      bool found = false;
      for (size_t i = 0; i <= n0 / 2 && i <= H.size() && !found; ++i)
        for (size_t k = 0; k <= nt / 2 && i + k <= H.size() && !found; ++k) {
          size_t len = H.size() - i - k;
          if (len == 0) {
            found = true;
            break;
          }
          for (size_t per = 1; per <= std::min(n0, nt) && !found; ++per) {
            if (len % per) continue;
            bool ok = true;
            for (size_t j = i + per; j < i + len && ok; ++j) ok = H[j] == H[j - per];
            found = ok;
          }
        }
      CHECK(found);
      ++checked;
      return true;
    });
  }
  CHECK(checked > 100);
}

TEST_CASE("locked sectors forbid unreduced bases") {
  Machine m = build_m1({"a", "b"}, 2);
  const Hardware& h = m.hardware();
  auto g = testing::rng(7);
  int probes = 0;
  for (auto& r : m.rules) {
    for (int j = 1; j < h.nparts(); ++j) {
      if (!r.locks[j]) continue;
      // base Q_{j-1} Q_{j-1}^-1 and Q_j^-1 Q_j with a nonempty tape word
      for (int side = 0; side < 2; ++side) {
        int part = side == 0 ? j - 1 : j;
        int q = r.parts[part].from;
        for (int t = 0; t < 3; ++t) {
          Word u = testing::random_word(g, 2, 1 + static_cast<int>(g() % 3));
          for (Letter& x : u) x = x > 0 ? h.tape[j][x - 1] : -h.tape[j][-x - 1];
          AdmissibleWord x;
          x.q = side == 0 ? std::vector<Letter>{q, -q} : std::vector<Letter>{-q, q};
          x.tape = {u};
          REQUIRE(is_admissible(h, x));
          CHECK_FALSE(is_theta_admissible(m, x, r));
          ++probes;
        }
      }
    }
  }
  CHECK(probes > 0);
}

TEST_CASE("machine format round trip") {
  TowerParams p;
  p.n = 2;
  p.k = 2;
  for (const Machine& m : {lr({"a", "b"}), rl({"a"}), build_m1({"a", "b"}, 2), build_m4(p), build_m(p)}) {
    std::string s = write_machine(m);
    Machine back = read_machine(s);
    CHECK(write_machine(back) == s);
    CHECK(back.rules.size() == m.rules.size());
  }
  CHECK_THROWS_AS(read_machine("smforge-machine 1\nname X\nbogus line\n"), Error);
}

TEST_CASE("trace round trip") {
  Machine m = build_m1({"a", "b"}, 2);
  Computation c = run(m, input_m1(m, {1, 2, 1, 2}), canonical_accepting_m1(m, {1, 2}, 2));
  std::string t = write_trace(c);
  Computation back = read_trace(m, t);
  CHECK(back.history == c.history);
  CHECK(write_trace(back) == t);

  // a tampered word is caught
  std::string bad = t;
  auto pos = bad.rfind("q4(4)");
  bad.replace(pos, 5, "q4(3)");
  CHECK_THROWS_AS(read_trace(m, bad), Error);
}
