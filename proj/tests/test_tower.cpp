#include <doctest.h>

#include "smforge/lemmas.hpp"
#include "smforge/tower.hpp"
#include "support.hpp"

using namespace smf;

namespace {

TowerParams desk(int k = 2) {
  TowerParams p;
  p.n = 2;
  p.k = k;
  p.L = 3;
  return p;
}

BaseWord standard_segment(const Hardware& hw, int from, int to, int sign) {
  BaseWord b;
  int N = hw.nparts();
  for (int i = from;; i = (i + sign + N) % N) {
    b.push_back({hw.parts[i].name, sign});
    if (i == to) break;
  }
  return b;
}

}  // namespace

TEST_CASE("tower parameters") {
  TowerParams p = TowerParams::parse("alphabet = ab\nn = 3\nk = 4 # repetitions\nL = 5\n");
  CHECK(p.A == std::vector<std::string>{"a", "b"});
  CHECK(p.n == 3);
  CHECK(p.k == 4);
  CHECK(p.L == 5);
  CHECK(TowerParams::parse(p.str()).str() == p.str());
  CHECK(TowerParams::parse("alphabet = [\"x\", \"y\"]").A == std::vector<std::string>{"x", "y"});
  TowerParams bad = desk();
  bad.n = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(build_m2(bad), Error);
  CHECK_THROWS_AS(TowerParams::parse("n 2"), Error);
}

TEST_CASE("rule counts") {
  Machine m1 = build_m1({"a", "b"}, 2);
  CHECK(m1.npositive() == 11);
  CHECK(m1.hardware().nparts() == 5);

  TowerParams p = desk();
  Machine M = build_m(p), m51 = build_m51(p), m52 = build_m52(p);
  CHECK(M.npositive() == m51.npositive() + m52.npositive() + 4);
  CHECK(M.npositive() == 104);
  for (const char* id : {"theta(s)_1", "theta(s)_2", "theta(a)_1", "theta(a)_2"}) CHECK(M.rule(id).kind == RuleKind::Transition);
  CHECK(build_m4(p).hardware().nparts() == 11);
  CHECK(M.hardware().nparts() == 33);
  for (const char* name : {"m1", "m2", "m3", "m4", "m51", "m52", "m", "lr", "rl"}) CHECK_NOTHROW(build_named(name, p).validate());
  CHECK_THROWS_AS(build_named("m9", p), Error);
}

TEST_CASE("M1 canonical accepting computations") {
  Machine m2 = build_m1({"a", "b"}, 2), m3 = build_m1({"a", "b"}, 3);
  auto len = [](const Machine& m, int n, const Word& u) {
    Computation c = run(m, input_m1(m, reduce(power(u, n))), canonical_accepting_m1(m, u, n));
    CHECK(c.final() == m.accept_config());
    return c.length();
  };
  CHECK(len(m2, 2, {1}) == 7);
  CHECK(len(m2, 2, {}) == 3);
  CHECK(len(m3, 3, {1, 2}) == 17);
  History empty = canonical_accepting_m1(m2, {}, 2);
  for (int r : empty) CHECK(m2.rules[r].kind == RuleKind::Transition);

  for (int n : {2, 3}) CHECK(check_m1_lengths({"a", "b"}, n, 2).ok());
}

TEST_CASE("M1 no turn") {
  auto g = testing::rng(21);
  CheckResult r = check_m1_no_turn({"a", "b"}, 2, 7, g, 3);
  CHECK_MESSAGE(r.ok(), r.detail);
}

TEST_CASE("M2 controlled histories") {
  auto g = testing::rng(22);
  CheckResult r = check_m2_controlled(desk(3), 3, g, 6);
  CHECK_MESSAGE(r.ok(), r.detail);
  CHECK(r.cases > 0);
}

TEST_CASE("M3 designated subcomputation") {
  TowerParams p = desk(4);
  Machine m3 = build_m3(p);
  History h = canonical_accepting_m3(m3, {1}, p);
  CHECK(designated_subcomputation(m3, h, p.n).second == 17);
  CHECK(run(m3, m3.input_config({1, 1}), h).final() == m3.accept_config());

  TowerParams p2 = desk(2);
  Machine m32 = build_m3(p2);
  History h2 = canonical_accepting_m3(m32, {1, 2}, p2);
  CHECK(h2.size() == 52);
  CHECK(designated_subcomputation(m32, h2, 2).second == 13);

  CheckResult r = check_m3_designated(p, {2, 3, 4}, 2);
  CHECK_MESSAGE(r.ok(), r.detail);
}

TEST_CASE("M4 and M5 accepting lengths") {
  TowerParams p = desk();
  for (auto m : {build_m4(p), build_m51(p), build_m52(p)}) {
    History h = canonical_accepting_tower(m, {1}, p);
    CHECK(h.size() == 34);
    AdmissibleWord w0 = m.input_config({1, 1});
    // M5,2 keeps the special input sector empty
    if (m.name == "M52") w0.tape[m.hardware().sector_index("P0Q0@1") - 1].clear();
    CHECK(run(m, w0, h).final() == m.accept_config());
  }
}

TEST_CASE("M language") {
  TowerParams p = desk();
  Machine M = build_m(p);
  History h1 = canonical_accepting_m(M, {}, 1, p), h2 = canonical_accepting_m(M, {}, 2, p);
  CHECK(run(M, config_I(M, {}), h1).final() == M.accept_config());
  CHECK(run(M, config_J(M, {}), h2).final() == M.accept_config());
  CHECK(h1 != h2);
  CHECK(canonical_accepting_m(M, {1}, 1, p).size() == 36);

  // the second machine cannot start from I(w) with w != 1
  History bad = canonical_accepting_m(M, {1}, 2, p);
  REQUIRE(M.rules[bad[0]].id == "theta(s)_2");
  try {
    run(M, config_I(M, {1, 1}), bad);
    FAIL("expected FailsAtStep");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FailsAtStep);
    CHECK(e.detail() == 0);
  }
  CHECK(is_theta_admissible(M, config_J(M, {1, 1}), M.rule("theta(s)_1")));
  CHECK(is_theta_admissible(M, config_I(M, {1, 1}), M.rule("theta(s)_1")));

  CheckResult r = check_m_language(p, 2);
  CHECK_MESSAGE(r.ok(), r.detail);
}

TEST_CASE("M step grammar") {
  TowerParams p = desk();
  CheckResult t = check_m_turn(p, 3);
  CHECK_MESSAGE(t.ok(), t.detail);
  CheckResult s = check_m_step_history(p, 6, 1);
  CHECK_MESSAGE(s.ok(), s.detail);
}

TEST_CASE("components and coordinate shifts") {
  TowerParams p = desk();
  Machine M = build_m(p);
  const Hardware& hw = M.hardware();
  Word w{1, 2, 1, 2};
  AdmissibleWord I = config_I(M, w), J = config_J(M, w);
  AdmissibleWord I2 = component(M, I, 2);
  CHECK(component(M, I, 3) == coordinate_shift(hw, I2, 3));
  CHECK(coordinate_shift(hw, I2, 2) == I2);
  CHECK(coordinate_shift(hw, component(M, I, 1), 2) == I2);

  AdmissibleWord J1 = coordinate_shift(hw, component(M, J, 1), 2), J2 = component(M, J, 2);
  REQUIRE(J1.q == J2.q);
  int diff = 0;
  for (size_t i = 0; i < J1.tape.size(); ++i)
    if (J1.tape[i] != J2.tape[i]) {
      ++diff;
      CHECK(J1.tape[i].empty());
      CHECK(hw.sector_between(J2.q[i], J2.q[i + 1]) == hw.sector_index("P0Q0@2"));
    }
  CHECK(diff == 1);

  try {
    coordinate_shift(hw, I, 2);
    FAIL("expected MixedCoordinates");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MixedCoordinates);
  }
}

TEST_CASE("reverted bases and predicates") {
  BaseWord b = parse_base("Q4@1 T@2 P0@2 Q0@2 P1@2 Q1@2 Q1@2^-1 P1@2^-1");
  CHECK(reverted_base(b) == parse_base("Q4 T P0 Q0 P1 Q1 Q1^-1 P1^-1"));
  CHECK(base_word_str(parse_base("Q4@1 T@2^-1")) == "Q4@1 T@2^-1");

  Machine M = build_m(desk());
  const Hardware& hw = M.hardware();
  int t1 = hw.part_index("T@1"), t2 = hw.part_index("T@2");
  int q41 = hw.part_index("Q4@1"), q03 = hw.part_index("Q0@3");

  // Q0(3) Q0(3)^-1 P0(3)^-1 {t(3)}^-1 ... Q4(1)^-1 Q4(1) ... {t(3)} P0(3) Q0(3)
  BaseWord fb = standard_segment(hw, q03, q41, -1);
  fb.insert(fb.begin(), {hw.parts[q03].name, 1});
  BaseWord fwd = standard_segment(hw, q41, q03, 1);
  fb.insert(fb.end(), fwd.begin(), fwd.end());
  BaseFlags f = base_predicates(fb);
  CHECK(f.revolving);
  CHECK(f.faulty);
  CHECK_FALSE(f.hyperfaulty);

  BaseFlags s = base_predicates(standard_segment(hw, t1, t2, 1));
  CHECK(s.pararevolving);
  CHECK_FALSE(s.revolving);
  CHECK_FALSE(s.hyperfaulty);

  BaseWord full = standard_segment(hw, t1, (t1 + hw.nparts() - 1) % hw.nparts(), 1);
  full.push_back({hw.parts[t1].name, 1});
  BaseFlags r = base_predicates(full);
  CHECK(r.revolving);
  CHECK_FALSE(r.faulty);
  CHECK_FALSE(r.pararevolving);

  BaseFlags none = base_predicates(base_word(hw, config_I(M, {1, 1})));
  CHECK_FALSE(none.revolving);
  CHECK_FALSE(none.faulty);
  CHECK_FALSE(none.pararevolving);
  CHECK_FALSE(none.hyperfaulty);
}
