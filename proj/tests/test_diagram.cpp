#include <doctest.h>

#include "smforge/combinators.hpp"
#include "smforge/diagram.hpp"
#include "smforge/lemmas.hpp"
#include "smforge/search.hpp"
#include "smforge/serialize.hpp"
#include "smforge/tower.hpp"
#include "support.hpp"

using namespace smf;

namespace {

TowerParams desk() {
  TowerParams p;
  p.n = 2;
  p.k = 2;
  p.L = 3;
  return p;
}

template <class F>
ErrorKind error_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Invalid;
}

bool cyclic_equal(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  Word aa = concat(a, a);
  for (size_t i = 0; i < a.size(); ++i)
    if (std::equal(b.begin(), b.end(), aa.begin() + static_cast<long>(i))) return true;
  return false;
}

// Parts P, Q with one sector over {x}; the only rule moves p to p' and locks
// every sector.
Machine locked_machine() {
  auto hw = std::make_shared<Hardware>();
  hw->add_part("P");
  hw->add_part("Q");
  hw->init_sectors();
  int p = hw->add_state(0, "p");
  int p2 = hw->add_state(0, "p'");
  int q = hw->add_state(1, "q");
  hw->parts[0].start = p;
  hw->parts[0].end = p2;
  hw->parts[1].start = hw->parts[1].end = q;
  hw->add_tape(1, "x");
  RawMachine raw;
  raw.name = "Lock";
  raw.hw = hw;
  RawRule r;
  r.id = "lock";
  r.step = "l";
  r.parts = {{Word{p}, Word{p2}}, {Word{q}, Word{q}}};
  r.locks = {0, 1, 2};
  raw.rules.push_back(r);
  return normalize_rules(raw);
}

Necklace necklace(const std::string& s) {
  Necklace o;
  for (char c : s) o.beads.push_back(c == 'w' ? Bead::White : Bead::Black);
  return o;
}

}  // namespace

TEST_CASE("theta-band for one rule") {
  Machine m = build_m1({"a"}, 2);
  AdmissibleWord W = parse_admissible(m.hardware(), "q0(1) a1 q1(1) q2(1) q3(1) q4(1)");
  int ri = m.rule_index("tau1(a)");
  Diagram d = theta_band(m, W, ri);
  CHECK(d.count(CellKind::ThetaQ) == 5);
  CHECK(d.count(CellKind::ThetaA) == 1);
  int la = W.a_length(), lb = static_cast<int>(W.q.size());
  CHECK(d.area() >= la - lb);
  CHECK(d.area() <= la + 3 * lb);
  CHECK(d.tbot() == W.flat());
  CHECK(d.ttop() == apply(m, W, ri).flat());
  CHECK(d.history() == History{ri});

  Machine lk = locked_machine();
  AdmissibleWord E = lk.start_config();
  Diagram b = theta_band(lk, E, 0);
  CHECK(b.area() == 2);
  CHECK(b.count(CellKind::ThetaQ) == 2);

  AdmissibleWord full = lk.start_config({{1, Word{lk.hardware().id("x")}}});
  CHECK_FALSE(is_theta_admissible(lk, full, lk.rules[0]));
  CHECK(error_of([&] { theta_band(lk, full, 0); }) == ErrorKind::NotAdmissible);
}

TEST_CASE("theta-bands are one-rule computations") {
  auto g = testing::rng(41);
  TowerParams p = desk();
  std::vector<Machine> ms{build_m1({"a", "b"}, 2), build_m2(p), build_m(p)};
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const Machine& m = ms[t % ms.size()];
    Computation c = testing::random_walk(m, m.input_config(testing::random_word(g, 2, static_cast<int>(g() % 4))),
                                         static_cast<int>(g() % 6), g);
    const AdmissibleWord& W = c.final();
    std::vector<int> ok;
    for (size_t ri = 0; ri < m.rules.size(); ++ri)
      if (is_theta_admissible(m, W, m.rules[ri])) ok.push_back(static_cast<int>(ri));
    if (ok.empty()) continue;
    int ri = ok[g() % ok.size()];
    Diagram d = theta_band(m, W, ri);
    CHECK(d.tbot() == W.flat());
    CHECK(d.ttop() == apply(m, W, ri).flat());
    CHECK(check_bands(d).ok());
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("trapezia") {
  Machine l = lr({"a"});
  AdmissibleWord w0 = l.start_config({{1, sector_copy(l.hardware(), 1, {1})}});
  Computation c = run(l, w0, standard_lr(l, {1}));
  Diagram d = trapezium(c);
  CHECK(d.bands().size() == 3);
  CHECK(d.history() == c.history);

  Machine m1 = build_m1({"a"}, 2);
  Computation c1 = run(m1, input_m1(m1, {1, 1}), canonical_accepting_m1(m1, {1}, 2));
  Diagram t = trapezium(c1);
  CHECK(t.bands().size() == 7);
  CHECK(t.area() == 49);
  CHECK(t.tbot() == c1.initial().flat());
  CHECK(t.ttop() == c1.final().flat());
  CHECK(t.is_disk());

  Computation one = run(m1, input_m1(m1, {1, 1}), {c1.history[0]});
  CHECK(trapezium(one).area() == theta_band(m1, one.initial(), one.history[0]).area());

  Computation none = run(m1, input_m1(m1, {1, 1}), {});
  CHECK(error_of([&] { trapezium(none); }) == ErrorKind::EmptyHistory);

  auto g = testing::rng(42);
  CheckResult r = check_trapezia(desk(), g, 120);
  CHECK_MESSAGE(r.ok(), r.detail);
}

TEST_CASE("disk diagrams") {
  TowerParams p = desk();
  Machine M = build_m(p);
  Diagram hub = disk_diagram(M, M.accept_config(), {});
  CHECK(hub.area() == 1);
  CHECK(hub.hubs() == 1);

  AdmissibleWord I = config_I(M, {1, 1});
  History h = canonical_accepting_m(M, {1}, 1, p);
  Diagram d = disk_diagram(M, I, h);
  CHECK(cyclic_equal(d.boundary(), I.flat()));
  CHECK(d.hubs() == 1);
  CHECK(d.area() == trapezium(run(M, I, h)).area() + 1);
  CHECK(d.area() == 1399);
  CHECK(d.is_disk());
  CHECK(check_bands(d).ok());

  History bad = h;
  bad.pop_back();
  CHECK(error_of([&] { disk_diagram(M, I, bad); }) == ErrorKind::WitnessInvalid);
  CHECK(error_of([&] { disk_diagram(M, config_J(M, {1, 1}), h); }) == ErrorKind::WitnessInvalid);

  CheckResult r = check_disks(p, 1);
  CHECK_MESSAGE(r.ok(), r.detail);
}

TEST_CASE("u^n diagrams") {
  TowerParams p = desk();
  Machine M = build_m(p);
  int s = special_input_sector(M);
  for (const Word& u : {Word{1}, Word{1, 2}}) {
    Diagram d = un_diagram(M, u, p);
    Word b = cyclic_reduce(reduce(d.boundary()));
    CHECK(cyclic_equal(b, cyclic_reduce(sector_copy(M.hardware(), s, power(u, p.n)))));
    CHECK(d.is_disk());
    CHECK(d.hubs() == 2);
  }
  CHECK(error_of([&] { un_diagram(M, {1, -1}, p); }) == ErrorKind::EmptyWord);

  Diagram d = un_diagram(M, {1}, p);
  Diagram m = mirror(d);
  CHECK(m.area() == d.area());
  CHECK(relator_key(m.boundary()) == relator_key(d.boundary()));
}

TEST_CASE("modified length") {
  Rational delta(1, 100);
  using K = GenKind;
  CHECK(modified_length(std::vector<K>{K::A}, delta) == delta);
  CHECK(modified_length(std::vector<K>{K::Theta, K::A}, delta) == Rational(1));
  CHECK(modified_length(std::vector<K>{K::Q, K::Theta, K::A, K::A}, delta) == 2 + delta);
  CHECK(modified_length(std::vector<K>{}, delta) == Rational(0));
  CHECK(modified_length_brute(std::vector<K>{K::Q, K::Theta, K::A, K::A}, delta) == 2 + delta);

  CheckResult r = check_modified_length(delta, 6);
  CHECK_MESSAGE(r.ok(), r.detail);
  auto g = testing::rng(43);
  CheckResult s = check_length_subadditivity(delta, g, 300);
  CHECK_MESSAGE(s.ok(), s.detail);
}

TEST_CASE("metric parameters") {
  MetricParams mp = MetricParams::parse("delta = 1/50\nC1 = 20\nJ = 3\nn = 2\n");
  CHECK(mp.delta == Rational(1, 50));
  CHECK(mp.C1 == Rational(20));
  CHECK(mp.J == 3);
  CHECK(MetricParams::parse(mp.str()).str() == mp.str());
  CHECK(MetricParams::parse("").str() == MetricParams().str());
  CHECK(error_of([] { MetricParams::parse("delta = 1"); }) == ErrorKind::InvalidParams);
  CHECK(error_of([] { MetricParams::parse("C1 = 0"); }) == ErrorKind::InvalidParams);
  CHECK(error_of([] { MetricParams::parse("J = 0"); }) == ErrorKind::InvalidParams);
  CHECK(parse_rational(" 3 / 6 ") == Rational(1, 2));
  CHECK(rational_str(Rational(4, 2)) == "2");
}

TEST_CASE("weight and area") {
  Machine m = build_m1({"a"}, 2);
  auto X = std::make_shared<XAlphabet>(m);
  MetricParams mp;

  Diagram empty(X);
  CHECK(weight(empty, mp) == Rational(0));
  CHECK(empty.area() == 0);

  Diagram one(X);
  Letter th = X->theta(0, 1);
  Letter a = m.hardware().id("a1");
  one.add_cell(CellKind::ThetaA, Word{th, a, -th, -a});
  CHECK(weight(one, mp) == Rational(1));
  CHECK(one.area() == 1);

  Diagram hub = disk_diagram(m, m.accept_config(), {});
  Rational l = modified_length(*X, hub_word(m), mp.delta);
  CHECK(weight(hub, mp) == mp.C1 * l * l);
  CHECK(hub.area() == 1);
}

TEST_CASE("mixtures") {
  CHECK(mixture(necklace(""), 3) == 0);
  CHECK(mixture(necklace("bbb"), 3) == 0);
  CHECK(mixture(necklace("wwb"), 2) == 1);
  CHECK(mixture_brute(necklace("wwb"), 2) == 1);
  CHECK(mixture(necklace("wbwbb"), 2) == mixture(necklace("bbwbw"), 2));

  auto g = testing::rng(44);
  for (int t = 0; t < 200; ++t) {
    Necklace o;
    int len = static_cast<int>(g() % 12);
    for (int i = 0; i < len; ++i) o.beads.push_back(g() % 2 ? Bead::White : Bead::Black);
    int J = 1 + static_cast<int>(g() % 4);
    CHECK(mixture(o, J) == mixture_brute(o, J));
    Necklace r = o;
    if (!r.beads.empty()) std::rotate(r.beads.begin(), r.beads.begin() + 1, r.beads.end());
    CHECK(mixture(r, J) == mixture(o, J));
  }
  CheckResult r = check_mixtures(4, 8, g, 500);
  CHECK_MESSAGE(r.ok(), r.detail);

  Machine m = build_m1({"a"}, 2);
  XAlphabet X(m);
  Necklace o = necklace_of(X, m.accept_config().flat());
  CHECK(o.whites() == 0);
  CHECK(o.blacks() == m.hardware().nparts());
}

TEST_CASE("exports are deterministic") {
  Machine m1 = build_m1({"a"}, 2);
  Computation c = run(m1, input_m1(m1, {1, 1}), canonical_accepting_m1(m1, {1}, 2));
  Diagram a = trapezium(c), b = trapezium(c);
  CHECK(a.to_dot() == b.to_dot());
  CHECK(a.to_flat() == b.to_flat());
  CHECK(a.to_dot().find("graph") != std::string::npos);
  CHECK(a.to_flat().find("cell") != std::string::npos);
}
