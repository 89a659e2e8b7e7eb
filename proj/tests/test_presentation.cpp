#include <doctest.h>

#include "smforge/combinators.hpp"
#include "smforge/presentation.hpp"
#include "smforge/search.hpp"
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

// One part with states q and q' and no tape; optionally one rule q -> q'.
Machine one_part(bool with_rule) {
  auto hw = std::make_shared<Hardware>();
  hw->add_part("Q");
  hw->init_sectors();
  int q = hw->add_state(0, "q");
  int q2 = hw->add_state(0, "q'");
  hw->parts[0].start = q;
  hw->parts[0].end = q2;
  RawMachine raw;
  raw.name = "One";
  raw.hw = hw;
  if (with_rule) {
    RawRule r;
    r.id = "t";
    r.step = "t";
    r.parts = {{Word{q}, Word{q2}}};
    raw.rules.push_back(r);
  }
  return normalize_rules(raw);
}

// Sum over positive rules of the letters in unlocked sectors.
int theta_a_tally(const Machine& m) {
  const Hardware& hw = m.hardware();
  int n = 0;
  for (auto& r : m.rules) {
    if (!r.positive) continue;
    for (int j = 1; j <= hw.nparts(); ++j)
      if (!r.locks[j]) n += static_cast<int>(hw.tape[j].size());
  }
  return n;
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

}  // namespace

TEST_CASE("single rule, single part") {
  Machine m = one_part(true);
  Presentation P = presentation_M(m);
  REQUIRE(P.relators().size() == 1);
  const XAlphabet& X = P.alphabet();
  const Hardware& hw = m.hardware();
  Letter th = X.theta(0, 0);
  Word want{hw.id("q"), th, -hw.id("q'"), -th};
  CHECK(relator_key(P.relators()[0].word) == relator_key(want));
  CHECK(P.count(RelTag::ThetaQ) == 1);
  CHECK(P.count(RelTag::ThetaA) == 0);

  Presentation E = presentation_M(one_part(false));
  CHECK(E.relators().empty());
}

TEST_CASE("relator counts") {
  Machine l = lr({"a"});
  Presentation P = presentation_M(l);
  CHECK(P.count(RelTag::ThetaQ) == l.npositive() * l.hardware().nparts());
  CHECK(P.count(RelTag::ThetaQ) == 9);
  CHECK(P.count(RelTag::ThetaA) == 5);
  CHECK(P.count(RelTag::ThetaA) == theta_a_tally(l));

  Machine m1 = build_m1({"a"}, 2);
  Presentation Q = presentation_M(m1);
  CHECK(Q.count(RelTag::ThetaQ) == 35);
  CHECK(Q.count(RelTag::ThetaQ) == m1.npositive() * m1.hardware().nparts());
  CHECK(Q.count(RelTag::ThetaA) == 17);
  CHECK(Q.count(RelTag::ThetaA) == theta_a_tally(m1));

  Machine m1ab = build_m1({"a", "b"}, 3);
  CHECK(presentation_M(m1ab).count(RelTag::ThetaA) == theta_a_tally(m1ab));
}

TEST_CASE("relator shapes") {
  for (const Machine& m : {build_m1({"a", "b"}, 2), build_m(desk())}) {
    Presentation P = presentation_M(m);
    const XAlphabet& X = P.alphabet();
    for (auto& r : P.relators()) {
      int th = 0, q = 0, a = 0;
      for (Letter x : r.word) {
        GenKind k = X.kind(x);
        th += k == GenKind::Theta;
        q += k == GenKind::Q;
        a += k == GenKind::A;
      }
      if (r.tag == RelTag::ThetaQ) {
        CHECK(th == 2);
        CHECK(q == 2);
        CHECK(a <= 2);
      } else {
        CHECK(r.tag == RelTag::ThetaA);
        CHECK(th == 2);
        CHECK(a == 2);
        CHECK(q == 0);
      }
    }
  }
}

TEST_CASE("hub") {
  Machine M = build_m(desk());
  Presentation PM = presentation_M(M), PG = presentation_G(M);
  CHECK(PG.relators().size() == PM.relators().size() + 1);
  CHECK(PG.count(RelTag::Hub) == 1);
  CHECK(hub_word(M) == M.accept_config().flat());
  CHECK(PG.contains(M.accept_config().flat()));
}

TEST_CASE("a-relators") {
  Machine m1 = build_m1({"a"}, 2);
  OmegaPresentation none = presentation_omega(m1, omega_from_list({}));
  CHECK_FALSE(none.next());
  CHECK(none.current().emit() == presentation_G(m1).emit());

  for (int n : {2, 3, 5}) {
    OmegaPresentation o = presentation_omega(m1, omega_from_list({power(Word{1}, n)}));
    auto r = o.next();
    REQUIRE(r);
    CHECK(r->tag == RelTag::ARelator);
    CHECK(r->word.size() == static_cast<size_t>(n));
    CHECK(o.current().relators().size() == presentation_G(m1).relators().size() + 1);
  }

  // duplicates and their inverses are dropped
  OmegaPresentation d = presentation_omega(m1, omega_from_list({{1, 1}, {-1, -1}, {1, 1}}));
  d.take(10);
  CHECK(d.current().count(RelTag::ARelator) == 1);

  auto src = omega_powers(2, 2, 2);
  int count = 0;
  while (auto w = src()) {
    CHECK(w->size() % 2 == 0);
    ++count;
  }
  CHECK(count == 4 + 12);
  CHECK(omega_powers(2, 3)().value() == Word{1, 1, 1});
}

TEST_CASE("disk relators") {
  TowerParams p = desk();
  Machine M = build_m(p);
  Relator hub = disk_relator(M, M.accept_config(), {});
  CHECK(hub.word == hub_word(M));

  AdmissibleWord I = config_I(M, {1, 1});
  Relator r = disk_relator(M, I, canonical_accepting_m(M, {1}, 1, p));
  CHECK(r.word.size() == I.flat().size());
  CHECK(r.tag == RelTag::Disk);

  History bad = canonical_accepting_m(M, {1}, 1, p);
  bad.pop_back();
  CHECK(error_of([&] { disk_relator(M, I, bad); }) == ErrorKind::NotAccepted);

  Machine m1 = build_m1({"a", "b"}, 2);
  std::vector<DiskRelatorStream::Item> items{
      {m1.accept_config(), {}},
      {input_m1(m1, {1, 1}), canonical_accepting_m1(m1, {1}, 2)},
      {input_m1(m1, {2, 2}), canonical_accepting_m1(m1, {2}, 2)},
      {input_m1(m1, {1, 2, 1, 2}), canonical_accepting_m1(m1, {1, 2}, 2)},
      {input_m1(m1, {1, 1}), canonical_accepting_m1(m1, {1}, 2)},
  };
  DiskRelatorStream s = disk_relator_stream(m1, items);
  int got = 0;
  while (s.next()) ++got;
  CHECK(got == 3);
}

TEST_CASE("a-relator oracles") {
  FreeTrivial ft;
  CHECK(ft.sound());
  CHECK(ft.certify({1, 2, -2, -1}).verdict == Verdict::Trivial);
  CHECK(ft.certify({1, 1}).verdict == Verdict::Unknown);

  // b a^2 b^-1 . (a^-1)^2
  PowerProduct pp(2, {{{2}, {1}}, {{}, {-1}}});
  CHECK(pp.sound());
  CHECK(pp.certify({2, 1, 1, -2, -1, -1}).verdict == Verdict::Trivial);
  CHECK(pp.certify({2, 1, 1, -2}).verdict == Verdict::Unknown);

  ExponentAbelianized ea(2, 2);
  CHECK_FALSE(ea.sound());
  CHECK(ea.certify({1, 2, 1, 2}).verdict == Verdict::NecessaryOnly);
  CHECK(ea.certify({1, 2}).verdict == Verdict::Nontrivial);
  CHECK(ea.certify({3}).verdict == Verdict::Unknown);

  // sound oracles only say Trivial for products of n-th powers
  auto g = testing::rng(31);
  for (int t = 0; t < 200; ++t) {
    Word u = testing::random_word(g, 2, 1 + static_cast<int>(g() % 3));
    Word c = testing::random_word(g, 2, static_cast<int>(g() % 3));
    Word w = reduce(concat(concat(c, power(u, 3)), inverse(c)));
    PowerProduct ok(3, {{c, u}});
    CHECK(ok.certify(w).verdict == Verdict::Trivial);
    CHECK(ExponentAbelianized(3, 2).certify(w).verdict == Verdict::NecessaryOnly);
    if (!w.empty()) CHECK(ft.certify(w).verdict == Verdict::Unknown);
  }
}

TEST_CASE("emission is deterministic") {
  Machine M = build_m(desk());
  Presentation a = presentation_G(M), b = presentation_G(M);
  CHECK(a.emit() == b.emit());
  CHECK(a.emit_flat() == b.emit_flat());
  Machine l = lr({"a"});
  CHECK(presentation_M(l).emit() == presentation_M(lr({"a"})).emit());
  std::string flat = presentation_M(l).emit_flat();
  CHECK(flat.rfind("gens", 0) == 0);
}
