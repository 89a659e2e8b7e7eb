// Acceptance run: one PASS/FAIL line per criterion.  Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smforge/combinators.hpp"
#include "smforge/lemmas.hpp"
#include "smforge/presentation.hpp"
#include "smforge/tower.hpp"

using namespace smf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome from(const std::vector<CheckResult>& rs) {
  Outcome o{true, ""};
  std::ostringstream s;
  for (auto& r : rs) {
    o.pass = o.pass && r.ok();
    s << r.name << " [" << r.source << "] " << r.cases << " cases";
    if (!r.ok()) s << ", " << r.failures << " failures: " << r.detail;
    s << "; ";
  }
  o.detail = s.str();
  return o;
}

TowerParams desk(int k = 2) {
  TowerParams p;
  p.A = {"a", "b"};
  p.n = 2;
  p.k = k;
  p.L = 3;
  return p;
}

unsigned long long seed() {
  const char* s = std::getenv("SMFORGE_SEED");
  return s ? std::strtoull(s, nullptr, 10) : 20261018ULL;
}

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

Outcome presentations() {
  std::ostringstream s;
  bool ok = true;
  struct Case {
    std::string name;
    Machine m;
    int tq, ta;
  };
  std::vector<Case> cases{{"LR({a})", lr({"a"}), 9, 5}, {"M1({a},2)", build_m1({"a"}, 2), 35, 17}};
  for (auto& c : cases) {
    Presentation P = presentation_M(c.m), Q = presentation_M(c.m);
    int tq = P.count(RelTag::ThetaQ), ta = P.count(RelTag::ThetaA);
    bool counts = tq == c.tq && ta == c.ta && tq == c.m.npositive() * c.m.hardware().nparts() &&
                  ta == theta_a_tally(c.m);
    bool shapes = true;
    for (auto& r : P.relators()) {
      int th = 0, q = 0, a = 0;
      for (Letter x : r.word) {
        GenKind k = P.alphabet().kind(x);
        th += k == GenKind::Theta;
        q += k == GenKind::Q;
        a += k == GenKind::A;
      }
      if (r.tag == RelTag::ThetaQ) shapes = shapes && th == 2 && q == 2 && a <= 2;
      else shapes = shapes && th == 2 && a == 2 && q == 0;
    }
    bool same = P.emit() == Q.emit() && P.emit_flat() == Q.emit_flat();
    ok = ok && counts && shapes && same;
    s << c.name << ": " << tq << " (theta,q) + " << ta << " (theta,a)" << (shapes ? "" : ", bad shape")
      << (same ? "" : ", emission differs") << "; ";
  }
  return {ok, s.str()};
}

}  // namespace

int main() {
  unsigned long long sd = seed();
  std::printf("seed %llu\n", sd);
  std::mt19937_64 g(sd);
  using Clock = std::chrono::steady_clock;

  struct Criterion {
    int id;
    std::string name;
    double limit_s;  // 0 when there is no time limit
    std::function<Outcome()> run;
  };
  std::vector<Criterion> cs{
      {1, "M1 accepting length", 10,
       [] { return from({check_m1_lengths({"a", "b"}, 2, 2), check_m1_lengths({"a", "b"}, 3, 2)}); }},
      {2, "M1 uniqueness and rejection", 0,
       [] {
         return from({check_m1_uniqueness({"a", "b"}, 2, {Word{1, 2}, Word{1, 1, 2}, Word{1, 1, 1}})});
       }},
      {3, "LR/RL standard computation", 0, [] { return from({check_primitive_standard({"a", "b"}, 4)}); }},
      {4, "M2 controlled histories", 0, [&] { return from({check_m2_controlled(desk(3), 3, g, 10)}); }},
      {5, "M3 designated subcomputation", 0, [] { return from({check_m3_designated(desk(), {2, 3, 4}, 2)}); }},
      {6, "M language", 0, [] { return from({check_m_language(desk(), 2)}); }},
      {7, "computation/trapezium round trip", 0, [&] { return from({check_trapezia(desk(), g, 500)}); }},
      {8, "quadratic area growth", 120,
       [] {
         auto rows = area_table(desk(), area_words(2, 4));
         Outcome o = from({check_area_growth(rows)});
         std::ostringstream s;
         for (auto& r : rows) s << "|u|=" << r.norm << " u=" << r.u << " area=" << r.area << " ratio=" << r.ratio << "; ";
         o.detail = s.str() + o.detail;
         return o;
       }},
      {9, "modified length", 0, [] { return from({check_modified_length(Rational(1, 100), 6)}); }},
      {10, "mixtures", 0, [&] { return from({check_mixtures(4, 8, g, 1000)}); }},
      {11, "projection invariance", 0,
       [&] {
         TowerParams p = desk();
         Machine m1 = build_m1(p.A, p.n), M = build_m(p);
         return from({check_projection_m1(m1, g, 500), check_projection_m(M, p, g, 500)});
       }},
      {12, "presentation emission", 0, presentations},
  };

  int failed = 0;
  for (auto& c : cs) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += " over the time limit";
    }
    failed += !o.pass;
    std::printf("%s %2d %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(cs.size()) - failed, cs.size());
  return failed ? 1 : 0;
}
