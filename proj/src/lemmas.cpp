#include "smforge/lemmas.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "smforge/combinators.hpp"
#include "smforge/presentation.hpp"
#include "smforge/search.hpp"
#include "smforge/serialize.hpp"

namespace smf {

namespace {

CheckResult named(std::string name) {
  CheckResult r;
  r.name = std::move(name);
  return r;
}

void fail(CheckResult& r, const std::string& what) {
  if (r.failures++ == 0) r.detail = what;
}

std::vector<Word> words_upto(int rank, int max_len) {
  std::vector<Word> out;
  for (int l = 0; l <= max_len; ++l)
    for (auto& w : reduced_words(rank, l)) out.push_back(w);
  return out;
}

int rank_of(const std::vector<std::string>& A) { return static_cast<int>(A.size()); }

std::string alpha(const Hardware& hw, const Word& u) { return u.empty() ? "1" : hw.alpha_word_str(u); }

// Random reduced word over the tape alphabet of a sector.
Word random_tape(const Hardware& hw, int sector, int len, std::mt19937_64& g) {
  const auto& t = hw.tape[sector];
  if (t.empty()) return {};
  Word w = random_word(g, static_cast<int>(t.size()), len);
  for (Letter& x : w) x = x > 0 ? t[x - 1] : -t[-x - 1];
  return w;
}

std::vector<Word> tape_words(const Hardware& hw, int sector, int max_len) {
  std::vector<Word> out;
  int r = static_cast<int>(hw.tape[sector].size());
  if (r == 0) return {Word{}};
  for (auto w : words_upto(r, max_len)) {
    for (Letter& x : w) x = x > 0 ? hw.tape[sector][x - 1] : -hw.tape[sector][-x - 1];
    out.push_back(w);
  }
  return out;
}

bool all_end_letters(const Hardware& hw, const AdmissibleWord& w) {
  for (Letter x : w.q)
    if (x != hw.parts[hw.sym(x).part].end) return false;
  return true;
}

// Reduced computations from w0 restricted to the rules in `allowed`;
// visit gets every nonempty computation, and the walk continues past it
// only while visit returns true.
void dfs(const Machine& m, const AdmissibleWord& w0, int depth, const std::vector<int>& allowed,
         const std::function<bool(const History&, const std::vector<AdmissibleWord>&)>& visit) {
  History h;
  std::vector<AdmissibleWord> ws{w0};
  std::function<void()> go = [&] {
    if (static_cast<int>(h.size()) >= depth) return;
    for (int r : allowed) {
      if (!h.empty() && m.rules[h.back()].inverse == r) continue;
      AdmissibleWord out;
      if (!try_apply(m, ws.back(), m.rules[r], out)) continue;
      h.push_back(r);
      ws.push_back(std::move(out));
      if (visit(h, ws)) go();
      h.pop_back();
      ws.pop_back();
    }
  };
  go();
}

std::vector<int> all_rules(const Machine& m) {
  std::vector<int> v(m.rules.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
  return v;
}

// Two-letter word x*u*y (signs included).
AdmissibleWord pair_word(Letter x, const Word& u, Letter y) {
  AdmissibleWord w;
  w.q = {x, y};
  w.tape = {u};
  return w;
}

}  // namespace

// ------------------------------------------------------------------ helpers

Word random_word(std::mt19937_64& g, int rank, int len) {
  Word w;
  if (rank <= 0) return w;
  std::uniform_int_distribution<int> d(0, 2 * rank - 1);
  while (static_cast<int>(w.size()) < len) {
    int k = d(g);
    Letter x = k < rank ? k + 1 : -(k - rank + 1);
    if (!w.empty() && w.back() == -x) continue;
    w.push_back(x);
  }
  return w;
}

Computation random_walk(const Machine& m, const AdmissibleWord& w0, int len, std::mt19937_64& g) {
  History h;
  AdmissibleWord w = w0;
  for (int i = 0; i < len; ++i) {
    std::vector<int> ok;
    for (int r = 0; r < static_cast<int>(m.rules.size()); ++r) {
      if (!h.empty() && m.rules[h.back()].inverse == r) continue;
      AdmissibleWord out;
      if (try_apply(m, w, m.rules[r], out)) ok.push_back(r);
    }
    if (ok.empty()) break;
    int r = ok[std::uniform_int_distribution<size_t>(0, ok.size() - 1)(g)];
    w = apply(m, w, r);
    h.push_back(r);
  }
  return run(m, w0, h);
}

std::vector<Word> reduced_words(int rank, int len) {
  std::vector<Word> out{Word{}};
  for (int i = 0; i < len; ++i) {
    std::vector<Word> next;
    for (auto& w : out)
      for (int k = 0; k < 2 * rank; ++k) {
        Letter x = k % 2 == 0 ? k / 2 + 1 : -(k / 2 + 1);
        if (!w.empty() && w.back() == -x) continue;
        Word v = w;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

// ------------------------------------------------------------------ core

CheckResult check_inverse_pairs(const Machine& m, std::mt19937_64& g, int samples) {
  CheckResult r = named("inverse pairs " + m.name);
  int rank = static_cast<int>(m.hardware().alphabet.size());
  while (r.cases < samples) {
    Word u = random_word(g, rank, static_cast<int>(g() % 4));
    Computation c = random_walk(m, m.input_config(u), 1 + static_cast<int>(g() % 10), g);
    if (c.length() == 0) break;
    for (int i = 0; i < c.length(); ++i, ++r.cases) {
      const Rule& rule = m.rules[c.history[i]];
      if (m.rules[rule.inverse].inverse != c.history[i]) fail(r, rule.id + ": inverse is not an involution");
      AdmissibleWord back;
      if (!try_apply(m, c.words[i + 1], m.rules[rule.inverse], back) || back != c.words[i])
        fail(r, rule.id + ": inverse does not undo the rule");
    }
  }
  return r;
}

CheckResult check_base_preservation(const Machine& m, std::mt19937_64& g, int samples) {
  CheckResult r = named("base preservation " + m.name);
  int rank = static_cast<int>(m.hardware().alphabet.size());
  for (int t = 0; t < samples; ++t) {
    Word u = random_word(g, rank, static_cast<int>(g() % 4));
    Computation c = random_walk(m, m.input_config(u), 1 + static_cast<int>(g() % 16), g);
    Base b = base_of(m.hardware(), c.initial());
    for (auto& w : c.words) {
      ++r.cases;
      if (base_of(m.hardware(), w) != b || !is_admissible(m.hardware(), w))
        fail(r, "base changed along " + history_str(m, c.history));
    }
  }
  return r;
}

CheckResult check_projection_m1(const Machine& m1, std::mt19937_64& g, int samples) {
  CheckResult r = named("projection invariance (1)");
  const Hardware& hw = m1.hardware();
  std::vector<int> phi1;
  for (size_t i = 0; i < m1.rules.size(); ++i)
    if (m1.rules[i].step == "(1)") phi1.push_back(static_cast<int>(i));
  int rank = static_cast<int>(hw.alphabet.size());
  while (r.cases < samples) {
    AdmissibleWord x = m1.input_config(random_word(g, rank, static_cast<int>(g() % 7)));
    for (int s = 0; s < 8; ++s) {
      int ri = phi1[g() % phi1.size()];
      AdmissibleWord y;
      if (!try_apply(m1, x, m1.rules[ri], y)) continue;
      ++r.cases;
      if (project_to_A(hw, y) != project_to_A(hw, x))
        fail(r, m1.rules[ri].id + " changes the projection of " + word_str(hw, x));
      x = y;
    }
  }
  return r;
}

CheckResult check_projection_m(const Machine& M, const TowerParams& p, std::mt19937_64& g, int samples) {
  CheckResult r = named("projection invariance (1)_j");
  const Hardware& hw = M.hardware();
  int rank = static_cast<int>(p.A.size());
  for (int j = 1; j <= 2; ++j) {
    std::string sfx = "_" + std::to_string(j);
    std::vector<int> step1;
    for (size_t i = 0; i < M.rules.size(); ++i)
      if (M.rules[i].step == "(1)" + sfx) step1.push_back(static_cast<int>(i));
    int start = M.rule_index("theta(s)" + sfx);
    long done = 0;
    while (done < samples / 2) {
      Word u = random_word(g, rank, static_cast<int>(g() % 3));
      Word w = reduce(power(u, p.n));
      AdmissibleWord x = j == 1 ? config_I(M, w) : config_J(M, w);
      x = apply(M, x, start);
      for (int s = 0; s < 8; ++s) {
        int ri = step1[g() % step1.size()];
        AdmissibleWord y;
        if (!try_apply(M, x, M.rules[ri], y)) continue;
        ++done;
        ++r.cases;
        // the second machine keeps the special sector locked, so only the
        // components 2..L carry the multiplication
        bool same = true;
        if (j == 1) {
          same = project_to_A(hw, y) == project_to_A(hw, x);
        } else {
          for (int i = 2; i <= p.L; ++i)
            same = same && project_to_A(hw, component(M, y, i)) == project_to_A(hw, component(M, x, i));
        }
        if (!same) fail(r, M.rules[ri].id + " changes the projection");
        x = y;
      }
    }
  }
  return r;
}

CheckResult check_machine_roundtrip(const Machine& m) {
  CheckResult r = named("machine round trip " + m.name);
  std::string s = write_machine(m);
  Machine back = read_machine(s);
  ++r.cases;
  if (write_machine(back) != s || back.rules.size() != m.rules.size()) fail(r, "text differs after reading back");
  return r;
}

// ------------------------------------------------------------------ machines

CheckResult check_m1_lengths(const std::vector<std::string>& A, int n, int max_len) {
  CheckResult r = named("M1 accepting length n=" + std::to_string(n));
  Machine m = build_m1(A, n);
  for (auto& u : words_upto(rank_of(A), max_len)) {
    ++r.cases;
    History h = canonical_accepting_m1(m, u, n);
    Computation c = run(m, input_m1(m, reduce(power(u, n))), h);
    long want = 2L * n * static_cast<long>(u.size()) + 2 * n - 1;
    if (c.final() != m.accept_config() || c.length() != want)
      fail(r, "u=" + alpha(m.hardware(), u) + " length " + std::to_string(c.length()) + " want " +
                  std::to_string(want));
  }
  return r;
}

CheckResult check_m1_uniqueness(const std::vector<std::string>& A, int n, const std::vector<Word>& rejected) {
  CheckResult r = named("M1 uniqueness and rejection n=" + std::to_string(n));
  Machine m = build_m1(A, n);
  const Hardware& hw = m.hardware();
  for (auto& u : words_upto(rank_of(A), 1)) {
    ++r.cases;
    AdmissibleWord w0 = input_m1(m, reduce(power(u, n)));
    M1Decision d = decide_accept_m1(m, n, w0);
    if (d.outcome != Outcome::Accepted || d.accepting != 1 || d.bound != d.lemma_bound)
      fail(r, "u=" + alpha(hw, u) + ": " + outcome_name(d.outcome) + " with " + std::to_string(d.accepting) +
                  " accepting computations");
  }
  for (auto& w : rejected) {
    ++r.cases;
    M1Decision d = decide_accept_m1(m, n, input_m1(m, w));
    if (d.outcome != Outcome::Rejected || d.accepting != 0)
      fail(r, "w=" + alpha(hw, w) + ": " + outcome_name(d.outcome));
  }
  return r;
}

CheckResult check_m1_language(const std::vector<std::string>& A, int n, int max_len) {
  CheckResult r = named("M1 language n=" + std::to_string(n));
  Machine m = build_m1(A, n);
  int rank = rank_of(A);
  std::vector<Word> roots = words_upto(rank, max_len);
  for (auto& w : words_upto(rank, max_len)) {
    ++r.cases;
    bool want = false;
    for (auto& u : roots)
      if (u.size() <= w.size() && reduce(power(u, n)) == w) want = true;
    AdmissibleWord w0 = input_m1(m, w);
    M1Decision d = decide_accept_m1(m, n, w0);
    bool got = d.outcome == Outcome::Accepted;
    if (d.outcome == Outcome::Incomplete || got != want) {
      fail(r, "w=" + alpha(m.hardware(), w) + ": " + outcome_name(d.outcome));
      continue;
    }
    if (got && run(m, w0, d.witness).final() != m.accept_config()) fail(r, "witness does not accept");
  }
  return r;
}

CheckResult check_m1_no_turn(const std::vector<std::string>& A, int n, int depth, std::mt19937_64& g,
                             int samples) {
  CheckResult r = named("M1 no turn n=" + std::to_string(n));
  Machine m = build_m1(A, n);
  const Hardware& hw = m.hardware();
  std::vector<int> rules = all_rules(m);
  for (int t = 0; t < samples; ++t) {
    AdmissibleWord w0 = m.end_config();
    for (size_t s = 0; s < w0.tape.size(); ++s)
      w0.tape[s] = random_tape(hw, static_cast<int>(s) + 1, static_cast<int>(g() % 3), g);
    dfs(m, w0, depth, rules, [&](const History& h, const std::vector<AdmissibleWord>& ws) {
      ++r.cases;
      bool sigma = std::any_of(h.begin(), h.end(), [&](int x) { return m.rules[x].kind == RuleKind::Transition; });
      if (sigma && all_end_letters(hw, ws.back())) fail(r, "turn along " + history_str(m, h));
      return true;
    });
  }
  return r;
}

CheckResult check_primitive_standard(const std::vector<std::string>& Y, int max_len) {
  CheckResult r = named("LR/RL standard computations");
  for (bool left : {true, false}) {
    Machine m = left ? lr(Y) : rl(Y);
    const Hardware& hw = m.hardware();
    int sector = left ? 1 : 2;
    for (auto& u : words_upto(rank_of(Y), max_len)) {
      ++r.cases;
      Word tape = sector_copy(hw, sector, u);
      AdmissibleWord w0 = m.start_config({{sector, tape}});
      AdmissibleWord want = m.end_config();
      want.tape[sector - 1] = tape;
      int l = static_cast<int>(u.size());
      // every reduced computation from w0 to an end word with the same sector
      int found = 0;
      dfs(m, w0, 2 * l + 3, all_rules(m), [&](const History& h, const std::vector<AdmissibleWord>& ws) {
        const AdmissibleWord& w = ws.back();
        if (w.a_length() > l + 1) return false;
        if (!all_end_letters(hw, w) || !w.tape[2 - sector].empty()) return true;
        ++found;
        bool ok = w == want && static_cast<int>(h.size()) == 2 * l + 1;
        for (auto& x : ws) ok = ok && x.a_length() == l;
        if (!ok) fail(r, m.name + " u=" + alpha(hw, u) + ": history " + history_str(m, h));
        return true;
      });
      if (found != 1) fail(r, m.name + " u=" + alpha(hw, u) + ": " + std::to_string(found) + " standard computations");
      Computation c = run(m, w0, standard_lr(m, u));
      if (c.final() != want || c.length() != 2 * l + 1) fail(r, m.name + ": standard history mismatch");
    }
  }
  return r;
}

CheckResult check_m2_controlled(const TowerParams& p, int max_len, std::mt19937_64& g, int samples) {
  CheckResult r = named("M2 controlled histories k=" + std::to_string(p.k));
  Machine m = build_m2(p);
  const Hardware& hw = m.hardware();
  int n = p.n;
  std::vector<int> bounds{m.rule_index("theta" + step_pair(4 * n - 2, 4 * n - 1))};
  for (int j = 1; j < p.k; ++j) bounds.push_back(m.rule_index("chi" + step_pair(j, j + 1)));
  bounds.push_back(m.rule_index("theta" + step_pair(4 * n - 1, 4 * n)));
  int sx = hw.sector_index("R2Q3"), sy = hw.sector_index("Q3P4");
  std::string step = "(" + std::to_string(4 * n - 1) + ")";
  std::vector<int> working;
  for (size_t i = 0; i < m.rules.size(); ++i)
    if (m.rules[i].step == step && m.rules[i].kind == RuleKind::Working) working.push_back(static_cast<int>(i));
  long natural_found = 0;
  for (int j = 1; j <= p.k; ++j) {
    for (bool forward : {true, false}) {
      int first = forward ? bounds[j - 1] : m.rules[bounds[j]].inverse;
      int last = forward ? bounds[j] : m.rules[bounds[j - 1]].inverse;
      for (int t = 0; t < samples; ++t) {
        AdmissibleWord w0;
        for (auto& part : m.rules[first].parts) w0.q.push_back(part.from);
        w0.tape.assign(hw.nparts() - 1, Word{});
        Word x = random_word(g, rank_of(p.A), static_cast<int>(g() % (max_len + 1)));
        bool natural = t % 2 == 0;
        Word y = natural ? inverse(x) : random_word(g, rank_of(p.A), static_cast<int>(g() % (max_len + 1)));
        w0.tape[sx - 1] = sector_copy(hw, sx, x);
        w0.tape[sy - 1] = sector_copy(hw, sy, y);
        AdmissibleWord w1;
        if (!try_apply(m, w0, m.rules[first], w1)) continue;
        int a0 = w0.a_length();
        std::vector<int> allowed = working;
        allowed.push_back(last);
        History h0{first};
        // a-length is capped at a0 + 2 to keep the search finite
        dfs(m, w1, a0 + 6, allowed, [&](const History& h, const std::vector<AdmissibleWord>& ws) {
          if (ws.back().a_length() > a0 + 2) return false;
          if (h.back() != last) return true;
          ++r.cases;
          if (natural) ++natural_found;
          bool ok = static_cast<int>(h.size()) + 1 == a0 + 3 && w0.a_length() == a0;
          for (auto& w : ws) ok = ok && w.a_length() == a0;
          if (!ok) fail(r, "controlled history of length " + std::to_string(h.size() + 1) + " from a-length " +
                               std::to_string(a0));
          return false;
        });
      }
    }
  }
  if (natural_found == 0) fail(r, "no controlled computation found");
  r.source = "budget-bounded";
  return r;
}

CheckResult check_m3_designated(const TowerParams& p0, const std::vector<int>& ks, int max_len) {
  CheckResult r = named("M3 designated subcomputation");
  for (int k : ks) {
    TowerParams p = p0;
    p.k = k;
    Machine m = build_m3(p);
    for (auto& u : words_upto(rank_of(p.A), max_len)) {
      ++r.cases;
      History h = canonical_accepting_m3(m, u, p);
      Computation c = run(m, m.input_config(reduce(power(u, p.n))), h);
      auto [begin, len] = designated_subcomputation(m, h, p.n);
      long want = 2L * k * static_cast<long>(u.size()) + 2 * k + 1;
      if (c.final() != m.accept_config() || len != want)
        fail(r, "k=" + std::to_string(k) + " u=" + alpha(m.hardware(), u) + ": " + std::to_string(len));
    }
  }
  return r;
}

CheckResult check_m3_bounded_accept(const TowerParams& p0) {
  CheckResult r = named("M3 bounded acceptance");
  TowerParams p = p0;
  p.k = 2;
  Machine m = build_m3(p);
  for (const Word& u : {Word{}, Word{1}}) {
    ++r.cases;
    History want = canonical_accepting_m3(m, u, p);
    AdmissibleWord w0 = m.input_config(reduce(power(u, p.n)));
    SearchBudget b;
    b.max_history_length = static_cast<int>(want.size());
    // prune to the widest word of the canonical run
    for (auto& w : run(m, w0, want).words) b.max_word_norm = std::max(b.max_word_norm, w.norm());
    AcceptResult a = bounded_accept(m, w0, b);
    if (a.outcome != Outcome::Accepted || a.witness != want)
      fail(r, "u=" + alpha(m.hardware(), u) + ": " + outcome_name(a.outcome));
  }
  r.source = "budget-bounded";
  return r;
}

CheckResult check_m_language(const TowerParams& p, int max_len) {
  CheckResult r = named("M language");
  Machine M = build_m(p);
  const Hardware& hw = M.hardware();
  int s2 = M.rule_index("theta(s)_2");
  for (auto& u : words_upto(rank_of(p.A), max_len)) {
    ++r.cases;
    Word w = reduce(power(u, p.n));
    History h[2];
    for (int j = 1; j <= 2; ++j) {
      h[j - 1] = canonical_accepting_m(M, u, j, p);
      AdmissibleWord w0 = j == 1 ? config_I(M, w) : config_J(M, w);
      Computation c = run(M, w0, h[j - 1]);
      std::string sfx = "_" + std::to_string(j);
      bool one_machine = true;
      for (auto& s : step_history(M, h[j - 1]))
        one_machine = one_machine && s.find(sfx) != std::string::npos;
      if (c.final() != M.accept_config() || !one_machine)
        fail(r, "machine " + std::to_string(j) + " u=" + alpha(hw, u));
    }
    if (h[0] == h[1]) fail(r, "the two machines share a history for u=" + alpha(hw, u));
    bool adm = is_theta_admissible(M, config_I(M, w), M.rules[s2]);
    if (adm != w.empty()) fail(r, "theta(s)_2 admissibility of I(w) for u=" + alpha(hw, u));
  }
  return r;
}

CheckResult check_m_turn(const TowerParams& p, int max_len) {
  CheckResult r = named("M turn");
  Machine M = build_m(p);
  const Hardware& hw = M.hardware();
  int P0 = hw.part_index("P0@1"), Q0 = hw.part_index("Q0@1");
  int sector = hw.sector_index("P0Q0@1");
  int s1 = M.rule_index("theta(s)_1"), s2 = M.rule_index("theta(s)_2");
  // ((s)_1^-1 (s)_2)^{+-1} on the base (P0 Q0)^{+-1}
  for (bool fwd : {true, false}) {
    int a = fwd ? M.rules[s1].inverse : M.rules[s2].inverse;
    int b = fwd ? s2 : s1;
    for (bool inv : {false, true}) {
      for (auto& x : tape_words(hw, sector, max_len)) {
        Letter qp = M.rules[a].parts[P0].from, qq = M.rules[a].parts[Q0].from;
        AdmissibleWord w0 = inv ? pair_word(-qq, inverse(x), -qp) : pair_word(qp, x, qq);
        AdmissibleWord w1, w2;
        if (!try_apply(M, w0, M.rules[a], w1) || !try_apply(M, w1, M.rules[b], w2)) continue;
        ++r.cases;
        if (w0.a_length() || w1.a_length() || w2.a_length()) fail(r, "nonzero a-length at " + word_str(hw, w0));
      }
    }
  }
  return r;
}

CheckResult check_m_step_history(const TowerParams& p, int depth, int max_len) {
  CheckResult r = named("M step history");
  Machine M = build_m(p);
  const Hardware& hw = M.hardware();
  struct Probe {
    std::string left, right, sector;
    int entry;  // rule whose from-letters start the computation
    std::vector<std::string> forbidden;
  };
  std::vector<Probe> probes;
  std::string nn = std::to_string(4 * p.n);
  for (int i = 1; i <= p.L; ++i) {
    std::string c = "@" + std::to_string(i);
    for (int j = 1; j <= 2; ++j) {
      std::string s = "_" + std::to_string(j);
      if (j == 1 || i != 1)
        probes.push_back({"P0" + c, "Q0" + c, "P0Q0" + c, M.rules[M.rule_index("theta(12)" + s)].inverse,
                          {"(21)" + s, "(1)" + s, "(12)" + s}});
      probes.push_back({"Q0" + c, "P1" + c, "Q0P1" + c, M.rule_index("theta(s)" + s),
                        {"(s)" + s, "(1)" + s, "(s)" + s + "^-1"}});
      for (auto [l, rr] : {std::pair{"R2", "Q3"}, std::pair{"Q3", "P4"}})
        probes.push_back({l + c, rr + c, std::string(l) + rr + c, M.rules[M.rule_index("theta(a)" + s)].inverse,
                          {"(a)" + s + "^-1", "(" + nn + ")" + s, "(a)" + s}});
    }
  }
  std::vector<int> rules = all_rules(M);
  for (auto& pr : probes) {
    int pl = hw.part_index(pr.left), pq = hw.part_index(pr.right), sec = hw.sector_index(pr.sector);
    Letter x = M.rules[pr.entry].parts[pl].from, y = M.rules[pr.entry].parts[pq].from;
    for (bool inv : {false, true}) {
      for (auto& u : tape_words(hw, sec, max_len)) {
        AdmissibleWord w0 = inv ? pair_word(-y, inverse(u), -x) : pair_word(x, u, y);
        dfs(M, w0, depth, rules, [&](const History& h, const std::vector<AdmissibleWord>&) {
          auto st = step_history(M, h);
          if (st.size() > pr.forbidden.size()) return false;
          for (size_t i = 0; i < st.size(); ++i)
            if (st[i] != pr.forbidden[i]) return false;
          ++r.cases;
          if (st == pr.forbidden) fail(r, "forbidden step history " + step_str(st) + " on " + word_str(hw, w0));
          return true;
        });
      }
    }
  }
  r.source = "budget-bounded";
  return r;
}

// ------------------------------------------------------------------ metrics

CheckResult check_modified_length(const Rational& delta, int max_len) {
  CheckResult r = named("modified length");
  // q, theta and two a-letters
  const GenKind sym[4] = {GenKind::Q, GenKind::Theta, GenKind::A, GenKind::A};
  std::vector<std::vector<GenKind>> layer{{}};
  for (int l = 0; l <= max_len; ++l) {
    for (auto& w : layer) {
      ++r.cases;
      if (modified_length(w, delta) != modified_length_brute(w, delta)) fail(r, "mismatch at length " + std::to_string(l));
    }
    if (l == max_len) break;
    std::vector<std::vector<GenKind>> next;
    for (auto& w : layer)
      for (auto k : sym) {
        auto v = w;
        v.push_back(k);
        next.push_back(std::move(v));
      }
    layer = std::move(next);
  }
  return r;
}

CheckResult check_length_subadditivity(const Rational& delta, std::mt19937_64& g, int samples) {
  CheckResult r = named("modified length subadditivity");
  const GenKind sym[3] = {GenKind::Q, GenKind::Theta, GenKind::A};
  auto rnd = [&] {
    std::vector<GenKind> w(g() % 8);
    for (auto& k : w) k = sym[g() % 3];
    return w;
  };
  for (int t = 0; t < samples; ++t, ++r.cases) {
    auto a = rnd(), b = rnd();
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    Rational la = modified_length(a, delta), lb = modified_length(b, delta), lab = modified_length(ab, delta);
    if (lab > la + lb || lab < la + lb - delta) fail(r, "bounds violated");
  }
  return r;
}

CheckResult check_mixtures(int J, int max_beads, std::mt19937_64& g, int samples) {
  CheckResult r = named("mixtures J=" + std::to_string(J));
  auto without = [](const Necklace& o, size_t i) {
    Necklace p = o;
    p.beads.erase(p.beads.begin() + static_cast<long>(i));
    return p;
  };
  auto positions = [](const Necklace& o, Bead b) {
    std::vector<size_t> v;
    for (size_t i = 0; i < o.beads.size(); ++i)
      if (o.beads[i] == b) v.push_back(i);
    return v;
  };
  for (int t = 0; t < samples; ++t, ++r.cases) {
    int x = static_cast<int>(g() % (max_beads + 1)), y = static_cast<int>(g() % (max_beads + 1));
    Necklace o;
    o.beads.assign(x, Bead::White);
    o.beads.insert(o.beads.end(), y, Bead::Black);
    std::shuffle(o.beads.begin(), o.beads.end(), g);
    long mu = mixture(o, J);
    auto P = mixture_counts(o, J);
    if (mu != mixture_brute(o, J)) fail(r, "prefix sums disagree with the brute force");
    if (mu > static_cast<long>(J) * (x * x - x)) fail(r, "(1) violated");
    // rotation
    Necklace rot = o;
    if (!rot.beads.empty()) std::rotate(rot.beads.begin(), rot.beads.begin() + g() % rot.beads.size(), rot.beads.end());
    if (mixture(rot, J) != mu) fail(r, "not rotation invariant");
    auto whites = positions(o, Bead::White), blacks = positions(o, Bead::Black);
    if (!whites.empty()) {
      Necklace p = without(o, whites[g() % whites.size()]);
      auto Q = mixture_counts(p, J);
      for (int j = 0; j < J; ++j)
        if (!(P[j] - 2 * x < Q[j] && Q[j] <= P[j])) fail(r, "(2) violated");
      long mu2 = mixture(p, J);
      if (!(mu - 2L * J * x < mu2 && mu2 <= mu)) fail(r, "(2) violated");
    }
    if (!blacks.empty()) {
      Necklace p = without(o, blacks[g() % blacks.size()]);
      auto Q = mixture_counts(p, J);
      for (int j = 0; j < J; ++j)
        if (Q[j] > P[j]) fail(r, "(3) violated");
    }
    if (blacks.size() >= 3) {
      size_t nb = blacks.size();
      size_t i1 = g() % nb;
      // v3 lies at most J+1 blacks after v1, v2 strictly between
      size_t span = 2 + g() % std::min<size_t>(J, nb - 2);
      size_t i2 = (i1 + 1 + g() % (span - 1)) % nb, i3 = (i1 + span) % nb;
      auto whites_between = [&](size_t a, size_t b) {
        int c = 0;
        for (size_t k = (a + 1) % o.beads.size(); k != b; k = (k + 1) % o.beads.size()) c += o.beads[k] == Bead::White;
        return c;
      };
      long y1 = whites_between(blacks[i1], blacks[i2]), y2 = whites_between(blacks[i2], blacks[i3]);
      if (mixture(without(o, blacks[i2]), J) > mu - y1 * y2) fail(r, "(4) violated");
    }
  }
  return r;
}

// ------------------------------------------------------------------ diagrams

CheckResult check_trapezia(const TowerParams& p, std::mt19937_64& g, int samples) {
  CheckResult r = named("computations are trapezia");
  std::vector<Machine> ms{lr(p.A), rl(p.A), build_m1(p.A, p.n), build_m2(p), build_m3(p), build_m(p)};
  int rank = rank_of(p.A);
  for (int t = 0; t < samples; ++t) {
    const Machine& m = ms[t % ms.size()];
    AdmissibleWord w0 = m.input_config(random_word(g, rank, static_cast<int>(g() % 4)));
    Computation c = random_walk(m, w0, 1 + static_cast<int>(g() % 10), g);
    if (c.length() == 0) continue;
    ++r.cases;
    Diagram d = trapezium(c);
    BandCheck bc = check_bands(d);
    std::string what;
    if (d.tbot() != c.initial().flat()) what = "tbot";
    else if (d.ttop() != c.final().flat()) what = "ttop";
    else if (d.history() != c.history) what = "history";
    else if (static_cast<int>(d.bands().size()) != c.length()) what = "band count";
    else if (!bc.ok() || !bc.q_cross_all) what = "band structure";
    else if (!d.is_disk()) what = "not a disk";
    if (!what.empty()) fail(r, m.name + ": " + what + " along " + history_str(m, c.history));
  }
  return r;
}

namespace {

bool cyclic_equal(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  Word aa = concat(a, a);
  for (size_t i = 0; i < a.size(); ++i)
    if (std::equal(b.begin(), b.end(), aa.begin() + static_cast<long>(i))) return true;
  return false;
}

}  // namespace

CheckResult check_disks(const TowerParams& p, int max_len) {
  CheckResult r = named("disk diagrams");
  Machine M = build_m(p);
  for (auto& u : words_upto(rank_of(p.A), max_len)) {
    Word w = reduce(power(u, p.n));
    for (int j = 1; j <= 2; ++j) {
      ++r.cases;
      AdmissibleWord W = j == 1 ? config_I(M, w) : config_J(M, w);
      History h = canonical_accepting_m(M, u, j, p);
      Diagram d = disk_diagram(M, W, h);
      Diagram t = trapezium(run(M, W, h));
      if (!cyclic_equal(d.boundary(), W.flat()) || d.hubs() != 1 || d.area() != t.area() + 1 || !d.is_disk())
        fail(r, "disk for u=" + alpha(M.hardware(), u));
    }
    if (u.empty()) continue;
    ++r.cases;
    Diagram un = un_diagram(M, u, p);
    Word b = cyclic_reduce(reduce(un.boundary()));
    Word want = cyclic_reduce(sector_copy(M.hardware(), special_input_sector(M), w));
    if (!cyclic_equal(b, want) || !un.is_disk()) fail(r, "u^n boundary for u=" + alpha(M.hardware(), u));
  }
  return r;
}

std::vector<Word> area_words(int rank, int max_len) {
  // first word of each length (order a, a^-1, b, b^-1, ...) that is
  // cyclically reduced and not a proper power
  std::vector<Word> out;
  for (int l = 1; l <= max_len; ++l) {
    std::vector<Word> ws = reduced_words(rank, l);
    std::sort(ws.begin(), ws.end(), [](const Word& a, const Word& b) {
      auto key = [](Letter x) { return 2 * std::abs(x) + (x < 0); };
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                          [&](Letter x, Letter y) { return key(x) < key(y); });
    });
    for (auto& w : ws) {
      if (cyclic_reduce(w) != w) continue;
      bool pw = false;
      for (int k = 2; k <= l && !pw; ++k) {
        Word root;
        pw = l % k == 0 && free_root(w, k, root);
      }
      if (pw && l > 1) continue;
      out.push_back(w);
      break;
    }
  }
  return out;
}

std::vector<AreaRow> area_table(const TowerParams& p, const std::vector<Word>& us) {
  Machine M = build_m(p);
  std::vector<AreaRow> rows;
  for (auto& u : us) {
    AreaRow row;
    row.norm = static_cast<int>(u.size());
    row.u = M.hardware().alpha_word_str(u);
    row.area = un_diagram(M, u, p).area();
    row.ratio = static_cast<double>(row.area) / (row.norm * row.norm);
    rows.push_back(row);
  }
  return rows;
}

CheckResult check_area_growth(const std::vector<AreaRow>& rows) {
  CheckResult r = named("quadratic area growth");
  r.source = "measured";
  if (rows.empty()) return r;
  double base = rows.front().ratio;
  std::ostringstream s;
  for (auto& row : rows) {
    ++r.cases;
    s << row.u << ":" << row.area << " ";
    if (row.ratio > 2 * base || row.ratio < base / 2) ++r.failures;
  }
  r.detail = "areas " + s.str() + "ratio range must stay within a factor 2 of " + std::to_string(base);
  return r;
}

// ------------------------------------------------------------------ suites

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core", "m1", "m2", "m3", "m", "metrics", "diagrams"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& o) {
  const TowerParams& p = o.tower;
  std::mt19937_64 g(o.seed);
  int s = std::max(1, o.scale);
  std::vector<CheckResult> out;
  if (name == "core") {
    Machine m1 = build_m1(p.A, p.n), M = build_m(p);
    for (const Machine* m : {&m1, &M}) {
      out.push_back(check_inverse_pairs(*m, g, 200 * s));
      out.push_back(check_base_preservation(*m, g, 20 * s));
      out.push_back(check_machine_roundtrip(*m));
    }
    out.push_back(check_projection_m1(m1, g, 500 * s));
    out.push_back(check_projection_m(M, p, g, 500 * s));
  } else if (name == "m1") {
    for (int n : {2, 3}) out.push_back(check_m1_lengths(p.A, n, 2));
    out.push_back(check_m1_language(p.A, p.n, 4));
    out.push_back(check_m1_no_turn(p.A, p.n, 8, g, 4 * s));
    Word a{1}, b{2};
    std::vector<Word> rejected{concat(a, b), Word{1, 1, 2}, Word{1, 1, 1}};
    if (p.A.size() < 2) rejected = {Word{1, 1, 1}};
    out.push_back(check_m1_uniqueness(p.A, p.n, rejected));
  } else if (name == "m2") {
    out.push_back(check_primitive_standard(p.A, 4));
    out.push_back(check_m2_controlled(p, 3, g, 10 * s));
  } else if (name == "m3") {
    out.push_back(check_m3_designated(p, {2, 3, 4}, 2));
    out.push_back(check_m3_bounded_accept(p));
  } else if (name == "m") {
    out.push_back(check_m_language(p, 2));
    out.push_back(check_m_turn(p, 3));
    out.push_back(check_m_step_history(p, 6, 1));
  } else if (name == "metrics") {
    out.push_back(check_modified_length(o.metrics.delta, 6));
    out.push_back(check_length_subadditivity(o.metrics.delta, g, 1000 * s));
    out.push_back(check_mixtures(o.metrics.J, 8, g, 1000 * s));
  } else if (name == "diagrams") {
    out.push_back(check_trapezia(p, g, 500 * s));
    out.push_back(check_disks(p, 1));
    out.push_back(check_area_growth(area_table(p, area_words(static_cast<int>(p.A.size()), 4))));
  } else {
    throw Error(ErrorKind::UnknownSuite, name);
  }
  return out;
}

}  // namespace smf
