#include "smforge/search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace smf {

void SearchBudget::validate() const {
  if (max_history_length < 0) throw Error(ErrorKind::InvalidParams, "negative history bound");
  if (max_word_norm < 0) throw Error(ErrorKind::InvalidParams, "negative norm bound");
  if (frontier_cap < 0) throw Error(ErrorKind::InvalidParams, "negative frontier cap");
}

int worker_count() {
  if (const char* s = std::getenv("SMFORGE_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Accepted: return "accepted";
    case Outcome::Rejected: return "rejected";
    case Outcome::Incomplete: return "incomplete";
  }
  return "?";
}

// ------------------------------------------------------------- enumeration

namespace {

struct Dfs {
  const Machine& m;
  const SearchBudget& b;
  History h;
  std::vector<AdmissibleWord> words;

  bool step(int r, AdmissibleWord& out) const {
    if (!h.empty() && r == m.rules[h.back()].inverse) return false;
    if (!try_apply(m, words.back(), m.rules[r], out)) return false;
    if (b.max_word_norm && out.norm() > b.max_word_norm) return false;
    return true;
  }
};

}  // namespace

long enumerate_reduced(const Machine& m, const AdmissibleWord& w0, const SearchBudget& budget,
                       const std::function<bool(const Computation&)>& visit) {
  budget.validate();
  Dfs d{m, budget, {}, {w0}};
  long total = 0;
  bool stop = false;
  int R = static_cast<int>(m.rules.size());
  for (int depth = 0; depth <= budget.max_history_length && !stop; ++depth) {
    long level = 0;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(d.h.size()) == depth) {
        ++level;
        if (budget.frontier_cap && level > budget.frontier_cap)
          throw Error(ErrorKind::BudgetExceeded,
                      "more than " + std::to_string(budget.frontier_cap) + " computations of length " +
                          std::to_string(depth),
                      total);
        ++total;
        Computation c;
        c.machine = &m;
        c.history = d.h;
        c.words = d.words;
        if (!visit(c)) stop = true;
        return;
      }
      AdmissibleWord next;
      for (int r = 0; r < R && !stop; ++r) {
        if (!d.step(r, next)) continue;
        d.h.push_back(r);
        d.words.push_back(next);
        rec();
        d.h.pop_back();
        d.words.pop_back();
      }
    };
    rec();
    if (level == 0) break;
  }
  return total;
}

std::vector<long> count_reduced(const Machine& m, const AdmissibleWord& w0, const SearchBudget& budget,
                                const std::function<bool(const AdmissibleWord&)>& filter, int workers) {
  budget.validate();
  int D = budget.max_history_length;
  std::vector<long> total(D + 1, 0);
  if (!filter || filter(w0)) total[0] = 1;
  if (D == 0) return total;
  int R = static_cast<int>(m.rules.size());
  std::vector<int> first;
  std::vector<AdmissibleWord> first_words;
  for (int r = 0; r < R; ++r) {
    AdmissibleWord out;
    if (!try_apply(m, w0, m.rules[r], out)) continue;
    if (budget.max_word_norm && out.norm() > budget.max_word_norm) continue;
    first.push_back(r);
    first_words.push_back(std::move(out));
  }
  if (workers <= 0) workers = worker_count();
  workers = std::max(1, std::min<int>(workers, static_cast<int>(first.size())));
  std::vector<std::vector<long>> part(first.size(), std::vector<long>(D + 1, 0));
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (size_t i; (i = next.fetch_add(1)) < first.size();) {
      Dfs d{m, budget, {first[i]}, {w0, first_words[i]}};
      auto& cnt = part[i];
      std::function<void()> rec = [&]() {
        int len = static_cast<int>(d.h.size());
        if (!filter || filter(d.words.back())) ++cnt[len];
        if (len == D) return;
        AdmissibleWord out;
        for (int r = 0; r < R; ++r) {
          if (!d.step(r, out)) continue;
          d.h.push_back(r);
          d.words.push_back(out);
          rec();
          d.h.pop_back();
          d.words.pop_back();
        }
      };
      rec();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& p : part)
    for (int i = 0; i <= D; ++i) total[i] += p[i];
  return total;
}

// --------------------------------------------------------- bounded accept

AcceptResult bounded_accept(const Machine& m, const AdmissibleWord& w0, const SearchBudget& budget) {
  budget.validate();
  AcceptResult res;
  const AdmissibleWord target = m.accept_config();
  struct Node {
    int parent;
    int rule;
  };
  std::vector<Node> nodes{{-1, -1}};
  std::vector<AdmissibleWord> node_word{w0};
  std::unordered_map<AdmissibleWord, int, AdmissibleWordHash> seen{{w0, 0}};
  std::vector<int> frontier{0};
  bool pruned = false;
  auto finish = [&](int id) {
    History h;
    for (int x = id; nodes[x].parent >= 0; x = nodes[x].parent) h.push_back(nodes[x].rule);
    std::reverse(h.begin(), h.end());
    run(m, w0, h);  // re-validate
    res.outcome = Outcome::Accepted;
    res.witness = h;
    res.explored = static_cast<long>(nodes.size());
    return res;
  };
  if (w0 == target) return finish(0);
  int R = static_cast<int>(m.rules.size());
  for (int depth = 0; depth < budget.max_history_length && !frontier.empty(); ++depth) {
    std::vector<int> next;
    for (int id : frontier) {
      for (int r = 0; r < R; ++r) {
        AdmissibleWord out;
        if (!try_apply(m, node_word[id], m.rules[r], out)) continue;
        if (budget.max_word_norm && out.norm() > budget.max_word_norm) {
          pruned = true;
          continue;
        }
        if (seen.count(out)) continue;
        int nid = static_cast<int>(nodes.size());
        nodes.push_back({id, r});
        seen.emplace(out, nid);
        bool hit = out == target;
        node_word.push_back(std::move(out));
        if (hit) return finish(nid);
        next.push_back(nid);
      }
      if (budget.frontier_cap && static_cast<long>(next.size()) > budget.frontier_cap) {
        res.outcome = Outcome::Incomplete;
        res.explored = static_cast<long>(nodes.size());
        res.note = "frontier cap reached at depth " + std::to_string(depth + 1);
        return res;
      }
    }
    frontier = std::move(next);
  }
  res.explored = static_cast<long>(nodes.size());
  if (!frontier.empty()) {
    res.outcome = Outcome::Incomplete;
    res.note = "history bound " + std::to_string(budget.max_history_length) + " reached";
  } else if (pruned) {
    res.outcome = Outcome::Incomplete;
    res.note = "norm pruning at " + std::to_string(budget.max_word_norm);
  } else {
    res.outcome = Outcome::Rejected;
    res.note = "reachable set exhausted";
  }
  return res;
}

// ------------------------------------------------------------ time function

namespace {

// Reduced words over a rank-r alphabet in length-lexicographic order.
void reduced_words(int rank, int max_len, const std::function<void(const Word&)>& f) {
  Word w;
  std::function<void(int)> rec = [&](int len) {
    if (static_cast<int>(w.size()) == len) {
      f(w);
      return;
    }
    for (int d = 0; d < 2 * rank; ++d) {
      Letter x = d < rank ? d + 1 : -(d - rank + 1);
      if (!w.empty() && w.back() == -x) continue;
      w.push_back(x);
      rec(len);
      w.pop_back();
    }
  };
  for (int len = 0; len <= max_len; ++len) rec(len);
}

}  // namespace

std::vector<TimeRow> time_function(const Machine& m, int size_limit, const SearchBudget& budget) {
  std::vector<TimeRow> rows(size_limit + 1);
  for (int s = 0; s <= size_limit; ++s) rows[s].size = s;
  int rank = static_cast<int>(m.hardware().alphabet.size());
  int copies = std::max<int>(1, static_cast<int>(m.input_sectors.size()));
  std::vector<int> best(size_limit + 1, -1);
  reduced_words(rank, size_limit / copies, [&](const Word& w) {
    AdmissibleWord w0 = m.input_config(w);
    int a = w0.a_length();
    if (a > size_limit) return;
    AcceptResult r = bounded_accept(m, w0, budget);
    if (r.outcome == Outcome::Accepted) {
      ++rows[a].accepted;
      best[a] = std::max(best[a], static_cast<int>(r.witness.size()));
    } else if (r.outcome == Outcome::Incomplete) {
      ++rows[a].incomplete;
    }
  });
  int run_max = -1;
  for (int s = 0; s <= size_limit; ++s) {
    run_max = std::max(run_max, best[s]);
    rows[s].time = run_max;
  }
  return rows;
}

// ------------------------------------------------------- symbolic M1 decider

long m1_length_bound(int n, const AdmissibleWord& w) {
  return static_cast<long>(30 * n * n + 24 * n) * w.norm();
}

namespace {

// Letters 1..|A| are constants, letters >= kUnknown are unknowns.
constexpr int kUnknown = 1 << 20;

bool is_unknown(Letter x) { return std::abs(x) >= kUnknown; }

bool has_unknown(const Word& w) {
  return std::any_of(w.begin(), w.end(), is_unknown);
}

Word substitute(const Word& w, int var, const Word& val) {
  Word out;
  Word inv_val = inverse(val);
  for (Letter x : w) {
    if (std::abs(x) == var) {
      for (Letter y : (x > 0 ? val : inv_val)) push_reduced(out, y);
    } else {
      push_reduced(out, x);
    }
  }
  return out;
}

struct PhaseInfo {
  std::string step;
  std::vector<int> effect;     // per sector: 0 none, +1 s*Y, -1 Y^-1*s
  bool iota = false;           // Y is the letterwise inverse of the rule word
  std::map<int, int> rule_of;  // letter of A -> positive rule index
  std::vector<int> locks;
  bool accept = false;
};

struct Move {
  int rule;  // rule index, either sign
  int to;
  std::vector<int> locks;
};

struct Item {
  bool segment;
  int phase;
  Word value;  // segments
  int rule;    // transitions
};

struct SymState {
  std::vector<Word> sec;  // 1..N-1
  std::vector<Word> eqs;
  std::vector<Word> nonempty;
  std::vector<Item> items;
  int next_var = kUnknown;
  // Unknowns still free, oldest first; the current segment's unknown is kept
  // apart until the phase is left.
  std::vector<int> free_vars;
  int pending = 0;
  long fixed_length = 0;  // transitions plus one per nonempty segment lower bound

  void subst(int var, const Word& val) {
    free_vars.erase(std::remove(free_vars.begin(), free_vars.end(), var), free_vars.end());
    if (pending == var) pending = 0;
    for (auto& s : sec) s = substitute(s, var, val);
    for (auto& e : eqs) e = substitute(e, var, val);
    for (auto& e : nonempty) e = substitute(e, var, val);
    for (auto& it : items)
      if (it.segment) it.value = substitute(it.value, var, val);
  }
};

// Try to solve one equation e = 1.  Returns 1 on progress, 0 when no rule
// applies, -1 on contradiction.
int solve_one(SymState& st, const Word& e0, bool& unresolved) {
  Word e = reduce(e0);
  if (e.empty()) return 1;
  if (!has_unknown(e)) return -1;
  // Preference: the newest free unknown, then older ones, then the unknown
  // of the current segment.  Eliminating the earlier unknown keeps the
  // latest segment as the parameter, which turns the equations met at the
  // end of a sweep into plain powers.
  std::vector<int> vars;
  auto present = [&](int v) {
    return std::any_of(e.begin(), e.end(), [&](Letter x) { return std::abs(x) == v; });
  };
  for (auto it = st.free_vars.rbegin(); it != st.free_vars.rend(); ++it)
    if (present(*it)) vars.push_back(*it);
  if (st.pending && present(st.pending)) vars.push_back(st.pending);
  for (Letter x : e)
    if (is_unknown(x) && std::find(vars.begin(), vars.end(), std::abs(x)) == vars.end())
      vars.push_back(std::abs(x));
  for (int v : vars) {
    int occ = 0;
    size_t pos = 0;
    for (size_t i = 0; i < e.size(); ++i)
      if (std::abs(e[i]) == v) {
        ++occ;
        pos = i;
      }
    if (occ != 1) continue;
    // A x^s B = 1
    Word A(e.begin(), e.begin() + pos), B(e.begin() + pos + 1, e.end());
    Word val = concat(inverse(A), inverse(B));
    if (e[pos] < 0) val = inverse(val);
    st.subst(v, val);
    return 1;
  }
  // cyclic power form x^{sk} C = 1
  Word c = cyclic_reduce(e);
  for (int v : vars) {
    size_t n = c.size();
    std::vector<size_t> at;
    for (size_t i = 0; i < n; ++i)
      if (std::abs(c[i]) == v) at.push_back(i);
    if (at.empty()) continue;
    int sign = c[at[0]] > 0 ? 1 : -1;
    bool same = std::all_of(at.begin(), at.end(), [&](size_t i) { return (c[i] > 0 ? 1 : -1) == sign; });
    if (!same) continue;
    // find a rotation where the occurrences form a prefix
    size_t start = n;
    for (size_t i : at)
      if (std::abs(c[(i + n - 1) % n]) != v) start = i;
    if (start == n) {  // x^k = 1 forces x = 1
      st.subst(v, Word{});
      return 1;
    }
    size_t k = at.size();
    bool contiguous = true;
    for (size_t j = 0; j < k; ++j)
      if (std::abs(c[(start + j) % n]) != v) contiguous = false;
    if (!contiguous) continue;
    Word C;
    for (size_t j = k; j < n; ++j) C.push_back(c[(start + j) % n]);
    Word root;
    if (free_root(inverse(C), static_cast<int>(k), root)) {
      st.subst(v, sign > 0 ? root : inverse(root));
      return 1;
    }
    if (!has_unknown(C)) return -1;
  }
  unresolved = true;
  return 0;
}

// Solve pending equations as far as possible.  False on contradiction.
bool settle(SymState& st) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i < st.eqs.size(); ++i) {
      Word e = reduce(st.eqs[i]);
      if (e.empty()) {
        st.eqs.erase(st.eqs.begin() + static_cast<long>(i));
        progress = true;
        break;
      }
      bool unresolved = false;
      Word keep = e;
      st.eqs.erase(st.eqs.begin() + static_cast<long>(i));
      int r = solve_one(st, keep, unresolved);
      if (r < 0) return false;
      if (r == 0) {
        st.eqs.insert(st.eqs.begin() + static_cast<long>(i), keep);
        continue;
      }
      progress = true;
      break;
    }
  }
  for (auto& w : st.nonempty)
    if (reduce(w).empty()) return false;
  return true;
}

class M1Decider {
 public:
  M1Decider(const Machine& m, long bound) : m_(m), bound_(bound) { analyse(); }

  M1Decision decide(const AdmissibleWord& w0) {
    M1Decision d;
    d.bound = bound_;
    const Hardware& h = m_.hardware();
    int N = h.nparts();
    if (w0.q_length() != N) throw Error(ErrorKind::Invalid, "not a configuration of M1");
    int p = -1;
    for (int i = 0; i < N; ++i) {
      if (w0.q[i] <= 0 || h.sym(w0.q[i]).part != i) throw Error(ErrorKind::Invalid, "not in the standard base");
      int ph = phase_of_.at(w0.q[i]);
      if (p >= 0 && ph != p) throw Error(ErrorKind::Invalid, "state letters of different phases");
      p = ph;
    }
    SymState st;
    st.sec.assign(N, Word{});
    for (int j = 1; j < N; ++j)
      for (Letter x : w0.tape[j - 1]) push_reduced(st.sec[j], x > 0 ? h.sym(x).origin : -h.sym(x).origin);
    w0_ = w0;
    result_ = &d;
    dfs(st, p, -1);
    if (d.accepting > 0)
      d.outcome = Outcome::Accepted;
    else if (incomplete_ > 0)
      d.outcome = Outcome::Incomplete;
    else
      d.outcome = Outcome::Rejected;
    if (incomplete_) d.note = std::to_string(incomplete_) + " branches left unresolved";
    if (cut_) d.note += (d.note.empty() ? "" : "; ") + std::to_string(cut_) + " branches cut by the length bound";
    return d;
  }

  long cut_count() const { return cut_; }

 private:
  void analyse() {
    const Hardware& h = m_.hardware();
    int N = h.nparts();
    std::map<std::string, int> by_step;
    for (int ri = 0; ri < static_cast<int>(m_.rules.size()); ri += 2) {
      const Rule& r = m_.rules[ri];
      if (r.kind != RuleKind::Working) continue;
      auto it = by_step.find(r.step);
      int p;
      if (it == by_step.end()) {
        p = static_cast<int>(phases_.size());
        by_step[r.step] = p;
        PhaseInfo info;
        info.step = r.step;
        info.effect.assign(N, 0);
        for (int j = 0; j <= N; ++j)
          if (r.locks[j]) info.locks.push_back(j);
        phases_.push_back(info);
        // effects from this rule
        bool first = true;
        for (int q = 0; q < N; ++q) {
          const RulePart& rp = r.parts[q];
          for (int side = 0; side < 2; ++side) {
            Letter x = side == 0 ? rp.left : rp.right;
            if (!x) continue;
            int sector = side == 0 ? q : q + 1;
            if (sector <= 0 || sector >= N) throw Error(ErrorKind::Invalid, "outer insertion");
            // left of part q means the right end of sector q, and vice versa
            bool at_right_end = side == 0;
            bool iota = (at_right_end && x < 0) || (!at_right_end && x > 0);
            if (first) {
              phases_[p].iota = iota;
              first = false;
            } else if (phases_[p].iota != iota) {
              throw Error(ErrorKind::Invalid, "phase mixes orientations");
            }
            if (phases_[p].effect[sector]) throw Error(ErrorKind::Invalid, "sector written twice");
            phases_[p].effect[sector] = at_right_end ? 1 : -1;
          }
        }
      } else {
        p = it->second;
      }
      int letter = 0;
      for (int q = 0; q < N; ++q) {
        const RulePart& rp = r.parts[q];
        if (rp.from != rp.to) throw Error(ErrorKind::Invalid, "working rule changes a state letter");
        for (Letter x : {rp.left, rp.right})
          if (x) letter = h.sym(x).origin;
        phase_of_[rp.from] = p;
      }
      phases_[p].rule_of[letter] = ri;
    }
    moves_.assign(phases_.size(), {});
    for (int ri = 0; ri < static_cast<int>(m_.rules.size()); ++ri) {
      const Rule& r = m_.rules[ri];
      if (r.kind == RuleKind::Working) continue;
      for (auto& rp : r.parts)
        if (rp.left || rp.right) throw Error(ErrorKind::Invalid, "transition inserts letters");
      int from = phase_of_.at(r.parts[0].from), to = phase_of_.at(r.parts[0].to);
      Move mv{ri, to, {}};
      for (int j = 0; j <= N; ++j)
        if (r.locks[j]) mv.locks.push_back(j);
      moves_[from].push_back(mv);
    }
    for (int q : m_.hardware().parts[0].letters)
      if (q == m_.accept_config().q[0]) phases_[phase_of_.at(q)].accept = true;
  }

  // the segment value fixes the history inside a phase
  void emit_history(const SymState& st, History& h) const {
    for (auto& it : st.items) {
      if (!it.segment) {
        h.push_back(it.rule);
        continue;
      }
      const PhaseInfo& ph = phases_[it.phase];
      for (Letter y : it.value) {
        Letter x = ph.iota ? -y : y;
        int ri = ph.rule_of.at(std::abs(x));
        h.push_back(x > 0 ? ri : ri + 1);
      }
    }
  }

  long length(const SymState& st) const {
    long L = 0;
    for (auto& it : st.items) L += it.segment ? static_cast<long>(it.value.size()) : 1;
    return L;
  }

  bool concrete(const SymState& st) const {
    if (!st.eqs.empty()) return false;
    for (auto& it : st.items)
      if (it.segment && has_unknown(it.value)) return false;
    return true;
  }

  void dfs(SymState st, int p, int entry) {
    if (++result_->branches > kMaxBranches) {
      ++incomplete_;
      return;
    }
    const PhaseInfo& ph = phases_[p];
    int N = m_.hardware().nparts();
    for (int nonempty = 0; nonempty < 2; ++nonempty) {
      SymState s = st;
      if (nonempty) {
        for (int j : ph.locks)
          if (j > 0 && j < N) s.eqs.push_back(s.sec[j]);
        int z = s.next_var++;
        s.pending = z;
        s.nonempty.push_back(Word{z});
        for (int j = 1; j < N; ++j) {
          if (ph.effect[j] > 0) s.sec[j] = concat(s.sec[j], Word{z});
          if (ph.effect[j] < 0) s.sec[j] = concat(Word{-z}, s.sec[j]);
        }
        s.items.push_back(Item{true, p, Word{z}, -1});
        s.fixed_length += 1;
        if (s.fixed_length > bound_) {
          ++cut_;
          continue;
        }
        if (!settle(s)) continue;
      }
      // stop here at the accept configuration
      if (ph.accept) {
        SymState a = s;
        for (int j = 1; j < N; ++j) a.eqs.push_back(a.sec[j]);
        if (settle(a)) finish(a);
      }
      for (const Move& mv : moves_[p]) {
        if (!nonempty && entry >= 0 && mv.rule == m_.rules[entry].inverse) continue;
        SymState t = s;
        for (int j : mv.locks)
          if (j > 0 && j < N) t.eqs.push_back(t.sec[j]);
        t.items.push_back(Item{false, p, {}, mv.rule});
        t.fixed_length += 1;
        if (t.fixed_length > bound_) {
          ++cut_;
          continue;
        }
        if (!settle(t)) continue;
        if (concrete(t) && length(t) > bound_) {
          ++cut_;
          continue;
        }
        if (t.pending) t.free_vars.push_back(t.pending);
        t.pending = 0;
        dfs(std::move(t), mv.to, mv.rule);
      }
    }
  }

  void finish(const SymState& st) {
    if (!concrete(st)) {
      ++incomplete_;
      return;
    }
    long L = length(st);
    if (L > bound_) {
      ++cut_;
      return;
    }
    History h;
    emit_history(st, h);
    Computation c = run(m_, w0_, h);
    if (c.final() != m_.accept_config()) throw Error(ErrorKind::Invalid, "symbolic witness does not accept");
    if (!is_reduced_history(m_, h)) throw Error(ErrorKind::Invalid, "symbolic witness not reduced");
    if (result_->accepting == 0 || h.size() < result_->witness.size()) result_->witness = h;
    ++result_->accepting;
  }

  static constexpr long kMaxBranches = 2000000;
  const Machine& m_;
  long bound_;
  std::vector<PhaseInfo> phases_;
  std::vector<std::vector<Move>> moves_;
  std::unordered_map<int, int> phase_of_;
  AdmissibleWord w0_;
  M1Decision* result_ = nullptr;
  long incomplete_ = 0;
  long cut_ = 0;
};

}  // namespace

M1Decision decide_accept_m1(const Machine& m1, int n, const AdmissibleWord& w0, long bound) {
  long lemma = m1_length_bound(n, w0);
  if (bound < 0) bound = lemma;
  M1Decider dec(m1, bound);
  M1Decision d = dec.decide(w0);
  d.lemma_bound = lemma;
  if (d.outcome == Outcome::Rejected && dec.cut_count() > 0 && bound < lemma)
    throw Error(ErrorKind::BudgetExceeded, "bound below m1_length_bound", 0);
  return d;
}

}  // namespace smf
