#include "smforge/combinators.hpp"

#include <algorithm>
#include <set>

namespace smf {

std::vector<bool> common_locks(const Machine& m) {
  int S = m.hw->nsectors();
  std::vector<bool> c(S, true);
  for (size_t i = 0; i < m.rules.size(); i += 2)
    for (int j = 0; j < S; ++j) c[j] = c[j] && m.rules[i].locks[j];
  return c;
}

static void outer_domains(const Hardware& hw, Rule& r) {
  int N = hw.nparts();
  r.domains[0] = Domain::Empty;
  if (!hw.cyclic) r.domains[N] = Domain::Empty;
  for (int j = 0; j <= N; ++j)
    if (r.locks[j]) r.domains[j] = Domain::Empty;
}

Rule identity_rule(const Hardware& hw, const std::vector<int>& letters, const std::string& id,
                   const std::string& step, RuleKind kind) {
  int N = hw.nparts();
  Rule r;
  r.id = id;
  r.step = step;
  r.kind = kind;
  r.parts.resize(N);
  for (int p = 0; p < N; ++p) r.parts[p] = RulePart{letters[p], letters[p], 0, 0};
  r.locks.assign(N + 1, false);
  r.domains.assign(N + 1, Domain::Full);
  r.subsets.assign(N + 1, {});
  outer_domains(hw, r);
  return r;
}

void lock(Rule& r, int sector) {
  r.locks[sector] = true;
  r.domains[sector] = Domain::Empty;
}

static Letter remap_letter(Letter x, const Hardware& from, const Hardware& to) {
  if (!x) return 0;
  int id = to.id(from.sym(x).name);
  return x > 0 ? id : -id;
}

Rule remap_rule(const Rule& r, const Hardware& from, const Hardware& to) {
  if (from.nparts() != to.nparts()) throw Error(ErrorKind::ShapeMismatch, "part count differs");
  Rule v = r;
  for (auto& p : v.parts) {
    p.from = remap_letter(p.from, from, to);
    p.to = remap_letter(p.to, from, to);
    p.left = remap_letter(p.left, from, to);
    p.right = remap_letter(p.right, from, to);
  }
  for (auto& s : v.subsets)
    for (auto& x : s) x = remap_letter(x, from, to);
  return v;
}

// ------------------------------------------------------------- primitives

static Machine primitive(const std::vector<std::string>& Y, bool left_right) {
  if (Y.empty()) throw Error(ErrorKind::EmptyAlphabet, left_right ? "LR" : "RL");
  auto hw = std::make_shared<Hardware>();
  std::string run = left_right ? "P" : "R";
  std::string r = left_right ? "p" : "r";
  hw->add_part("Q(1)");
  hw->add_part(run);
  hw->add_part("Q(2)");
  hw->init_sectors();
  int q1 = hw->add_state(0, "q(1)");
  int r1 = hw->add_state(1, r + "(1)");
  int r2 = hw->add_state(1, r + "(2)");
  int q2 = hw->add_state(2, "q(2)");
  hw->parts[1].end = r2;
  hw->set_alphabet(Y);
  std::vector<int> y1, y2;
  for (size_t i = 0; i < Y.size(); ++i) y1.push_back(hw->add_tape(1, Y[i] + "1", static_cast<int>(i) + 1));
  for (size_t i = 0; i < Y.size(); ++i) y2.push_back(hw->add_tape(2, Y[i] + "2", static_cast<int>(i) + 1));

  Machine m;
  m.name = left_right ? "LR" : "RL";
  m.hw = hw;
  m.input_sectors = {1};
  std::string g = left_right ? "zeta" : "xi";
  int sgn = left_right ? -1 : 1;
  for (size_t i = 0; i < Y.size(); ++i) {
    Rule t = identity_rule(*hw, {q1, r1, q2}, g + "1(" + Y[i] + ")", m.name);
    t.parts[1].left = sgn * y1[i];
    t.parts[1].right = -sgn * y2[i];
    m.add_rule(t);
  }
  Rule c = identity_rule(*hw, {q1, r1, q2}, g + "12", m.name);
  c.parts[1].to = r2;
  lock(c, left_right ? 1 : 2);
  m.add_rule(c);
  for (size_t i = 0; i < Y.size(); ++i) {
    Rule t = identity_rule(*hw, {q1, r2, q2}, g + "2(" + Y[i] + ")", m.name);
    t.parts[1].left = -sgn * y1[i];
    t.parts[1].right = sgn * y2[i];
    m.add_rule(t);
  }
  m.validate();
  return m;
}

Machine lr(const std::vector<std::string>& Y) { return primitive(Y, true); }
Machine rl(const std::vector<std::string>& Y) { return primitive(Y, false); }

// ---------------------------------------------------------- concatenation

Machine concatenate(const std::vector<Machine>& subs, const std::vector<TransitionSpec>& transitions,
                    const std::string& name) {
  if (subs.empty()) throw Error(ErrorKind::ShapeMismatch, "no submachines");
  const Hardware& h0 = *subs[0].hw;
  int N = h0.nparts();
  for (auto& s : subs) {
    const Hardware& h = *s.hw;
    if (h.nparts() != N || h.cyclic != h0.cyclic) throw Error(ErrorKind::ShapeMismatch, s.name);
    for (int p = 0; p < N; ++p)
      if (h.parts[p].name != h0.parts[p].name) throw Error(ErrorKind::ShapeMismatch, "part " + h.parts[p].name);
    for (int j = 0; j <= N; ++j) {
      if (h.tape[j].size() != h0.tape[j].size()) throw Error(ErrorKind::ShapeMismatch, "sector " + h.sector_names[j]);
      for (size_t t = 0; t < h.tape[j].size(); ++t)
        if (h.sym(h.tape[j][t]).name != h0.sym(h0.tape[j][t]).name)
          throw Error(ErrorKind::ShapeMismatch, "tape alphabet of " + h.sector_names[j]);
    }
  }

  auto hw = std::make_shared<Hardware>();
  hw->cyclic = h0.cyclic;
  for (int p = 0; p < N; ++p) hw->add_part(h0.parts[p].name);
  hw->init_sectors();
  hw->sector_names = h0.sector_names;
  hw->set_alphabet(h0.alphabet);
  for (int p = 0; p < N; ++p)
    for (auto& s : subs)
      for (int x : s.hw->parts[p].letters) {
        const std::string& nm = s.hw->sym(x).name;
        if (!hw->has(nm)) hw->add_state(p, nm);
      }
  for (int p = 0; p < N; ++p) {
    hw->parts[p].start = hw->id(h0.sym(h0.parts[p].start).name);
    const Hardware& hl = *subs.back().hw;
    hw->parts[p].end = hw->id(hl.sym(hl.parts[p].end).name);
  }
  for (int j = 0; j <= N; ++j)
    for (int x : h0.tape[j]) hw->add_tape(j, h0.sym(x).name, h0.sym(x).origin);

  Machine m;
  m.name = name.empty() ? subs[0].name : name;
  m.hw = hw;
  m.input_sectors = subs[0].input_sectors;

  // transitions are placed right after their source submachine
  std::vector<std::vector<const TransitionSpec*>> after(subs.size());
  for (auto& t : transitions) {
    if (t.from < 0 || t.to < 0 || t.from >= static_cast<int>(subs.size()) || t.to >= static_cast<int>(subs.size()))
      throw Error(ErrorKind::ShapeMismatch, "transition " + t.id + " names a missing submachine");
    after[t.from].push_back(&t);
  }
  for (size_t i = 0; i < subs.size(); ++i) {
    const Machine& s = subs[i];
    for (size_t k = 0; k < s.rules.size(); k += 2) {
      Rule r = remap_rule(s.rules[k], *s.hw, *hw);
      m.add_rule(r, s.rules[k + 1].step);
    }
    for (auto* t : after[i]) {
      const Hardware& hf = *subs[t->from].hw;
      const Hardware& ht = *subs[t->to].hw;
      std::vector<int> from, to;
      for (int p = 0; p < N; ++p) {
        from.push_back(hw->id(hf.sym(hf.parts[p].end).name));
        to.push_back(hw->id(ht.sym(ht.parts[p].start).name));
      }
      Rule r = identity_rule(*hw, from, t->id, t->step, t->kind);
      for (int p = 0; p < N; ++p) r.parts[p].to = to[p];
      if (t->locks) {
        for (int j : *t->locks) lock(r, hw->canon_sector(j));
      } else {
        auto a = common_locks(subs[t->from]), b = common_locks(subs[t->to]);
        for (int j = 0; j <= N; ++j)
          if (a[j] || b[j]) lock(r, j);
      }
      outer_domains(*hw, r);
      m.add_rule(r, t->inverse_step.empty() ? t->step : t->inverse_step);
    }
  }
  m.validate();
  return m;
}

// ------------------------------------------------------------- parallel

Machine parallel(const Machine& M, int L, const std::function<bool(int, int)>& per_copy_lock) {
  if (L < 1) throw Error(ErrorKind::InvalidParams, "L must be positive");
  const Hardware& h = *M.hw;
  int N = h.nparts();
  auto hw = std::make_shared<Hardware>();
  hw->cyclic = true;
  auto tag = [](const std::string& s, int i) { return s + "@" + std::to_string(i); };
  for (int i = 1; i <= L; ++i)
    for (int p = 0; p < N; ++p) hw->add_part(tag(h.parts[p].name, i));
  hw->init_sectors();
  hw->set_alphabet(h.alphabet);
  // copy sector c of coordinate i: global index (i-1)N + c for 1 <= c < N,
  // the wrap sector of M joins coordinate i to coordinate i+1
  auto sec = [&](int i, int c) {
    if (c >= 1 && c < N) return (i - 1) * N + c;
    if (c == N) return i * N;               // after the last part of coordinate i
    return i == 1 ? L * N : (i - 1) * N;    // before the first part
  };
  for (int i = 1; i <= L; ++i)
    for (int c = 1; c < N; ++c) hw->sector_names[sec(i, c)] = tag(h.sector_names[c], i);
  hw->sector_names[0] = hw->sector_names[L * N];
  for (int i = 1; i <= L; ++i)
    for (int p = 0; p < N; ++p) {
      int gp = (i - 1) * N + p;
      for (int x : h.parts[p].letters) hw->add_state(gp, tag(h.sym(x).name, i));
      hw->parts[gp].start = hw->id(tag(h.sym(h.parts[p].start).name, i));
      hw->parts[gp].end = hw->id(tag(h.sym(h.parts[p].end).name, i));
    }
  for (int i = 1; i <= L; ++i)
    for (int c = 1; c <= N; ++c) {
      if (c == N && !h.cyclic) continue;
      for (int x : h.tape[c]) hw->add_tape(sec(i, c), tag(h.sym(x).name, i), h.sym(x).origin);
    }

  Machine m;
  m.name = M.name + "^" + std::to_string(L);
  m.hw = hw;
  for (int i = 1; i <= L; ++i)
    for (int j : M.input_sectors) m.input_sectors.push_back(sec(i, j));
  int GN = L * N;
  auto cp = [&](Letter x, int i) -> Letter {
    if (!x) return 0;
    int id = hw->id(tag(h.sym(x).name, i));
    return x > 0 ? id : -id;
  };
  for (size_t k = 0; k < M.rules.size(); k += 2) {
    const Rule& r = M.rules[k];
    Rule v;
    v.id = r.id;
    v.step = r.step;
    v.kind = r.kind;
    v.sub = r.sub;
    v.parts.resize(GN);
    v.locks.assign(GN + 1, false);
    v.domains.assign(GN + 1, Domain::Full);
    v.subsets.assign(GN + 1, {});
    for (int i = 1; i <= L; ++i) {
      for (int c = 1; c <= N; ++c) {
        int g = sec(i, c);
        bool locked = (c == N && !h.cyclic) ? true : r.locks[c];
        if (per_copy_lock && per_copy_lock(i, c)) locked = true;
        if (locked) {
          v.locks[g] = true;
          v.domains[g] = Domain::Empty;
        } else if (r.domains[c] == Domain::Subset) {
          v.domains[g] = Domain::Subset;
          for (int x : r.subsets[c]) v.subsets[g].push_back(cp(x, i));
        } else {
          v.domains[g] = r.domains[c];
        }
      }
    }
    for (int i = 1; i <= L; ++i) {
      for (int p = 0; p < N; ++p) {
        const RulePart& rp = r.parts[p];
        int gp = (i - 1) * N + p;
        RulePart& o = v.parts[gp];
        o.from = cp(rp.from, i);
        o.to = cp(rp.to, i);
        o.left = v.locks[sec(i, p == 0 ? 0 : p)] ? 0 : cp(rp.left, i);
        o.right = v.locks[sec(i, p + 1)] ? 0 : cp(rp.right, i);
      }
    }
    v.locks[0] = v.locks[GN];
    v.domains[0] = Domain::Empty;
    m.add_rule(v, M.rules[k + 1].step);
  }
  m.validate();
  return m;
}

// --------------------------------------------------------------- cyclize

Machine cyclize(const Machine& M, const std::string& part_name, const std::string& letter) {
  const Hardware& h = *M.hw;
  if (h.cyclic) throw Error(ErrorKind::AlreadyCyclic, M.name);
  int N = h.nparts();
  auto hw = std::make_shared<Hardware>();
  hw->cyclic = true;
  hw->add_part(part_name);
  for (auto& p : h.parts) hw->add_part(p.name);
  hw->init_sectors();
  for (int j = 1; j < N; ++j) hw->sector_names[j + 1] = h.sector_names[j];
  hw->set_alphabet(h.alphabet);
  int t = hw->add_state(0, letter);
  for (int p = 0; p < N; ++p) {
    for (int x : h.parts[p].letters) hw->add_state(p + 1, h.sym(x).name);
    hw->parts[p + 1].start = hw->id(h.sym(h.parts[p].start).name);
    hw->parts[p + 1].end = hw->id(h.sym(h.parts[p].end).name);
  }
  for (int j = 1; j < N; ++j)
    for (int x : h.tape[j]) hw->add_tape(j + 1, h.sym(x).name, h.sym(x).origin);

  Machine m;
  m.name = M.name + "^cyc";
  m.hw = hw;
  for (int j : M.input_sectors) m.input_sectors.push_back(j + 1);
  for (size_t k = 0; k < M.rules.size(); k += 2) {
    const Rule& r = M.rules[k];
    Rule v = identity_rule(*hw, std::vector<int>(N + 1, t), r.id, r.step, r.kind);
    v.sub = r.sub;
    for (int p = 0; p < N; ++p) {
      const RulePart& rp = r.parts[p];
      v.parts[p + 1] = RulePart{remap_letter(rp.from, h, *hw), remap_letter(rp.to, h, *hw),
                                remap_letter(rp.left, h, *hw), remap_letter(rp.right, h, *hw)};
    }
    // old outer positions become the two new sectors
    v.parts[1].left = 0;
    v.parts[N].right = 0;
    for (int j = 1; j < N; ++j) {
      v.locks[j + 1] = r.locks[j];
      v.domains[j + 1] = r.domains[j];
      if (r.domains[j] == Domain::Subset)
        for (int x : r.subsets[j]) v.subsets[j + 1].push_back(remap_letter(x, h, *hw));
    }
    lock(v, 1);
    lock(v, N + 1);
    v.locks[0] = true;
    v.domains[0] = Domain::Empty;
    m.add_rule(v, M.rules[k + 1].step);
  }
  m.validate();
  return m;
}

// ------------------------------------------------------------------ zip

Rule zip_rules(const Hardware& hw, const Rule& a, const Rule& b, const std::string& id) {
  int N = hw.nparts();
  Rule r = a;
  r.id = id;
  for (int p = 0; p < N; ++p) {
    const RulePart& x = a.parts[p];
    const RulePart& y = b.parts[p];
    bool ax = x.from != x.to || x.left || x.right;
    bool by = y.from != y.to || y.left || y.right;
    if (ax && by) throw Error(ErrorKind::ShapeMismatch, id + ": both rules act on part " + hw.parts[p].name);
    if (!ax && !by && !(x == y)) throw Error(ErrorKind::ShapeMismatch, id + ": idle parts disagree");
    r.parts[p] = by ? y : x;
  }
  for (int j = 0; j <= N; ++j)
    if (b.locks[j]) lock(r, j);
  for (int p = 0; p < N; ++p) {
    if (r.parts[p].left && r.locks[hw.canon_sector(p)])
      throw Error(ErrorKind::ShapeMismatch, id + ": insertion into locked sector");
    if (r.parts[p].right && r.locks[hw.canon_sector(p + 1)])
      throw Error(ErrorKind::ShapeMismatch, id + ": insertion into locked sector");
  }
  return r;
}

// --------------------------------------------------------------- relabel

Machine relabel(const Machine& M, const std::function<std::string(const std::string&)>& state,
                const std::string& rule_suffix, const std::string& step_suffix, const std::string& name) {
  const Hardware& h = *M.hw;
  int N = h.nparts();
  auto hw = std::make_shared<Hardware>();
  hw->cyclic = h.cyclic;
  for (auto& p : h.parts) hw->add_part(p.name);
  hw->init_sectors();
  hw->sector_names = h.sector_names;
  hw->set_alphabet(h.alphabet);
  for (int p = 0; p < N; ++p) {
    for (int x : h.parts[p].letters) hw->add_state(p, state(h.sym(x).name));
    hw->parts[p].start = hw->id(state(h.sym(h.parts[p].start).name));
    hw->parts[p].end = hw->id(state(h.sym(h.parts[p].end).name));
  }
  for (int j = 0; j <= N; ++j)
    for (int x : h.tape[j]) hw->add_tape(j, h.sym(x).name, h.sym(x).origin);
  auto mp = [&](Letter x) -> Letter {
    if (!x) return 0;
    const Symbol& s = h.sym(x);
    int id = hw->id(s.kind == SymKind::State ? state(s.name) : s.name);
    return x > 0 ? id : -id;
  };
  Machine m;
  m.name = name.empty() ? M.name : name;
  m.hw = hw;
  m.input_sectors = M.input_sectors;
  for (size_t k = 0; k < M.rules.size(); k += 2) {
    Rule r = M.rules[k];
    r.id += rule_suffix;
    r.step += step_suffix;
    for (auto& p : r.parts) p = RulePart{mp(p.from), mp(p.to), mp(p.left), mp(p.right)};
    for (auto& s : r.subsets)
      for (auto& x : s) x = mp(x);
    m.add_rule(r, M.rules[k + 1].step + step_suffix);
  }
  m.validate();
  return m;
}

}  // namespace smf
