#include "smforge/tower.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace smf {

// ---------------------------------------------------------------- params

void TowerParams::validate() const {
  if (A.empty()) throw Error(ErrorKind::InvalidParams, "empty alphabet");
  std::set<std::string> seen;
  for (auto& a : A) {
    if (a.empty() || !seen.insert(a).second) throw Error(ErrorKind::InvalidParams, "bad alphabet letter '" + a + "'");
    for (char c : a)
      if (!std::isalnum(static_cast<unsigned char>(c))) throw Error(ErrorKind::InvalidParams, "letter names are alphanumeric");
  }
  if (n < 2) throw Error(ErrorKind::InvalidParams, "n must be at least 2");
  if (k < 2) throw Error(ErrorKind::InvalidParams, "k must be at least 2");
  if (L < 3) throw Error(ErrorKind::InvalidParams, "L must be at least 3");
}

std::string TowerParams::str() const {
  std::string s = "alphabet = ";
  for (size_t i = 0; i < A.size(); ++i) s += (i ? "," : "") + A[i];
  return s + "\nn = " + std::to_string(n) + "\nk = " + std::to_string(k) + "\nL = " + std::to_string(L) + "\n";
}

static std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

TowerParams TowerParams::parse(const std::string& text) {
  TowerParams p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidParams, "expected key = value: " + line);
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "alphabet") {
      std::string cleaned;
      for (char c : val) cleaned += (c == '[' || c == ']' || c == '"' || c == '\'' || c == ',') ? ' ' : c;
      std::istringstream vs(cleaned);
      std::vector<std::string> toks;
      std::string t;
      while (vs >> t) toks.push_back(t);
      // a bare "ab" means the letters a and b
      if (toks.size() == 1 && val.find_first_of(",[\"'") == std::string::npos) {
        std::vector<std::string> chars;
        for (char c : toks[0]) chars.emplace_back(1, c);
        toks = chars;
      }
      p.A = toks;
    } else if (key == "n" || key == "k" || key == "L") {
      int v;
      try {
        size_t used;
        v = std::stoi(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidParams, key + " must be an integer");
      }
      (key == "n" ? p.n : key == "k" ? p.k : p.L) = v;
    } else {
      throw Error(ErrorKind::InvalidParams, "unknown key " + key);
    }
  }
  p.validate();
  return p;
}

TowerParams TowerParams::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidParams, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string step_pair(int i, int j) {
  if (i < 10 && j < 10) return "(" + std::to_string(i) + std::to_string(j) + ")";
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

static std::string step_one(int i) { return "(" + std::to_string(i) + ")"; }

// ------------------------------------------------------- rule builder

namespace {

// Builds a rule on a submachine hardware, starting from the identity on the
// start letters of every part.
struct RB {
  const Hardware& h;
  Rule r;
  RB(const Hardware& hw, const std::string& id, const std::string& step, RuleKind kind = RuleKind::Working)
      : h(hw) {
    std::vector<int> st;
    for (auto& p : hw.parts) st.push_back(p.start);
    r = identity_rule(hw, st, id, step, kind);
  }
  int part(const std::string& name) const { return h.part_index(name); }
  RB& state(const std::string& p, int from, int to) {
    r.parts[part(p)].from = from;
    r.parts[part(p)].to = to;
    return *this;
  }
  RB& at_end(const std::string& p) {
    int i = part(p);
    r.parts[i].from = r.parts[i].to = h.parts[i].end;
    return *this;
  }
  RB& to_end(const std::string& p) {
    r.parts[part(p)].to = h.parts[part(p)].end;
    return *this;
  }
  // letter a (index into A) of the sector left/right of part p, with sign
  RB& left(const std::string& p, int a, int sign) {
    int i = part(p);
    r.parts[i].left = sign * h.tape[h.canon_sector(i)].at(a);
    return *this;
  }
  RB& right(const std::string& p, int a, int sign) {
    int i = part(p);
    r.parts[i].right = sign * h.tape[h.canon_sector(i + 1)].at(a);
    return *this;
  }
  RB& lock(const std::string& sector) {
    smf::lock(r, h.sector_index(sector));
    return *this;
  }
  RB& lock_all_except(const std::set<std::string>& open) {
    for (int j = 1; j < h.nsectors(); ++j)
      if (!open.count(h.sector_names[j])) smf::lock(r, j);
    return *this;
  }
};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// ------------------------------------------------------------------ M1

// Insertions per M1 part (left sign, right sign) and locked sectors.
struct PhaseShape {
  int left[5] = {0, 0, 0, 0, 0};
  int right[5] = {0, 0, 0, 0, 0};
  std::vector<int> locks;
};

PhaseShape m1_phase_shape(int i, int n) {
  PhaseShape s;
  if (i == 1) {
    s.left[1] = -1;
    s.right[2] = 1;
    s.locks = {2, 4};
  } else if (i == 2 * n) {
    s.right[2] = -1;
    s.left[4] = 1;
    s.locks = {1, 2};
  } else if (i % 2 == 0) {
    s.left[2] = 1;
    s.right[2] = -1;
    s.locks = {4};
  } else {
    s.left[1] = -1;
    s.left[2] = -1;
    s.right[2] = 1;
    if (i == 2 * n - 1)
      s.left[4] = -1;
    else
      s.locks = {4};
  }
  return s;
}

std::vector<int> m1_sigma_locks(int i, int n) {
  if (i == 1) return {2, 4};
  if (i == 2 * n - 1) return {1, 2};
  if (i % 2 == 0) return {3, 4};
  return {2, 4};
}

HardwarePtr m1_sub_hw(const std::vector<std::string>& A, int phase) {
  auto hw = std::make_shared<Hardware>();
  for (int p = 0; p <= 4; ++p) hw->add_part("Q" + std::to_string(p));
  hw->init_sectors();
  hw->set_alphabet(A);
  for (int p = 0; p <= 4; ++p) hw->add_state(p, "q" + std::to_string(p) + "(" + std::to_string(phase) + ")");
  for (int j = 1; j <= 4; ++j)
    for (size_t a = 0; a < A.size(); ++a) hw->add_tape(j, A[a] + std::to_string(j), static_cast<int>(a) + 1);
  return hw;
}

}  // namespace

Machine build_m1_phase(const std::vector<std::string>& A, int n, int phase) {
  if (A.empty()) throw Error(ErrorKind::EmptyAlphabet, "M1");
  auto hw = m1_sub_hw(A, phase);
  Machine m;
  m.name = "M1(" + std::to_string(phase) + ")";
  m.hw = hw;
  m.input_sectors = {1};
  PhaseShape s = m1_phase_shape(phase, n);
  for (size_t a = 0; a < A.size(); ++a) {
    RB b(*hw, "tau" + std::to_string(phase) + "(" + A[a] + ")", step_one(phase));
    for (int p = 0; p <= 4; ++p) {
      std::string part = "Q" + std::to_string(p);
      if (s.left[p]) b.left(part, static_cast<int>(a), s.left[p]);
      if (s.right[p]) b.right(part, static_cast<int>(a), s.right[p]);
    }
    for (int j : s.locks) smf::lock(b.r, j);
    m.add_rule(b.r);
  }
  m.validate();
  return m;
}

Machine build_m1(const std::vector<std::string>& A, int n) {
  if (A.empty()) throw Error(ErrorKind::EmptyAlphabet, "M1");
  if (n < 2) throw Error(ErrorKind::InvalidParams, "n must be at least 2");
  std::vector<Machine> subs;
  std::vector<TransitionSpec> tr;
  for (int i = 1; i <= 2 * n; ++i) subs.push_back(build_m1_phase(A, n, i));
  for (int i = 1; i < 2 * n; ++i) {
    TransitionSpec t;
    t.from = i - 1;
    t.to = i;
    t.id = "sigma" + step_pair(i, i + 1);
    t.step = step_pair(i, i + 1);
    t.inverse_step = step_pair(i + 1, i);
    t.locks = m1_sigma_locks(i, n);
    tr.push_back(t);
  }
  Machine m = concatenate(subs, tr, "M1");
  return m;
}

// ------------------------------------------------------------- M2 / M3

namespace {

// Parts of the M2 standard base, optionally with P0 in front (M3).
std::vector<std::string> m2_parts(bool p0) {
  std::vector<std::string> v = {"Q0", "P1", "Q1", "R1", "Q2", "R2", "Q3", "P4", "Q4"};
  if (p0) v.insert(v.begin(), "P0");
  return v;
}

HardwarePtr m2_sub_hw(const std::vector<std::string>& A, bool p0, const std::string& tag,
                      const std::set<std::string>& running) {
  auto hw = std::make_shared<Hardware>();
  auto parts = m2_parts(p0);
  for (auto& p : parts) hw->add_part(p);
  hw->init_sectors();
  hw->set_alphabet(A);
  for (size_t p = 0; p < parts.size(); ++p) {
    std::string base = lower(parts[p]) + "(" + tag;
    if (running.count(parts[p])) {
      hw->add_state(static_cast<int>(p), base + ":1)");
      int e = hw->add_state(static_cast<int>(p), base + ":2)");
      hw->parts[p].end = e;
    } else {
      hw->add_state(static_cast<int>(p), base + ")");
    }
  }
  for (int j = 1; j < hw->nparts(); ++j)
    for (size_t a = 0; a < A.size(); ++a)
      hw->add_tape(j, A[a] + "_" + hw->sector_names[j], static_cast<int>(a) + 1);
  return hw;
}

// M1 sector j -> M2 sector name
const char* kM1Sector[5] = {"", "Q0P1", "R1Q2", "R2Q3", "Q3P4"};
// first and last M2 part of each M1 part
const char* kGroupFirst[5] = {"Q0", "P1", "Q2", "Q3", "P4"};
const char* kGroupLast[5] = {"Q0", "R1", "R2", "Q3", "Q4"};

Machine make_sub(const std::string& name, HardwarePtr hw, bool p0) {
  Machine m;
  m.name = name;
  m.hw = hw;
  m.input_sectors = {hw->sector_index(p0 ? "P0Q0" : "Q0P1")};
  return m;
}

// M2(2i): the rules of M1(i) acting on the M1 sectors, the new sectors locked.
Machine m2_even(const std::vector<std::string>& A, int n, int i, bool p0) {
  int idx = 2 * i;
  auto hw = m2_sub_hw(A, p0, std::to_string(idx), {});
  Machine m = make_sub("M2(" + std::to_string(idx) + ")", hw, p0);
  PhaseShape s = m1_phase_shape(i, n);
  for (size_t a = 0; a < A.size(); ++a) {
    RB b(*hw, "tau" + std::to_string(i) + "(" + A[a] + ")", step_one(idx));
    for (int p = 0; p <= 4; ++p) {
      if (s.left[p]) b.left(kGroupFirst[p], static_cast<int>(a), s.left[p]);
      if (s.right[p]) b.right(kGroupLast[p], static_cast<int>(a), s.right[p]);
    }
    for (int j : s.locks) b.lock(kM1Sector[j]);
    for (auto sec : {"P1Q1", "Q1R1", "Q2R2", "P4Q4"}) b.lock(sec);
    if (p0) b.lock("P0Q0");
    m.add_rule(b.r);
  }
  m.validate();
  return m;
}

// LR on Q0 P1 Q1 (the i^- half of an odd step).
Machine m2_lr(const std::vector<std::string>& A, int i, bool p0) {
  std::string tag = std::to_string(i) + "-";
  auto hw = m2_sub_hw(A, p0, tag, {"P1"});
  Machine m = make_sub("M2(" + tag + ")", hw, p0);
  std::set<std::string> open = {"Q0P1", "P1Q1", i % 4 == 3 ? "R2Q3" : "R1Q2"};
  std::string sfx = "[" + std::to_string(i) + "]";
  std::string st = step_one(i);
  for (size_t a = 0; a < A.size(); ++a)
    m.add_rule(RB(*hw, "zeta1(" + A[a] + ")" + sfx, st).left("P1", a, -1).right("P1", a, 1).lock_all_except(open).r);
  m.add_rule(RB(*hw, "zeta12" + sfx, st).to_end("P1").lock_all_except(open).lock("Q0P1").r);
  for (size_t a = 0; a < A.size(); ++a)
    m.add_rule(RB(*hw, "zeta2(" + A[a] + ")" + sfx, st).at_end("P1").left("P1", a, 1).right("P1", a, -1).lock_all_except(open).r);
  m.validate();
  return m;
}

// RL on Q2 R2 Q3 (i = 3 mod 4) or Q1 R1 Q2 (i = 1 mod 4).
Machine m2_rl(const std::vector<std::string>& A, int i, bool p0) {
  std::string tag = std::to_string(i) + "+";
  bool three = i % 4 == 3;
  std::string R = three ? "R2" : "R1";
  std::string qr = three ? "Q2R2" : "Q1R1", rq = three ? "R2Q3" : "R1Q2";
  auto hw = m2_sub_hw(A, p0, tag, {R});
  Machine m = make_sub("M2(" + tag + ")", hw, p0);
  std::set<std::string> open = {qr, rq, "Q0P1"};
  std::string sfx = "[" + std::to_string(i) + "]";
  std::string st = step_one(i);
  for (size_t a = 0; a < A.size(); ++a)
    m.add_rule(RB(*hw, "xi1(" + A[a] + ")" + sfx, st).left(R, a, 1).right(R, a, -1).lock_all_except(open).r);
  m.add_rule(RB(*hw, "xi12" + sfx, st).to_end(R).lock_all_except(open).lock(rq).r);
  for (size_t a = 0; a < A.size(); ++a)
    m.add_rule(RB(*hw, "xi2(" + A[a] + ")" + sfx, st).at_end(R).left(R, a, -1).right(R, a, 1).lock_all_except(open).r);
  m.validate();
  return m;
}

// (4n-1)_j: RL(Y3) on Q2 R2 Q3 zipped with LR(Y4^-1) on Q3 P4 Q4.
Machine m2_last(const std::vector<std::string>& A, int n, int j, bool p0) {
  int i = 4 * n - 1;
  std::string tag = std::to_string(i) + "_" + std::to_string(j);
  auto hw = m2_sub_hw(A, p0, tag, {"R2", "P4"});
  Machine m = make_sub("M2(" + tag + ")", hw, p0);
  std::set<std::string> open = {"Q2R2", "R2Q3", "Q3P4", "P4Q4"};
  std::string sfx = "[" + std::to_string(j) + "]";
  std::string st = step_one(i);
  auto zip = [&](RB a, RB b, const std::string& id) {
    Rule r = zip_rules(*hw, a.lock_all_except(open).r, b.lock_all_except(open).r, id);
    return r;
  };
  for (size_t a = 0; a < A.size(); ++a)
    m.add_rule(zip(RB(*hw, "", st).left("R2", a, 1).right("R2", a, -1),
                   RB(*hw, "", st).left("P4", a, 1).right("P4", a, -1), "xizeta1(" + A[a] + ")" + sfx));
  m.add_rule(zip(RB(*hw, "", st).to_end("R2").lock("R2Q3"), RB(*hw, "", st).to_end("P4").lock("Q3P4"),
                 "xizeta12" + sfx));
  for (size_t a = 0; a < A.size(); ++a)
    m.add_rule(zip(RB(*hw, "", st).at_end("R2").at_end("P4").left("R2", a, -1).right("R2", a, 1),
                   RB(*hw, "", st).at_end("R2").at_end("P4").left("P4", a, -1).right("P4", a, 1),
                   "xizeta2(" + A[a] + ")" + sfx));
  m.validate();
  return m;
}

std::vector<int> sectors_locked(const std::vector<bool>& v) {
  std::vector<int> r;
  for (size_t j = 1; j < v.size(); ++j)
    if (v[j]) r.push_back(static_cast<int>(j));
  return r;
}

// The submachines M2(2) .. M2(4n) in order (each odd one already concatenated).
std::vector<Machine> m2_steps(const TowerParams& p, bool p0) {
  int n = p.n;
  std::vector<Machine> steps;
  for (int i = 1; i <= 2 * n; ++i) {
    steps.push_back(m2_even(p.A, n, i, p0));
    if (i == 2 * n) break;
    int odd = 2 * i + 1;
    if (odd < 4 * n - 1) {
      Machine lo = m2_lr(p.A, odd, p0), hi = m2_rl(p.A, odd, p0);
      auto prev = common_locks(steps.back()), a = common_locks(lo), b = common_locks(hi);
      std::vector<bool> locks(prev.size());
      for (size_t j = 0; j < locks.size(); ++j) locks[j] = prev[j] || (a[j] && b[j]);
      TransitionSpec chi;
      chi.from = 0;
      chi.to = 1;
      chi.id = "chi[" + std::to_string(odd) + "]";
      chi.step = chi.inverse_step = step_one(odd);
      chi.kind = RuleKind::Chi;
      chi.locks = sectors_locked(locks);
      steps.push_back(concatenate({lo, hi}, {chi}, "M2(" + std::to_string(odd) + ")"));
    } else {
      std::vector<Machine> parts;
      std::vector<TransitionSpec> chis;
      for (int j = 1; j <= p.k; ++j) {
        parts.push_back(m2_last(p.A, n, j, p0));
        if (j == p.k) break;
        TransitionSpec chi;
        chi.from = j - 1;
        chi.to = j;
        chi.id = "chi" + step_pair(j, j + 1);
        chi.step = chi.inverse_step = step_one(odd);
        chi.kind = RuleKind::Chi;
        const Hardware& h = *parts.back().hw;
        std::vector<int> lk;
        for (int s = 1; s < h.nsectors(); ++s)
          if (h.sector_names[s] != "R2Q3" && h.sector_names[s] != "Q3P4") lk.push_back(s);
        chi.locks = lk;
        chis.push_back(chi);
      }
      steps.push_back(concatenate(parts, chis, "M2(" + std::to_string(odd) + ")"));
    }
  }
  return steps;
}

std::vector<TransitionSpec> chain(int first_index, int count) {
  std::vector<TransitionSpec> tr;
  for (int s = 0; s + 1 < count; ++s) {
    int i = first_index + s;
    TransitionSpec t;
    t.from = s;
    t.to = s + 1;
    t.id = "theta" + step_pair(i, i + 1);
    t.step = step_pair(i, i + 1);
    t.inverse_step = step_pair(i + 1, i);
    tr.push_back(t);
  }
  return tr;
}

}  // namespace

Machine build_m2(const TowerParams& p) {
  p.validate();
  auto steps = m2_steps(p, false);
  return concatenate(steps, chain(2, static_cast<int>(steps.size())), "M2");
}

Machine build_m3(const TowerParams& p) {
  p.validate();
  auto steps = m2_steps(p, true);
  auto hw = m2_sub_hw(p.A, true, "1", {});
  Machine first = make_sub("M3(1)", hw, true);
  for (size_t a = 0; a < p.A.size(); ++a)
    first.add_rule(RB(*hw, "rho(" + p.A[a] + ")", "(1)")
                       .left("Q0", a, -1)
                       .right("Q0", a, 1)
                       .lock_all_except({"P0Q0", "Q0P1"})
                       .r);
  first.validate();
  steps.insert(steps.begin(), first);
  return concatenate(steps, chain(1, static_cast<int>(steps.size())), "M3");
}

Machine build_m4(const TowerParams& p) {
  Machine m = cyclize(build_m3(p), "T", "t");
  m.name = "M4";
  return m;
}

Machine build_m51(const TowerParams& p) {
  Machine m = parallel(build_m4(p), p.L);
  m.name = "M51";
  return m;
}

Machine build_m52(const TowerParams& p) {
  Machine m4 = build_m4(p);
  int input = m4.input_sectors.at(0);
  Machine m = parallel(m4, p.L, [input](int i, int c) { return i == 1 && c == input; });
  m.name = "M52";
  return m;
}

namespace {

// "name@i" -> "name#j@i"
std::string tag_machine(const std::string& s, int j) {
  auto at = s.rfind('@');
  std::string tag = "#" + std::to_string(j);
  if (at == std::string::npos) return s + tag;
  return s.substr(0, at) + tag + s.substr(at);
}

Machine terminal_sub(const Machine& shape, const std::string& letter) {
  const Hardware& h = *shape.hw;
  auto hw = std::make_shared<Hardware>();
  hw->cyclic = h.cyclic;
  for (auto& p : h.parts) hw->add_part(p.name);
  hw->init_sectors();
  hw->sector_names = h.sector_names;
  hw->set_alphabet(h.alphabet);
  for (int p = 0; p < h.nparts(); ++p) {
    const std::string& pn = h.parts[p].name;
    if (strip_coordinate(pn) == "T")
      hw->add_state(p, h.sym(h.parts[p].start).name);
    else
      hw->add_state(p, letter + "@" + pn);
  }
  for (int j = 0; j < h.nsectors(); ++j)
    for (int x : h.tape[j]) hw->add_tape(j, h.sym(x).name, h.sym(x).origin);
  Machine m;
  m.name = letter;
  m.hw = hw;
  m.input_sectors = shape.input_sectors;
  return m;
}

}  // namespace

Machine build_m(const TowerParams& p) {
  Machine m51 = relabel(build_m51(p), [](const std::string& s) {
    return strip_coordinate(s) == "t" ? s : tag_machine(s, 1);
  }, "_1", "_1", "M51'");
  Machine m52 = relabel(build_m52(p), [](const std::string& s) {
    return strip_coordinate(s) == "t" ? s : tag_machine(s, 2);
  }, "_2", "_2", "M52'");
  Machine S = terminal_sub(m51, "s"), E = terminal_sub(m51, "e");
  const Hardware& h = *m51.hw;
  std::set<int> inputs(m51.input_sectors.begin(), m51.input_sectors.end());
  int special = h.sector_index("P0Q0@1");
  std::vector<int> s1, s2, all;
  for (int j = 1; j < h.nsectors(); ++j) {
    all.push_back(j);
    if (!inputs.count(j)) s1.push_back(j);
    if (!inputs.count(j) || j == special) s2.push_back(j);
  }
  auto spec = [](int from, int to, const std::string& what, int j, std::vector<int> locks) {
    TransitionSpec t;
    t.from = from;
    t.to = to;
    t.id = "theta(" + what + ")_" + std::to_string(j);
    t.step = "(" + what + ")_" + std::to_string(j);
    t.inverse_step = t.step + "^-1";
    t.locks = std::move(locks);
    return t;
  };
  Machine m = concatenate({S, m51, m52, E},
                          {spec(0, 1, "s", 1, s1), spec(0, 2, "s", 2, s2), spec(1, 3, "a", 1, all),
                           spec(2, 3, "a", 2, all)},
                          "M");
  return m;
}

Machine build_named(const std::string& name, const TowerParams& p) {
  if (name == "m1") return build_m1(p.A, p.n);
  if (name == "m2") return build_m2(p);
  if (name == "m3") return build_m3(p);
  if (name == "m4") return build_m4(p);
  if (name == "m51") return build_m51(p);
  if (name == "m52") return build_m52(p);
  if (name == "m") return build_m(p);
  if (name == "lr") return lr(p.A);
  if (name == "rl") return rl(p.A);
  throw Error(ErrorKind::InvalidParams, "unknown machine " + name);
}

// ------------------------------------------------------ canonical runs

namespace {

class Driver {
 public:
  Driver(const Machine& m, AdmissibleWord w, std::string rule_suffix, std::string sector_suffix)
      : m_(m), w_(std::move(w)), rs_(std::move(rule_suffix)), ss_(std::move(sector_suffix)) {}

  void step(const std::string& id, int sign = 1) {
    int i = m_.rule_index(id + rs_);
    if (sign < 0) i = m_.rules[i].inverse;
    w_ = apply(m_, w_, m_.rules[i]);
    h_.push_back(i);
  }
  // rule id template with "%" standing for the letter name
  void read(const std::string& pre, const std::string& post, const Word& seq) {
    for (Letter x : seq) step(pre + m_.hw->alphabet.at(std::abs(x) - 1) + post, x > 0 ? 1 : -1);
  }
  // contents of a sector as a word over A
  Word content(const std::string& sector) const {
    const Hardware& h = *m_.hw;
    int s = h.sector_index(sector + ss_);
    auto secs = word_sectors(h, w_);
    for (size_t i = 0; i < secs.size(); ++i)
      if (secs[i] == s) {
        Word r;
        for (Letter x : w_.tape[i]) r.push_back(x > 0 ? h.sym(x).origin : -h.sym(x).origin);
        return r;
      }
    throw Error(ErrorKind::Invalid, "sector " + sector + " not in word");
  }
  const History& history() const { return h_; }
  const AdmissibleWord& word() const { return w_; }

 private:
  const Machine& m_;
  AdmissibleWord w_;
  History h_;
  std::string rs_, ss_;
};

Word rev(const Word& u) { return Word(u.rbegin(), u.rend()); }

Word m1_phase_reading(const Word& u, int phase, int n) {
  if (phase == 2 * n) return u;
  if (phase == 1 || phase % 2 == 1) return rev(u);
  return u;
}

void drive_m2(Driver& d, const Word& u, const TowerParams& p) {
  int n = p.n;
  for (int i = 1; i <= 2 * n; ++i) {
    d.read("tau" + std::to_string(i) + "(", ")", m1_phase_reading(u, i, n));
    if (i == 2 * n) break;
    int odd = 2 * i + 1;
    d.step("theta" + step_pair(odd - 1, odd));
    std::string sfx = "[" + std::to_string(odd) + "]";
    if (odd < 4 * n - 1) {
      d.read("zeta1(", ")" + sfx, rev(d.content("Q0P1")));
      d.step("zeta12" + sfx);
      d.read("zeta2(", ")" + sfx, d.content("P1Q1"));
      d.step("chi" + sfx);
      bool three = odd % 4 == 3;
      d.read("xi1(", ")" + sfx, d.content(three ? "R2Q3" : "R1Q2"));
      d.step("xi12" + sfx);
      d.read("xi2(", ")" + sfx, rev(d.content(three ? "Q2R2" : "Q1R1")));
    } else {
      for (int j = 1; j <= p.k; ++j) {
        std::string js = "[" + std::to_string(j) + "]";
        d.read("xizeta1(", ")" + js, d.content("R2Q3"));
        d.step("xizeta12" + js);
        d.read("xizeta2(", ")" + js, rev(d.content("Q2R2")));
        if (j < p.k) d.step("chi" + step_pair(j, j + 1));
      }
    }
    d.step("theta" + step_pair(odd, odd + 1));
  }
}

void drive_m3(Driver& d, const Word& u, const TowerParams& p) {
  d.read("rho(", ")", rev(d.content("P0Q0")));
  d.step("theta(12)");
  drive_m2(d, u, p);
}

void require_accepted(const Machine& m, const Driver& d) {
  if (d.word() != m.accept_config())
    throw Error(ErrorKind::Invalid, "canonical run of " + m.name + " did not reach the accept configuration");
}

}  // namespace

History canonical_accepting_m1(const Machine& m1, const Word& u, int n) {
  Driver d(m1, m1.input_config(power(u, n)), "", "");
  for (int i = 1; i <= 2 * n; ++i) {
    d.read("tau" + std::to_string(i) + "(", ")", m1_phase_reading(reduce(u), i, n));
    if (i < 2 * n) d.step("sigma" + step_pair(i, i + 1));
  }
  require_accepted(m1, d);
  return d.history();
}

History canonical_accepting_m2(const Machine& m2, const Word& u, const TowerParams& p) {
  Driver d(m2, m2.input_config(power(u, p.n)), "", "");
  drive_m2(d, reduce(u), p);
  require_accepted(m2, d);
  return d.history();
}

History canonical_accepting_m3(const Machine& m3, const Word& u, const TowerParams& p) {
  return canonical_accepting_tower(m3, u, p);
}

History canonical_accepting_tower(const Machine& m, const Word& u, const TowerParams& p) {
  bool par = m.hw->nparts() > 11;
  Word w = power(u, p.n);
  Driver d(m, m.name == "M52" ? config_J(m, w) : m.input_config(w), "", par ? "@" + std::to_string(p.L) : "");
  drive_m3(d, reduce(u), p);
  require_accepted(m, d);
  return d.history();
}

History canonical_accepting_m(const Machine& M, const Word& u, int machine_index, const TowerParams& p) {
  if (machine_index != 1 && machine_index != 2) throw Error(ErrorKind::InvalidParams, "machine index is 1 or 2");
  Word w = power(u, p.n);
  std::string j = "_" + std::to_string(machine_index);
  Driver d(M, machine_index == 1 ? config_I(M, w) : config_J(M, w), j, "@" + std::to_string(p.L));
  d.step("theta(s)");
  drive_m3(d, reduce(u), p);
  d.step("theta(a)");
  require_accepted(M, d);
  return d.history();
}

History standard_lr(const Machine& m, const Word& u) {
  bool left = m.name == "LR";
  std::string g = left ? "zeta" : "xi";
  AdmissibleWord w = left ? m.start_config({{1, {}}}) : m.start_config();
  Word uu = reduce(u);
  // LR starts with u in the left sector, RL with u in the right sector
  Word tape;
  const Hardware& h = *m.hw;
  int sector = left ? 1 : 2;
  for (Letter x : uu) tape.push_back(x > 0 ? h.tape[sector].at(x - 1) : -h.tape[sector].at(-x - 1));
  w.tape[sector - 1] = tape;
  Driver d(m, w, "", "");
  if (left) {
    d.read(g + "1(", ")", rev(d.content("Q(1)P")));
    d.step(g + "12");
    d.read(g + "2(", ")", d.content("PQ(2)"));
  } else {
    d.read(g + "1(", ")", d.content("RQ(2)"));
    d.step(g + "12");
    d.read(g + "2(", ")", rev(d.content("Q(1)R")));
  }
  return d.history();
}

// ------------------------------------------------------ configurations

AdmissibleWord input_m1(const Machine& m1, const Word& w) { return m1.input_config(w); }

AdmissibleWord config_I(const Machine& M, const Word& w) { return M.input_config(w); }

AdmissibleWord config_J(const Machine& M, const Word& w) {
  AdmissibleWord W = M.input_config(w);
  int special = M.hw->sector_index("P0Q0@1");
  auto secs = word_sectors(*M.hw, W);
  for (size_t i = 0; i < secs.size(); ++i)
    if (secs[i] == special) W.tape[i].clear();
  return W;
}

AdmissibleWord config_Wac(const Machine& M) { return M.accept_config(); }

std::pair<int, int> designated_subcomputation(const Machine& m, const History& h, int n) {
  std::string in = step_pair(4 * n - 2, 4 * n - 1), out = step_pair(4 * n - 1, 4 * n);
  auto has = [](const std::string& step, const std::string& s) { return step.rfind(s, 0) == 0; };
  for (size_t i = 0; i < h.size(); ++i) {
    if (!has(m.rules[h[i]].step, in) || m.rules[h[i]].kind != RuleKind::Transition) continue;
    for (size_t j = i + 1; j < h.size(); ++j) {
      const Rule& r = m.rules[h[j]];
      if (r.kind == RuleKind::Transition) {
        if (has(r.step, out)) return {static_cast<int>(i), static_cast<int>(j - i + 1)};
        break;
      }
    }
  }
  return {0, -1};
}

// ----------------------------------------------------------- coordinates

int coordinate_of(const std::string& name) {
  auto at = name.rfind('@');
  if (at == std::string::npos || at + 1 >= name.size()) return -1;
  for (size_t i = at + 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
  return std::stoi(name.substr(at + 1));
}

std::string strip_coordinate(const std::string& name) {
  if (coordinate_of(name) < 0) return name;
  return name.substr(0, name.rfind('@'));
}

AdmissibleWord component(const Machine& M, const AdmissibleWord& W, int i) {
  const Hardware& h = *M.hw;
  AdmissibleWord c;
  bool open = false;
  for (size_t p = 0; p < W.q.size(); ++p) {
    bool mine = coordinate_of(h.sym(W.q[p]).name) == i;
    if (mine) {
      if (open) c.tape.push_back(W.tape[p - 1]);
      c.q.push_back(W.q[p]);
      open = true;
    } else if (open) {
      break;
    }
  }
  if (c.q.empty()) throw Error(ErrorKind::Invalid, "no component " + std::to_string(i));
  return c;
}

AdmissibleWord coordinate_shift(const Hardware& hw, const AdmissibleWord& V, int j) {
  int c = -2;
  for (Letter x : V.flat()) {
    int k = coordinate_of(hw.sym(x).name);
    if (c == -2) c = k;
    if (k != c || k < 0) throw Error(ErrorKind::MixedCoordinates, "letters do not share one coordinate");
  }
  auto shift = [&](Letter x) {
    int id = hw.id(strip_coordinate(hw.sym(x).name) + "@" + std::to_string(j));
    return x > 0 ? id : -id;
  };
  AdmissibleWord r;
  for (Letter x : V.q) r.q.push_back(shift(x));
  for (auto& t : V.tape) {
    Word w;
    for (Letter x : t) w.push_back(shift(x));
    r.tape.push_back(w);
  }
  return r;
}

// ----------------------------------------------------------------- bases

BaseWord base_word(const Hardware& hw, const AdmissibleWord& w) {
  BaseWord b;
  for (Letter x : w.q) b.push_back({hw.parts[hw.sym(x).part].name, x > 0 ? 1 : -1});
  return b;
}

BaseWord parse_base(const std::string& s) {
  std::istringstream in(s);
  BaseWord b;
  std::string t;
  while (in >> t) {
    int sign = 1;
    if (t.size() > 3 && t.substr(t.size() - 3) == "^-1") {
      sign = -1;
      t = t.substr(0, t.size() - 3);
    }
    b.push_back({t, sign});
  }
  return b;
}

std::string base_word_str(const BaseWord& b) {
  std::string s;
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) s += ' ';
    s += b[i].part + (b[i].sign < 0 ? "^-1" : "");
  }
  return s;
}

BaseWord reverted_base(const BaseWord& b) {
  BaseWord r = b;
  for (auto& x : r) x.part = strip_coordinate(x.part);
  return r;
}

static bool ends_match(const BaseWord& b, size_t i, size_t j) { return b[i] == b[j]; }

bool is_revolving(const BaseWord& b) {
  size_t n = b.size();
  if (n < 2 || !ends_match(b, 0, n - 1)) return false;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if ((i > 0 || j < n - 1) && ends_match(b, i, j)) return false;
  return true;
}

bool is_reduced_base(const BaseWord& b) {
  for (size_t i = 1; i < b.size(); ++i)
    if (b[i].part == b[i - 1].part && b[i].sign == -b[i - 1].sign) return false;
  return true;
}

bool is_tight(const BaseWord& b) {
  for (size_t p = 0; p + 1 < b.size(); ++p) {
    BaseWord tail(b.begin() + p, b.end());
    if (!is_revolving(tail)) continue;
    bool clash = false;
    for (size_t i = 0; i < p && !clash; ++i)
      for (auto& y : tail)
        if (b[i] == y) clash = true;
    if (!clash) return true;
  }
  return false;
}

BaseFlags base_predicates(const BaseWord& b) {
  BaseFlags f;
  f.revolving = is_revolving(b);
  f.faulty = f.revolving && !is_reduced_base(b);
  BaseWord pi = reverted_base(b);
  f.pararevolving = is_revolving(pi);
  f.hyperfaulty = f.pararevolving && !is_reduced_base(pi);
  f.tight = is_tight(b);
  return f;
}

}  // namespace smf
