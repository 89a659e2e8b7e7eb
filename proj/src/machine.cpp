#include "smforge/machine.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace smf {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::FailsAtStep: return "FailsAtStep";
    case ErrorKind::NotNormalizable: return "NotNormalizable";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::AlreadyCyclic: return "AlreadyCyclic";
    case ErrorKind::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotAccepted: return "NotAccepted";
    case ErrorKind::WitnessInvalid: return "WitnessInvalid";
    case ErrorKind::EmptyHistory: return "EmptyHistory";
    case ErrorKind::EmptyWord: return "EmptyWord";
    case ErrorKind::MixedCoordinates: return "MixedCoordinates";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Invalid: return "Invalid";
  }
  return "Error";
}

// ---------------------------------------------------------------- Hardware

int Hardware::add_part(const std::string& name) {
  parts.push_back(Part{name, {}, 0, 0});
  return nparts() - 1;
}

void Hardware::init_sectors() {
  int N = nparts();
  sector_names.assign(N + 1, "");
  tape.resize(N + 1);
  for (int j = 1; j < N; ++j) sector_names[j] = parts[j - 1].name + parts[j].name;
  if (cyclic && N > 0) {
    sector_names[N] = parts[N - 1].name + parts[0].name;
    sector_names[0] = sector_names[N];
  }
}

int Hardware::add_state(int part, const std::string& name) {
  if (ids_.count(name)) throw Error(ErrorKind::Invalid, "duplicate symbol " + name);
  symbols.push_back(Symbol{name, SymKind::State, part, -1, 0});
  int id = static_cast<int>(symbols.size());
  ids_[name] = id;
  parts[part].letters.push_back(id);
  if (!parts[part].start) parts[part].start = id;
  if (!parts[part].end) parts[part].end = id;
  return id;
}

int Hardware::add_tape(int sector, const std::string& name, Letter origin) {
  if (ids_.count(name)) throw Error(ErrorKind::Invalid, "duplicate symbol " + name);
  sector = canon_sector(sector);
  symbols.push_back(Symbol{name, SymKind::Tape, -1, sector, origin});
  int id = static_cast<int>(symbols.size());
  ids_[name] = id;
  tape[sector].push_back(id);
  return id;
}

int Hardware::id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw Error(ErrorKind::Parse, "unknown symbol " + name);
  return it->second;
}

int Hardware::part_index(const std::string& name) const {
  for (int p = 0; p < nparts(); ++p)
    if (parts[p].name == name) return p;
  throw Error(ErrorKind::Parse, "unknown part " + name);
}

int Hardware::sector_index(const std::string& name) const {
  for (int j = 1; j < nsectors(); ++j)
    if (sector_names[j] == name) return j;
  throw Error(ErrorKind::Parse, "unknown sector " + name);
}

int Hardware::sector_between(Letter x, Letter y) const {
  int N = nparts();
  int px = sym(x).part, py = sym(y).part;
  if (x > 0 && y > 0) {
    if (py == px + 1) return py;
    if (cyclic && px == N - 1 && py == 0) return N;
  } else if (x < 0 && y < 0) {
    if (px == py + 1) return px;
    if (cyclic && py == N - 1 && px == 0) return N;
  } else if (x > 0 && y < 0 && x == -y) {
    return canon_sector(px + 1);
  } else if (x < 0 && y > 0 && -x == y) {
    return canon_sector(px);
  }
  return -1;
}

std::string Hardware::letter_str(Letter x) const {
  const std::string& n = sym(x).name;
  return x > 0 ? n : n + "^-1";
}

std::string Hardware::word_str(const Word& w) const {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += letter_str(w[i]);
  }
  return s;
}

static std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

Letter Hardware::parse_letter(const std::string& tok) const {
  const std::string suf = "^-1";
  if (tok.size() > suf.size() && tok.compare(tok.size() - suf.size(), suf.size(), suf) == 0)
    return -id(tok.substr(0, tok.size() - suf.size()));
  return id(tok);
}

Word Hardware::parse_word(const std::string& s) const {
  Word w;
  for (auto& t : tokens(s)) w.push_back(parse_letter(t));
  return w;
}

std::string Hardware::alpha_letter_str(Letter x) const {
  const std::string& n = alphabet.at(std::abs(x) - 1);
  return x > 0 ? n : n + "^-1";
}

std::string Hardware::alpha_word_str(const Word& w) const {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += alpha_letter_str(w[i]);
  }
  return s;
}

Word Hardware::parse_alpha_word(const std::string& s) const {
  Word w;
  for (auto& t : tokens(s)) {
    bool neg = false;
    std::string n = t;
    if (n.size() > 3 && n.substr(n.size() - 3) == "^-1") {
      neg = true;
      n = n.substr(0, n.size() - 3);
    }
    auto it = std::find(alphabet.begin(), alphabet.end(), n);
    if (it == alphabet.end()) throw Error(ErrorKind::Parse, "unknown input letter " + n);
    int id = static_cast<int>(it - alphabet.begin()) + 1;
    w.push_back(neg ? -id : id);
  }
  return w;
}

// --------------------------------------------------------- AdmissibleWord

Word AdmissibleWord::flat() const {
  Word w;
  for (size_t i = 0; i < q.size(); ++i) {
    w.push_back(q[i]);
    if (i < tape.size()) w.insert(w.end(), tape[i].begin(), tape[i].end());
  }
  return w;
}

int AdmissibleWord::a_length() const {
  int n = 0;
  for (auto& t : tape) n += static_cast<int>(t.size());
  return n;
}

size_t AdmissibleWordHash::operator()(const AdmissibleWord& w) const {
  size_t h = 1469598103934665603ull;
  auto mix = [&](long v) { h = (h ^ static_cast<size_t>(v)) * 1099511628211ull; };
  for (auto x : w.q) mix(x);
  for (auto& t : w.tape) {
    mix(0x7fffffff);
    for (auto x : t) mix(x);
  }
  return h;
}

bool is_admissible(const Hardware& hw, const AdmissibleWord& w, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (w.q.empty()) return fail("no q-letters");
  if (w.tape.size() + 1 != w.q.size()) return fail("tape/q count mismatch");
  for (auto x : w.q)
    if (!hw.is_state(x)) return fail("expected state letter");
  for (size_t i = 0; i + 1 < w.q.size(); ++i) {
    const Word& u = w.tape[i];
    int s = hw.sector_between(w.q[i], w.q[i + 1]);
    if (s < 0)
      return fail("window " + hw.letter_str(w.q[i]) + " .. " + hw.letter_str(w.q[i + 1]) +
                  " fits no admissibility clause");
    if (!is_reduced(u)) return fail("tape word not reduced");
    if (u.empty() && w.q[i] == -w.q[i + 1]) return fail("q q^-1 with empty tape");
    for (auto x : u) {
      if (hw.is_state(x)) return fail("state letter inside tape word");
      if (hw.sym(x).sector != s)
        return fail("letter " + hw.letter_str(x) + " not in sector " + hw.sector_names[s]);
    }
  }
  return true;
}

AdmissibleWord make_word(const Hardware& hw, const Word& flat) {
  AdmissibleWord w;
  Word cur;
  for (Letter x : flat) {
    if (hw.is_state(x)) {
      if (!w.q.empty()) w.tape.push_back(cur);
      else if (!cur.empty()) throw Error(ErrorKind::NotAdmissible, "word must start with a q-letter");
      cur.clear();
      w.q.push_back(x);
    } else {
      cur.push_back(x);
    }
  }
  if (w.q.empty()) throw Error(ErrorKind::NotAdmissible, "no q-letters");
  if (!cur.empty()) throw Error(ErrorKind::NotAdmissible, "word must end with a q-letter");
  std::string why;
  if (!is_admissible(hw, w, &why)) throw Error(ErrorKind::NotAdmissible, why);
  return w;
}

AdmissibleWord parse_admissible(const Hardware& hw, const std::string& s) {
  return make_word(hw, hw.parse_word(s));
}

std::vector<int> word_sectors(const Hardware& hw, const AdmissibleWord& w) {
  std::vector<int> s;
  for (size_t i = 0; i + 1 < w.q.size(); ++i) s.push_back(hw.sector_between(w.q[i], w.q[i + 1]));
  return s;
}

std::string word_str(const Hardware& hw, const AdmissibleWord& w) { return hw.word_str(w.flat()); }

Base base_of(const Hardware& hw, const AdmissibleWord& w) {
  Base b;
  for (auto x : w.q) b.push_back(x > 0 ? hw.sym(x).part + 1 : -(hw.sym(x).part + 1));
  return b;
}

std::string base_str(const Hardware& hw, const Base& b) {
  std::string s;
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) s += ' ';
    s += hw.parts[std::abs(b[i]) - 1].name;
    if (b[i] < 0) s += "^-1";
  }
  return s;
}

// ------------------------------------------------------------------ Rules

bool Rule::in_domain(int sector, Letter x) const {
  switch (domains[sector]) {
    case Domain::Full: return true;
    case Domain::Empty: return false;
    case Domain::Subset: {
      auto& s = subsets[sector];
      return std::find(s.begin(), s.end(), std::abs(x)) != s.end();
    }
  }
  return false;
}

Rule invert_rule(const Rule& r, const std::string& inverse_step) {
  Rule v = r;
  v.positive = !r.positive;
  v.step = inverse_step;
  v.id = r.positive ? r.id + "^-1" : r.id.substr(0, r.id.size() - 3);
  for (auto& p : v.parts) {
    std::swap(p.from, p.to);
    p.left = -p.left;
    p.right = -p.right;
  }
  return v;
}

int Machine::rule_index(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw Error(ErrorKind::Parse, "unknown rule " + id);
  return it->second;
}

int Machine::add_rule(Rule r, const std::string& inverse_step) {
  r.positive = true;
  int i = static_cast<int>(rules.size());
  Rule v = invert_rule(r, inverse_step.empty() ? r.step : inverse_step);
  r.inverse = i + 1;
  v.inverse = i;
  rules.push_back(std::move(r));
  rules.push_back(std::move(v));
  by_id_[rules[i].id] = i;
  by_id_[rules[i + 1].id] = i + 1;
  for (int k : {i, i + 1})
    if (std::find(step_alphabet.begin(), step_alphabet.end(), rules[k].step) == step_alphabet.end())
      step_alphabet.push_back(rules[k].step);
  return i;
}

void Machine::reindex() {
  by_id_.clear();
  step_alphabet.clear();
  for (size_t i = 0; i < rules.size(); ++i) {
    by_id_[rules[i].id] = static_cast<int>(i);
    if (std::find(step_alphabet.begin(), step_alphabet.end(), rules[i].step) == step_alphabet.end())
      step_alphabet.push_back(rules[i].step);
  }
}

void Machine::validate() const {
  const Hardware& h = *hw;
  int N = h.nparts();
  if (rules.size() % 2) throw Error(ErrorKind::Invalid, "rules not paired");
  for (size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    auto bad = [&](const std::string& s) { throw Error(ErrorKind::Invalid, "rule " + r.id + ": " + s); };
    if (r.inverse != static_cast<int>(i ^ 1)) bad("inverse index");
    if (r.positive != (i % 2 == 0)) bad("sign");
    const Rule& v = rules[r.inverse];
    if (static_cast<int>(r.parts.size()) != N) bad("part count");
    if (static_cast<int>(r.locks.size()) != N + 1 || static_cast<int>(r.domains.size()) != N + 1)
      bad("sector vectors");
    for (int p = 0; p < N; ++p) {
      const RulePart& rp = r.parts[p];
      if (!h.is_state(rp.from) || h.sym(rp.from).part != p) bad("from letter in part " + h.parts[p].name);
      if (!h.is_state(rp.to) || h.sym(rp.to).part != p) bad("to letter in part " + h.parts[p].name);
      const RulePart& vp = v.parts[p];
      if (vp.from != rp.to || vp.to != rp.from || vp.left != -rp.left || vp.right != -rp.right)
        bad("inverse part mismatch");
      auto check_ins = [&](Letter x, int sector) {
        if (!x) return;
        sector = h.canon_sector(sector);
        if (h.is_state(x)) bad("state letter inserted");
        if (h.sym(x).sector != sector) bad("inserted letter outside its sector");
        if (r.locks[sector]) bad("insertion into locked sector " + h.sector_names[sector]);
        if (!r.in_domain(sector, x)) bad("inserted letter outside domain");
      };
      check_ins(rp.left, p);
      check_ins(rp.right, p + 1);
    }
    for (int j = 0; j <= N; ++j)
      if (r.locks[j] && r.domains[j] != Domain::Empty) bad("locked sector with nonempty domain");
    if (r.locks != v.locks) bad("inverse locks differ");
  }
}

static Word copy_to_sector(const Hardware& hw, int sector, const Word& input) {
  Word w;
  for (Letter a : input) {
    int found = 0;
    for (int s : hw.tape[sector])
      if (hw.symbols[s - 1].origin == std::abs(a)) found = s;
    if (!found) throw Error(ErrorKind::Invalid, "sector " + hw.sector_names[sector] + " has no copy of input letter");
    w.push_back(a > 0 ? found : -found);
  }
  return w;
}

AdmissibleWord Machine::start_config(const std::map<int, Word>& sectors) const {
  AdmissibleWord w;
  int N = hw->nparts();
  for (int p = 0; p < N; ++p) w.q.push_back(hw->parts[p].start);
  w.tape.assign(N - 1, Word{});
  for (auto& [j, u] : sectors) w.tape.at(j - 1) = u;
  return w;
}

AdmissibleWord Machine::end_config() const {
  AdmissibleWord w;
  int N = hw->nparts();
  for (int p = 0; p < N; ++p) w.q.push_back(hw->parts[p].end);
  w.tape.assign(N - 1, Word{});
  return w;
}

AdmissibleWord Machine::input_config(const Word& input) const {
  std::map<int, Word> m;
  for (int j : input_sectors) m[j] = copy_to_sector(*hw, j, reduce(input));
  return start_config(m);
}

static bool check_theta(const Machine& m, const AdmissibleWord& w, const Rule& r, std::string* why) {
  const Hardware& hw = *m.hw;
  for (Letter x : w.q) {
    const RulePart& rp = r.parts[hw.sym(x).part];
    if (rp.from != std::abs(x)) {
      if (why) *why = "state letter " + hw.letter_str(x) + " not in Q(" + r.id + ")";
      return false;
    }
  }
  for (size_t i = 0; i < w.tape.size(); ++i) {
    if (w.tape[i].empty()) continue;
    int s = hw.sector_between(w.q[i], w.q[i + 1]);
    for (Letter x : w.tape[i])
      if (!r.in_domain(s, x)) {
        if (why) *why = "sector " + hw.sector_names[s] + " outside domain of " + r.id;
        return false;
      }
  }
  return true;
}

bool is_theta_admissible(const Machine& m, const AdmissibleWord& w, const Rule& r, std::string* why) {
  return check_theta(m, w, r, why);
}

static void apply_unchecked(const Machine& m, const AdmissibleWord& w, const Rule& r, AdmissibleWord& out) {
  const Hardware& hw = *m.hw;
  size_t k = w.q.size();
  out.q.resize(k);
  std::vector<Letter> L(k), R(k);
  for (size_t i = 0; i < k; ++i) {
    Letter x = w.q[i];
    const RulePart& rp = r.parts[hw.sym(x).part];
    if (x > 0) {
      out.q[i] = rp.to;
      L[i] = rp.left;
      R[i] = rp.right;
    } else {
      out.q[i] = -rp.to;
      L[i] = -rp.right;
      R[i] = -rp.left;
    }
  }
  out.tape.resize(k - 1);
  for (size_t i = 0; i + 1 < k; ++i) {
    Word& t = out.tape[i];
    t.clear();
    if (R[i]) t.push_back(R[i]);
    for (Letter x : w.tape[i]) push_reduced(t, x);
    if (L[i + 1]) push_reduced(t, L[i + 1]);
  }
}

bool try_apply(const Machine& m, const AdmissibleWord& w, const Rule& r, AdmissibleWord& out) {
  if (!check_theta(m, w, r, nullptr)) return false;
  apply_unchecked(m, w, r, out);
  return true;
}

AdmissibleWord apply(const Machine& m, const AdmissibleWord& w, const Rule& r) {
  std::string why;
  if (!check_theta(m, w, r, &why)) throw Error(ErrorKind::NotAdmissible, why);
  AdmissibleWord out;
  apply_unchecked(m, w, r, out);
  return out;
}

Computation run(const Machine& m, const AdmissibleWord& w, const History& h) {
  Computation c;
  c.machine = &m;
  c.history = h;
  c.words.reserve(h.size() + 1);
  c.words.push_back(w);
  for (size_t i = 0; i < h.size(); ++i) {
    AdmissibleWord next;
    std::string why;
    if (!check_theta(m, c.words.back(), m.rules[h[i]], &why))
      throw Error(ErrorKind::FailsAtStep,
                  "step " + std::to_string(i) + " (" + m.rules[h[i]].id + "): " + why,
                  static_cast<long>(i));
    apply_unchecked(m, c.words.back(), m.rules[h[i]], next);
    if (base_of(*m.hw, next) != base_of(*m.hw, w))
      throw Error(ErrorKind::Invalid, "base changed at step " + std::to_string(i));
    c.words.push_back(std::move(next));
  }
  return c;
}

bool is_reduced_history(const Machine& m, const History& h) {
  for (size_t i = 1; i < h.size(); ++i)
    if (m.rules[h[i]].inverse == h[i - 1]) return false;
  return true;
}

History parse_history(const Machine& m, const std::string& s) {
  History h;
  for (auto& t : tokens(s)) h.push_back(m.rule_index(t));
  return h;
}

std::string history_str(const Machine& m, const History& h) {
  std::string s;
  for (size_t i = 0; i < h.size(); ++i) {
    if (i) s += ' ';
    s += m.rules[h[i]].id;
  }
  return s;
}

namespace {
struct StepLetter {
  std::string s;
  bool transition;
};

std::vector<StepLetter> steps(const Machine& m, const History& h) {
  std::vector<StepLetter> out;
  for (int i : h) {
    const Rule& r = m.rules[i];
    bool tr = r.kind == RuleKind::Transition;
    if (!tr && !out.empty() && !out.back().transition && out.back().s == r.step) continue;
    out.push_back({r.step, tr});
  }
  return out;
}
}  // namespace

std::vector<std::string> step_history(const Machine& m, const History& h) {
  std::vector<std::string> r;
  for (auto& s : steps(m, h)) r.push_back(s.s);
  return r;
}

// Drop a transition letter when both neighbours are working letters.
std::vector<std::string> canonical_step_history(const Machine& m, const History& h) {
  auto st = steps(m, h);
  std::vector<std::string> r;
  for (size_t i = 0; i < st.size(); ++i) {
    if (st[i].transition && i > 0 && i + 1 < st.size() && !st[i - 1].transition && !st[i + 1].transition)
      continue;
    r.push_back(st[i].s);
  }
  return r;
}

std::string step_str(const std::vector<std::string>& s) {
  std::string r;
  for (auto& x : s) r += x;
  return r;
}

Word project_to_A(const Hardware& hw, const AdmissibleWord& w) {
  Word r;
  for (auto& t : w.tape)
    for (Letter x : t) {
      Letter o = hw.sym(x).origin;
      if (o) push_reduced(r, x > 0 ? o : -o);
    }
  return r;
}

// ---------------------------------------------------------- normalization

Rule normalize_rule(const Hardware& hw, const RawRule& raw) {
  int N = hw.nparts();
  Rule r;
  r.id = raw.id;
  r.step = raw.step;
  r.kind = raw.kind;
  r.parts.assign(N, RulePart{});
  r.locks.assign(N + 1, false);
  r.domains.assign(N + 1, Domain::Full);
  r.subsets.assign(N + 1, {});
  std::vector<bool> covered(N, false);
  auto fail = [&](const std::string& s) { throw Error(ErrorKind::NotNormalizable, raw.id + ": " + s); };
  for (auto& [U, V] : raw.parts) {
    // split into tape chunks around the q-letters
    auto split = [&](const Word& w, std::vector<Letter>& qs, std::vector<Word>& us) {
      us.assign(1, Word{});
      for (Letter x : w) {
        if (hw.is_state(x)) {
          if (x < 0) fail("raw parts use positive state letters");
          qs.push_back(x);
          us.emplace_back();
        } else {
          us.back().push_back(x);
        }
      }
    };
    std::vector<Letter> uq, vq;
    std::vector<Word> uu, vv;
    split(U, uq, uu);
    split(V, vq, vv);
    if (uq.empty() || uq.size() != vq.size()) fail("U and V bases differ");
    for (size_t j = 0; j < uq.size(); ++j) {
      int p = hw.sym(uq[j]).part;
      if (hw.sym(vq[j]).part != p) fail("U and V bases differ");
      if (j && p != hw.sym(uq[j - 1]).part + 1) fail("base not consecutive");
      if (covered[p]) fail("part covered twice");
      covered[p] = true;
      RulePart& rp = r.parts[p];
      rp.from = uq[j];
      rp.to = vq[j];
      if (j == 0) {
        Word l = reduce(concat(inverse(uu[0]), vv[0]));
        if (l.size() > 1) fail("left insertion longer than one letter");
        rp.left = l.empty() ? 0 : l[0];
      }
      Word rr = reduce(concat(vv[j + 1], inverse(uu[j + 1])));
      if (rr.size() > 1) fail("right insertion longer than one letter");
      rp.right = rr.empty() ? 0 : rr[0];
    }
  }
  for (int p = 0; p < N; ++p)
    if (!covered[p]) fail("part " + hw.parts[p].name + " not covered");
  for (int j : raw.locks) {
    j = hw.canon_sector(j);
    r.locks[j] = true;
    r.domains[j] = Domain::Empty;
  }
  r.domains[0] = Domain::Empty;
  if (!hw.cyclic) r.domains[N] = Domain::Empty;
  return r;
}

Machine normalize_rules(const RawMachine& raw) {
  Machine m;
  m.name = raw.name;
  m.hw = raw.hw;
  m.input_sectors = raw.input_sectors;
  for (auto& rr : raw.rules) m.add_rule(normalize_rule(*raw.hw, rr), rr.inverse_step);
  m.validate();
  return m;
}

Machine normalize_rules(const Machine& m) {
  m.validate();
  return m;
}

}  // namespace smf
