#include "smforge/serialize.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace smf {

namespace {

const char* kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::Working: return "working";
    case RuleKind::Transition: return "transition";
    case RuleKind::Chi: return "chi";
  }
  return "working";
}

RuleKind parse_kind(const std::string& s) {
  if (s == "working") return RuleKind::Working;
  if (s == "transition") return RuleKind::Transition;
  if (s == "chi") return RuleKind::Chi;
  throw Error(ErrorKind::Parse, "rule kind " + s);
}

std::string opt(const std::string& s) { return s.empty() ? "-" : s; }
std::string unopt(const std::string& s) { return s == "-" ? "" : s; }

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> t;
  std::string x;
  while (in >> x) t.push_back(x);
  return t;
}

[[noreturn]] void bad(int lineno, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": " + what, lineno);
}

}  // namespace

std::string write_machine(const Machine& m) {
  const Hardware& h = m.hardware();
  std::ostringstream o;
  int N = h.nparts();
  o << "smforge-machine 1\n";
  o << "name " << opt(m.name) << "\n";
  o << "cyclic " << (h.cyclic ? 1 : 0) << "\n";
  o << "alphabet";
  for (auto& a : h.alphabet) o << ' ' << a;
  o << "\n";
  for (auto& p : h.parts) o << "part " << p.name << "\n";
  for (int j = 0; j <= N; ++j)
    if (!h.sector_names[j].empty() && !(h.cyclic && j == 0)) o << "sector " << j << ' ' << h.sector_names[j] << "\n";
  for (auto& s : h.symbols) {
    if (s.kind == SymKind::State)
      o << "state " << s.name << ' ' << s.part << "\n";
    else
      o << "tape " << s.name << ' ' << s.sector << ' ' << s.origin << "\n";
  }
  for (int p = 0; p < N; ++p)
    o << "ends " << p << ' ' << h.sym(h.parts[p].start).name << ' ' << h.sym(h.parts[p].end).name << "\n";
  o << "input";
  for (int j : m.input_sectors) o << ' ' << j;
  o << "\n";
  for (int i = 0; i < m.npositive(); ++i) {
    const Rule& r = m.rules[2 * i];
    const Rule& v = m.rules[2 * i + 1];
    o << "rule " << r.id << ' ' << kind_name(r.kind) << ' ' << opt(r.step) << ' ' << opt(v.step) << ' '
      << opt(r.sub) << "\n";
    for (int p = 0; p < N; ++p) {
      const RulePart& rp = r.parts[p];
      o << "  " << p << ' ' << (rp.left ? h.letter_str(rp.left) : "-") << ' ' << h.sym(rp.from).name << ' '
        << h.sym(rp.to).name << ' ' << (rp.right ? h.letter_str(rp.right) : "-") << "\n";
    }
    o << "  locks";
    for (int j = 0; j <= N; ++j)
      if (r.locks[j]) o << ' ' << j;
    o << "\n";
    for (int j = 0; j <= N; ++j) {
      if (r.domains[j] == Domain::Empty && !r.locks[j]) o << "  empty " << j << "\n";
      if (r.domains[j] == Domain::Subset) {
        o << "  subset " << j;
        for (int s : r.subsets[j]) o << ' ' << h.symbols[s - 1].name;
        o << "\n";
      }
    }
  }
  o << "end\n";
  return o.str();
}

Machine read_machine(const std::string& text) {
  auto hw = std::make_shared<Hardware>();
  Machine m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool sectors_ready = false;
  std::vector<std::pair<int, std::string>> sector_names;
  auto ready = [&]() {
    if (sectors_ready) return;
    hw->init_sectors();
    for (auto& [j, s] : sector_names) {
      hw->sector_names.at(j) = s;
      if (hw->cyclic && j == hw->nparts()) hw->sector_names[0] = s;
    }
    sectors_ready = true;
  };
  Rule cur;
  std::string cur_istep;
  bool in_rule = false;
  bool done = false;
  auto flush = [&]() {
    if (in_rule) m.add_rule(cur, cur_istep);
    in_rule = false;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto t = split_ws(line);
    if (t.empty() || t[0][0] == '#') continue;
    const std::string& k = t[0];
    auto need = [&](size_t n) {
      if (t.size() < n) bad(lineno, "expected " + std::to_string(n) + " fields");
    };
    try {
      if (k == "smforge-machine") {
        if (lineno != 1 && !m.name.empty()) bad(lineno, "header");
      } else if (k == "name") {
        need(2);
        m.name = unopt(t[1]);
      } else if (k == "cyclic") {
        need(2);
        hw->cyclic = t[1] == "1";
      } else if (k == "alphabet") {
        hw->alphabet.assign(t.begin() + 1, t.end());
      } else if (k == "part") {
        need(2);
        hw->add_part(t[1]);
      } else if (k == "sector") {
        need(3);
        sector_names.emplace_back(std::stoi(t[1]), t[2]);
      } else if (k == "state") {
        need(3);
        ready();
        hw->add_state(std::stoi(t[2]), t[1]);
      } else if (k == "tape") {
        need(4);
        ready();
        hw->add_tape(std::stoi(t[2]), t[1], std::stoi(t[3]));
      } else if (k == "ends") {
        need(4);
        int p = std::stoi(t[1]);
        hw->parts.at(p).start = hw->id(t[2]);
        hw->parts.at(p).end = hw->id(t[3]);
      } else if (k == "input") {
        for (size_t i = 1; i < t.size(); ++i) m.input_sectors.push_back(std::stoi(t[i]));
      } else if (k == "rule") {
        need(6);
        ready();
        flush();
        int N = hw->nparts();
        cur = Rule{};
        cur.id = t[1];
        cur.kind = parse_kind(t[2]);
        cur.step = unopt(t[3]);
        cur_istep = unopt(t[4]);
        cur.sub = unopt(t[5]);
        cur.parts.assign(N, RulePart{});
        cur.locks.assign(N + 1, false);
        cur.domains.assign(N + 1, Domain::Full);
        cur.subsets.assign(N + 1, {});
        in_rule = true;
      } else if (k == "locks") {
        if (!in_rule) bad(lineno, "locks outside rule");
        for (size_t i = 1; i < t.size(); ++i) {
          int j = std::stoi(t[i]);
          cur.locks.at(j) = true;
          cur.domains.at(j) = Domain::Empty;
        }
      } else if (k == "empty") {
        need(2);
        if (!in_rule) bad(lineno, "empty outside rule");
        cur.domains.at(std::stoi(t[1])) = Domain::Empty;
      } else if (k == "subset") {
        need(2);
        if (!in_rule) bad(lineno, "subset outside rule");
        int j = std::stoi(t[1]);
        cur.domains.at(j) = Domain::Subset;
        for (size_t i = 2; i < t.size(); ++i) cur.subsets.at(j).push_back(hw->id(t[i]));
      } else if (k == "end") {
        flush();
        done = true;
        break;
      } else if (std::isdigit(static_cast<unsigned char>(k[0]))) {
        need(5);
        if (!in_rule) bad(lineno, "rule part outside rule");
        RulePart& rp = cur.parts.at(std::stoi(k));
        rp.left = t[1] == "-" ? 0 : hw->parse_letter(t[1]);
        rp.from = hw->id(t[2]);
        rp.to = hw->id(t[3]);
        rp.right = t[4] == "-" ? 0 : hw->parse_letter(t[4]);
      } else {
        bad(lineno, "unknown key " + k);
      }
    } catch (const std::out_of_range&) {
      bad(lineno, "index out of range");
    } catch (const std::invalid_argument&) {
      bad(lineno, "expected a number");
    }
  }
  if (!done) bad(lineno, "missing end");
  ready();
  m.hw = hw;
  m.validate();
  return m;
}

Machine load_machine(const std::string& path) { return read_machine(read_file(path)); }

std::string write_trace(const Computation& c) {
  const Machine& m = *c.machine;
  const Hardware& h = m.hardware();
  std::ostringstream o;
  o << 0 << "\t-\t" << word_str(h, c.words[0]) << "\n";
  for (size_t i = 0; i < c.history.size(); ++i)
    o << i + 1 << '\t' << m.rules[c.history[i]].id << '\t' << word_str(h, c.words[i + 1]) << "\n";
  return o.str();
}

Computation read_trace(const Machine& m, const std::string& text) {
  const Hardware& h = m.hardware();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  AdmissibleWord w0;
  History hist;
  std::vector<AdmissibleWord> printed;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    size_t a = line.find('\t');
    size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos) bad(lineno, "expected three tab-separated fields");
    int idx = std::stoi(line.substr(0, a));
    std::string rid = line.substr(a + 1, b - a - 1);
    AdmissibleWord w = parse_admissible(h, line.substr(b + 1));
    if (idx != static_cast<int>(printed.size())) bad(lineno, "step index out of order");
    if (idx == 0) {
      if (rid != "-") bad(lineno, "initial line must have rule -");
    } else {
      hist.push_back(m.rule_index(rid));
    }
    printed.push_back(std::move(w));
  }
  if (printed.empty()) bad(lineno, "empty trace");
  Computation c = run(m, printed[0], hist);
  for (size_t i = 0; i < printed.size(); ++i)
    if (c.words[i] != printed[i]) throw Error(ErrorKind::Parse, "trace word " + std::to_string(i) + " disagrees with run");
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Parse, "cannot write " + path);
  f << text;
}

}  // namespace smf
