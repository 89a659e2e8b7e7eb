#include "smforge/diagram.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace smf {

const char* cell_kind_name(CellKind k) {
  switch (k) {
    case CellKind::ThetaQ: return "theta-q";
    case CellKind::ThetaA: return "theta-a";
    case CellKind::ACell: return "a-cell";
    case CellKind::Hub: return "hub";
    case CellKind::Disk: return "disk";
  }
  return "?";
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

EdgeRef next_occ(const std::vector<Cell>& cells, EdgeRef e) {
  int n = static_cast<int>(cells[e.cell].boundary.size());
  return {e.cell, (e.pos + 1) % n};
}

}  // namespace

// -------------------------------------------------------------------- Diagram

int Diagram::add_cell(CellKind kind, Word boundary, int band, int rule) {
  if (boundary.empty()) throw Error(ErrorKind::Invalid, "cell with empty boundary");
  twins_.emplace_back(boundary.size());
  cells_.push_back(Cell{kind, std::move(boundary), band, rule});
  return static_cast<int>(cells_.size()) - 1;
}

bool Diagram::glued(EdgeRef e) const { return twins_[e.cell][e.pos].valid(); }
EdgeRef Diagram::twin(EdgeRef e) const { return twins_[e.cell][e.pos]; }

void Diagram::glue(EdgeRef a, EdgeRef b) {
  if (a == b) throw Error(ErrorKind::Invalid, "edge glued to itself");
  if (label(a) != -label(b)) throw Error(ErrorKind::Invalid, "gluing labels are not inverse");
  if (glued(a) || glued(b)) throw Error(ErrorKind::Invalid, "edge glued twice");
  twins_[a.cell][a.pos] = b;
  twins_[b.cell][b.pos] = a;
  gluings_.push_back(Gluing{a, b});
}

std::vector<std::vector<EdgeRef>> Diagram::boundary_cycles() const {
  std::set<EdgeRef> free;
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c)
    for (int p = 0; p < static_cast<int>(cells_[c].boundary.size()); ++p)
      if (!glued({c, p})) free.insert({c, p});
  long guard = 0;
  for (auto& t : twins_) guard += static_cast<long>(t.size()) + 1;
  auto next = [&](EdgeRef e) {
    EdgeRef cand = next_occ(cells_, e);
    for (long i = 0; glued(cand); ++i) {
      if (i > guard) throw Error(ErrorKind::Invalid, "boundary walk does not close");
      cand = next_occ(cells_, twin(cand));
    }
    return cand;
  };
  std::vector<std::vector<EdgeRef>> cycles;
  auto walk = [&](EdgeRef start) {
    std::vector<EdgeRef> cyc;
    EdgeRef e = start;
    do {
      cyc.push_back(e);
      free.erase(e);
      e = next(e);
      if (static_cast<long>(cyc.size()) > guard) throw Error(ErrorKind::Invalid, "boundary walk does not close");
    } while (!(e == start));
    cycles.push_back(std::move(cyc));
  };
  if (base_.valid() && free.count(base_)) walk(base_);
  while (!free.empty()) walk(*free.begin());
  return cycles;
}

std::vector<EdgeRef> Diagram::boundary_path() const {
  auto cyc = boundary_cycles();
  return cyc.empty() ? std::vector<EdgeRef>{} : cyc.front();
}

Word Diagram::boundary() const {
  Word w;
  for (EdgeRef e : boundary_path()) w.push_back(label(e));
  return w;
}

int Diagram::vertices() const {
  std::vector<int> off(cells_.size() + 1, 0);
  for (size_t c = 0; c < cells_.size(); ++c) off[c + 1] = off[c] + static_cast<int>(cells_[c].boundary.size());
  Dsu d(off.back());
  auto id = [&](EdgeRef e) { return off[e.cell] + e.pos; };
  for (auto& g : gluings_) {
    d.unite(id(g.a), id(next_occ(cells_, g.b)));
    d.unite(id(next_occ(cells_, g.a)), id(g.b));
  }
  int v = 0;
  for (int i = 0; i < off.back(); ++i)
    if (d.find(i) == i) ++v;
  return v;
}

int Diagram::edges() const {
  int occ = 0;
  for (auto& c : cells_) occ += static_cast<int>(c.boundary.size());
  return occ - static_cast<int>(gluings_.size());
}

bool Diagram::is_disk() const {
  if (cells_.empty()) return false;
  return boundary_cycles().size() == 1 && euler_characteristic() == 1;
}

int Diagram::count(CellKind k) const {
  return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [&](const Cell& c) { return c.kind == k; }));
}

namespace {

Word trim(const XAlphabet& x, const Word& w) {
  size_t i = 0, j = w.size();
  while (i < j && x.kind(w[i]) != GenKind::Q) ++i;
  while (j > i && x.kind(w[j - 1]) != GenKind::Q) --j;
  return Word(w.begin() + i, w.begin() + j);
}

// [first q, last q] indices of a path.
std::pair<size_t, size_t> q_range(const Diagram& d, const std::vector<EdgeRef>& path) {
  size_t i = 0, j = path.size();
  while (i < j && d.alphabet().kind(d.label(path[i])) != GenKind::Q) ++i;
  while (j > i && d.alphabet().kind(d.label(path[j - 1])) != GenKind::Q) --j;
  return {i, j};
}

}  // namespace

Word Diagram::band_bottom(int b, bool trimmed) const {
  Word w;
  for (EdgeRef e : bands_.at(b).bottom) w.push_back(label(e));
  return trimmed ? trim(*x_, w) : w;
}

Word Diagram::band_top(int b, bool trimmed) const {
  Word w;
  for (EdgeRef e : bands_.at(b).top) w.push_back(-label(e));
  return trimmed ? trim(*x_, w) : w;
}

History Diagram::history() const {
  History h;
  for (auto& b : bands_) {
    if (!b.left.valid()) {
      h.push_back(b.rule);
      continue;
    }
    Letter th = -label(b.left);  // the left side read upwards
    int r = x_->theta_rule(th);
    h.push_back(th > 0 ? 2 * r : 2 * r + 1);
  }
  return h;
}

std::string Diagram::to_dot() const {
  std::ostringstream o;
  o << "graph diagram {\n  node [shape=box, style=filled];\n";
  for (size_t c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    const char* color = "white";
    switch (cell.kind) {
      case CellKind::ThetaQ: color = "lightblue"; break;
      case CellKind::ThetaA: color = "palegreen"; break;
      case CellKind::ACell: color = "khaki"; break;
      case CellKind::Hub: color = "salmon"; break;
      case CellKind::Disk: color = "plum"; break;
    }
    o << "  c" << c << " [label=\"" << c << " " << cell_kind_name(cell.kind);
    if (cell.band >= 0) o << " b" << cell.band;
    o << "\", fillcolor=" << color << "];\n";
  }
  for (auto& g : gluings_)
    o << "  c" << g.a.cell << " -- c" << g.b.cell << " [label=\"" << x_->letter_str(label(g.a)) << "\"];\n";
  o << "}\n";
  return o.str();
}

std::string Diagram::to_flat() const {
  std::ostringstream o;
  o << "cells " << cells_.size() << "\n";
  for (size_t c = 0; c < cells_.size(); ++c) {
    const Cell& cell = cells_[c];
    o << "cell " << c << " " << cell_kind_name(cell.kind) << " band " << cell.band << " rule "
      << (cell.rule >= 0 ? x_->machine().rules[cell.rule].id : "-") << " : " << x_->word_str(cell.boundary) << "\n";
  }
  o << "gluings " << gluings_.size() << "\n";
  for (auto& g : gluings_) o << "glue " << g.a.cell << ":" << g.a.pos << " " << g.b.cell << ":" << g.b.pos << "\n";
  o << "boundary : " << x_->word_str(boundary()) << "\n";
  return o.str();
}

// ---------------------------------------------------------------- band check

BandCheck check_bands(const Diagram& d) {
  BandCheck out;
  const auto& cells = d.cells();
  int nb = static_cast<int>(d.bands().size());
  auto run = [&](CellKind kind, GenKind edge, int& nbands, bool& once, bool& annuli, bool* cross_all) {
    Dsu u(static_cast<int>(cells.size()));
    std::vector<int> links(cells.size(), 0);
    for (auto& g : d.gluings()) {
      if (cells[g.a.cell].kind != kind || cells[g.b.cell].kind != kind) continue;
      if (d.alphabet().kind(d.label(g.a)) != edge) continue;
      u.unite(g.a.cell, g.b.cell);
      ++links[g.a.cell];
    }
    std::map<int, std::vector<int>> comp;
    for (int c = 0; c < static_cast<int>(cells.size()); ++c)
      if (cells[c].kind == kind) comp[u.find(c)].push_back(c);
    nbands = static_cast<int>(comp.size());
    for (auto& [root, members] : comp) {
      std::map<int, int> per_band;
      int nlinks = 0;
      for (int c : members) {
        ++per_band[cells[c].band];
        nlinks += links[c];
      }
      for (auto& [b, k] : per_band)
        if (k > 1) once = false;
      if (nlinks >= static_cast<int>(members.size())) annuli = true;
      if (cross_all && static_cast<int>(per_band.size()) != nb) *cross_all = false;
    }
  };
  run(CellKind::ThetaQ, GenKind::Q, out.q_bands, out.q_once, out.q_annuli, &out.q_cross_all);
  run(CellKind::ThetaA, GenKind::A, out.a_bands, out.a_once, out.a_annuli, nullptr);
  return out;
}

// --------------------------------------------------------------- constructions

namespace {

struct PathItem {
  EdgeRef ref;
  Letter letter;  // as read left to right
};

// Free reduction of a path; cancelled neighbours are folded together.
std::vector<EdgeRef> fold(Diagram& d, const std::vector<PathItem>& items) {
  std::vector<PathItem> st;
  for (auto& it : items) {
    if (!st.empty() && st.back().letter == -it.letter) {
      d.glue(st.back().ref, it.ref);
      st.pop_back();
    } else {
      st.push_back(it);
    }
  }
  std::vector<EdgeRef> out;
  for (auto& it : st) out.push_back(it.ref);
  return out;
}

}  // namespace

int add_theta_band(Diagram& d, const AdmissibleWord& W, int ri) {
  const XAlphabet& X = d.alphabet();
  const Machine& m = X.machine();
  const Hardware& h = m.hardware();
  const Rule& r = m.rules.at(ri);
  std::string why;
  if (!is_theta_admissible(m, W, r, &why)) throw Error(ErrorKind::NotAdmissible, r.id + ": " + why);
  Word w = W.flat();
  int b = static_cast<int>(d.bands().size());

  // Cell shape for the q-letter at position k: bottom B, top T and the
  // sectors of its left and right sides.  A negative rule uses the mirrored
  // relator cell, whose bottom also carries the letters the rule deletes.
  struct Shape {
    Word B, T;
    int li, ri;
    Letter bl = 0, br = 0;  // extra bottom letters
  };
  auto shape = [&](Letter x) {
    const RulePart& rp = r.parts[h.sym(x).part];
    Shape s;
    int p = h.sym(x).part;
    if (r.positive) {
      s.B = {rp.from};
      if (rp.left) s.T.push_back(rp.left);
      s.T.push_back(rp.to);
      if (rp.right) s.T.push_back(rp.right);
    } else {
      if (rp.left) s.B.push_back(-rp.left);
      s.B.push_back(rp.from);
      if (rp.right) s.B.push_back(-rp.right);
      s.T = {rp.to};
    }
    s.li = p;
    s.ri = p + 1;
    if (x < 0) {
      s.B = inverse(s.B);
      s.T = inverse(s.T);
      std::swap(s.li, s.ri);
    }
    if (!r.positive) {
      if (!h.is_state(s.B.front())) s.bl = s.B.front();
      if (!h.is_state(s.B.back())) s.br = s.B.back();
    }
    return s;
  };

  // Deleted letters already present next to the q-letter are absorbed into
  // its cell; missing ones get a padding (theta,a)-cell.
  std::vector<bool> absorbed(w.size(), false);
  std::vector<std::pair<bool, bool>> pad(w.size(), {false, false});
  for (size_t k = 0; k < w.size(); ++k) {
    if (!h.is_state(w[k])) continue;
    Shape s = shape(w[k]);
    if (s.bl) {
      if (k > 0 && w[k - 1] == s.bl && !absorbed[k - 1])
        absorbed[k - 1] = true;
      else
        pad[k].first = true;
    }
    if (s.br) {
      if (k + 1 < w.size() && w[k + 1] == s.br)
        absorbed[k + 1] = true;
      else
        pad[k].second = true;
    }
  }

  Band band;
  band.rule = ri;
  std::vector<PathItem> bottom, top;
  auto make = [&](CellKind kind, const Word& B, const Word& T, int li, int rsec) {
    Word bd = B;
    bd.push_back(X.theta(ri, rsec));
    for (Letter t : inverse(T)) bd.push_back(t);
    bd.push_back(-X.theta(ri, li));
    int c = d.add_cell(kind, bd, b, ri);
    int nb = static_cast<int>(B.size()), nt = static_cast<int>(T.size());
    for (int t = 0; t < nb; ++t) bottom.push_back({{c, t}, B[t]});
    for (int t = 0; t < nt; ++t) top.push_back({{c, nb + 1 + (nt - 1 - t)}, T[t]});
    EdgeRef left{c, static_cast<int>(bd.size()) - 1};
    if (band.cells.empty())
      band.left = left;
    else
      d.glue(band.right, left);
    band.right = {c, nb};
    band.cells.push_back(c);
  };
  auto a_cell = [&](Letter a, int sector) { make(CellKind::ThetaA, {a}, {a}, sector, sector); };

  for (size_t k = 0; k < w.size(); ++k) {
    Letter x = w[k];
    if (!h.is_state(x)) {
      if (!absorbed[k]) a_cell(x, h.canon_sector(h.sym(x).sector));
      continue;
    }
    Shape s = shape(x);
    if (pad[k].first) a_cell(-s.bl, s.li);
    make(CellKind::ThetaQ, s.B, s.T, s.li, s.ri);
    if (pad[k].second) a_cell(-s.br, s.ri);
  }

  band.bottom = fold(d, bottom);
  band.top = fold(d, top);
  d.mutable_bands().push_back(std::move(band));
  if (d.band_bottom(b, false) != w) throw Error(ErrorKind::Invalid, "band bottom does not read the word");
  if (d.band_top(b) != apply(m, W, r).flat()) throw Error(ErrorKind::Invalid, "band top does not read the result");
  return b;
}

Diagram theta_band(const Machine& m, const AdmissibleWord& W, int rule) {
  Diagram d(std::make_shared<XAlphabet>(m));
  add_theta_band(d, W, rule);
  d.set_base(d.bands()[0].bottom.front());
  return d;
}

namespace {

std::vector<EdgeRef> trimmed_top(const Diagram& d, int b) {
  const auto& top = d.bands()[b].top;
  auto [i, j] = q_range(d, top);
  return std::vector<EdgeRef>(top.begin() + i, top.begin() + j);
}

void stack_bands(Diagram& d, const Computation& c) {
  for (int j = 0; j < c.length(); ++j) {
    int b = add_theta_band(d, c.words[j], c.history[j]);
    if (b == 0) continue;
    auto top = trimmed_top(d, b - 1);
    const auto& bot = d.bands()[b].bottom;
    if (top.size() != bot.size()) throw Error(ErrorKind::Invalid, "consecutive bands do not match");
    for (size_t i = 0; i < top.size(); ++i) d.glue(top[i], bot[i]);
  }
}

}  // namespace

Diagram trapezium(const Computation& c) {
  if (c.history.empty()) throw Error(ErrorKind::EmptyHistory, "trapezium needs at least one rule");
  Diagram d(std::make_shared<XAlphabet>(*c.machine));
  stack_bands(d, c);
  d.set_base(d.bands()[0].bottom.front());
  return d;
}

Diagram disk_diagram(const Machine& m, const AdmissibleWord& W, const History& witness) {
  Computation c;
  try {
    c = run(m, W, witness);
  } catch (const Error& e) {
    throw Error(ErrorKind::WitnessInvalid, e.what());
  }
  if (c.final() != m.accept_config()) throw Error(ErrorKind::WitnessInvalid, "witness does not reach the accept configuration");
  Diagram d(std::make_shared<XAlphabet>(m));
  Word hub = hub_word(m);
  if (witness.empty()) {
    d.add_cell(CellKind::Hub, hub);
    d.set_base({0, 0});
    return d;
  }
  stack_bands(d, c);
  for (auto& b : d.bands()) d.glue(b.left, b.right);
  int hc = d.add_cell(CellKind::Hub, hub);
  auto top = trimmed_top(d, static_cast<int>(d.bands().size()) - 1);
  if (top.size() != hub.size()) throw Error(ErrorKind::Invalid, "last band does not match the hub");
  for (size_t i = 0; i < top.size(); ++i) d.glue(top[i], {hc, static_cast<int>(i)});
  d.set_base(d.bands()[0].bottom.front());
  return d;
}

namespace {

// Copies src into dst, inverting every cell when mirrored; returns a map from
// src occurrences to dst occurrences.
std::function<EdgeRef(EdgeRef)> append(Diagram& dst, const Diagram& src, bool mirrored) {
  int off = static_cast<int>(dst.cells().size());
  int boff = static_cast<int>(dst.bands().size());
  std::vector<int> len;
  for (auto& c : src.cells()) {
    len.push_back(static_cast<int>(c.boundary.size()));
    int rule = c.rule;
    if (mirrored && rule >= 0) rule = src.alphabet().machine().rules[rule].inverse;
    dst.add_cell(c.kind, mirrored ? inverse(c.boundary) : c.boundary, c.band >= 0 ? c.band + boff : -1, rule);
  }
  auto map = [off, len, mirrored](EdgeRef e) -> EdgeRef {
    if (!e.valid()) return e;
    return {e.cell + off, mirrored ? len[e.cell] - 1 - e.pos : e.pos};
  };
  for (auto& g : src.gluings()) dst.glue(map(g.a), map(g.b));
  for (auto& b : src.bands()) {
    Band nb;
    nb.rule = mirrored ? src.alphabet().machine().rules[b.rule].inverse : b.rule;
    for (int c : b.cells) nb.cells.push_back(c + off);
    for (EdgeRef e : mirrored ? b.top : b.bottom) nb.bottom.push_back(map(e));
    for (EdgeRef e : mirrored ? b.bottom : b.top) nb.top.push_back(map(e));
    nb.left = map(b.left);
    nb.right = map(b.right);
    dst.mutable_bands().push_back(std::move(nb));
  }
  return map;
}

}  // namespace

Diagram mirror(const Diagram& d) {
  Diagram out(d.alphabet_ptr());
  auto map = append(out, d, true);
  out.set_base(map(d.base()));
  return out;
}

Diagram un_diagram(const Machine& M, const Word& u, const TowerParams& p) {
  Word ur = reduce(u);
  if (ur.empty()) throw Error(ErrorKind::EmptyWord, "u^n is trivial");
  Word w = power(ur, p.n);
  AdmissibleWord I = config_I(M, w), J = config_J(M, w);
  Diagram DI = disk_diagram(M, I, canonical_accepting_m(M, ur, 1, p));
  Diagram DJ = disk_diagram(M, J, canonical_accepting_m(M, ur, 2, p));

  // offset and length of the special sector inside I
  const Hardware& h = M.hardware();
  int special = special_input_sector(M);
  auto secs = word_sectors(h, I);
  size_t s = 0, len = 0;
  bool found = false;
  for (size_t i = 0; i < I.q.size(); ++i) {
    ++s;
    if (i < I.tape.size()) {
      if (secs[i] == special) {
        len = I.tape[i].size();
        found = true;
        break;
      }
      s += I.tape[i].size();
    }
  }
  Word fi = I.flat(), fj = J.flat();
  if (!found || fi.size() != fj.size() + len) throw Error(ErrorKind::Invalid, "I and J differ outside the special sector");

  auto bi = DI.boundary_path(), bj = DJ.boundary_path();
  if (DI.boundary() != fi || DJ.boundary() != fj) throw Error(ErrorKind::Invalid, "disk boundary does not read the configuration");

  Diagram out(DI.alphabet_ptr());
  append(out, DI, false);
  auto mj = append(out, DJ, true);
  for (size_t k = 0; k < fi.size(); ++k) {
    if (k >= s && k < s + len) continue;
    size_t kj = k < s ? k : k - len;
    out.glue(bi[k], mj(bj[kj]));
  }
  out.set_base(bi[s]);
  return out;
}

// ------------------------------------------------------------------- metrics

Rational parse_rational(const std::string& s0) {
  std::string s;
  for (char c : s0)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  try {
    size_t slash = s.find('/');
    if (slash != std::string::npos) {
      long long den = std::stoll(s.substr(slash + 1));
      if (den == 0) throw Error(ErrorKind::InvalidParams, "zero denominator");
      return Rational(std::stoll(s.substr(0, slash)), den);
    }
    size_t dot = s.find('.');
    if (dot != std::string::npos) {
      std::string frac = s.substr(dot + 1);
      long long den = 1;
      for (size_t i = 0; i < frac.size(); ++i) den *= 10;
      long long whole = dot ? std::stoll(s.substr(0, dot)) : 0;
      long long f = frac.empty() ? 0 : std::stoll(frac);
      return Rational(whole * den + (s[0] == '-' ? -f : f), den);
    }
    return Rational(std::stoll(s));
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidParams, "not a rational: " + s0);
  }
}

std::string rational_str(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void MetricParams::validate() const {
  if (delta <= 0 || delta >= 1) throw Error(ErrorKind::InvalidParams, "delta must lie in (0,1)");
  if (C1 <= 0) throw Error(ErrorKind::InvalidParams, "C1 must be positive");
  if (J < 1) throw Error(ErrorKind::InvalidParams, "J must be positive");
}

std::string MetricParams::str() const {
  return "delta = " + rational_str(delta) + "\nC1 = " + rational_str(C1) + "\nJ = " + std::to_string(J) + "\n";
}

MetricParams MetricParams::parse(const std::string& text) {
  MetricParams mp;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string key = strip(line.substr(0, eq)), val = strip(line.substr(eq + 1));
    if (key == "delta")
      mp.delta = parse_rational(val);
    else if (key == "C1")
      mp.C1 = parse_rational(val);
    else if (key == "J") {
      Rational j = parse_rational(val);
      if (j.denominator() != 1) throw Error(ErrorKind::InvalidParams, "J must be an integer");
      mp.J = static_cast<int>(j.numerator());
    }
  }
  mp.validate();
  return mp;
}

namespace {

Rational letter_cost(GenKind k, const Rational& delta) { return k == GenKind::A ? delta : Rational(1); }

bool syllable(GenKind x, GenKind y) {
  return (x == GenKind::Theta && y == GenKind::A) || (x == GenKind::A && y == GenKind::Theta);
}

}  // namespace

Rational modified_length(const std::vector<GenKind>& w, const Rational& delta) {
  std::vector<Rational> f(w.size() + 1, Rational(0));
  for (size_t i = 1; i <= w.size(); ++i) {
    f[i] = f[i - 1] + letter_cost(w[i - 1], delta);
    if (i >= 2 && syllable(w[i - 2], w[i - 1])) f[i] = std::min(f[i], f[i - 2] + 1);
  }
  return f.back();
}

Rational modified_length(const XAlphabet& x, const Word& w, const Rational& delta) {
  std::vector<GenKind> k;
  for (Letter l : w) k.push_back(x.kind(l));
  return modified_length(k, delta);
}

Rational modified_length_brute(const std::vector<GenKind>& w, const Rational& delta) {
  // every factorization is a choice of cut points; factors of length 1 are
  // letters, of length 2 must be syllables, longer ones are never factors
  size_t n = w.size();
  if (n == 0) return 0;
  Rational best(-1);
  for (unsigned long mask = 0; mask < (1UL << (n - 1)); ++mask) {
    Rational total(0);
    bool ok = true;
    size_t start = 0;
    for (size_t i = 0; i < n && ok; ++i) {
      bool cut = i == n - 1 || (mask >> i & 1UL);
      if (!cut) continue;
      size_t len = i + 1 - start;
      if (len == 1)
        total += letter_cost(w[start], delta);
      else if (len == 2 && syllable(w[start], w[start + 1]))
        total += 1;
      else
        ok = false;
      start = i + 1;
    }
    if (ok && (best < 0 || total < best)) best = total;
  }
  return best;
}

Rational cell_weight(const XAlphabet& x, const Cell& c, const MetricParams& mp) {
  switch (c.kind) {
    case CellKind::ThetaQ:
    case CellKind::ThetaA: return 1;
    case CellKind::Hub:
    case CellKind::Disk: {
      Rational l = modified_length(x, c.boundary, mp.delta);
      return mp.C1 * l * l;
    }
    case CellKind::ACell: {
      long long n = static_cast<long long>(c.boundary.size());
      return mp.C1 * n * n;
    }
  }
  return 0;
}

Rational weight(const Diagram& d, const MetricParams& mp) {
  Rational w(0);
  for (auto& c : d.cells()) w += cell_weight(d.alphabet(), c, mp);
  return w;
}

int Necklace::whites() const { return static_cast<int>(std::count(beads.begin(), beads.end(), Bead::White)); }
int Necklace::blacks() const { return static_cast<int>(std::count(beads.begin(), beads.end(), Bead::Black)); }

std::vector<long> mixture_counts(const Necklace& o, int J) {
  std::vector<long> P(J, 0);
  int n = static_cast<int>(o.beads.size());
  std::vector<int> pre(2 * n + 1, 0);  // blacks in [0, i) of the doubled necklace
  for (int i = 0; i < 2 * n; ++i) pre[i + 1] = pre[i] + (o.beads[i % n] == Bead::Black);
  std::vector<int> white;
  for (int i = 0; i < n; ++i)
    if (o.beads[i] == Bead::White) white.push_back(i);
  for (int a : white)
    for (int b : white) {
      if (a == b) continue;
      int end = b > a ? b : b + n;
      int blacks = pre[end] - pre[a + 1];
      for (int j = 1; j <= J && j <= blacks; ++j) ++P[j - 1];
    }
  return P;
}

long mixture(const Necklace& o, int J) {
  auto P = mixture_counts(o, J);
  return std::accumulate(P.begin(), P.end(), 0L);
}

long mixture_brute(const Necklace& o, int J) {
  long total = 0;
  int n = static_cast<int>(o.beads.size());
  for (int j = 1; j <= J; ++j)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b || o.beads[a] != Bead::White || o.beads[b] != Bead::White) continue;
        int blacks = 0;
        for (int i = (a + 1) % n; i != b; i = (i + 1) % n) blacks += o.beads[i] == Bead::Black;
        if (blacks >= j) ++total;
      }
  return total;
}

Necklace necklace_of(const XAlphabet& x, const Word& boundary) {
  std::vector<Letter> marked;
  for (Letter l : boundary)
    if (x.kind(l) != GenKind::A) marked.push_back(l);
  Necklace o;
  if (marked.empty()) return o;
  size_t start = 0;
  for (size_t i = 1; i < marked.size(); ++i)
    if (x.name(marked[i]) < x.name(marked[start])) start = i;
  for (size_t i = 0; i < marked.size(); ++i) {
    Letter l = marked[(start + i) % marked.size()];
    o.beads.push_back(x.kind(l) == GenKind::Theta ? Bead::White : Bead::Black);
  }
  return o;
}

Necklace necklace_of(const Diagram& d) { return necklace_of(d.alphabet(), d.boundary()); }

}  // namespace smf
