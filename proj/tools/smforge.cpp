#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smforge/combinators.hpp"
#include "smforge/diagram.hpp"
#include "smforge/lemmas.hpp"
#include "smforge/presentation.hpp"
#include "smforge/search.hpp"
#include "smforge/serialize.hpp"
#include "smforge/tower.hpp"

using namespace smf;

namespace {

// Exit codes: 0 success, 1 domain-negative, 2 usage or incomplete.
constexpr int kOk = 0, kNegative = 1, kUsage = 2;

struct Common {
  std::string params_file;
  std::string alphabet;
  int n = 0, k = 0, L = 0;
  unsigned long long seed = 20261018ULL;
  std::string trace_file;

  TowerParams tower() const {
    TowerParams p;
    if (!params_file.empty()) p = TowerParams::load(params_file);
    if (!alphabet.empty()) {
      p.A.clear();
      for (char c : alphabet) p.A.push_back(std::string(1, c));
    }
    if (n) p.n = n;
    if (k) p.k = k;
    if (L) p.L = L;
    p.validate();
    return p;
  }
  MetricParams metrics() const {
    if (params_file.empty()) return MetricParams();
    return MetricParams::parse(read_file(params_file));
  }
};

void header(const std::string& cmd, const TowerParams& p) {
  std::string s = p.str();
  for (char& c : s)
    if (c == '\n') c = ' ';
  std::cout << "# smforge " << cmd << "\n# params " << s << "\n";
}

// "a b^-1 a", "ab^-1a" and "1" (empty word) all parse.
Word parse_input(const Hardware& hw, const std::string& s) {
  Word w;
  size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] == '1' && (i + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 1])))) {
      ++i;
      continue;
    }
    size_t best = 0;
    int id = 0;
    for (size_t a = 0; a < hw.alphabet.size(); ++a) {
      const std::string& name = hw.alphabet[a];
      if (name.size() > best && s.compare(i, name.size(), name) == 0) {
        best = name.size();
        id = static_cast<int>(a) + 1;
      }
    }
    if (!id) throw Error(ErrorKind::Parse, "unknown input letter at '" + s.substr(i) + "'");
    i += best;
    if (s.compare(i, 3, "^-1") == 0) {
      id = -id;
      i += 3;
    }
    w.push_back(id);
  }
  return w;
}

Machine get_machine(const std::string& spec, const TowerParams& p) {
  if (std::filesystem::is_regular_file(spec)) return load_machine(spec);
  if (spec == "m1") return build_m1(p.A, p.n);
  return build_named(spec, p);
}

AdmissibleWord input_word(const Machine& m, const std::string& input, const std::string& config) {
  if (!config.empty() && config != "I" && config != "J") return parse_admissible(m.hardware(), config);
  Word w = parse_input(m.hardware(), input);
  return config == "J" ? config_J(m, w) : m.input_config(w);
}

void emit_trace(const Common& c, const Computation& comp) {
  std::string t = write_trace(comp);
  std::cout << t;
  if (!c.trace_file.empty()) write_file(c.trace_file, t);
}

std::string svg_plot(const std::vector<AreaRow>& rows) {
  const double W = 480, H = 320, pad = 48;
  double xmax = 1, ymax = 1;
  for (auto& r : rows) {
    xmax = std::max(xmax, static_cast<double>(r.norm));
    ymax = std::max(ymax, r.ratio);
  }
  auto X = [&](double x) { return pad + (W - 2 * pad) * x / xmax; };
  auto Y = [&](double y) { return H - pad - (H - 2 * pad) * y / ymax; };
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">|u|</text>\n";
  o << "<text x=\"12\" y=\"" << pad - 16 << "\" font-size=\"12\">area / |u|^2</text>\n";
  if (!rows.empty()) {
    double base = rows.front().ratio;
    for (double f : {2.0, 0.5}) {
      double y = Y(std::min(base * f, ymax));
      o << "<line x1=\"" << pad << "\" y1=\"" << y << "\" x2=\"" << W - pad << "\" y2=\"" << y
        << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    }
  }
  o << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (auto& r : rows) o << X(r.norm) << "," << Y(r.ratio) << " ";
  o << "\"/>\n";
  for (auto& r : rows) {
    o << "<circle cx=\"" << X(r.norm) << "\" cy=\"" << Y(r.ratio) << "\" r=\"3\" fill=\"steelblue\"/>\n";
    o << "<text x=\"" << X(r.norm) << "\" y=\"" << H - pad + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
      << r.norm << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void print_results(const std::vector<CheckResult>& rs) {
  std::cout << "check\tsource\tcases\tfailures\tdetail\n";
  for (auto& r : rs)
    std::cout << r.name << "\t" << r.source << "\t" << r.cases << "\t" << r.failures << "\t" << r.detail << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-machine toolkit: machines, presentations and diagrams"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--params", c.params_file, "key = value parameter file (tower and metric keys)");
  app.add_option("--alphabet", c.alphabet, "input alphabet, one letter per character");
  app.add_option("--n", c.n, "exponent n");
  app.add_option("--k", c.k, "repetition count k");
  app.add_option("--L", c.L, "number of parallel copies L");
  app.add_option("--seed", c.seed, "seed for randomized suites");
  app.add_option("--trace", c.trace_file, "also write the computation trace to FILE");

  std::string machine = "m1", input, config, history, out;

  auto* build = app.add_subcommand("build", "emit a machine in the text format");
  build->add_option("--machine", machine, "m1|lr|rl|m2|m3|m4|m51|m52|m or a machine file");
  build->add_option("--out", out, "output file");

  auto* runc = app.add_subcommand("run", "run a history and print the trace");
  runc->add_option("--machine", machine);
  runc->add_option("--input", input, "input word over the alphabet");
  runc->add_option("--config", config, "I, J or an explicit admissible word");
  runc->add_option("--history", history, "space-separated rule ids")->required();

  int bound = 40, max_norm = 0;
  bool complete_m1 = false;
  auto* accept = app.add_subcommand("accept", "decide acceptance; exit 0 accepted, 1 rejected, 2 incomplete");
  accept->add_option("--machine", machine);
  accept->add_option("--input", input);
  accept->add_option("--config", config);
  accept->add_option("--bound", bound, "history length budget");
  accept->add_option("--max-norm", max_norm, "prune words longer than this (0: off)");
  accept->add_flag("--complete-m1", complete_m1, "complete decision for M1 within the length bound");

  std::string group = "g", format = "text";
  int max_len = 2;
  auto* present = app.add_subcommand("present", "emit a group presentation");
  present->add_option("--machine", machine);
  present->add_option("--group", group)->check(CLI::IsMember({"m", "g", "g-omega", "disk"}));
  present->add_option("--max-len", max_len, "longest u used for u^n relators and disk configurations");
  present->add_option("--export", format)->check(CLI::IsMember({"text", "flat"}));

  std::string kind = "trapezium", in;
  bool metrics = false;
  auto* diagram = app.add_subcommand("diagram", "build a diagram");
  diagram->add_option("--machine", machine);
  diagram->add_option("--kind", kind)->check(CLI::IsMember({"trapezium", "disk", "un"}));
  diagram->add_option("--in", in, "trace file (trapezium, disk) or word u (un)")->required();
  diagram->add_flag("--metrics", metrics, "print area, weight and mixture");
  diagram->add_option("--export", format, "dot|flat")->check(CLI::IsMember({"text", "dot", "flat"}));

  int lengths = 4;
  std::string prefix;
  auto* bench = app.add_subcommand("bench-area", "area of u^n diagrams against |u|");
  bench->add_option("--max-len", lengths, "largest |u|");
  bench->add_option("--out", prefix, "write PREFIX.dat and PREFIX.svg");

  std::string suite;
  int scale = 1;
  auto* verify = app.add_subcommand("verify-lemmas", "run a property suite");
  verify->add_option("suite", suite, "core|m1|m2|m3|m|metrics|diagrams")->required();
  verify->add_option("--scale", scale, "sample multiplier");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    TowerParams p = c.tower();

    if (*build) {
      std::string text = write_machine(get_machine(machine, p));
      if (out.empty()) std::cout << text;
      else write_file(out, text);
      return kOk;
    }

    if (*runc) {
      Machine m = get_machine(machine, p);
      AdmissibleWord w0 = input_word(m, input, config);
      try {
        emit_trace(c, run(m, w0, parse_history(m, history)));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::FailsAtStep) throw;
        std::cerr << e.what() << "\n";
        return kNegative;
      }
      return kOk;
    }

    if (*accept) {
      Machine m = get_machine(machine, p);
      AdmissibleWord w0 = input_word(m, input, config);
      Outcome o;
      History witness;
      std::string note;
      if (complete_m1) {
        M1Decision d = decide_accept_m1(m, p.n, w0);
        o = d.outcome;
        witness = d.witness;
        note = "complete within bound " + std::to_string(d.bound) + "; accepting computations " +
               std::to_string(d.accepting);
      } else {
        SearchBudget b;
        b.max_history_length = bound;
        b.max_word_norm = max_norm;
        AcceptResult r = bounded_accept(m, w0, b);
        o = r.outcome;
        witness = r.witness;
        note = "budget-bounded, history length <= " + std::to_string(bound) + ", explored " +
               std::to_string(r.explored);
      }
      std::cerr << outcome_name(o) << " (" << note << ")\n";
      if (o == Outcome::Accepted) emit_trace(c, run(m, w0, witness));
      return o == Outcome::Accepted ? kOk : o == Outcome::Rejected ? kNegative : kUsage;
    }

    if (*present) {
      Machine m = get_machine(machine, p);
      Presentation P(std::make_shared<XAlphabet>(m));
      if (group == "m") {
        P = presentation_M(m);
      } else if (group == "g") {
        P = presentation_G(m);
      } else if (group == "g-omega") {
        OmegaPresentation o = presentation_omega(m, omega_powers(static_cast<int>(m.hardware().alphabet.size()), p.n, max_len));
        while (o.next()) {
        }
        P = o.current();
      } else {
        P = presentation_G(m);
        std::vector<DiskRelatorStream::Item> items;
        std::vector<Word> us{{}};
        int rank = static_cast<int>(m.hardware().alphabet.size());
        for (int l = 1; l <= max_len; ++l)
          for (auto& u : reduced_words(rank, l)) us.push_back(u);
        for (auto& u : us) {
          Word w = reduce(power(u, p.n));
          if (m.name == "M") {
            items.push_back({config_I(m, w), canonical_accepting_m(m, u, 1, p)});
            items.push_back({config_J(m, w), canonical_accepting_m(m, u, 2, p)});
          } else if (m.name == "M1") {
            items.push_back({input_m1(m, w), canonical_accepting_m1(m, u, p.n)});
          } else {
            throw Error(ErrorKind::InvalidParams, "disk relators need machine m1 or m");
          }
        }
        DiskRelatorStream s = disk_relator_stream(m, items);
        while (auto r = s.next()) P.add(r->tag, r->word);
      }
      std::cout << (format == "flat" ? P.emit_flat() : P.emit());
      return kOk;
    }

    if (*diagram) {
      Machine m = get_machine(kind == "un" ? "m" : machine, p);
      Diagram d(std::make_shared<XAlphabet>(m));
      if (kind == "un") {
        d = un_diagram(m, parse_input(m.hardware(), in), p);
      } else {
        Computation comp = read_trace(m, read_file(in));
        d = kind == "disk" ? disk_diagram(m, comp.initial(), comp.history) : trapezium(comp);
      }
      if (format == "dot") std::cout << d.to_dot();
      else if (format == "flat") std::cout << d.to_flat();
      if (metrics || format == "text") {
        MetricParams mp = c.metrics();
        std::string ps = mp.str();
        for (char& ch : ps)
          if (ch == '\n') ch = ' ';
        std::ostream& o = format == "text" ? std::cout : std::cerr;
        o << "# metrics " << ps << "\n";
        o << "area\t" << d.area() << "\n";
        o << "hubs\t" << d.hubs() << "\n";
        o << "bands\t" << d.bands().size() << "\n";
        if (kind == "disk") o << "witness_length\t" << d.history().size() << "\n";
        o << "boundary_length\t" << d.boundary().size() << "\n";
        o << "modified_length\t" << rational_str(modified_length(d.alphabet(), d.boundary(), mp.delta)) << "\n";
        o << "weight\t" << rational_str(weight(d, mp)) << "\n";
        o << "mixture\t" << mixture(necklace_of(d), mp.J) << "\n";
      }
      return kOk;
    }

    if (*bench) {
      if (lengths < 1) throw Error(ErrorKind::InvalidParams, "--max-len must be positive");
      header("bench-area", p);
      auto t0 = std::chrono::steady_clock::now();
      auto rows = area_table(p, area_words(static_cast<int>(p.A.size()), lengths));
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      CheckResult r = check_area_growth(rows);
      std::ostringstream table;
      table << "norm\tu\tarea\tratio\n";
      for (auto& row : rows) table << row.norm << "\t" << row.u << "\t" << row.area << "\t" << row.ratio << "\n";
      std::cout << table.str();
      std::cout << "# quadratic growth within factor 2 [measured]: " << (r.ok() ? "holds" : "fails") << "\n";
      std::fprintf(stderr, "# %.2fs\n", secs);
      if (!prefix.empty()) {
        write_file(prefix + ".dat", table.str());
        write_file(prefix + ".svg", svg_plot(rows));
      }
      return r.ok() ? kOk : kNegative;
    }

    if (*verify) {
      SuiteOptions o;
      o.tower = p;
      o.metrics = c.metrics();
      o.seed = c.seed;
      o.scale = scale;
      const auto& names = suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) throw Error(ErrorKind::UnknownSuite, suite);
      header("verify-lemmas " + suite, p);
      std::cout << "# seed " << c.seed << "\n";
      auto rs = run_suite(suite, o);
      print_results(rs);
      for (auto& r : rs)
        if (!r.ok()) return kNegative;
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::NotAccepted || e.kind() == ErrorKind::FailsAtStep ? kNegative : kUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
