#pragma once

#include <memory>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "smforge/machine.hpp"
#include "smforge/presentation.hpp"
#include "smforge/tower.hpp"

namespace smf {

using Rational = boost::rational<long long>;

enum class CellKind { ThetaQ, ThetaA, ACell, Hub, Disk };
const char* cell_kind_name(CellKind k);

// Boundary labels are read counterclockwise.  Theta-cells start at the
// bottom-left corner: bottom, right side, top (backwards), left side.
struct Cell {
  CellKind kind;
  Word boundary;
  int band = -1;
  int rule = -1;  // rule index for theta-cells
};

struct EdgeRef {
  int cell = -1;
  int pos = -1;
  bool valid() const { return cell >= 0; }
  bool operator==(const EdgeRef& o) const { return cell == o.cell && pos == o.pos; }
  bool operator<(const EdgeRef& o) const { return cell != o.cell ? cell < o.cell : pos < o.pos; }
};

// Two occurrences of one edge, traversed in opposite directions.
struct Gluing {
  EdgeRef a, b;
};

struct Band {
  int rule = -1;
  std::vector<int> cells;       // left to right
  std::vector<EdgeRef> bottom;  // folded bottom path, left to right
  std::vector<EdgeRef> top;     // folded top path, left to right
  EdgeRef left, right;          // side theta-edges
};

class Diagram {
 public:
  explicit Diagram(std::shared_ptr<const XAlphabet> x) : x_(std::move(x)) {}

  const XAlphabet& alphabet() const { return *x_; }
  std::shared_ptr<const XAlphabet> alphabet_ptr() const { return x_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  const std::vector<Band>& bands() const { return bands_; }

  int add_cell(CellKind kind, Word boundary, int band = -1, int rule = -1);
  // Throws Invalid unless the labels are mutually inverse and both are free.
  void glue(EdgeRef a, EdgeRef b);
  bool glued(EdgeRef e) const;
  EdgeRef twin(EdgeRef e) const;
  Letter label(EdgeRef e) const { return cells_[e.cell].boundary[e.pos]; }

  std::vector<Band>& mutable_bands() { return bands_; }
  void set_base(EdgeRef e) { base_ = e; }
  EdgeRef base() const { return base_; }

  // All boundary cycles as occurrence lists; the cycle through the base point
  // comes first and starts there.
  std::vector<std::vector<EdgeRef>> boundary_cycles() const;
  std::vector<EdgeRef> boundary_path() const;
  Word boundary() const;
  int vertices() const;
  int edges() const;
  int euler_characteristic() const { return vertices() - edges() + static_cast<int>(cells_.size()); }
  bool is_disk() const;

  int area() const { return static_cast<int>(cells_.size()); }
  int count(CellKind k) const;
  int hubs() const { return count(CellKind::Hub); }

  // Band reading.  Trimming drops a-edges before the first and after the last
  // q-edge.
  Word band_bottom(int b, bool trimmed = true) const;
  Word band_top(int b, bool trimmed = true) const;
  Word tbot() const { return band_bottom(0); }
  Word ttop() const { return band_top(static_cast<int>(bands_.size()) - 1); }
  // Rule of each band read from its left side.
  History history() const;

  std::string to_dot() const;
  std::string to_flat() const;

 private:
  std::shared_ptr<const XAlphabet> x_;
  std::vector<Cell> cells_;
  std::vector<Gluing> gluings_;
  std::vector<std::vector<EdgeRef>> twins_;
  std::vector<Band> bands_;
  EdgeRef base_;
};

// A maximal q- or a-band: theta-cells joined through glued q- or a-edges.
struct BandCheck {
  int q_bands = 0;
  int a_bands = 0;
  bool q_once = true;     // every q-band meets each theta-band at most once
  bool a_once = true;
  bool q_annuli = false;  // some q-band closes up
  bool a_annuli = false;
  bool q_cross_all = true;  // every q-band meets every theta-band
  bool ok() const { return q_once && a_once && !q_annuli && !a_annuli; }
};
BandCheck check_bands(const Diagram& d);

// Appends the band for W -> W.r; the bottom is read left to right.
int add_theta_band(Diagram& d, const AdmissibleWord& W, int rule);

Diagram theta_band(const Machine& m, const AdmissibleWord& W, int rule);
Diagram trapezium(const Computation& c);
Diagram disk_diagram(const Machine& m, const AdmissibleWord& W, const History& witness);
// The u^n-diagram of M: I(u^n) and the mirror of J(u^n) glued along all of
// their boundary except the special input sector.
Diagram un_diagram(const Machine& M, const Word& u, const TowerParams& p);

// Reversed orientation: every cell word inverted.
Diagram mirror(const Diagram& d);

// ------------------------------------------------------------------ metrics

struct MetricParams {
  Rational delta{1, 100};
  Rational C1{100};
  int J = 4;

  void validate() const;  // throws InvalidParams
  std::string str() const;
  // key = value lines with keys delta, C1, J; unknown keys are ignored so
  // that one file can carry the tower parameters too.
  static MetricParams parse(const std::string& text);
};

Rational parse_rational(const std::string& s);
std::string rational_str(const Rational& r);

// Minimal decomposition cost: q 1, theta 1, a delta, (theta,a)-syllable 1.
Rational modified_length(const std::vector<GenKind>& w, const Rational& delta);
Rational modified_length(const XAlphabet& x, const Word& w, const Rational& delta);
// Exhaustive over all factorizations.
Rational modified_length_brute(const std::vector<GenKind>& w, const Rational& delta);

Rational cell_weight(const XAlphabet& x, const Cell& c, const MetricParams& mp);
Rational weight(const Diagram& d, const MetricParams& mp);

enum class Bead { White, Black };
struct Necklace {
  std::vector<Bead> beads;  // counterclockwise
  int whites() const;
  int blacks() const;
};

// #P_j for j = 1..J.
std::vector<long> mixture_counts(const Necklace& o, int J);
long mixture(const Necklace& o, int J);
// Walks every arc bead by bead.
long mixture_brute(const Necklace& o, int J);

// White bead per theta-letter, black per q-letter, starting at the first
// letter with the least generator name.
Necklace necklace_of(const XAlphabet& x, const Word& boundary);
Necklace necklace_of(const Diagram& d);

}  // namespace smf
