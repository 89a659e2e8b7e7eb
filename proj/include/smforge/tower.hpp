#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smforge/combinators.hpp"
#include "smforge/machine.hpp"

namespace smf {

struct TowerParams {
  std::vector<std::string> A{"a", "b"};
  int n = 2;
  int k = 3;
  int L = 3;

  void validate() const;  // throws InvalidParams
  std::string str() const;
  // key = value lines with keys alphabet, n, k, L; '#' starts a comment
  static TowerParams parse(const std::string& text);
  static TowerParams load(const std::string& path);
};

// "(ij)" for one-digit indices, "(i,j)" otherwise.
std::string step_pair(int i, int j);

Machine build_m1(const std::vector<std::string>& A, int n);
Machine build_m1_phase(const std::vector<std::string>& A, int n, int phase);  // M1(i) alone
Machine build_m2(const TowerParams& p);
Machine build_m3(const TowerParams& p);
Machine build_m4(const TowerParams& p);
Machine build_m51(const TowerParams& p);
Machine build_m52(const TowerParams& p);
Machine build_m(const TowerParams& p);
// name in {m1, m2, m3, m4, m51, m52, m, lr, rl}
Machine build_named(const std::string& name, const TowerParams& p);

// Canonical accepting histories for input u^n.  They are produced by driving
// the machine and reading the current sector contents, so every history
// returned has been run once already.
History canonical_accepting_m1(const Machine& m1, const Word& u, int n);
History canonical_accepting_m2(const Machine& m2, const Word& u, const TowerParams& p);
History canonical_accepting_m3(const Machine& m3, const Word& u, const TowerParams& p);
// Works for M4, M5,1 and M5,2 as well, which reuse the rule names of M3.
History canonical_accepting_tower(const Machine& m, const Word& u, const TowerParams& p);
History canonical_accepting_m(const Machine& M, const Word& u, int machine_index, const TowerParams& p);
History standard_lr(const Machine& lr_or_rl, const Word& u);

// Input configurations.
AdmissibleWord input_m1(const Machine& m1, const Word& w);
AdmissibleWord config_I(const Machine& M, const Word& w);
AdmissibleWord config_J(const Machine& M, const Word& w);
AdmissibleWord config_Wac(const Machine& M);

// [begin, length) of the maximal subcomputation with step history
// (4n-2,4n-1)(4n-1)(4n-1,4n); length -1 if absent.
std::pair<int, int> designated_subcomputation(const Machine& m, const History& h, int n);

// Coordinates of the parallel machines.
int coordinate_of(const std::string& name);  // -1 when the name has no coordinate
std::string strip_coordinate(const std::string& name);
AdmissibleWord component(const Machine& M, const AdmissibleWord& W, int i);
AdmissibleWord coordinate_shift(const Hardware& hw, const AdmissibleWord& V, int j);

// Base words written with part names, e.g. {"Q4@1", +1}.
struct BaseLetter {
  std::string part;
  int sign = 1;
  bool operator==(const BaseLetter& o) const { return part == o.part && sign == o.sign; }
};
using BaseWord = std::vector<BaseLetter>;

BaseWord base_word(const Hardware& hw, const AdmissibleWord& w);
BaseWord parse_base(const std::string& s);  // "Q4@1 T@2 Q1@2^-1"
std::string base_word_str(const BaseWord& b);
BaseWord reverted_base(const BaseWord& b);

struct BaseFlags {
  bool revolving = false;
  bool faulty = false;
  bool pararevolving = false;
  bool hyperfaulty = false;
  bool tight = false;
};
bool is_revolving(const BaseWord& b);
bool is_reduced_base(const BaseWord& b);
bool is_tight(const BaseWord& b);
BaseFlags base_predicates(const BaseWord& b);

}  // namespace smf
