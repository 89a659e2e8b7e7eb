#pragma once

#include <random>
#include <string>
#include <vector>

#include "smforge/diagram.hpp"
#include "smforge/machine.hpp"
#include "smforge/tower.hpp"

namespace smf {

// Outcome of one property check.  `source` says where the expected values
// come from: formula, measured or budget-bounded.
struct CheckResult {
  std::string name;
  std::string source = "formula";
  long cases = 0;
  long failures = 0;
  std::string detail;  // first failure, or a summary
  bool ok() const { return failures == 0 && cases > 0; }
};

struct SuiteOptions {
  TowerParams tower;
  MetricParams metrics;
  unsigned long long seed = 20261018ULL;
  // Scales the number of random samples; 1 is the CI setting.
  int scale = 1;
};

const std::vector<std::string>& suite_names();
// Throws UnknownSuite.
std::vector<CheckResult> run_suite(const std::string& name, const SuiteOptions& o);

// Random helpers shared by the suites and the tests.
Word random_word(std::mt19937_64& g, int rank, int len);
// Reduced random computation; every step picks uniformly among the applicable
// rules other than the inverse of the previous one.
Computation random_walk(const Machine& m, const AdmissibleWord& w0, int len, std::mt19937_64& g);
// All reduced words over `rank` letters of length exactly len.
std::vector<Word> reduced_words(int rank, int len);

// ------------------------------------------------------------------ core
CheckResult check_inverse_pairs(const Machine& m, std::mt19937_64& g, int samples);
CheckResult check_base_preservation(const Machine& m, std::mt19937_64& g, int samples);
// Rules of step (1) of M1, or (1)_j of M, keep the projection onto F(A):
// the whole word for the first machine and components 2..L for the second.
CheckResult check_projection_m1(const Machine& m1, std::mt19937_64& g, int samples);
CheckResult check_projection_m(const Machine& M, const TowerParams& p, std::mt19937_64& g, int samples);
CheckResult check_machine_roundtrip(const Machine& m);

// ------------------------------------------------------------------ machines
// 2n||u||+2n-1 for all reduced u with ||u|| <= max_len.
CheckResult check_m1_lengths(const std::vector<std::string>& A, int n, int max_len);
// Exactly one accepting computation for u^n with ||u|| <= 1 and none for the
// rejected inputs, both within the full length bound.
CheckResult check_m1_uniqueness(const std::vector<std::string>& A, int n, const std::vector<Word>& rejected);
// decide_accept_m1 against brute-force root extraction on every input of
// length <= max_len.
CheckResult check_m1_language(const std::vector<std::string>& A, int n, int max_len);
CheckResult check_m1_no_turn(const std::vector<std::string>& A, int n, int depth, std::mt19937_64& g, int samples);
// t = 2l+1 and constant a-length for the standard computation of LR and RL.
CheckResult check_primitive_standard(const std::vector<std::string>& Y, int max_len);
CheckResult check_m2_controlled(const TowerParams& p, int max_len, std::mt19937_64& g, int samples);
CheckResult check_m3_designated(const TowerParams& p, const std::vector<int>& ks, int max_len);
CheckResult check_m3_bounded_accept(const TowerParams& p);
CheckResult check_m_language(const TowerParams& p, int max_len);
CheckResult check_m_turn(const TowerParams& p, int max_len);
CheckResult check_m_step_history(const TowerParams& p, int depth, int max_len);

// ------------------------------------------------------------------ metrics
CheckResult check_modified_length(const Rational& delta, int max_len);
CheckResult check_length_subadditivity(const Rational& delta, std::mt19937_64& g, int samples);
CheckResult check_mixtures(int J, int max_beads, std::mt19937_64& g, int samples);

// ------------------------------------------------------------------ diagrams
CheckResult check_trapezia(const TowerParams& p, std::mt19937_64& g, int samples);
CheckResult check_disks(const TowerParams& p, int max_len);

struct AreaRow {
  int norm = 0;
  std::string u;
  int area = 0;
  double ratio = 0;  // area / norm^2
};
std::vector<AreaRow> area_table(const TowerParams& p, const std::vector<Word>& us);
// Representative words of length 1..max_len: a, ab, aba, ab^-1ab, ...
std::vector<Word> area_words(int rank, int max_len);
CheckResult check_area_growth(const std::vector<AreaRow>& rows);

}  // namespace smf
