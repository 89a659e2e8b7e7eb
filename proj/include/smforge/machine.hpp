#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smforge/word.hpp"

namespace smf {

enum class SymKind { State, Tape };

struct Symbol {
  std::string name;
  SymKind kind;
  int part = -1;    // state letters
  int sector = -1;  // tape letters
  Letter origin = 0;  // natural copy in the input alphabet, 0 if none
};

struct Part {
  std::string name;
  std::vector<int> letters;
  int start = 0;
  int end = 0;
};

// Parts 0..N-1.  Sector j sits between part j-1 and part j, so sectors
// 0 and N are the outer positions.  A cyclic hardware identifies sector 0
// with sector N (the wrap sector) and only stores N.
class Hardware {
 public:
  std::vector<Part> parts;
  std::vector<std::string> sector_names;
  std::vector<std::vector<int>> tape;
  bool cyclic = false;
  std::vector<std::string> alphabet;  // input alphabet A
  std::vector<Symbol> symbols;

  int nparts() const { return static_cast<int>(parts.size()); }
  int nsectors() const { return nparts() + 1; }

  // Builders.  Sector names default to "<left part><right part>".
  int add_part(const std::string& name);
  int add_state(int part, const std::string& name);
  int add_tape(int sector, const std::string& name, Letter origin = 0);
  void init_sectors();
  void set_alphabet(const std::vector<std::string>& a) { alphabet = a; }

  int id(const std::string& name) const;
  bool has(const std::string& name) const { return ids_.count(name) > 0; }
  int part_index(const std::string& name) const;
  int sector_index(const std::string& name) const;
  const Symbol& sym(Letter x) const { return symbols.at(std::abs(x) - 1); }
  bool is_state(Letter x) const { return sym(x).kind == SymKind::State; }
  int canon_sector(int j) const { return (cyclic && j == 0) ? nparts() : j; }

  // Sector holding the tape word between q-letters x and y, or -1.
  int sector_between(Letter x, Letter y) const;

  std::string letter_str(Letter x) const;
  std::string word_str(const Word& w) const;
  Letter parse_letter(const std::string& tok) const;
  Word parse_word(const std::string& s) const;

  std::string alpha_letter_str(Letter x) const;
  std::string alpha_word_str(const Word& w) const;
  Word parse_alpha_word(const std::string& s) const;

 private:
  std::unordered_map<std::string, int> ids_;
};

using HardwarePtr = std::shared_ptr<const Hardware>;

struct AdmissibleWord {
  std::vector<Letter> q;
  std::vector<Word> tape;  // tape[i] sits between q[i] and q[i+1]

  Word flat() const;
  int a_length() const;
  int q_length() const { return static_cast<int>(q.size()); }
  int norm() const { return a_length() + q_length(); }
  bool operator==(const AdmissibleWord& o) const { return q == o.q && tape == o.tape; }
  bool operator!=(const AdmissibleWord& o) const { return !(*this == o); }
  bool operator<(const AdmissibleWord& o) const {
    return q != o.q ? q < o.q : tape < o.tape;
  }
};

struct AdmissibleWordHash {
  size_t operator()(const AdmissibleWord& w) const;
};

// Build an admissible word from a flat letter sequence; throws NotAdmissible.
AdmissibleWord make_word(const Hardware& hw, const Word& flat);
AdmissibleWord parse_admissible(const Hardware& hw, const std::string& s);
bool is_admissible(const Hardware& hw, const AdmissibleWord& w, std::string* why = nullptr);
std::vector<int> word_sectors(const Hardware& hw, const AdmissibleWord& w);
std::string word_str(const Hardware& hw, const AdmissibleWord& w);

// Signed part indices: +(p+1) or -(p+1).
using Base = std::vector<int>;
Base base_of(const Hardware& hw, const AdmissibleWord& w);
std::string base_str(const Hardware& hw, const Base& b);

struct RulePart {
  int from = 0;
  int to = 0;
  Letter left = 0;
  Letter right = 0;
  bool operator==(const RulePart& o) const {
    return from == o.from && to == o.to && left == o.left && right == o.right;
  }
};

enum class Domain { Full, Empty, Subset };
enum class RuleKind { Working, Transition, Chi };

struct Rule {
  std::string id;
  std::string step;  // step letter emitted by step_history
  bool positive = true;
  int inverse = -1;  // index into Machine::rules
  RuleKind kind = RuleKind::Working;
  std::string sub;  // finer submachine label, informational
  std::vector<RulePart> parts;
  std::vector<bool> locks;
  std::vector<Domain> domains;
  std::vector<std::vector<int>> subsets;  // only for Domain::Subset

  bool locks_sector(int j) const { return locks[j]; }
  bool in_domain(int sector, Letter x) const;
};

// Rules are stored in pairs: rules[2i] positive, rules[2i+1] its inverse.
class Machine {
 public:
  std::string name;
  HardwarePtr hw;
  std::vector<Rule> rules;
  std::vector<int> input_sectors;
  std::vector<std::string> step_alphabet;

  const Hardware& hardware() const { return *hw; }
  int npositive() const { return static_cast<int>(rules.size() / 2); }
  int rule_index(const std::string& id) const;
  const Rule& rule(const std::string& id) const { return rules[rule_index(id)]; }

  // Append a positive rule (given in positive form) plus its inverse.
  // inverse_step is the step letter of the inverse (defaults to step).
  int add_rule(Rule r, const std::string& inverse_step = "");
  void reindex();
  void validate() const;

  AdmissibleWord start_config(const std::map<int, Word>& sectors = {}) const;
  AdmissibleWord end_config() const;
  AdmissibleWord accept_config() const { return end_config(); }
  AdmissibleWord input_config(const Word& input) const;  // input over A

 private:
  std::unordered_map<std::string, int> by_id_;
};

Rule invert_rule(const Rule& r, const std::string& inverse_step);

bool is_theta_admissible(const Machine& m, const AdmissibleWord& w, const Rule& r,
                         std::string* why = nullptr);
AdmissibleWord apply(const Machine& m, const AdmissibleWord& w, const Rule& r);
inline AdmissibleWord apply(const Machine& m, const AdmissibleWord& w, int ri) {
  return apply(m, w, m.rules[ri]);
}
// Returns false instead of throwing.
bool try_apply(const Machine& m, const AdmissibleWord& w, const Rule& r, AdmissibleWord& out);

using History = std::vector<int>;

struct Computation {
  const Machine* machine = nullptr;
  History history;
  std::vector<AdmissibleWord> words;
  const AdmissibleWord& initial() const { return words.front(); }
  const AdmissibleWord& final() const { return words.back(); }
  int length() const { return static_cast<int>(history.size()); }
};

Computation run(const Machine& m, const AdmissibleWord& w, const History& h);
bool is_reduced_history(const Machine& m, const History& h);
History parse_history(const Machine& m, const std::string& s);
std::string history_str(const Machine& m, const History& h);

std::vector<std::string> step_history(const Machine& m, const History& h);
std::vector<std::string> canonical_step_history(const Machine& m, const History& h);
std::string step_str(const std::vector<std::string>& s);

// Natural projection onto F(A).
Word project_to_A(const Hardware& hw, const AdmissibleWord& w);

// Raw rules in the general U -> V form.  Each part is a pair of words over
// Q u Y whose q-letters form a consecutive run of parts.
struct RawRule {
  std::string id;
  std::string step;
  std::string inverse_step;
  RuleKind kind = RuleKind::Working;
  std::vector<std::pair<Word, Word>> parts;
  std::vector<int> locks;
};

struct RawMachine {
  std::string name;
  HardwarePtr hw;
  std::vector<RawRule> rules;
  std::vector<int> input_sectors;
};

Rule normalize_rule(const Hardware& hw, const RawRule& r);
Machine normalize_rules(const RawMachine& m);
Machine normalize_rules(const Machine& m);

}  // namespace smf
