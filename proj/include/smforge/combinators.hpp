#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smforge/machine.hpp"

namespace smf {

// Transition rule joining the end letters of submachine `from` to the start
// letters of submachine `to`.  Without explicit locks a sector is locked iff
// every rule of `from` or every rule of `to` locks it.
struct TransitionSpec {
  int from = 0;
  int to = 1;
  std::string id;
  std::string step;
  std::string inverse_step;
  std::optional<std::vector<int>> locks;
  RuleKind kind = RuleKind::Transition;
};

// Sectors locked by every positive rule of m (all sectors if m has no rules).
std::vector<bool> common_locks(const Machine& m);

// Rule with every part q -> q for the given per-part letters and no locks.
Rule identity_rule(const Hardware& hw, const std::vector<int>& letters, const std::string& id,
                   const std::string& step, RuleKind kind = RuleKind::Working);
void lock(Rule& r, int sector);

// Copy a rule between hardwares that share symbol names.
Rule remap_rule(const Rule& r, const Hardware& from, const Hardware& to);

Machine lr(const std::vector<std::string>& Y);
Machine rl(const std::vector<std::string>& Y);

Machine concatenate(const std::vector<Machine>& subs, const std::vector<TransitionSpec>& transitions,
                    const std::string& name = "");

// per_copy_lock(coordinate, sector of M) adds a lock in that copy; insertions
// into such a sector are dropped from the copy.
Machine parallel(const Machine& M, int L,
                 const std::function<bool(int, int)>& per_copy_lock = nullptr);

Machine cyclize(const Machine& M, const std::string& part_name = "T", const std::string& letter = "t");

// Fuse rule pairs of two machines that share a hardware shape and act on
// disjoint parts: each part of the fused rule comes from whichever rule
// moves or inserts there, locks are united.
Rule zip_rules(const Hardware& hw, const Rule& a, const Rule& b, const std::string& id);

// Rename state letters, rule ids and step labels; tape letters are kept.
Machine relabel(const Machine& M, const std::function<std::string(const std::string&)>& state,
                const std::string& rule_suffix, const std::string& step_suffix, const std::string& name = "");

}  // namespace smf
