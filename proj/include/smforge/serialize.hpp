#pragma once

#include <string>

#include "smforge/machine.hpp"

namespace smf {

// Line-oriented machine format.  Symbols are listed in id order so that a
// parsed machine has the same letter ids as the one written.
std::string write_machine(const Machine& m);
Machine read_machine(const std::string& text);
Machine load_machine(const std::string& path);

// step_index TAB rule_id TAB word, with rule "-" on the initial line.
std::string write_trace(const Computation& c);
// Re-runs the history and checks every printed word; throws Parse on mismatch.
Computation read_trace(const Machine& m, const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace smf
