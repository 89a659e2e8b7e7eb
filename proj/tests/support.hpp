#pragma once

#include <cstdlib>
#include <iostream>
#include <random>
#include <string>

#include "smforge/lemmas.hpp"

namespace smf::testing {

// Seed for every randomized check; SMFORGE_SEED overrides it.
inline unsigned long long seed() {
  static unsigned long long s = [] {
    const char* e = std::getenv("SMFORGE_SEED");
    unsigned long long v = e ? std::stoull(e) : 20261018ULL;
    std::cerr << "seed " << v << "\n";
    return v;
  }();
  return s;
}

inline std::mt19937_64 rng(unsigned long long salt = 0) { return std::mt19937_64(seed() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

inline Word random_word(std::mt19937_64& g, int rank, int len) { return smf::random_word(g, rank, len); }

inline Computation random_walk(const Machine& m, const AdmissibleWord& w0, int len, std::mt19937_64& g) {
  return smf::random_walk(m, w0, len, g);
}

}  // namespace smf::testing
