// Closed boolean terms built from Kan operations, extent, Gel and if over
// corpus definitions, each paired with its value computed by a separate
// denotational reading of the construction.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "ptt/checker.hpp"

namespace ptt::testing {

struct BoolCase {
  std::string src;
  bool value = false;
};

// Deterministic in seed; the result has no duplicates.
std::vector<BoolCase> bool_cases(uint64_t seed, size_t n, int max_depth = 3);

// The prelude, poly-id, gel-link and function-bridge definitions, loaded
// from corpus_dir. Throws std::runtime_error if any of them fails to check.
Globals canonicity_globals(const std::string& corpus_dir);

struct CanonicityReport {
  size_t cases = 0;
  size_t accepted = 0;
  size_t rejected = 0;  // not accepted by the checker
  size_t canonical = 0;  // evaluated to true or false
  size_t stuck = 0;
  size_t diverged = 0;
  size_t wrong_value = 0;  // canonical but disagreeing with the denotation
  std::vector<std::string> examples;
};

CanonicityReport run_canonicity(const Globals& g, const std::vector<BoolCase>& cases, size_t fuel = kDefaultFuel);

}  // namespace ptt::testing
