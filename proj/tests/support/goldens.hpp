// One-step reduction goldens, shared by the unit tests and the acceptance run.
#pragma once

#include <string>
#include <vector>

#include "ptt/opsem.hpp"
#include "ptt/parser.hpp"

namespace ptt::testing {

struct StepGolden {
  std::string rule;      // expected rule name
  std::string input;     // surface term
  std::string expected;  // surface term, compared up to alpha
  bool kan_laws = false;
  bool boundary = false;  // install an oracle answering e0 / e1 for any head
};

// Dimension names free in the golden terms: x, y bridge; i, j path.
const DimScope& golden_scope();
// Globals used by the delta golden.
const Globals& golden_globals();
const std::vector<StepGolden>& step_goldens();

struct GoldenOutcome {
  bool ok = false;
  std::string detail;
};

GoldenOutcome run_golden(const StepGolden& g);

}  // namespace ptt::testing
