// Random well-scoped terms and an independent statement of the premises of
// every reduction rule.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "ptt/opsem.hpp"

namespace ptt::testing {

// Names free in generated terms.
struct GenScope {
  std::vector<std::string> bridge{"x", "y"};
  std::vector<std::string> path{"i", "j"};
  std::vector<std::string> terms{"m", "n", "p", "q"};
};

// Terms are well-scoped (every dimension occupies a position of its sort)
// but not necessarily well-typed. Redexes are generated on purpose, and
// binder names are drawn from a small pool so shadowing and capture occur.
class TermGen {
 public:
  explicit TermGen(uint64_t seed, int max_depth = 4) : rng_(seed), max_depth_(max_depth) {}
  TermP term() { return term(GenScope{}, 0); }

 private:
  TermP term(const GenScope& s, int depth);
  TermP type(const GenScope& s, int depth);
  TermP leaf(const GenScope& s);
  Dim bdim(const GenScope& s);
  Dim pdim(const GenScope& s);
  std::vector<Tube> tubes(const GenScope& s, int depth);
  std::string name(const char* pool);
  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::mt19937_64 rng_;
  int max_depth_;
};

// Every rule whose premises hold for m, each premise restated from the rule
// rather than read off the stepper.
std::vector<std::string> premises_holding(const TermP& m, const StepOptions& o);

struct DeterminismReport {
  size_t terms = 0;       // generated terms
  size_t checked = 0;     // terms examined, including along traces
  size_t violations = 0;
  std::vector<std::string> examples;  // first few violations
};

// Generates n terms and follows each for up to trace_len steps, checking at
// every term: at most one rule applies, the stepper takes exactly that rule,
// values never step and free dimensions never grow.
DeterminismReport check_determinism(uint64_t seed, size_t n, size_t trace_len = 20);

}  // namespace ptt::testing
