// Deterministic weak-head small-step evaluation.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptt/term.hpp"

namespace ptt {

// Top-level definitions. A postulate has a type but no value.
struct Globals {
  struct Entry {
    TermP type;
    TermP value;
  };
  std::map<std::string, Entry> defs;
  std::vector<std::string> order;

  const Entry* find(const std::string& n) const {
    auto it = defs.find(n);
    return it == defs.end() ? nullptr : &it->second;
  }
  void add(const std::string& n, TermP type, TermP value) {
    if (!defs.count(n)) order.push_back(n);
    defs[n] = {std::move(type), std::move(value)};
  }
};

// Given a stuck head Q and a constant dimension, returns the endpoint of Q's
// path or bridge type, if known. Used by conversion, where the types of free
// variables are available.
using BoundaryOracle = std::function<TermP(const TermP& head, bool bridge, bool one)>;

struct StepOptions {
  const Globals* globals = nullptr;
  BoundaryOracle boundary;
  // Also apply the judgmental Kan laws hcom(A,r,r,M,..) = M,
  // hcom(..,[xi=true -> y.N]) = N<s/y> and coe(y.A,r,r,M) = M at every type.
  bool kan_laws = false;
  // For open terms: whether m may be abstracted over the bridge dimension x
  // (extent at a variable, hcom and coe in Gel). Closed evaluation leaves it
  // unset, which allows every abstraction.
  std::function<bool(const TermP& m, const std::string& x)> capture_ok;
};

struct StepResult {
  enum class Kind { Stepped, Value, Stuck };
  Kind kind;
  TermP term;          // Stepped only
  std::string rule;    // Stepped: the rule applied
  std::string reason;  // Stuck: head constructor and reason
};

StepResult step(const TermP& m, const StepOptions& opts = {});
bool is_value(const TermP& m);
// Names of every rule whose premises hold for m (determinism oracle).
std::vector<std::string> applicable_rules(const TermP& m, const StepOptions& opts = {});
// Names of all reduction rules, grouped by the figure or import they belong to.
const std::vector<std::pair<std::string, std::vector<std::string>>>& rule_catalog();

// com(y.A, r, s, M, tubes) unfolded into hcom of coercions.
TermP expand_com(const std::string& y, const TermP& a, const Dim& r, const Dim& s, const TermP& m,
                 const std::vector<Tube>& tubes);

constexpr size_t kDefaultFuel = 1000000;

struct Trace {
  std::vector<TermP> terms;
  std::vector<std::string> rules;  // rules[i] takes terms[i] to terms[i+1]
  size_t steps = 0;                // total steps taken, recorded or not
  bool truncated = false;          // terms stopped being recorded at the limit
};

struct EvalResult {
  enum class Status { Value, Stuck, Diverged };
  Status status;
  TermP term;  // last term reached
  std::string reason;
  Trace trace;
};

// Records at most trace_limit steps of the trace (0 records nothing).
EvalResult eval(const TermP& m, size_t fuel = kDefaultFuel, const StepOptions& opts = {},
                size_t trace_limit = 0);

// Renders "index: term" lines; stops after cap steps with a notice.
std::string render_trace(const Trace& t, size_t cap = 10000);

}  // namespace ptt
