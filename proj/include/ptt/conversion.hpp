// Judgmental equality: weak-head reduction plus type-directed eta.
#pragma once

#include <stdexcept>

#include "ptt/opsem.hpp"

namespace ptt {

struct ConversionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The scope an equation lives in. Constraints have already been applied.
struct ConvCx {
  DimCtx dims;
  TypingCtx gamma;
  const Globals* globals = nullptr;
  size_t fuel = kDefaultFuel;

  ConvCx with_hyp(const std::string& x, TermP type) const;
  ConvCx with_path(const std::string& x) const;
  // Adds the bridge variable and its marker at the end of the context.
  ConvCx with_bridge(const std::string& x) const;
  // Drops x from the dimension scope and every hypothesis after its marker.
  ConvCx apart(const Dim& x) const;
};

// Weak-head normal form with definitions unfolded, endpoint laws for stuck
// path and bridge applications, and the Kan laws. Throws ConversionError when
// fuel runs out.
TermP whnf(const ConvCx& cx, const TermP& m);

// Type of a term whose type is determined by its head (variables and
// eliminations), or null when unknown.
TermP synth_type(const ConvCx& cx, const TermP& m);

// type may be null, in which case only untyped eta and structure are used.
bool equal_term(const ConvCx& cx, const TermP& type, const TermP& m, const TermP& n);
bool equal_type(const ConvCx& cx, const TermP& a, const TermP& b);

// A restricted equation under constraints xi. When type is null, lhs and rhs
// are compared as types.
struct EqProblem {
  DimCtx dims;
  ConstraintSet xi;
  TypingCtx gamma;
  TermP type;
  TermP lhs;
  TermP rhs;
};

// Inconsistent constraints make the equation hold vacuously; otherwise it is
// decided after applying their most general unifier.
bool decide(const EqProblem& p, const Globals* globals, size_t fuel = kDefaultFuel);

// Applies the most general unifier of xi to a context.
TypingCtx subst_ctx(const TypingCtx& gamma, const DimSubst& psi);

}  // namespace ptt
