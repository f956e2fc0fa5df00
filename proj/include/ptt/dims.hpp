// Dimension terms, bridge-path contexts, substitutions and constraint solving.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptt {

// Sort of a bound name. Bridge dimensions are substructural, path dimensions
// are cartesian.
enum class Sort { Term, Path, Bridge };

const char* sort_name(Sort s);

// A dimension term. Whether it is a bridge or path dimension is determined by
// the position it occupies.
struct Dim {
  enum class Kind { Zero, One, Var };
  Kind kind = Kind::Zero;
  std::string name;

  static Dim zero() { return {Kind::Zero, {}}; }
  static Dim one() { return {Kind::One, {}}; }
  static Dim constant(bool b) { return b ? one() : zero(); }
  static Dim var(std::string n) { return {Kind::Var, std::move(n)}; }

  bool is_var() const { return kind == Kind::Var; }
  bool is_const() const { return kind != Kind::Var; }
  bool mentions(const std::string& n) const { return is_var() && name == n; }
  std::string str() const;

  friend bool operator==(const Dim& a, const Dim& b) {
    return a.kind == b.kind && (a.kind != Kind::Var || a.name == b.name);
  }
  friend bool operator!=(const Dim& a, const Dim& b) { return !(a == b); }
  friend bool operator<(const Dim& a, const Dim& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.name < b.name;
  }
};

struct DimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (Phi; Psi): bridge variables and path variables, kept disjoint.
struct DimCtx {
  std::set<std::string> bridge;
  std::set<std::string> path;

  bool has_bridge(const std::string& n) const { return bridge.count(n) != 0; }
  bool has_path(const std::string& n) const { return path.count(n) != 0; }
  bool has(const std::string& n) const { return has_bridge(n) || has_path(n); }
  // Throws DimError if the name is already bound in either set.
  DimCtx with_bridge(const std::string& n) const;
  DimCtx with_path(const std::string& n) const;
  // True when d is a constant or a variable of the given sort in scope.
  bool valid(const Dim& d, Sort s) const;

  friend bool operator==(const DimCtx&, const DimCtx&) = default;
};

// A bridge-path substitution psi : source -> target. Variables of the source
// that are missing from a map are sent to themselves.
struct DimSubst {
  std::map<std::string, Dim> bridge_map;
  std::map<std::string, Dim> path_map;
  DimCtx source;
  DimCtx target;

  static DimSubst identity(const DimCtx& ctx);
  Dim bridge_image(const std::string& n) const;
  Dim path_image(const std::string& n) const;
  // Distinct bridge variables share an image only if it is a constant.
  bool injective() const;
};

Dim apply_subst_dim(const Dim& d, Sort s, const DimSubst& psi);
DimSubst compose_subst(const DimSubst& first, const DimSubst& second);
DimCtx apart_ctx(const DimCtx& ctx, const Dim& r);
DimCtx apart_ctx(const DimCtx& ctx, const std::vector<Dim>& rs);

// xi ::= r = 0 | r = 1 (bridge) | r = r' (path).
struct Constraint {
  Sort sort = Sort::Path;
  Dim lhs;
  Dim rhs;

  static Constraint bridge(Dim r, bool one);
  static Constraint path(Dim r, Dim s);
  bool mentions(const std::string& n) const { return lhs.mentions(n) || rhs.mentions(n); }
  // Syntactically true: both sides are the same dimension.
  bool holds() const { return lhs == rhs; }
  // Syntactically false: two distinct constants.
  bool refuted() const { return lhs.is_const() && rhs.is_const() && lhs != rhs; }
  std::string str() const;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

using ConstraintSet = std::vector<Constraint>;

ConstraintSet restrict_constraints(const ConstraintSet& xi, const Dim& r);

struct ConstraintSolution {
  bool consistent = false;
  DimSubst subst;  // meaningful only when consistent
};

// Most general unifier of a constraint list. The source context is the given
// one extended with every variable mentioned; the target drops variables that
// were identified with a constant or with another variable.
ConstraintSolution solve_constraints(const ConstraintSet& xi, const DimCtx& ctx = {});

// Every mentioned variable is in scope with the right sort.
bool constraints_in_scope(const ConstraintSet& xi, const DimCtx& ctx);

}  // namespace ptt
