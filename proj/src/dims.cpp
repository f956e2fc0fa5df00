#include "ptt/dims.hpp"

#include <algorithm>
#include <functional>

namespace ptt {

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Term: return "term";
    case Sort::Path: return "path";
    case Sort::Bridge: return "bridge";
  }
  return "?";
}

std::string Dim::str() const {
  switch (kind) {
    case Kind::Zero: return "0";
    case Kind::One: return "1";
    case Kind::Var: return name;
  }
  return "?";
}

DimCtx DimCtx::with_bridge(const std::string& n) const {
  if (has(n)) throw DimError("dimension " + n + " is already bound");
  DimCtx c = *this;
  c.bridge.insert(n);
  return c;
}

DimCtx DimCtx::with_path(const std::string& n) const {
  if (has(n)) throw DimError("dimension " + n + " is already bound");
  DimCtx c = *this;
  c.path.insert(n);
  return c;
}

bool DimCtx::valid(const Dim& d, Sort s) const {
  if (d.is_const()) return true;
  return s == Sort::Bridge ? has_bridge(d.name) : has_path(d.name);
}

DimSubst DimSubst::identity(const DimCtx& ctx) {
  DimSubst s;
  s.source = ctx;
  s.target = ctx;
  return s;
}

Dim DimSubst::bridge_image(const std::string& n) const {
  auto it = bridge_map.find(n);
  return it == bridge_map.end() ? Dim::var(n) : it->second;
}

Dim DimSubst::path_image(const std::string& n) const {
  auto it = path_map.find(n);
  return it == path_map.end() ? Dim::var(n) : it->second;
}

bool DimSubst::injective() const {
  std::set<std::string> vars = source.bridge;
  for (auto& [k, v] : bridge_map) vars.insert(k);
  std::set<std::string> seen;
  for (auto& v : vars) {
    Dim img = bridge_image(v);
    if (img.is_const()) continue;
    if (!seen.insert(img.name).second) return false;
  }
  return true;
}

Dim apply_subst_dim(const Dim& d, Sort s, const DimSubst& psi) {
  if (d.is_const()) return d;
  const auto& scope = s == Sort::Bridge ? psi.source.bridge : psi.source.path;
  const auto& map = s == Sort::Bridge ? psi.bridge_map : psi.path_map;
  if (!scope.count(d.name) && !map.count(d.name))
    throw DimError(std::string("unknown ") + sort_name(s) + " dimension " + d.name);
  return s == Sort::Bridge ? psi.bridge_image(d.name) : psi.path_image(d.name);
}

DimSubst compose_subst(const DimSubst& first, const DimSubst& second) {
  if (!(first.target.bridge.empty() && first.target.path.empty()) &&
      !(second.source.bridge.empty() && second.source.path.empty())) {
    for (auto& b : first.target.bridge)
      if (!second.source.has_bridge(b)) throw DimError("compose_subst: context mismatch at " + b);
    for (auto& p : first.target.path)
      if (!second.source.has_path(p)) throw DimError("compose_subst: context mismatch at " + p);
  }
  DimSubst out;
  out.source = first.source;
  out.target = second.target;
  std::set<std::string> bvars = first.source.bridge, pvars = first.source.path;
  for (auto& [k, v] : first.bridge_map) bvars.insert(k);
  for (auto& [k, v] : first.path_map) pvars.insert(k);
  for (auto& [k, v] : second.bridge_map) bvars.insert(k);
  for (auto& [k, v] : second.path_map) pvars.insert(k);
  for (auto& b : bvars) {
    Dim mid = first.bridge_image(b);
    Dim img = mid.is_const() ? mid : second.bridge_image(mid.name);
    if (img != Dim::var(b)) out.bridge_map[b] = img;
  }
  for (auto& p : pvars) {
    Dim mid = first.path_image(p);
    Dim img = mid.is_const() ? mid : second.path_image(mid.name);
    if (img != Dim::var(p)) out.path_map[p] = img;
  }
  return out;
}

DimCtx apart_ctx(const DimCtx& ctx, const Dim& r) {
  DimCtx c = ctx;
  if (r.is_var()) c.bridge.erase(r.name);
  return c;
}

DimCtx apart_ctx(const DimCtx& ctx, const std::vector<Dim>& rs) {
  DimCtx c = ctx;
  for (auto& r : rs) c = apart_ctx(c, r);
  return c;
}

Constraint Constraint::bridge(Dim r, bool one) { return {Sort::Bridge, std::move(r), Dim::constant(one)}; }

Constraint Constraint::path(Dim r, Dim s) { return {Sort::Path, std::move(r), std::move(s)}; }

std::string Constraint::str() const { return lhs.str() + "=" + rhs.str(); }

ConstraintSet restrict_constraints(const ConstraintSet& xi, const Dim& r) {
  if (r.is_const()) return xi;
  ConstraintSet out;
  for (auto& c : xi)
    if (!c.mentions(r.name)) out.push_back(c);
  return out;
}

bool constraints_in_scope(const ConstraintSet& xi, const DimCtx& ctx) {
  for (auto& c : xi) {
    Sort s = c.sort == Sort::Bridge ? Sort::Bridge : Sort::Path;
    if (!ctx.valid(c.lhs, s) || !ctx.valid(c.rhs, s)) return false;
    if (c.sort == Sort::Bridge && c.rhs.is_var()) return false;
  }
  return true;
}

namespace {

// Union-find node: either a variable or one of the two constants. Constants
// are always chosen as class representatives.
struct UnionFind {
  std::map<std::string, std::string> parent;
  static constexpr const char* kZero = "\x01" "0";
  static constexpr const char* kOne = "\x01" "1";

  static std::string key(const Dim& d) {
    if (d.kind == Dim::Kind::Zero) return kZero;
    if (d.kind == Dim::Kind::One) return kOne;
    return d.name;
  }
  static bool is_const(const std::string& k) { return k == kZero || k == kOne; }

  std::string find(const std::string& k) {
    auto it = parent.find(k);
    if (it == parent.end()) {
      parent[k] = k;
      return k;
    }
    if (it->second == k) return k;
    std::string root = find(it->second);
    parent[k] = root;
    return root;
  }

  // Returns false when two distinct constants would be merged.
  bool unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return true;
    if (is_const(ra) && is_const(rb)) return false;
    // Constants win; otherwise the smaller name becomes the representative.
    if (is_const(rb) || (!is_const(ra) && rb < ra)) std::swap(ra, rb);
    parent[rb] = ra;
    return true;
  }
};

}  // namespace

ConstraintSolution solve_constraints(const ConstraintSet& xi, const DimCtx& ctx) {
  ConstraintSolution sol;
  sol.subst.source = ctx;
  UnionFind uf;
  std::map<std::string, Dim> bridge_assign;
  for (auto& c : xi) {
    if (c.sort == Sort::Bridge) {
      if (c.rhs.is_var()) throw DimError("bridge constraint must have a constant right-hand side");
      if (c.lhs.is_const()) {
        if (c.lhs != c.rhs) return sol;
        continue;
      }
      sol.subst.source.bridge.insert(c.lhs.name);
      auto [it, fresh] = bridge_assign.emplace(c.lhs.name, c.rhs);
      if (!fresh && it->second != c.rhs) return sol;
    } else {
      for (auto* d : {&c.lhs, &c.rhs})
        if (d->is_var()) sol.subst.source.path.insert(d->name);
      if (!uf.unite(UnionFind::key(c.lhs), UnionFind::key(c.rhs))) return sol;
    }
  }
  sol.consistent = true;
  sol.subst.bridge_map = bridge_assign;
  sol.subst.target = sol.subst.source;
  for (auto& [b, v] : bridge_assign) sol.subst.target.bridge.erase(b);
  for (auto& [k, _] : std::map<std::string, std::string>(uf.parent)) {
    if (UnionFind::is_const(k)) continue;
    std::string root = uf.find(k);
    if (root == k) continue;
    Dim img = root == UnionFind::kZero  ? Dim::zero()
              : root == UnionFind::kOne ? Dim::one()
                                        : Dim::var(root);
    sol.subst.path_map[k] = img;
    sol.subst.target.path.erase(k);
  }
  return sol;
}

}  // namespace ptt
