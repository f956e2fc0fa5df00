// Abstract syntax: terms with named binders, substitution, alpha-equivalence
// and typing contexts.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ptt/dims.hpp"

namespace ptt {

enum class Tag {
  Var,
  Univ,
  Pi, Lam, App,
  Sigma, Pair, Fst, Snd,
  PathTy, PLam, PApp,
  VTy, Vin, Vproj,
  BridgeTy, BLam, BApp,
  GelTy, GelIntro, Ungel,
  Extent,
  Hcom, Coe, Com, Fcom,
  Bool, True, False, If,
  Unit, Star,
  Void, VoidElim,
  The,
};

const char* tag_name(Tag t);

struct Loc {
  int line = 0;
  int col = 0;
};

struct Term;
using TermP = std::shared_ptr<const Term>;

// An argument together with the names it binds. The sort of each bound name
// is fixed by the constructor and argument position (see binder_sort).
struct Bound {
  std::vector<std::string> vars;
  TermP body;  // may be null for optional arguments
};

// One face of a tube system: constraint xi and the line y.N.
struct Tube {
  Constraint xi;
  std::string y;
  TermP body;
};

struct Term {
  Tag tag;
  std::string name;  // Var only
  std::vector<Dim> dims;
  std::vector<Bound> args;
  std::vector<Tube> tubes;
  Loc loc;
  // Free names, sorted and unique. Dimension names of either sort are kept
  // apart from term variable names.
  std::vector<std::string> free_terms;
  std::vector<std::string> free_dims;

  const TermP& arg(size_t i) const { return args[i].body; }
  const std::string& bvar(size_t i, size_t j = 0) const { return args[i].vars[j]; }
  bool has_free_term(const std::string& n) const;
  bool has_free_dim(const std::string& n) const;
  bool closed() const { return free_terms.empty() && free_dims.empty(); }
};

Sort binder_sort(Tag t, size_t arg, size_t var);
// Sort of dims[i] for the constructor.
Sort dim_sort(Tag t, size_t i);

// Builds a node and computes its free-name caches.
TermP make(Tag t, std::vector<Dim> dims, std::vector<Bound> args, std::vector<Tube> tubes = {},
           std::string name = {}, Loc loc = {});
TermP with_loc(const TermP& m, Loc loc);

// Convenience constructors.
namespace mk {
TermP var(std::string n);
TermP univ();
TermP boolean();
TermP tt();
TermP ff();
TermP unit();
TermP star();
TermP voidty();
TermP pi(std::string x, TermP a, TermP b);
TermP arrow(TermP a, TermP b);
TermP lam(std::string x, TermP m);
TermP app(TermP f, TermP a);
TermP app(TermP f, std::initializer_list<TermP> as);
TermP sigma(std::string x, TermP a, TermP b);
TermP pair(TermP m, TermP n);
TermP fst(TermP m);
TermP snd(TermP m);
TermP path(std::string x, TermP a, TermP m0, TermP m1);
TermP plam(std::string x, TermP m);
TermP papp(TermP m, Dim r);
TermP bridge(std::string x, TermP a, TermP m0, TermP m1);
TermP blam(std::string x, TermP m);
TermP bapp(TermP m, Dim r);
TermP gelty(Dim r, TermP a, TermP b, std::string x, std::string y, TermP rel);
TermP gel(Dim r, TermP m, TermP n, TermP p);
TermP ungel(std::string x, TermP m);
TermP extent(Dim r, TermP m, std::string a, TermP n, std::string a1, TermP p, std::string qa,
             std::string qa1, std::string qc, TermP q);
TermP hcom(TermP a, Dim r, Dim s, TermP m, std::vector<Tube> tubes = {});
TermP coe(std::string y, TermP a, Dim r, Dim s, TermP m);
TermP com(std::string y, TermP a, Dim r, Dim s, TermP m, std::vector<Tube> tubes = {});
TermP ite(std::string b, TermP motive, TermP m, TermP n1, TermP n2);
TermP void_elim(std::string b, TermP motive, TermP m);
TermP the(TermP a, TermP m);
TermP vty(Dim r, TermP a, TermP b, TermP e);
TermP vin(Dim r, TermP m, TermP n);
TermP vproj(Dim r, TermP m, TermP f);
Tube tube(Constraint xi, std::string y, TermP body);
}  // namespace mk

// Fresh-name supply shared by the whole process. The result keeps the
// readable prefix of base and never collides with a parsed identifier.
std::string fresh_name(const std::string& base);

// Simultaneous capture-avoiding substitution. Each name maps to a term (for
// term variables) or to a dimension (for dimension variables of either sort).
using Image = std::variant<TermP, Dim>;
using Env = std::map<std::string, Image>;

TermP substitute(const TermP& m, const Env& env);
TermP subst1(const TermP& m, const std::string& x, const TermP& n);
TermP dsubst(const TermP& m, const Dim& r, const std::string& x);
TermP bsubst(const TermP& m, const Dim& r, const std::string& x);
TermP subst_dims(const TermP& m, const DimSubst& psi);
Constraint subst_constraint(const Constraint& c, const Env& env);

// Instantiates the binders of args[i] with the given images.
TermP instantiate(const Bound& b, const std::vector<Image>& images);

bool alpha_equal(const TermP& a, const TermP& b);

// Typing contexts: a telescope of hypotheses and bridge markers.
struct CtxEntry {
  enum class Kind { Hyp, Marker };
  Kind kind;
  std::string name;  // hypothesis name
  TermP type;        // hypothesis type, may be null when unknown
  Dim marker;        // bridge marker (variable or constant)

  static CtxEntry hyp(std::string n, TermP t) { return {Kind::Hyp, std::move(n), std::move(t), {}}; }
  static CtxEntry mark(Dim d) { return {Kind::Marker, {}, nullptr, std::move(d)}; }
};

using TypingCtx = std::vector<CtxEntry>;

// Gamma^{\r}: the prefix before the marker r when r is a variable marker,
// otherwise Gamma unchanged.
TypingCtx ctx_apart(const TypingCtx& gamma, const Dim& r);
const CtxEntry* ctx_lookup(const TypingCtx& gamma, const std::string& n);

}  // namespace ptt
