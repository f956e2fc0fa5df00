#include "ptt/checker.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ptt/print.hpp"

namespace ptt {

CheckError::CheckError(std::string r, int p, Loc l, std::string msg)
    : std::runtime_error(r + " premise " + std::to_string(p) + ": " + msg),
      rule(std::move(r)),
      premise(p),
      loc(l),
      message(std::move(msg)) {}

TermP equiv_type(const TermP& a, const TermP& b) {
  std::string f = fresh_name("f"), y = fresh_name("b"), x = fresh_name("a"), c = fresh_name("c"),
              c1 = fresh_name("c'");
  TermP fiber = mk::sigma(x, a, mk::path(fresh_name("_"), b, mk::app(mk::var(f), mk::var(x)), mk::var(y)));
  TermP contr = mk::sigma(c, fiber, mk::pi(c1, fiber, mk::path(fresh_name("_"), fiber, mk::var(c1), mk::var(c))));
  return mk::sigma(f, mk::arrow(a, b), mk::pi(y, b, contr));
}

namespace {

thread_local Loc current_loc;

// Tracks the innermost located term for error reporting.
struct At {
  Loc saved;
  explicit At(const TermP& m) : saved(current_loc) {
    if (m && m->loc.line > 0) current_loc = m->loc;
  }
  ~At() { current_loc = saved; }
};

[[noreturn]] void fail(const std::string& rule, int premise, const std::string& msg) {
  throw CheckError(rule, premise, current_loc, msg);
}

TermP at(const TermP& body, const std::string& x, const Dim& d) { return substitute(body, {{x, d}}); }

bool in_scope(const ConvCx& cx, const std::string& n) {
  if (cx.dims.has(n) || ctx_lookup(cx.gamma, n)) return true;
  return cx.globals && cx.globals->find(n);
}

std::string fresh_for(const ConvCx& cx, const std::string& base) {
  if (base.empty() || base[0] == '_' || base.find('#') != std::string::npos || in_scope(cx, base))
    return fresh_name(base.empty() ? "v" : base);
  return base;
}

TermP whnf_c(const ConvCx& cx, const TermP& m) {
  try {
    return whnf(cx, m);
  } catch (const ConversionError& e) {
    fail("conversion", 0, e.what());
  }
}

bool conv_type(const ConvCx& cx, const TermP& a, const TermP& b) {
  try {
    return equal_type(cx, a, b);
  } catch (const ConversionError& e) {
    fail("conversion", 0, e.what());
  }
}

bool conv_term(const ConvCx& cx, const TermP& ty, const TermP& m, const TermP& n) {
  try {
    return equal_term(cx, ty, m, n);
  } catch (const ConversionError& e) {
    fail("conversion", 0, e.what());
  }
}

void need_eq(const ConvCx& cx, const TermP& ty, const TermP& m, const TermP& n, const std::string& rule,
             int premise) {
  if (!conv_term(cx, ty, m, n))
    fail(rule, premise, show(m) + " is not equal to " + show(n) + " at " + show(ty));
}

void need_type_eq(const ConvCx& cx, const TermP& a, const TermP& b, const std::string& rule, int premise) {
  if (!conv_type(cx, a, b)) fail(rule, premise, "type " + show(a) + " is not equal to " + show(b));
}

void need_dim(const ConvCx& cx, const Dim& r, Sort s, const std::string& rule, int premise) {
  if (!cx.dims.valid(r, s))
    fail(rule, premise, r.str() + " is not a " + sort_name(s) + " dimension in scope");
}

// Free names of a bound argument, not counting its own binders.
std::vector<std::string> free_of(const Bound& b, bool dims) {
  std::vector<std::string> out;
  if (!b.body) return out;
  for (auto& n : dims ? b.body->free_dims : b.body->free_terms)
    if (std::find(b.vars.begin(), b.vars.end(), n) == b.vars.end()) out.push_back(n);
  return out;
}

// Premises stated in the context apart from r: hypotheses introduced after r
// and r itself must not occur.
void need_apart(const ConvCx& cx, const ConvCx& apart, const Dim& r, const Bound& b, const std::string& rule,
                int premise) {
  for (auto& v : free_of(b, false))
    if (ctx_lookup(cx.gamma, v) && !ctx_lookup(apart.gamma, v))
      fail(rule, premise, "hypothesis " + v + " is introduced after " + r.str() + " and cannot be used here");
  if (r.is_var())
    for (auto& v : free_of(b, true))
      if (v == r.name) fail(rule, premise, "dimension " + r.str() + " occurs where it must be apart");
}

void need_apart(const ConvCx& cx, const ConvCx& apart, const Dim& r, const TermP& m, const std::string& rule,
                int premise) {
  need_apart(cx, apart, r, Bound{{}, m}, rule, premise);
}

// Applies the most general unifier of extra constraints to a judgment.
struct Restricted {
  ConvCx cx;
  DimSubst psi;
  TermP operator()(const TermP& m) const { return m ? subst_dims(m, psi) : m; }
};

std::optional<Restricted> restrict(const ConvCx& cx, const ConstraintSet& xi) {
  ConstraintSolution sol = solve_constraints(xi, cx.dims);
  if (!sol.consistent) return std::nullopt;
  ConvCx out = cx;
  out.dims = sol.subst.target;
  out.gamma = subst_ctx(cx.gamma, sol.subst);
  return Restricted{out, sol.subst};
}

bool is_type_former(Tag t) {
  switch (t) {
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::PathTy:
    case Tag::BridgeTy:
    case Tag::GelTy:
    case Tag::VTy:
    case Tag::Bool:
    case Tag::Unit:
    case Tag::Void: return true;
    default: return false;
  }
}

// Replaces occurrences of n in e by the variable d where no binder captures
// a free name of n.
TermP abstract_occurrences(const TermP& e, const TermP& n, const std::string& d) {
  if (alpha_equal(e, n)) return mk::var(d);
  std::set<std::string> fv(n->free_terms.begin(), n->free_terms.end());
  fv.insert(n->free_dims.begin(), n->free_dims.end());
  bool changed = false;
  std::vector<Bound> args;
  for (auto& b : e->args) {
    bool captures = false;
    for (auto& v : b.vars) captures = captures || fv.count(v);
    TermP body = (!b.body || captures) ? b.body : abstract_occurrences(b.body, n, d);
    changed = changed || body != b.body;
    args.push_back({b.vars, body});
  }
  std::vector<Tube> tubes;
  for (auto& t : e->tubes) {
    TermP body = fv.count(t.y) ? t.body : abstract_occurrences(t.body, n, d);
    changed = changed || body != t.body;
    tubes.push_back({t.xi, t.y, body});
  }
  if (!changed) return e;
  return make(e->tag, e->dims, std::move(args), std::move(tubes), e->name, e->loc);
}

TermP infer(const ConvCx& cx, const TermP& m);
void check(const ConvCx& cx, const TermP& m, const TermP& a);
void type(const ConvCx& cx, const TermP& a);

// Tubes of hcom and com: each N_i under xi_i in Psi,y; all pairs agree;
// each agrees with the cap at r. line(y) gives the type of the tubes at y.
void check_tubes(const ConvCx& cx, const TermP& m, const Dim& r, const TermP& cap,
                 const std::function<TermP(const Dim&)>& line, const std::string& rule, int first_premise) {
  ConstraintSet all;
  for (auto& t : m->tubes) all.push_back(t.xi);
  if (!constraints_in_scope(all, cx.dims)) fail(rule, first_premise, "tube constraint mentions an unknown dimension");
  for (auto& t : m->tubes) {
    auto rc = restrict(cx, {t.xi});
    if (!rc) continue;
    std::string y = fresh_for(rc->cx, t.y);
    ConvCx inner = rc->cx.with_path(y);
    check(inner, (*rc)(at(t.body, t.y, Dim::var(y))), (*rc)(line(Dim::var(y))));
  }
  for (auto& ti : m->tubes)
    for (auto& tj : m->tubes) {
      auto rc = restrict(cx, {ti.xi, tj.xi});
      if (!rc) continue;
      std::string y = fresh_name("y");
      ConvCx inner = rc->cx.with_path(y);
      need_eq(inner, (*rc)(line(Dim::var(y))), (*rc)(at(ti.body, ti.y, Dim::var(y))),
              (*rc)(at(tj.body, tj.y, Dim::var(y))), rule, first_premise + 1);
    }
  for (auto& t : m->tubes) {
    auto rc = restrict(cx, {t.xi});
    if (!rc) continue;
    need_eq(rc->cx, (*rc)(line(r)), (*rc)(at(t.body, t.y, r)), (*rc)(cap), rule, first_premise + 2);
  }
}

// The six premises of extent with an explicit motive x.A and x.d.B.
TermP check_extent(const ConvCx& cx, const TermP& m, const Bound& mot_a, const Bound& mot_b) {
  const Dim& r = m->dims[0];
  need_dim(cx, r, Sort::Bridge, "extent", 0);
  ConvCx apart = cx.apart(r);
  for (size_t i = 1; i <= 3; ++i) need_apart(cx, apart, r, m->args[i], "extent", int(i) + 3);
  need_apart(cx, apart, r, mot_a, "extent", 1);
  need_apart(cx, apart, r, mot_b, "extent", 2);
  std::string x = fresh_for(cx, mot_a.vars[0]);
  TermP a = instantiate(mot_a, {Dim::var(x)});
  type(apart.with_bridge(x), a);
  std::string d = fresh_for(cx, mot_b.vars[1]);
  TermP b = instantiate(mot_b, {Dim::var(x), mk::var(d)});
  {
    At here(b);
    type(apart.with_bridge(x).with_hyp(d, a), b);
  }
  auto a_at = [&](const Dim& e) { return at(a, x, e); };
  auto b_at = [&](const Dim& e, const TermP& v) { return subst1(at(b, x, e), d, v); };
  check(cx, m->arg(0), a_at(r));
  std::string va = fresh_for(apart, m->bvar(1));
  TermP n = instantiate(m->args[1], {mk::var(va)});
  check(apart.with_hyp(va, a_at(Dim::zero())), n, b_at(Dim::zero(), mk::var(va)));
  std::string vb = fresh_for(apart, m->bvar(2));
  TermP p = instantiate(m->args[2], {mk::var(vb)});
  check(apart.with_hyp(vb, a_at(Dim::one())), p, b_at(Dim::one(), mk::var(vb)));
  std::string qa = fresh_for(apart, m->bvar(3, 0));
  ConvCx c1 = apart.with_hyp(qa, a_at(Dim::zero()));
  std::string qa1 = fresh_for(c1, m->bvar(3, 1));
  ConvCx c2 = c1.with_hyp(qa1, a_at(Dim::one()));
  std::string qc = fresh_for(c2, m->bvar(3, 2));
  ConvCx c3 = c2.with_hyp(qc, mk::bridge(x, a, mk::var(qa), mk::var(qa1)));
  TermP q = instantiate(m->args[3], {mk::var(qa), mk::var(qa1), mk::var(qc)});
  TermP n_at = instantiate(m->args[1], {mk::var(qa)});
  TermP p_at = instantiate(m->args[2], {mk::var(qa1)});
  TermP q_line = subst1(b, d, mk::bapp(mk::var(qc), Dim::var(x)));
  check(c3, q, mk::bridge(x, q_line, n_at, p_at));
  return b_at(r, m->arg(0));
}

TermP reduct(const ConvCx& cx, const TermP& m) {
  StepOptions o;
  o.globals = cx.globals;
  StepResult s = step(m, o);
  if (s.kind != StepResult::Kind::Stepped) fail(tag_name(m->tag), 0, "expected a reducible form: " + show(m));
  return with_loc(s.term, m->loc);
}

void type(const ConvCx& cx, const TermP& a) {
  At here(a);
  switch (a->tag) {
    case Tag::Univ:
    case Tag::Bool:
    case Tag::Unit:
    case Tag::Void: return;
    case Tag::Pi:
    case Tag::Sigma: {
      type(cx, a->arg(0));
      std::string v = fresh_for(cx, a->bvar(1));
      type(cx.with_hyp(v, a->arg(0)), instantiate(a->args[1], {mk::var(v)}));
      return;
    }
    case Tag::PathTy:
    case Tag::BridgeTy: {
      bool bridge = a->tag == Tag::BridgeTy;
      std::string rule = bridge ? "Bridge-F" : "Path-F";
      std::string x = fresh_for(cx, a->bvar(0));
      TermP line = instantiate(a->args[0], {Dim::var(x)});
      type(bridge ? cx.with_bridge(x) : cx.with_path(x), line);
      check(cx, a->arg(1), at(line, x, Dim::zero()));
      check(cx, a->arg(2), at(line, x, Dim::one()));
      return;
    }
    case Tag::GelTy: {
      const Dim& r = a->dims[0];
      need_dim(cx, r, Sort::Bridge, "Gel-F", 0);
      if (r.kind == Dim::Kind::Zero) {
        type(cx, a->arg(0));
        return;
      }
      if (r.kind == Dim::Kind::One) {
        type(cx, a->arg(1));
        return;
      }
      ConvCx apart = cx.apart(r);
      for (int i = 0; i < 3; ++i) need_apart(cx, apart, r, a->args[i], "Gel-F", i + 1);
      type(apart, a->arg(0));
      type(apart, a->arg(1));
      std::string u = fresh_for(apart, a->bvar(2, 0));
      ConvCx c1 = apart.with_hyp(u, a->arg(0));
      std::string w = fresh_for(c1, a->bvar(2, 1));
      type(c1.with_hyp(w, a->arg(1)), instantiate(a->args[2], {mk::var(u), mk::var(w)}));
      return;
    }
    case Tag::VTy: {
      const Dim& r = a->dims[0];
      need_dim(cx, r, Sort::Path, "V-F", 0);
      if (r.is_const()) {
        type(cx, reduct(cx, a));
        return;
      }
      type(cx, a->arg(1));
      if (auto rc = restrict(cx, {Constraint::path(r, Dim::zero())})) {
        type(rc->cx, (*rc)(a->arg(0)));
        check(rc->cx, (*rc)(a->arg(2)), equiv_type((*rc)(a->arg(0)), (*rc)(a->arg(1))));
      }
      return;
    }
    default: {
      TermP t = whnf_c(cx, infer(cx, a));
      if (t->tag != Tag::Univ) fail("type", 0, show(a) + " is not a type: it has type " + show(t));
      return;
    }
  }
}

TermP infer(const ConvCx& cx, const TermP& m) {
  At here(m);
  switch (m->tag) {
    case Tag::Var: {
      if (auto* e = ctx_lookup(cx.gamma, m->name)) return e->type;
      if (cx.globals)
        if (auto* g = cx.globals->find(m->name)) return g->type;
      fail("scope", 0, "unbound variable " + m->name);
    }
    case Tag::Univ: fail("U", 0, "the universe is not an element of itself");
    case Tag::True:
    case Tag::False: return mk::boolean();
    case Tag::Star: return mk::unit();
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::PathTy:
    case Tag::BridgeTy:
    case Tag::GelTy:
    case Tag::VTy:
    case Tag::Bool:
    case Tag::Unit:
    case Tag::Void: type(cx, m); return mk::univ();
    case Tag::The: {
      type(cx, m->arg(0));
      check(cx, m->arg(1), m->arg(0));
      return m->arg(0);
    }
    case Tag::App: {
      TermP t = whnf_c(cx, infer(cx, m->arg(0)));
      if (t->tag != Tag::Pi) fail("Pi-E", 1, show(m->arg(0)) + " is not a function: it has type " + show(t));
      check(cx, m->arg(1), t->arg(0));
      return instantiate(t->args[1], {m->arg(1)});
    }
    case Tag::Fst:
    case Tag::Snd: {
      TermP t = whnf_c(cx, infer(cx, m->arg(0)));
      if (t->tag != Tag::Sigma) fail("Sigma-E", 1, show(m->arg(0)) + " is not a pair: it has type " + show(t));
      if (m->tag == Tag::Fst) return t->arg(0);
      return instantiate(t->args[1], {mk::fst(m->arg(0))});
    }
    case Tag::Pair: {
      TermP a = infer(cx, m->arg(0));
      TermP b = infer(cx, m->arg(1));
      return mk::sigma(fresh_name("_"), a, b);
    }
    case Tag::PLam:
    case Tag::BLam: {
      bool bridge = m->tag == Tag::BLam;
      std::string x = fresh_for(cx, m->bvar(0));
      TermP body = instantiate(m->args[0], {Dim::var(x)});
      TermP a = infer(bridge ? cx.with_bridge(x) : cx.with_path(x), body);
      TermP e0 = at(body, x, Dim::zero()), e1 = at(body, x, Dim::one());
      return bridge ? mk::bridge(x, a, e0, e1) : mk::path(x, a, e0, e1);
    }
    case Tag::PApp: {
      need_dim(cx, m->dims[0], Sort::Path, "Path-E", 0);
      TermP t = whnf_c(cx, infer(cx, m->arg(0)));
      if (t->tag != Tag::PathTy) fail("Path-E", 1, show(m->arg(0)) + " is not a path: it has type " + show(t));
      return instantiate(t->args[0], {m->dims[0]});
    }
    case Tag::BApp: {
      const Dim& r = m->dims[0];
      need_dim(cx, r, Sort::Bridge, "Bridge-E", 0);
      ConvCx apart = cx.apart(r);
      need_apart(cx, apart, r, m->arg(0), "Bridge-E", 1);
      TermP t = whnf_c(apart, infer(apart, m->arg(0)));
      if (t->tag != Tag::BridgeTy)
        fail("Bridge-E", 1, show(m->arg(0)) + " is not a bridge: it has type " + show(t));
      return instantiate(t->args[0], {r});
    }
    case Tag::GelIntro: {
      if (m->dims[0].is_var()) fail("Gel-I", 0, "cannot infer the relation of a gel term; annotate it with 'the'");
      need_dim(cx, m->dims[0], Sort::Bridge, "Gel-I", 0);
      return infer(cx, reduct(cx, m));
    }
    case Tag::Ungel: {
      std::string x = fresh_for(cx, m->bvar(0));
      ConvCx inner = cx.with_bridge(x);
      TermP q = instantiate(m->args[0], {Dim::var(x)});
      TermP t = whnf_c(inner, infer(inner, q));
      if (t->tag != Tag::GelTy || !t->dims[0].mentions(x))
        fail("Gel-E", 3, "body of ungel must have a Gel type at its bound dimension, got " + show(t));
      for (int i = 0; i < 3; ++i)
        for (auto& v : free_of(t->args[i], true))
          if (v == x) fail("Gel-E", i < 2 ? 1 : 2, "Gel type components must not depend on the bound dimension");
      return instantiate(t->args[2], {at(q, x, Dim::zero()), at(q, x, Dim::one())});
    }
    case Tag::Extent: {
      const Dim& r = m->dims[0];
      need_dim(cx, r, Sort::Bridge, "extent", 0);
      if (m->args.size() > 5 && m->arg(4) && m->arg(5)) return check_extent(cx, m, m->args[4], m->args[5]);
      if (r.is_const()) return infer(cx, reduct(cx, m));
      fail("extent", 2, "cannot infer the motive of extent; add [x A] [x d B] or use it in checking position");
    }
    case Tag::Hcom: {
      const Dim &r = m->dims[0], &s = m->dims[1];
      need_dim(cx, r, Sort::Path, "hcom", 0);
      need_dim(cx, s, Sort::Path, "hcom", 0);
      type(cx, m->arg(0));
      check(cx, m->arg(1), m->arg(0));
      check_tubes(cx, m, r, m->arg(1), [&](const Dim&) { return m->arg(0); }, "hcom", 3);
      return m->arg(0);
    }
    case Tag::Coe:
    case Tag::Com: {
      const std::string rule = m->tag == Tag::Coe ? "coe" : "com";
      const Dim &r = m->dims[0], &s = m->dims[1];
      need_dim(cx, r, Sort::Path, rule, 0);
      need_dim(cx, s, Sort::Path, rule, 0);
      std::string y = fresh_for(cx, m->bvar(0));
      TermP line = instantiate(m->args[0], {Dim::var(y)});
      type(cx.with_path(y), line);
      check(cx, m->arg(1), at(line, y, r));
      if (m->tag == Tag::Com)
        check_tubes(cx, m, r, m->arg(1), [&](const Dim& d) { return at(line, y, d); }, rule, 3);
      return at(line, y, s);
    }
    case Tag::Fcom: fail("fcom", 0, "unsupported-fcom: fcom is reserved for the universe and cannot be checked");
    case Tag::If: {
      if (!m->arg(0)) {
        check(cx, m->arg(1), mk::boolean());
        TermP t = infer(cx, m->arg(2));
        check(cx, m->arg(3), t);
        return t;
      }
      std::string b = fresh_for(cx, m->bvar(0));
      type(cx.with_hyp(b, mk::boolean()), instantiate(m->args[0], {mk::var(b)}));
      check(cx, m->arg(1), mk::boolean());
      check(cx, m->arg(2), instantiate(m->args[0], {mk::tt()}));
      check(cx, m->arg(3), instantiate(m->args[0], {mk::ff()}));
      return instantiate(m->args[0], {m->arg(1)});
    }
    case Tag::VoidElim: {
      if (!m->arg(0)) fail("void-elim", 0, "cannot infer the motive of void-elim; use it in checking position");
      std::string b = fresh_for(cx, m->bvar(0));
      type(cx.with_hyp(b, mk::voidty()), instantiate(m->args[0], {mk::var(b)}));
      check(cx, m->arg(1), mk::voidty());
      return instantiate(m->args[0], {m->arg(1)});
    }
    case Tag::Vin: {
      need_dim(cx, m->dims[0], Sort::Path, "V-I", 0);
      if (m->dims[0].is_const()) return infer(cx, reduct(cx, m));
      fail("V-I", 0, "cannot infer the type of vin; annotate it with 'the'");
    }
    case Tag::Vproj: {
      const Dim& r = m->dims[0];
      need_dim(cx, r, Sort::Path, "V-E", 0);
      if (r.is_const()) return infer(cx, reduct(cx, m));
      TermP t = whnf_c(cx, infer(cx, m->arg(0)));
      if (t->tag != Tag::VTy || t->dims[0] != r) fail("V-E", 1, "expected a V type at " + r.str() + ", got " + show(t));
      if (auto rc = restrict(cx, {Constraint::path(r, Dim::zero())}))
        check(rc->cx, (*rc)(m->arg(1)), mk::arrow((*rc)(t->arg(0)), (*rc)(t->arg(1))));
      return t->arg(1);
    }
    case Tag::Lam: fail("Pi-I", 0, "cannot infer the type of a lambda; annotate it with 'the'");
    default: fail(tag_name(m->tag), 0, "cannot infer the type of " + show(m));
  }
}

void check(const ConvCx& cx, const TermP& m, const TermP& expected) {
  At here(m);
  auto want = [&] { return whnf_c(cx, expected); };
  switch (m->tag) {
    case Tag::Lam: {
      TermP e = want();
      if (e->tag != Tag::Pi) fail("Pi-I", 1, "a lambda cannot have type " + show(e));
      std::string v = fresh_for(cx, m->bvar(0));
      check(cx.with_hyp(v, e->arg(0)), instantiate(m->args[0], {mk::var(v)}), instantiate(e->args[1], {mk::var(v)}));
      return;
    }
    case Tag::Pair: {
      TermP e = want();
      if (e->tag != Tag::Sigma) fail("Sigma-I", 1, "a pair cannot have type " + show(e));
      check(cx, m->arg(0), e->arg(0));
      check(cx, m->arg(1), instantiate(e->args[1], {m->arg(0)}));
      return;
    }
    case Tag::PLam:
    case Tag::BLam: {
      bool bridge = m->tag == Tag::BLam;
      std::string rule = bridge ? "Bridge-I" : "Path-I";
      TermP e = want();
      if (e->tag != (bridge ? Tag::BridgeTy : Tag::PathTy)) fail(rule, 1, "cannot have type " + show(e));
      std::string x = fresh_for(cx, m->bvar(0));
      TermP body = instantiate(m->args[0], {Dim::var(x)});
      check(bridge ? cx.with_bridge(x) : cx.with_path(x), body, instantiate(e->args[0], {Dim::var(x)}));
      need_eq(cx, instantiate(e->args[0], {Dim::zero()}), at(body, x, Dim::zero()), e->arg(1), rule, 2);
      need_eq(cx, instantiate(e->args[0], {Dim::one()}), at(body, x, Dim::one()), e->arg(2), rule, 3);
      return;
    }
    case Tag::GelIntro: {
      const Dim& r = m->dims[0];
      need_dim(cx, r, Sort::Bridge, "Gel-I", 0);
      if (r.kind == Dim::Kind::Zero) {
        At h(m->arg(0));
        check(cx, m->arg(0), expected);
        return;
      }
      if (r.kind == Dim::Kind::One) {
        check(cx, m->arg(1), expected);
        return;
      }
      TermP e = want();
      if (e->tag != Tag::GelTy || e->dims[0] != r)
        fail("Gel-I", 0, "gel at " + r.str() + " cannot have type " + show(e));
      ConvCx apart = cx.apart(r);
      for (int i = 0; i < 3; ++i) need_apart(cx, apart, r, m->args[i], "Gel-I", i + 1);
      check(apart, m->arg(0), e->arg(0));
      check(apart, m->arg(1), e->arg(1));
      check(apart, m->arg(2), instantiate(e->args[2], {m->arg(0), m->arg(1)}));
      return;
    }
    case Tag::Vin: {
      const Dim& r = m->dims[0];
      need_dim(cx, r, Sort::Path, "V-I", 0);
      if (r.is_const()) {
        check(cx, reduct(cx, m), expected);
        return;
      }
      TermP e = want();
      if (e->tag != Tag::VTy || e->dims[0] != r) fail("V-I", 0, "vin at " + r.str() + " cannot have type " + show(e));
      check(cx, m->arg(1), e->arg(1));
      if (auto rc = restrict(cx, {Constraint::path(r, Dim::zero())})) {
        check(rc->cx, (*rc)(m->arg(0)), (*rc)(e->arg(0)));
        need_eq(rc->cx, (*rc)(e->arg(1)), mk::app(mk::fst((*rc)(e->arg(2))), (*rc)(m->arg(0))), (*rc)(m->arg(1)),
                "V-I", 3);
      }
      return;
    }
    case Tag::Extent: {
      const Dim& r = m->dims[0];
      need_dim(cx, r, Sort::Bridge, "extent", 0);
      if (m->args.size() > 5 && m->arg(4) && m->arg(5)) break;
      if (r.is_const()) {
        check(cx, reduct(cx, m), expected);
        return;
      }
      // Motive reconstruction: abstract r out of the type of the principal
      // argument, and the principal argument out of the expected type.
      TermP ta = infer(cx, m->arg(0));
      std::string x = fresh_name("x"), d = fresh_name("d");
      Bound mot_a{{x}, at(ta, r.name, Dim::var(x))};
      Bound mot_b{{x, d}, at(abstract_occurrences(expected, m->arg(0), d), r.name, Dim::var(x))};
      TermP result = check_extent(cx, m, mot_a, mot_b);
      need_type_eq(cx, result, expected, "extent", 0);
      return;
    }
    case Tag::If: {
      if (m->arg(0)) break;
      check(cx, m->arg(1), mk::boolean());
      check(cx, m->arg(2), expected);
      check(cx, m->arg(3), expected);
      return;
    }
    case Tag::VoidElim: {
      if (m->arg(0)) break;
      check(cx, m->arg(1), mk::voidty());
      return;
    }
    default:
      if (is_type_former(m->tag)) {
        TermP e = want();
        if (e->tag == Tag::Univ) {
          type(cx, m);
          return;
        }
      }
      break;
  }
  TermP got = infer(cx, m);
  At here2(m);
  if (!conv_type(cx, got, expected))
    fail("conv", 1, show(m) + " has type " + show(got) + " but is expected to have type " + show(expected));
}

}  // namespace

void check_type(const ConvCx& cx, const TermP& a) { type(cx, a); }
void check_elem(const ConvCx& cx, const TermP& m, const TermP& a) { check(cx, m, a); }
TermP infer_type(const ConvCx& cx, const TermP& m) { return infer(cx, m); }

void check_type_eq(const ConvCx& cx, const TermP& a, const TermP& b) {
  type(cx, a);
  type(cx, b);
  At here(a);
  need_type_eq(cx, a, b, "conversion", 3);
}

void check_elem_eq(const ConvCx& cx, const TermP& m, const TermP& n, const TermP& a) {
  type(cx, a);
  check(cx, m, a);
  check(cx, n, a);
  At here(m);
  need_eq(cx, a, m, n, "conversion", 4);
}

// ---------------------------------------------------------------- files

DeclReport Elaborator::check_decl(const Decl& d) {
  DeclReport r;
  r.name = d.name;
  r.loc = d.loc;
  current_loc = d.loc;
  try {
    run(d);
    r.ok = true;
  } catch (const CheckError& e) {
    r.rule = e.rule;
    r.premise = e.premise;
    r.loc = e.loc.line ? e.loc : d.loc;
    r.message = e.message;
  } catch (const DimError& e) {
    r.rule = "scope";
    r.message = e.what();
  }
  return r;
}

void Elaborator::run(const Decl& d) {
  ConvCx cx;
  cx.globals = &globals_;
  cx.fuel = fuel_;
  switch (d.kind) {
    case Decl::Kind::Import: fail("import", 0, "imports are resolved when a file is loaded");
    case Decl::Kind::Def:
    case Decl::Kind::Postulate: {
      if (globals_.find(d.name)) fail("def", 0, "duplicate definition of " + d.name);
      type(cx, d.type);
      if (d.kind == Decl::Kind::Def) check(cx, d.lhs, d.type);
      globals_.add(d.name, d.type, d.kind == Decl::Kind::Def ? d.lhs : nullptr);
      return;
    }
    case Decl::Kind::Eq:
    case Decl::Kind::Neq: {
      bool as_types = d.type->tag == Tag::Univ;
      const char* rule = d.kind == Decl::Kind::Eq ? "eq" : "neq";
      type(cx, d.type);
      if (as_types) {
        type(cx, d.lhs);
        type(cx, d.rhs);
      } else {
        check(cx, d.lhs, d.type);
        check(cx, d.rhs, d.type);
      }
      current_loc = d.loc;
      bool same = as_types ? conv_type(cx, d.lhs, d.rhs) : conv_term(cx, d.type, d.lhs, d.rhs);
      if (d.kind == Decl::Kind::Eq && !same) fail(rule, 4, show(d.lhs) + " is not equal to " + show(d.rhs));
      if (d.kind == Decl::Kind::Neq && same) fail(rule, 4, show(d.lhs) + " is equal to " + show(d.rhs));
      return;
    }
    case Decl::Kind::Normalize: {
      TermP t = infer(cx, d.lhs);
      current_loc = d.loc;
      StepOptions o;
      o.globals = &globals_;
      EvalResult res = eval(d.lhs, fuel_, o);
      if (res.status == EvalResult::Status::Stuck) fail("normalize", 1, "evaluation is stuck: " + res.reason);
      if (res.status == EvalResult::Status::Diverged) fail("normalize", 1, res.reason);
      if (alpha_equal(res.term, d.rhs)) return;
      check(cx, d.rhs, t);
      current_loc = d.loc;
      if (!conv_term(cx, t, res.term, d.rhs))
        fail("normalize", 2, "value " + show(res.term) + " differs from " + show(d.rhs));
      return;
    }
    case Decl::Kind::Judge:
    case Decl::Kind::Reject: {
      if (d.kind == Decl::Kind::Judge) {
        judge(d);
        return;
      }
      try {
        judge(d);
      } catch (const CheckError& e) {
        if (!d.expect_rule.empty() && e.rule != d.expect_rule)
          fail("reject", 0, "rejected by " + e.rule + " instead of " + d.expect_rule + ": " + e.message);
        return;
      } catch (const DimError& e) {
        if (!d.expect_rule.empty() && d.expect_rule != "scope")
          fail("reject", 0, std::string("rejected by scope instead of ") + d.expect_rule + ": " + e.what());
        return;
      }
      current_loc = d.loc;
      fail("reject", 0, "the judgment was accepted");
    }
  }
}

void Elaborator::judge(const Decl& d) {
  ConvCx cx;
  cx.globals = &globals_;
  cx.fuel = fuel_;
  ConstraintSet faces;
  for (auto& e : d.ctx) {
    switch (e.kind) {
      case CtxDecl::Kind::BDim: cx.dims = cx.dims.with_bridge(e.name); break;
      case CtxDecl::Kind::PDim: cx.dims = cx.dims.with_path(e.name); break;
      case CtxDecl::Kind::BVar:
        cx.dims = cx.dims.with_bridge(e.name);
        cx.gamma.push_back(CtxEntry::mark(Dim::var(e.name)));
        break;
      case CtxDecl::Kind::BMark:
        if (!cx.dims.valid(e.dim, Sort::Bridge))
          fail("weakening", 2, e.dim.str() + " is not a bridge dimension in scope");
        cx.gamma.push_back(CtxEntry::mark(e.dim));
        break;
      case CtxDecl::Kind::Face: faces.push_back(e.xi); break;
      case CtxDecl::Kind::Hyp:
        if (cx.dims.has(e.name) || ctx_lookup(cx.gamma, e.name) || globals_.find(e.name))
          fail("scope", 0, "hypothesis " + e.name + " shadows a name in scope");
        cx.gamma.push_back(CtxEntry::hyp(e.name, e.type));
        break;
    }
  }
  if (!constraints_in_scope(faces, cx.dims)) fail("scope", 0, "face constraint mentions an unknown dimension");
  // Hypotheses are checked after every face has been applied.
  auto rc = restrict(cx, faces);
  if (!rc) return;
  ConvCx full = rc->cx;
  ConvCx growing = full;
  growing.gamma.clear();
  for (auto& e : full.gamma) {
    if (e.kind == CtxEntry::Kind::Hyp) type(growing, e.type);
    growing.gamma.push_back(e);
  }
  const JudgmentForm& j = d.judgment;
  auto s = [&](const TermP& t) { return (*rc)(t); };
  switch (j.kind) {
    case JudgmentForm::Kind::Type: type(full, s(j.a)); return;
    case JudgmentForm::Kind::TypeEq: check_type_eq(full, s(j.a), s(j.b)); return;
    case JudgmentForm::Kind::Elem:
      type(full, s(j.a));
      check(full, s(j.m), s(j.a));
      return;
    case JudgmentForm::Kind::ElemEq: check_elem_eq(full, s(j.m), s(j.n), s(j.a)); return;
  }
}

bool FileReport::ok() const {
  if (parse_failed) return false;
  for (auto& d : decls)
    if (!d.ok) return false;
  return true;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Checks an imported file into the importing elaborator. Its declarations are
// summarised as one report; the first failure inside it is surfaced.
DeclReport import_file(Elaborator& el, const Decl& d, const std::filesystem::path& dir,
                       std::map<std::string, bool>& loaded) {
  DeclReport r{"import " + d.name, false, "import", 0, d.loc, ""};
  std::filesystem::path file = dir / d.name;
  std::string key = std::filesystem::weakly_canonical(file).string();
  // false while the file is being checked, true once it is done.
  if (auto it = loaded.find(key); it != loaded.end()) {
    r.ok = it->second;
    r.rule = r.ok ? "" : "import";
    if (!r.ok) r.message = "cyclic import of " + d.name;
    return r;
  }
  loaded[key] = false;
  std::vector<Decl> decls;
  try {
    decls = parse_decls(read_text_file(file.string()));
  } catch (const ParseError& e) {
    r.message = file.string() + ":" + e.what();
    return r;
  } catch (const std::runtime_error& e) {
    r.message = e.what();
    return r;
  }
  for (auto& inner : decls) {
    DeclReport ir = inner.kind == Decl::Kind::Import ? import_file(el, inner, file.parent_path(), loaded)
                                                     : el.check_decl(inner);
    if (!ir.ok) {
      r.rule = ir.rule;
      r.premise = ir.premise;
      r.message = ir.name + " in " + d.name + ": " + ir.message;
      return r;
    }
  }
  loaded[key] = true;
  r.ok = true;
  r.rule.clear();
  return r;
}

}  // namespace

FileReport check_source(const std::string& src, const std::string& path, size_t fuel, Globals* globals_out) {
  FileReport rep;
  rep.path = path;
  std::vector<Decl> decls;
  try {
    decls = parse_decls(src);
  } catch (const ParseError& e) {
    rep.parse_failed = true;
    rep.parse_message = e.what();
    rep.parse_loc = e.loc;
    return rep;
  }
  Elaborator el(fuel);
  std::map<std::string, bool> loaded{{std::filesystem::weakly_canonical(path).string(), false}};
  for (auto& d : decls) {
    if (d.kind == Decl::Kind::Import)
      rep.decls.push_back(import_file(el, d, std::filesystem::path(path).parent_path(), loaded));
    else
      rep.decls.push_back(el.check_decl(d));
  }
  if (globals_out) *globals_out = el.globals();
  return rep;
}

FileReport check_file(const std::string& path, size_t fuel, Globals* globals_out) {
  return check_source(read_text_file(path), path, fuel, globals_out);
}

std::string render_text(const FileReport& r) {
  std::ostringstream os;
  if (r.parse_failed) {
    os << "PARSE-ERROR " << r.path << ":" << r.parse_message << "\n";
    return os.str();
  }
  for (auto& d : r.decls) {
    if (d.ok) {
      os << "OK " << d.name << "\n";
    } else {
      os << "FAIL " << d.name << ": " << d.rule << " premise " << d.premise << " at " << r.path << ":" << d.loc.line
         << ":" << d.loc.col << ": " << d.message << "\n";
    }
  }
  return os.str();
}

std::string render_json(const FileReport& r) {
  using nlohmann::json;
  std::ostringstream os;
  if (r.parse_failed) {
    json j = {{"file", r.path}, {"status", "PARSE-ERROR"}, {"line", r.parse_loc.line}, {"col", r.parse_loc.col},
              {"message", r.parse_message}};
    os << j.dump() << "\n";
    return os.str();
  }
  for (auto& d : r.decls) {
    json j = {{"file", r.path}, {"name", d.name}, {"status", d.ok ? "OK" : "FAIL"}};
    if (!d.ok) {
      j["rule"] = d.rule;
      j["premise"] = d.premise;
      j["line"] = d.loc.line;
      j["col"] = d.loc.col;
      j["message"] = d.message;
    }
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace ptt
