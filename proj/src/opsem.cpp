#include "ptt/opsem.hpp"

#include <set>
#include <sstream>

#include "ptt/print.hpp"

namespace ptt {

namespace {

struct Fired {
  const char* rule;
  TermP term;
};

using Out = std::optional<Fired>;
// A rule inspects m; when it does not fire it may explain why m is stuck.
using RuleFn = Out (*)(const TermP& m, const StepOptions& o, std::string& why);

Out fire(const char* rule, TermP t) { return Fired{rule, std::move(t)}; }

// Steps a subterm for a congruence rule, recording why it is stuck.
std::optional<TermP> sub(const TermP& m, const StepOptions& o, std::string& why) {
  StepResult r = step(m, o);
  if (r.kind == StepResult::Kind::Stepped) return r.term;
  if (r.kind == StepResult::Kind::Stuck && why.empty()) why = r.reason;
  return std::nullopt;
}

TermP with_arg(const TermP& m, size_t i, TermP body) {
  auto args = m->args;
  args[i].body = std::move(body);
  return make(m->tag, m->dims, std::move(args), m->tubes, m->name, m->loc);
}

// Every name that a freshly introduced binder around parts of m must avoid.
std::set<std::string> names_of(const Term& m) {
  std::set<std::string> s(m.free_terms.begin(), m.free_terms.end());
  s.insert(m.free_dims.begin(), m.free_dims.end());
  for (auto& t : m.tubes) s.insert(t.y);
  for (auto& a : m.args)
    for (auto& v : a.vars) s.insert(v);
  return s;
}

std::string pick(const std::string& base, std::set<std::string>& avoid) {
  std::string n = avoid.count(base) ? fresh_name(base) : base;
  avoid.insert(n);
  return n;
}

TermP at_dim(const TermP& body, const std::string& x, const Dim& d) { return substitute(body, {{x, d}}); }

// The coe type line y.A renamed so that y avoids the free names of the redex.
std::pair<std::string, TermP> line(const TermP& coe_like, std::set<std::string>& avoid) {
  const Bound& b = coe_like->args[0];
  std::set<std::string> outside(coe_like->free_terms.begin(), coe_like->free_terms.end());
  outside.insert(coe_like->free_dims.begin(), coe_like->free_dims.end());
  if (!outside.count(b.vars[0])) {
    avoid.insert(b.vars[0]);
    return {b.vars[0], b.body};
  }
  std::string y = pick(b.vars[0], avoid);
  return {y, at_dim(b.body, b.vars[0], Dim::var(y))};
}

const Tube* true_tube(const Term& m) {
  for (auto& t : m.tubes)
    if (t.xi.holds()) return &t;
  return nullptr;
}

TermP tube_at(const Tube& t, const Dim& s) { return at_dim(t.body, t.y, s); }

std::vector<Tube> map_tubes(const std::vector<Tube>& ts, const std::function<TermP(const TermP&)>& f) {
  std::vector<Tube> out;
  for (auto& t : ts) out.push_back({t.xi, t.y, f(t.body)});
  return out;
}

// ---------------------------------------------------------------- imported

Out r_delta(const TermP& m, const StepOptions& o, std::string& why) {
  if (o.globals)
    if (auto* e = o.globals->find(m->name)) {
      if (e->value) return fire("delta", e->value);
      why = "postulate " + m->name;
      return std::nullopt;
    }
  why = "free variable " + m->name;
  return std::nullopt;
}

Out r_the(const TermP& m, const StepOptions&, std::string&) { return fire("the", m->arg(1)); }

Out r_app(const TermP& m, const StepOptions& o, std::string& why) {
  if (m->arg(0)->tag == Tag::Lam) return fire("app-beta", instantiate(m->arg(0)->args[0], {m->arg(1)}));
  if (auto f = sub(m->arg(0), o, why)) return fire("app-head", mk::app(*f, m->arg(1)));
  return std::nullopt;
}

Out r_fst(const TermP& m, const StepOptions& o, std::string& why) {
  if (m->arg(0)->tag == Tag::Pair) return fire("fst-beta", m->arg(0)->arg(0));
  if (auto p = sub(m->arg(0), o, why)) return fire("fst-head", mk::fst(*p));
  return std::nullopt;
}

Out r_snd(const TermP& m, const StepOptions& o, std::string& why) {
  if (m->arg(0)->tag == Tag::Pair) return fire("snd-beta", m->arg(0)->arg(1));
  if (auto p = sub(m->arg(0), o, why)) return fire("snd-head", mk::snd(*p));
  return std::nullopt;
}

// Shared by papp and bapp: beta, head congruence, and the boundary law for
// stuck heads when an oracle is available.
Out dim_app(const TermP& m, const StepOptions& o, std::string& why, Tag lam, const char* beta, const char* head,
            const char* boundary) {
  const TermP& q = m->arg(0);
  const Dim& r = m->dims[0];
  if (q->tag == lam) return fire(beta, instantiate(q->args[0], {r}));
  StepResult s = step(q, o);
  if (s.kind == StepResult::Kind::Stepped) return fire(head, make(m->tag, m->dims, {{{}, s.term}}));
  if (r.is_const() && o.boundary && s.kind == StepResult::Kind::Stuck) {
    if (TermP e = o.boundary(q, m->tag == Tag::BApp, r.kind == Dim::Kind::One)) return fire(boundary, e);
  }
  if (s.kind == StepResult::Kind::Stuck && why.empty()) why = s.reason;
  return std::nullopt;
}

Out r_papp(const TermP& m, const StepOptions& o, std::string& why) {
  return dim_app(m, o, why, Tag::PLam, "papp-beta", "papp-head", "papp-boundary");
}

Out r_if(const TermP& m, const StepOptions& o, std::string& why) {
  const TermP& b = m->arg(1);
  if (b->tag == Tag::True) return fire("if-true", m->arg(2));
  if (b->tag == Tag::False) return fire("if-false", m->arg(3));
  if (auto b2 = sub(b, o, why)) return fire("if-head", with_arg(m, 1, *b2));
  return std::nullopt;
}

Out r_void_elim(const TermP& m, const StepOptions& o, std::string& why) {
  if (auto b2 = sub(m->arg(1), o, why)) return fire("void-elim-head", with_arg(m, 1, *b2));
  return std::nullopt;
}

Out r_vty(const TermP& m, const StepOptions&, std::string&) {
  if (m->dims[0].kind == Dim::Kind::Zero) return fire("vty-0", m->arg(0));
  if (m->dims[0].kind == Dim::Kind::One) return fire("vty-1", m->arg(1));
  return std::nullopt;
}

Out r_vin(const TermP& m, const StepOptions&, std::string&) {
  if (m->dims[0].kind == Dim::Kind::Zero) return fire("vin-0", m->arg(0));
  if (m->dims[0].kind == Dim::Kind::One) return fire("vin-1", m->arg(1));
  return std::nullopt;
}

Out r_vproj(const TermP& m, const StepOptions& o, std::string& why) {
  const Dim& r = m->dims[0];
  if (r.kind == Dim::Kind::Zero) return fire("vproj-0", mk::app(m->arg(1), m->arg(0)));
  if (r.kind == Dim::Kind::One) return fire("vproj-1", m->arg(0));
  const TermP& v = m->arg(0);
  if (v->tag == Tag::Vin && v->dims[0] == r) return fire("vproj-beta", v->arg(1));
  if (auto v2 = sub(v, o, why)) return fire("vproj-head", with_arg(m, 0, *v2));
  return std::nullopt;
}

// ---------------------------------------------------------------- bridge

Out r_bapp(const TermP& m, const StepOptions& o, std::string& why) {
  return dim_app(m, o, why, Tag::BLam, "bapp-beta", "bapp-head", "bapp-boundary");
}

// ---------------------------------------------------------------- extent

bool may_capture(const StepOptions& o, const TermP& m, const std::string& x, std::string& why) {
  if (!o.capture_ok || o.capture_ok(m, x)) return true;
  if (why.empty()) why = "a hypothesis that may depend on " + x + " would be captured";
  return false;
}

Out r_extent(const TermP& m, const StepOptions& o, std::string& why) {
  const Dim& r = m->dims[0];
  const TermP& arg = m->arg(0);
  if (r.kind == Dim::Kind::Zero) return fire("extent-0", instantiate(m->args[1], {arg}));
  if (r.kind == Dim::Kind::One) return fire("extent-1", instantiate(m->args[2], {arg}));
  if (!may_capture(o, arg, r.name, why)) return std::nullopt;
  // The bridge lambda deliberately captures r in M.
  TermP m0 = at_dim(arg, r.name, Dim::zero());
  TermP m1 = at_dim(arg, r.name, Dim::one());
  TermP c = mk::blam(r.name, arg);
  return fire("extent-var", mk::bapp(instantiate(m->args[3], {m0, m1, c}), r));
}

// ---------------------------------------------------------------- gel

Out r_gelty(const TermP& m, const StepOptions&, std::string&) {
  if (m->dims[0].kind == Dim::Kind::Zero) return fire("gel-0", m->arg(0));
  if (m->dims[0].kind == Dim::Kind::One) return fire("gel-1", m->arg(1));
  return std::nullopt;
}

Out r_gelintro(const TermP& m, const StepOptions&, std::string&) {
  if (m->dims[0].kind == Dim::Kind::Zero) return fire("gelintro-0", m->arg(0));
  if (m->dims[0].kind == Dim::Kind::One) return fire("gelintro-1", m->arg(1));
  return std::nullopt;
}

Out r_ungel(const TermP& m, const StepOptions& o, std::string& why) {
  const std::string& x = m->bvar(0);
  const TermP& body = m->arg(0);
  if (body->tag == Tag::GelIntro && body->dims[0].mentions(x))
    return fire("ungel-beta", at_dim(body->arg(2), x, Dim::zero()));
  if (auto b2 = sub(body, o, why)) return fire("ungel-body", mk::ungel(x, *b2));
  if (why.empty()) why = "ungel of a value that is not gel at its bound dimension";
  return std::nullopt;
}

// ---------------------------------------------------------------- kan

Out r_com(const TermP& m, const StepOptions&, std::string&) {
  return fire("com", expand_com(m->bvar(0), m->arg(0), m->dims[0], m->dims[1], m->arg(1), m->tubes));
}

Out r_hcom(const TermP& m, const StepOptions& o, std::string& why) {
  const Dim& r = m->dims[0];
  const Dim& s = m->dims[1];
  const TermP& a = m->arg(0);
  const TermP& cap = m->arg(1);
  if (o.kan_laws) {
    if (r == s) return fire("hcom-refl", cap);
    if (auto* t = true_tube(*m)) return fire("hcom-face", tube_at(*t, s));
  }
  if (auto a2 = sub(a, o, why)) return fire("hcom-type", with_arg(m, 0, *a2));
  std::set<std::string> avoid = names_of(*m);
  switch (a->tag) {
    case Tag::Pi: {
      std::string v = pick(a->bvar(1), avoid);
      TermP b = instantiate(a->args[1], {mk::var(v)});
      auto ts = map_tubes(m->tubes, [&](const TermP& n) { return mk::app(n, mk::var(v)); });
      return fire("hcom-pi", mk::lam(v, mk::hcom(b, r, s, mk::app(cap, mk::var(v)), ts)));
    }
    case Tag::Sigma: {
      auto fst_tubes = map_tubes(m->tubes, [](const TermP& n) { return mk::fst(n); });
      auto snd_tubes = map_tubes(m->tubes, [](const TermP& n) { return mk::snd(n); });
      std::string z = pick("z", avoid);
      TermP first = mk::hcom(a->arg(0), r, s, mk::fst(cap), fst_tubes);
      TermP filler = mk::hcom(a->arg(0), r, Dim::var(z), mk::fst(cap), fst_tubes);
      TermP fam = instantiate(a->args[1], {filler});
      return fire("hcom-sigma", mk::pair(first, mk::com(z, fam, r, s, mk::snd(cap), snd_tubes)));
    }
    case Tag::PathTy: {
      std::string x = pick(a->bvar(0), avoid);
      TermP ax = instantiate(a->args[0], {Dim::var(x)});
      auto ts = map_tubes(m->tubes, [&](const TermP& n) { return mk::papp(n, Dim::var(x)); });
      ts.push_back(mk::tube(Constraint::path(Dim::var(x), Dim::zero()), pick("_", avoid), a->arg(1)));
      ts.push_back(mk::tube(Constraint::path(Dim::var(x), Dim::one()), pick("_", avoid), a->arg(2)));
      return fire("hcom-path", mk::plam(x, mk::hcom(ax, r, s, mk::papp(cap, Dim::var(x)), ts)));
    }
    case Tag::BridgeTy: {
      std::string x = pick(a->bvar(0), avoid);
      TermP ax = instantiate(a->args[0], {Dim::var(x)});
      auto ts = map_tubes(m->tubes, [&](const TermP& n) { return mk::bapp(n, Dim::var(x)); });
      ts.push_back(mk::tube(Constraint::bridge(Dim::var(x), false), pick("_", avoid), a->arg(1)));
      ts.push_back(mk::tube(Constraint::bridge(Dim::var(x), true), pick("_", avoid), a->arg(2)));
      return fire("hcom-bridge", mk::blam(x, mk::hcom(ax, r, s, mk::bapp(cap, Dim::var(x)), ts)));
    }
    case Tag::GelTy: {
      const Dim& gx = a->dims[0];
      if (!gx.is_var()) break;
      if (!may_capture(o, cap, gx.name, why)) return std::nullopt;
      for (auto& t : m->tubes)
        if (!may_capture(o, t.body, gx.name, why)) return std::nullopt;
      std::string y = pick("y", avoid);
      auto endpoint = [&](bool one, const TermP& ty, const Dim& target) {
        Env face{{gx.name, Dim::constant(one)}};
        std::vector<Tube> ts;
        for (auto& t : m->tubes) ts.push_back({subst_constraint(t.xi, face), t.y, substitute(t.body, face)});
        return mk::hcom(ty, r, target, substitute(cap, face), ts);
      };
      TermP my = endpoint(false, a->arg(0), Dim::var(y));
      TermP ny = endpoint(true, a->arg(1), Dim::var(y));
      std::vector<Tube> rel_tubes;
      for (auto& t : m->tubes)
        if (!t.xi.mentions(gx.name)) rel_tubes.push_back({t.xi, t.y, mk::ungel(gx.name, t.body)});
      TermP p = mk::com(y, instantiate(a->args[2], {my, ny}), r, s, mk::ungel(gx.name, cap), rel_tubes);
      return fire("hcom-gel", mk::gel(gx, endpoint(false, a->arg(0), s), endpoint(true, a->arg(1), s), p));
    }
    case Tag::Bool: return fire("hcom-bool", cap);
    case Tag::Unit: return fire("hcom-unit", cap);
    case Tag::Void: return fire("hcom-void", cap);
    case Tag::Univ:
    case Tag::VTy: {
      if (a->tag == Tag::VTy && !a->dims[0].is_var()) break;
      const char* rule = a->tag == Tag::Univ ? "hcom-univ" : "hcom-v";
      if (r == s) return fire(rule, cap);
      if (auto* t = true_tube(*m)) return fire(rule, tube_at(*t, s));
      why = "unsupported-fcom";
      return std::nullopt;
    }
    default: break;
  }
  if (why.empty()) why = std::string("hcom at ") + tag_name(a->tag);
  return std::nullopt;
}

Out r_coe(const TermP& m, const StepOptions& o, std::string& why) {
  const Dim& r = m->dims[0];
  const Dim& s = m->dims[1];
  const TermP& cap = m->arg(1);
  if (o.kan_laws && r == s) return fire("coe-refl", cap);
  if (auto a2 = sub(m->arg(0), o, why)) {
    auto args = m->args;
    args[0].body = *a2;
    return fire("coe-type", make(Tag::Coe, m->dims, std::move(args)));
  }
  std::set<std::string> avoid = names_of(*m);
  auto [y, a] = line(m, avoid);
  Dim yd = Dim::var(y);
  switch (a->tag) {
    case Tag::Pi: {
      std::string v = pick(a->bvar(1), avoid);
      TermP va = mk::var(v);
      TermP dom = a->arg(0);
      TermP fam = instantiate(a->args[1], {mk::coe(y, dom, s, yd, va)});
      TermP arg = mk::coe(y, dom, s, r, va);
      return fire("coe-pi", mk::lam(v, mk::coe(y, fam, r, s, mk::app(cap, arg))));
    }
    case Tag::Sigma: {
      TermP dom = a->arg(0);
      TermP first = mk::coe(y, dom, r, s, mk::fst(cap));
      TermP fam = instantiate(a->args[1], {mk::coe(y, dom, r, yd, mk::fst(cap))});
      return fire("coe-sigma", mk::pair(first, mk::coe(y, fam, r, s, mk::snd(cap))));
    }
    case Tag::PathTy: {
      std::string x = pick(a->bvar(0), avoid);
      TermP ax = instantiate(a->args[0], {Dim::var(x)});
      std::vector<Tube> ts{mk::tube(Constraint::path(Dim::var(x), Dim::zero()), y, a->arg(1)),
                           mk::tube(Constraint::path(Dim::var(x), Dim::one()), y, a->arg(2))};
      return fire("coe-path", mk::plam(x, mk::com(y, ax, r, s, mk::papp(cap, Dim::var(x)), ts)));
    }
    case Tag::BridgeTy: {
      std::string x = pick(a->bvar(0), avoid);
      TermP ax = instantiate(a->args[0], {Dim::var(x)});
      std::vector<Tube> ts{mk::tube(Constraint::bridge(Dim::var(x), false), y, a->arg(1)),
                           mk::tube(Constraint::bridge(Dim::var(x), true), y, a->arg(2))};
      return fire("coe-bridge", mk::blam(x, mk::com(y, ax, r, s, mk::bapp(cap, Dim::var(x)), ts)));
    }
    case Tag::GelTy: {
      const Dim& gx = a->dims[0];
      if (!gx.is_var()) break;
      if (!may_capture(o, cap, gx.name, why)) return std::nullopt;
      auto endpoint = [&](bool one, const TermP& ty, const Dim& target) {
        return mk::coe(y, ty, r, target, at_dim(cap, gx.name, Dim::constant(one)));
      };
      TermP rel = instantiate(a->args[2], {endpoint(false, a->arg(0), yd), endpoint(true, a->arg(1), yd)});
      TermP p = mk::coe(y, rel, r, s, mk::ungel(gx.name, cap));
      return fire("coe-gel", mk::gel(gx, endpoint(false, a->arg(0), s), endpoint(true, a->arg(1), s), p));
    }
    case Tag::Bool: return fire("coe-bool", cap);
    case Tag::Unit: return fire("coe-unit", cap);
    case Tag::Void: return fire("coe-void", cap);
    case Tag::Univ: return fire("coe-univ", cap);
    case Tag::VTy:
      if (!a->dims[0].is_var()) break;
      if (r == s) return fire("coe-v", cap);
      why = "unsupported-fcom";
      return std::nullopt;
    default: break;
  }
  if (why.empty()) why = std::string("coe along ") + tag_name(a->tag);
  return std::nullopt;
}

Out r_fcom(const TermP&, const StepOptions&, std::string& why) {
  why = "unsupported-fcom";
  return std::nullopt;
}

const std::vector<RuleFn>& rules_for(Tag t) {
  static const std::map<Tag, std::vector<RuleFn>> table = {
      {Tag::Var, {r_delta}},
      {Tag::The, {r_the}},
      {Tag::App, {r_app}},
      {Tag::Fst, {r_fst}},
      {Tag::Snd, {r_snd}},
      {Tag::PApp, {r_papp}},
      {Tag::BApp, {r_bapp}},
      {Tag::If, {r_if}},
      {Tag::VoidElim, {r_void_elim}},
      {Tag::VTy, {r_vty}},
      {Tag::Vin, {r_vin}},
      {Tag::Vproj, {r_vproj}},
      {Tag::Extent, {r_extent}},
      {Tag::GelTy, {r_gelty}},
      {Tag::GelIntro, {r_gelintro}},
      {Tag::Ungel, {r_ungel}},
      {Tag::Com, {r_com}},
      {Tag::Hcom, {r_hcom}},
      {Tag::Coe, {r_coe}},
      {Tag::Fcom, {r_fcom}},
  };
  static const std::vector<RuleFn> none;
  auto it = table.find(t);
  return it == table.end() ? none : it->second;
}

}  // namespace

bool is_value(const TermP& m) {
  switch (m->tag) {
    case Tag::Lam:
    case Tag::Pair:
    case Tag::PLam:
    case Tag::BLam:
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::PathTy:
    case Tag::BridgeTy:
    case Tag::Univ:
    case Tag::Bool:
    case Tag::True:
    case Tag::False:
    case Tag::Unit:
    case Tag::Star:
    case Tag::Void: return true;
    case Tag::GelTy:
    case Tag::GelIntro:
    case Tag::VTy:
    case Tag::Vin: return m->dims[0].is_var();
    default: return false;
  }
}

StepResult step(const TermP& m, const StepOptions& o) {
  std::string why;
  for (RuleFn f : rules_for(m->tag))
    if (auto r = f(m, o, why)) return {StepResult::Kind::Stepped, r->term, r->rule, {}};
  if (is_value(m)) return {StepResult::Kind::Value, nullptr, {}, {}};
  if (why.empty()) why = "no rule applies";
  return {StepResult::Kind::Stuck, nullptr, {}, std::string(tag_name(m->tag)) + ": " + why};
}

std::vector<std::string> applicable_rules(const TermP& m, const StepOptions& o) {
  // Each rule function covers a family of mutually exclusive premises and
  // returns at most one of them, so the families themselves are queried
  // individually here.
  std::vector<std::string> out;
  std::string why;
  for (RuleFn f : rules_for(m->tag))
    if (auto r = f(m, o, why)) out.push_back(r->rule);
  return out;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& rule_catalog() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> c = {
      {"kan-generic", {"coe-type", "hcom-type", "com"}},
      {"bridge", {"bapp-head", "bapp-beta", "hcom-bridge", "coe-bridge"}},
      {"extent", {"extent-0", "extent-1", "extent-var"}},
      {"gel",
       {"gel-0", "gel-1", "gelintro-0", "gelintro-1", "ungel-body", "ungel-beta", "hcom-gel", "coe-gel"}},
      {"imported",
       {"delta", "the", "app-head", "app-beta", "fst-head", "fst-beta", "snd-head", "snd-beta", "papp-head",
        "papp-beta", "if-head", "if-true", "if-false", "void-elim-head", "vty-0", "vty-1", "vin-0", "vin-1",
        "vproj-0", "vproj-1", "vproj-head", "vproj-beta", "hcom-pi", "coe-pi", "hcom-sigma", "coe-sigma",
        "hcom-path", "coe-path", "hcom-bool", "coe-bool", "hcom-unit", "coe-unit", "hcom-void", "coe-void",
        "hcom-univ", "coe-univ", "hcom-v", "coe-v"}},
      {"conversion-only", {"papp-boundary", "bapp-boundary", "hcom-refl", "hcom-face", "coe-refl"}},
  };
  return c;
}

TermP expand_com(const std::string& y, const TermP& a, const Dim& r, const Dim& s, const TermP& m,
                 const std::vector<Tube>& tubes) {
  std::vector<Tube> ts;
  for (auto& t : tubes) {
    // The tube binder must not capture free names of the type line.
    std::string z = t.y;
    TermP body = t.body;
    bool clash = (z != y && a->has_free_dim(z)) || s.mentions(z);
    if (clash) {
      z = fresh_name(t.y);
      body = at_dim(t.body, t.y, Dim::var(z));
    }
    ts.push_back({t.xi, z, mk::coe(y, a, Dim::var(z), s, body)});
  }
  return mk::hcom(at_dim(a, y, s), r, s, mk::coe(y, a, r, s, m), std::move(ts));
}

EvalResult eval(const TermP& m, size_t fuel, const StepOptions& o, size_t trace_limit) {
  EvalResult res{EvalResult::Status::Diverged, m, {}, {}};
  if (trace_limit) res.trace.terms.push_back(m);
  TermP cur = m;
  for (size_t i = 0; i < fuel; ++i) {
    StepResult s = step(cur, o);
    if (s.kind == StepResult::Kind::Value) {
      res.status = EvalResult::Status::Value;
      res.term = cur;
      return res;
    }
    if (s.kind == StepResult::Kind::Stuck) {
      res.status = EvalResult::Status::Stuck;
      res.term = cur;
      res.reason = s.reason;
      return res;
    }
    cur = s.term;
    ++res.trace.steps;
    if (trace_limit) {
      if (res.trace.rules.size() < trace_limit) {
        res.trace.rules.push_back(s.rule);
        res.trace.terms.push_back(cur);
      } else {
        res.trace.truncated = true;
      }
    }
  }
  res.term = cur;
  res.reason = "fuel exhausted after " + std::to_string(fuel) + " steps";
  return res;
}

std::string render_trace(const Trace& t, size_t cap) {
  std::ostringstream os;
  size_t n = std::min(t.terms.size(), cap + 1);
  for (size_t i = 0; i < n; ++i) {
    os << i << ": " << show(t.terms[i]);
    if (i < t.rules.size() && i + 1 < n) os << "    ; " << t.rules[i];
    os << "\n";
  }
  if (t.truncated || t.terms.size() > cap + 1)
    os << "... trace truncated after " << (n ? n - 1 : 0) << " of " << t.steps << " steps\n";
  return os.str();
}

}  // namespace ptt
