#include "ptt/conversion.hpp"

namespace ptt {

ConvCx ConvCx::with_hyp(const std::string& x, TermP type) const {
  ConvCx c = *this;
  c.gamma.push_back(CtxEntry::hyp(x, std::move(type)));
  return c;
}

ConvCx ConvCx::with_path(const std::string& x) const {
  ConvCx c = *this;
  c.dims = dims.with_path(x);
  return c;
}

ConvCx ConvCx::with_bridge(const std::string& x) const {
  ConvCx c = *this;
  c.dims = dims.with_bridge(x);
  c.gamma.push_back(CtxEntry::mark(Dim::var(x)));
  return c;
}

ConvCx ConvCx::apart(const Dim& x) const {
  ConvCx c = *this;
  c.dims = apart_ctx(dims, x);
  c.gamma = ctx_apart(gamma, x);
  return c;
}

namespace {

TermP at(const TermP& body, const std::string& x, const Dim& d) { return substitute(body, {{x, d}}); }

StepOptions options(const ConvCx& cx) {
  StepOptions o;
  o.globals = cx.globals;
  o.kan_laws = true;
  o.boundary = [&cx](const TermP& head, bool bridge, bool one) -> TermP {
    TermP t = synth_type(cx, head);
    if (!t) return nullptr;
    t = whnf(cx, t);
    if (t->tag != (bridge ? Tag::BridgeTy : Tag::PathTy)) return nullptr;
    return t->arg(one ? 2 : 1);
  };
  o.capture_ok = [&cx](const TermP& m, const std::string& x) {
    TypingCtx apart = ctx_apart(cx.gamma, Dim::var(x));
    for (auto& v : m->free_terms)
      if (ctx_lookup(cx.gamma, v) && !ctx_lookup(apart, v)) return false;
    return true;
  };
  return o;
}

struct Neutral {
  bool ok = false;
  TermP type;  // may be null even when ok
};

bool eq(const ConvCx& cx, const TermP& type, const TermP& m, const TermP& n);
bool eq_type(const ConvCx& cx, const TermP& a, const TermP& b);
Neutral neu(const ConvCx& cx, const TermP& m, const TermP& n);

bool is_neutral_head(Tag t) {
  switch (t) {
    case Tag::Var:
    case Tag::App:
    case Tag::Fst:
    case Tag::Snd:
    case Tag::PApp:
    case Tag::BApp:
    case Tag::Ungel:
    case Tag::If:
    case Tag::VoidElim:
    case Tag::Hcom:
    case Tag::Coe:
    case Tag::Vproj:
    case Tag::Extent:
    case Tag::Fcom: return true;
    default: return false;
  }
}

// Instantiates the single binder of two bound arguments with one fresh name.
std::pair<TermP, TermP> open2(const Bound& a, const Bound& b, const Image& v) {
  return {instantiate(a, {v}), instantiate(b, {v})};
}

// Eta for the negative formers without type information.
bool eta_untyped(const ConvCx& cx, const TermP& m, const TermP& n) {
  auto lam_side = [&](Tag t) { return m->tag == t ? 0 : (n->tag == t ? 1 : -1); };
  if (int side = lam_side(Tag::Lam); side >= 0) {
    std::string v = fresh_name("v");
    auto body = [&](const TermP& t) {
      return t->tag == Tag::Lam ? instantiate(t->args[0], {mk::var(v)}) : mk::app(t, mk::var(v));
    };
    return eq(cx.with_hyp(v, nullptr), nullptr, body(m), body(n));
  }
  if (lam_side(Tag::Pair) >= 0) {
    auto proj = [](const TermP& t, int i) {
      if (t->tag == Tag::Pair) return t->arg(i);
      return i == 0 ? mk::fst(t) : mk::snd(t);
    };
    return eq(cx, nullptr, proj(m, 0), proj(n, 0)) && eq(cx, nullptr, proj(m, 1), proj(n, 1));
  }
  if (lam_side(Tag::PLam) >= 0) {
    std::string x = fresh_name("i");
    auto body = [&](const TermP& t) {
      return t->tag == Tag::PLam ? instantiate(t->args[0], {Dim::var(x)}) : mk::papp(t, Dim::var(x));
    };
    return eq(cx.with_path(x), nullptr, body(m), body(n));
  }
  if (lam_side(Tag::BLam) >= 0) {
    std::string x = fresh_name("x");
    auto body = [&](const TermP& t) {
      return t->tag == Tag::BLam ? instantiate(t->args[0], {Dim::var(x)}) : mk::bapp(t, Dim::var(x));
    };
    return eq(cx.with_bridge(x), nullptr, body(m), body(n));
  }
  return false;
}

bool tubes_eq(const ConvCx& cx, const TermP& type_line, const std::string& line_var, const TermP& m,
              const TermP& n) {
  if (m->tubes.size() != n->tubes.size()) return false;
  for (size_t i = 0; i < m->tubes.size(); ++i) {
    const Tube& a = m->tubes[i];
    const Tube& b = n->tubes[i];
    if (!(a.xi == b.xi)) return false;
    std::string y = fresh_name("y");
    TermP ty = type_line ? (line_var.empty() ? type_line : at(type_line, line_var, Dim::var(y))) : nullptr;
    if (!eq(cx.with_path(y), ty, at(a.body, a.y, Dim::var(y)), at(b.body, b.y, Dim::var(y)))) return false;
  }
  return true;
}

bool structural(const ConvCx& cx, const TermP& m0, const TermP& n0) {
  TermP m = whnf(cx, m0);
  TermP n = whnf(cx, n0);
  if (alpha_equal(m, n)) return true;
  for (Tag t : {Tag::Lam, Tag::Pair, Tag::PLam, Tag::BLam})
    if (m->tag == t || n->tag == t) return eta_untyped(cx, m, n);
  if (m->tag != n->tag) return false;
  switch (m->tag) {
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::PathTy:
    case Tag::BridgeTy:
    case Tag::GelTy:
    case Tag::VTy:
    case Tag::Univ:
    case Tag::Bool:
    case Tag::Unit:
    case Tag::Void: return eq_type(cx, m, n);
    case Tag::True:
    case Tag::False:
    case Tag::Star: return true;
    case Tag::GelIntro:
      return m->dims == n->dims && eq(cx, nullptr, m->arg(0), n->arg(0)) && eq(cx, nullptr, m->arg(1), n->arg(1)) &&
             eq(cx, nullptr, m->arg(2), n->arg(2));
    case Tag::Vin:
      return m->dims == n->dims && eq(cx, nullptr, m->arg(0), n->arg(0)) && eq(cx, nullptr, m->arg(1), n->arg(1));
    default: break;
  }
  if (is_neutral_head(m->tag)) return neu(cx, m, n).ok;
  return false;
}

Neutral neu(const ConvCx& cx, const TermP& m, const TermP& n) {
  Neutral no;
  if (m->tag != n->tag) return no;
  auto head_type = [&](const Neutral& h) { return h.type ? whnf(cx, h.type) : nullptr; };
  switch (m->tag) {
    case Tag::Var:
      if (m->name != n->name) return no;
      return {true, synth_type(cx, m)};
    case Tag::App: {
      Neutral h = neu(cx, whnf(cx, m->arg(0)), whnf(cx, n->arg(0)));
      if (!h.ok) return no;
      TermP t = head_type(h);
      if (t && t->tag == Tag::Pi) {
        if (!eq(cx, t->arg(0), m->arg(1), n->arg(1))) return no;
        return {true, instantiate(t->args[1], {m->arg(1)})};
      }
      if (!eq(cx, nullptr, m->arg(1), n->arg(1))) return no;
      return {true, nullptr};
    }
    case Tag::Fst:
    case Tag::Snd: {
      Neutral h = neu(cx, whnf(cx, m->arg(0)), whnf(cx, n->arg(0)));
      if (!h.ok) return no;
      TermP t = head_type(h);
      if (!t || t->tag != Tag::Sigma) return {true, nullptr};
      if (m->tag == Tag::Fst) return {true, t->arg(0)};
      return {true, instantiate(t->args[1], {mk::fst(m->arg(0))})};
    }
    case Tag::PApp:
    case Tag::BApp: {
      if (m->dims != n->dims) return no;
      Neutral h = neu(cx, whnf(cx, m->arg(0)), whnf(cx, n->arg(0)));
      if (!h.ok) return no;
      TermP t = head_type(h);
      if (t && (t->tag == Tag::PathTy || t->tag == Tag::BridgeTy))
        return {true, instantiate(t->args[0], {m->dims[0]})};
      return {true, nullptr};
    }
    case Tag::Ungel: {
      std::string x = fresh_name("x");
      ConvCx inner = cx.with_bridge(x);
      TermP qm = instantiate(m->args[0], {Dim::var(x)});
      TermP qn = instantiate(n->args[0], {Dim::var(x)});
      if (!eq(inner, nullptr, qm, qn)) return no;
      return {true, synth_type(cx, m)};
    }
    case Tag::If: {
      Neutral h = neu(cx, whnf(cx, m->arg(1)), whnf(cx, n->arg(1)));
      if (!h.ok) return no;
      TermP mot_t, mot_f, result;
      if (m->arg(0) && n->arg(0)) {
        std::string b = fresh_name("b");
        auto [am, an] = open2(m->args[0], n->args[0], mk::var(b));
        if (!eq_type(cx.with_hyp(b, mk::boolean()), am, an)) return no;
        mot_t = instantiate(m->args[0], {mk::tt()});
        mot_f = instantiate(m->args[0], {mk::ff()});
        result = instantiate(m->args[0], {m->arg(1)});
      } else if (m->arg(0) || n->arg(0)) {
        return no;
      }
      if (!eq(cx, mot_t, m->arg(2), n->arg(2)) || !eq(cx, mot_f, m->arg(3), n->arg(3))) return no;
      return {true, result};
    }
    case Tag::VoidElim: {
      Neutral h = neu(cx, whnf(cx, m->arg(1)), whnf(cx, n->arg(1)));
      if (!h.ok) return no;
      return {true, synth_type(cx, m)};
    }
    case Tag::Hcom: {
      if (m->dims != n->dims || !eq_type(cx, m->arg(0), n->arg(0))) return no;
      if (!eq(cx, m->arg(0), m->arg(1), n->arg(1))) return no;
      if (!tubes_eq(cx, m->arg(0), "", m, n)) return no;
      return {true, m->arg(0)};
    }
    case Tag::Coe: {
      if (m->dims != n->dims) return no;
      std::string y = fresh_name("y");
      auto [am, an] = open2(m->args[0], n->args[0], Dim::var(y));
      if (!eq_type(cx.with_path(y), am, an)) return no;
      if (!eq(cx, instantiate(m->args[0], {m->dims[0]}), m->arg(1), n->arg(1))) return no;
      return {true, instantiate(m->args[0], {m->dims[1]})};
    }
    case Tag::Vproj: {
      if (m->dims != n->dims) return no;
      Neutral h = neu(cx, whnf(cx, m->arg(0)), whnf(cx, n->arg(0)));
      if (!h.ok || !eq(cx, nullptr, m->arg(1), n->arg(1))) return no;
      TermP t = head_type(h);
      return {true, t && t->tag == Tag::VTy ? t->arg(1) : nullptr};
    }
    case Tag::Extent: {
      if (m->dims != n->dims || m->args.size() != n->args.size()) return no;
      if (!eq(cx, nullptr, m->arg(0), n->arg(0))) return no;
      for (size_t i = 1; i < 4; ++i) {
        std::vector<Image> vs;
        ConvCx inner = cx;
        for (auto& v : m->args[i].vars) {
          std::string f = fresh_name(v);
          vs.push_back(mk::var(f));
          inner = inner.with_hyp(f, nullptr);
        }
        if (!eq(inner, nullptr, instantiate(m->args[i], vs), instantiate(n->args[i], vs))) return no;
      }
      return {true, synth_type(cx, m)};
    }
    default: return {alpha_equal(m, n), nullptr};
  }
}

bool eq(const ConvCx& cx, const TermP& type, const TermP& m, const TermP& n) {
  if (alpha_equal(m, n)) return true;
  if (!type) return structural(cx, m, n);
  TermP a = whnf(cx, type);
  switch (a->tag) {
    case Tag::Pi: {
      std::string v = fresh_name(a->bvar(1));
      TermP var = mk::var(v);
      return eq(cx.with_hyp(v, a->arg(0)), instantiate(a->args[1], {var}), mk::app(m, var), mk::app(n, var));
    }
    case Tag::Sigma: {
      TermP m1 = mk::fst(m);
      if (!eq(cx, a->arg(0), m1, mk::fst(n))) return false;
      return eq(cx, instantiate(a->args[1], {m1}), mk::snd(m), mk::snd(n));
    }
    case Tag::PathTy: {
      std::string x = fresh_name(a->bvar(0));
      return eq(cx.with_path(x), instantiate(a->args[0], {Dim::var(x)}), mk::papp(m, Dim::var(x)),
                mk::papp(n, Dim::var(x)));
    }
    case Tag::BridgeTy: {
      std::string x = fresh_name(a->bvar(0));
      return eq(cx.with_bridge(x), instantiate(a->args[0], {Dim::var(x)}), mk::bapp(m, Dim::var(x)),
                mk::bapp(n, Dim::var(x)));
    }
    case Tag::Unit: return true;
    case Tag::Univ: return eq_type(cx, m, n);
    case Tag::GelTy: {
      const Dim& x = a->dims[0];
      if (!x.is_var()) break;
      TermP mw = whnf(cx, m);
      TermP nw = whnf(cx, n);
      auto intro_here = [&](const TermP& t) { return t->tag == Tag::GelIntro && t->dims[0] == x; };
      if (!intro_here(mw) && !intro_here(nw)) return structural(cx, mw, nw);
      ConvCx out = cx.apart(x);
      auto expand = [&](const TermP& q) -> TermP {
        if (intro_here(q)) return q;
        // Eta-expansion is only meaningful when q lives apart from x.
        for (auto& v : q->free_terms)
          if (ctx_lookup(cx.gamma, v) && !ctx_lookup(out.gamma, v)) return nullptr;
        return mk::gel(x, at(q, x.name, Dim::zero()), at(q, x.name, Dim::one()), mk::ungel(x.name, q));
      };
      TermP em = expand(mw);
      TermP en = expand(nw);
      if (!em || !en) return false;
      if (!eq(out, a->arg(0), em->arg(0), en->arg(0))) return false;
      if (!eq(out, a->arg(1), em->arg(1), en->arg(1))) return false;
      return eq(out, instantiate(a->args[2], {em->arg(0), em->arg(1)}), em->arg(2), en->arg(2));
    }
    default: break;
  }
  return structural(cx, m, n);
}

bool eq_type(const ConvCx& cx, const TermP& a0, const TermP& b0) {
  if (alpha_equal(a0, b0)) return true;
  TermP a = whnf(cx, a0);
  TermP b = whnf(cx, b0);
  if (alpha_equal(a, b)) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Pi:
    case Tag::Sigma: {
      if (!eq_type(cx, a->arg(0), b->arg(0))) return false;
      std::string v = fresh_name(a->bvar(1));
      auto [fa, fb] = open2(a->args[1], b->args[1], mk::var(v));
      return eq_type(cx.with_hyp(v, a->arg(0)), fa, fb);
    }
    case Tag::PathTy:
    case Tag::BridgeTy: {
      bool bridge = a->tag == Tag::BridgeTy;
      std::string x = fresh_name(a->bvar(0));
      auto [la, lb] = open2(a->args[0], b->args[0], Dim::var(x));
      if (!eq_type(bridge ? cx.with_bridge(x) : cx.with_path(x), la, lb)) return false;
      return eq(cx, instantiate(a->args[0], {Dim::zero()}), a->arg(1), b->arg(1)) &&
             eq(cx, instantiate(a->args[0], {Dim::one()}), a->arg(2), b->arg(2));
    }
    case Tag::GelTy: {
      if (a->dims != b->dims) return false;
      ConvCx out = cx.apart(a->dims[0]);
      if (!eq_type(out, a->arg(0), b->arg(0)) || !eq_type(out, a->arg(1), b->arg(1))) return false;
      std::string u = fresh_name(a->bvar(2, 0));
      std::string w = fresh_name(a->bvar(2, 1));
      ConvCx inner = out.with_hyp(u, a->arg(0)).with_hyp(w, a->arg(1));
      return eq_type(inner, instantiate(a->args[2], {mk::var(u), mk::var(w)}),
                     instantiate(b->args[2], {mk::var(u), mk::var(w)}));
    }
    case Tag::VTy:
      return a->dims == b->dims && eq_type(cx, a->arg(0), b->arg(0)) && eq_type(cx, a->arg(1), b->arg(1)) &&
             eq(cx, nullptr, a->arg(2), b->arg(2));
    case Tag::Univ:
    case Tag::Bool:
    case Tag::Unit:
    case Tag::Void: return true;
    default: break;
  }
  if (is_neutral_head(a->tag)) return neu(cx, a, b).ok;
  return false;
}

}  // namespace

TermP whnf(const ConvCx& cx, const TermP& m) {
  StepOptions o = options(cx);
  TermP cur = m;
  for (size_t i = 0; i < cx.fuel; ++i) {
    StepResult r = step(cur, o);
    if (r.kind != StepResult::Kind::Stepped) return cur;
    cur = r.term;
  }
  throw ConversionError("fuel exhausted during conversion after " + std::to_string(cx.fuel) + " steps");
}

TermP synth_type(const ConvCx& cx, const TermP& m) {
  auto sub = [&](const TermP& t) -> TermP {
    TermP ty = synth_type(cx, t);
    return ty ? whnf(cx, ty) : nullptr;
  };
  switch (m->tag) {
    case Tag::Var:
      if (auto* e = ctx_lookup(cx.gamma, m->name)) return e->type;
      if (cx.globals)
        if (auto* g = cx.globals->find(m->name)) return g->type;
      return nullptr;
    case Tag::The: return m->arg(0);
    case Tag::App: {
      TermP t = sub(m->arg(0));
      return t && t->tag == Tag::Pi ? instantiate(t->args[1], {m->arg(1)}) : nullptr;
    }
    case Tag::Fst:
    case Tag::Snd: {
      TermP t = sub(m->arg(0));
      if (!t || t->tag != Tag::Sigma) return nullptr;
      return m->tag == Tag::Fst ? t->arg(0) : instantiate(t->args[1], {mk::fst(m->arg(0))});
    }
    case Tag::PApp:
    case Tag::BApp: {
      TermP t = sub(m->arg(0));
      Tag want = m->tag == Tag::PApp ? Tag::PathTy : Tag::BridgeTy;
      return t && t->tag == want ? instantiate(t->args[0], {m->dims[0]}) : nullptr;
    }
    case Tag::Ungel: {
      std::string x = fresh_name(m->bvar(0));
      TermP q = instantiate(m->args[0], {Dim::var(x)});
      ConvCx inner = cx.with_bridge(x);
      TermP t = synth_type(inner, q);
      if (!t) return nullptr;
      t = whnf(inner, t);
      if (t->tag != Tag::GelTy || !t->dims[0].mentions(x)) return nullptr;
      return instantiate(t->args[2], {at(q, x, Dim::zero()), at(q, x, Dim::one())});
    }
    case Tag::If:
      if (m->arg(0)) return instantiate(m->args[0], {m->arg(1)});
      return synth_type(cx, m->arg(2));
    case Tag::VoidElim: return m->arg(0) ? instantiate(m->args[0], {m->arg(1)}) : nullptr;
    case Tag::Hcom: return m->arg(0);
    case Tag::Coe:
    case Tag::Com: return instantiate(m->args[0], {m->dims[1]});
    case Tag::Vproj: {
      TermP t = sub(m->arg(0));
      return t && t->tag == Tag::VTy ? t->arg(1) : nullptr;
    }
    case Tag::Extent:
      if (m->args.size() > 5 && m->arg(5)) return instantiate(m->args[5], {m->dims[0], m->arg(0)});
      return nullptr;
    default: return nullptr;
  }
}

bool equal_term(const ConvCx& cx, const TermP& type, const TermP& m, const TermP& n) { return eq(cx, type, m, n); }

bool equal_type(const ConvCx& cx, const TermP& a, const TermP& b) { return eq_type(cx, a, b); }

TypingCtx subst_ctx(const TypingCtx& gamma, const DimSubst& psi) {
  TypingCtx out;
  for (auto& e : gamma) {
    if (e.kind == CtxEntry::Kind::Marker) {
      Dim d = e.marker.is_var() ? psi.bridge_image(e.marker.name) : e.marker;
      out.push_back(CtxEntry::mark(d));
    } else {
      out.push_back(CtxEntry::hyp(e.name, e.type ? subst_dims(e.type, psi) : nullptr));
    }
  }
  return out;
}

bool decide(const EqProblem& p, const Globals* globals, size_t fuel) {
  ConstraintSolution sol = solve_constraints(p.xi, p.dims);
  if (!sol.consistent) return true;
  const DimSubst& psi = sol.subst;
  ConvCx cx{psi.target, subst_ctx(p.gamma, psi), globals, fuel};
  TermP lhs = subst_dims(p.lhs, psi);
  TermP rhs = subst_dims(p.rhs, psi);
  if (!p.type) return equal_type(cx, lhs, rhs);
  return equal_term(cx, subst_dims(p.type, psi), lhs, rhs);
}

}  // namespace ptt
