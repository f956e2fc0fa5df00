#include "ptt/term.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace ptt {

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::Var: return "var";
    case Tag::Univ: return "U";
    case Tag::Pi: return "pi";
    case Tag::Lam: return "lam";
    case Tag::App: return "app";
    case Tag::Sigma: return "sigma";
    case Tag::Pair: return "pair";
    case Tag::Fst: return "fst";
    case Tag::Snd: return "snd";
    case Tag::PathTy: return "path";
    case Tag::PLam: return "plam";
    case Tag::PApp: return "papp";
    case Tag::VTy: return "V";
    case Tag::Vin: return "vin";
    case Tag::Vproj: return "vproj";
    case Tag::BridgeTy: return "bridge";
    case Tag::BLam: return "blam";
    case Tag::BApp: return "bapp";
    case Tag::GelTy: return "Gel";
    case Tag::GelIntro: return "gel";
    case Tag::Ungel: return "ungel";
    case Tag::Extent: return "extent";
    case Tag::Hcom: return "hcom";
    case Tag::Coe: return "coe";
    case Tag::Com: return "com";
    case Tag::Fcom: return "fcom";
    case Tag::Bool: return "bool";
    case Tag::True: return "true";
    case Tag::False: return "false";
    case Tag::If: return "if";
    case Tag::Unit: return "unit";
    case Tag::Star: return "star";
    case Tag::Void: return "void";
    case Tag::VoidElim: return "void-elim";
    case Tag::The: return "the";
  }
  return "?";
}

Sort binder_sort(Tag t, size_t arg, size_t var) {
  switch (t) {
    case Tag::PathTy:
    case Tag::PLam:
    case Tag::Coe:
    case Tag::Com: return Sort::Path;
    case Tag::BridgeTy:
    case Tag::BLam:
    case Tag::Ungel: return Sort::Bridge;
    case Tag::Extent:
      if (arg == 4) return Sort::Bridge;
      if (arg == 5) return var == 0 ? Sort::Bridge : Sort::Term;
      return Sort::Term;
    default: return Sort::Term;
  }
}

Sort dim_sort(Tag t, size_t) {
  switch (t) {
    case Tag::BApp:
    case Tag::GelTy:
    case Tag::GelIntro:
    case Tag::Extent: return Sort::Bridge;
    default: return Sort::Path;
  }
}

bool Term::has_free_term(const std::string& n) const {
  return std::binary_search(free_terms.begin(), free_terms.end(), n);
}

bool Term::has_free_dim(const std::string& n) const {
  return std::binary_search(free_dims.begin(), free_dims.end(), n);
}

namespace {

void normalize_names(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void add_dim(std::vector<std::string>& out, const Dim& d) {
  if (d.is_var()) out.push_back(d.name);
}

void add_bound(std::vector<std::string>& terms, std::vector<std::string>& dims, const TermP& body,
               const std::vector<std::string>& vars, const std::vector<Sort>& sorts) {
  if (!body) return;
  auto bound = [&](const std::string& n, bool dim) {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == n && ((sorts[i] != Sort::Term) == dim)) return true;
    return false;
  };
  for (auto& n : body->free_terms)
    if (!bound(n, false)) terms.push_back(n);
  for (auto& n : body->free_dims)
    if (!bound(n, true)) dims.push_back(n);
}

}  // namespace

TermP make(Tag t, std::vector<Dim> dims, std::vector<Bound> args, std::vector<Tube> tubes,
           std::string name, Loc loc) {
  auto m = std::make_shared<Term>();
  m->tag = t;
  m->name = std::move(name);
  m->dims = std::move(dims);
  m->args = std::move(args);
  m->tubes = std::move(tubes);
  m->loc = loc;
  if (t == Tag::Var) m->free_terms.push_back(m->name);
  for (auto& d : m->dims) add_dim(m->free_dims, d);
  for (size_t i = 0; i < m->args.size(); ++i) {
    auto& b = m->args[i];
    std::vector<Sort> sorts;
    for (size_t j = 0; j < b.vars.size(); ++j) sorts.push_back(binder_sort(t, i, j));
    add_bound(m->free_terms, m->free_dims, b.body, b.vars, sorts);
  }
  for (auto& tb : m->tubes) {
    add_dim(m->free_dims, tb.xi.lhs);
    add_dim(m->free_dims, tb.xi.rhs);
    add_bound(m->free_terms, m->free_dims, tb.body, {tb.y}, {Sort::Path});
  }
  normalize_names(m->free_terms);
  normalize_names(m->free_dims);
  return m;
}

TermP with_loc(const TermP& m, Loc loc) {
  auto c = std::make_shared<Term>(*m);
  c->loc = loc;
  return c;
}

namespace mk {
TermP var(std::string n) { return make(Tag::Var, {}, {}, {}, std::move(n)); }
TermP univ() { return make(Tag::Univ, {}, {}); }
TermP boolean() { return make(Tag::Bool, {}, {}); }
TermP tt() { return make(Tag::True, {}, {}); }
TermP ff() { return make(Tag::False, {}, {}); }
TermP unit() { return make(Tag::Unit, {}, {}); }
TermP star() { return make(Tag::Star, {}, {}); }
TermP voidty() { return make(Tag::Void, {}, {}); }
TermP pi(std::string x, TermP a, TermP b) {
  return make(Tag::Pi, {}, {{{}, std::move(a)}, {{std::move(x)}, std::move(b)}});
}
TermP arrow(TermP a, TermP b) { return pi(fresh_name("_"), std::move(a), std::move(b)); }
TermP lam(std::string x, TermP m) { return make(Tag::Lam, {}, {{{std::move(x)}, std::move(m)}}); }
TermP app(TermP f, TermP a) { return make(Tag::App, {}, {{{}, std::move(f)}, {{}, std::move(a)}}); }
TermP app(TermP f, std::initializer_list<TermP> as) {
  for (auto& a : as) f = app(f, a);
  return f;
}
TermP sigma(std::string x, TermP a, TermP b) {
  return make(Tag::Sigma, {}, {{{}, std::move(a)}, {{std::move(x)}, std::move(b)}});
}
TermP pair(TermP m, TermP n) { return make(Tag::Pair, {}, {{{}, std::move(m)}, {{}, std::move(n)}}); }
TermP fst(TermP m) { return make(Tag::Fst, {}, {{{}, std::move(m)}}); }
TermP snd(TermP m) { return make(Tag::Snd, {}, {{{}, std::move(m)}}); }
TermP path(std::string x, TermP a, TermP m0, TermP m1) {
  return make(Tag::PathTy, {}, {{{std::move(x)}, std::move(a)}, {{}, std::move(m0)}, {{}, std::move(m1)}});
}
TermP plam(std::string x, TermP m) { return make(Tag::PLam, {}, {{{std::move(x)}, std::move(m)}}); }
TermP papp(TermP m, Dim r) { return make(Tag::PApp, {std::move(r)}, {{{}, std::move(m)}}); }
TermP bridge(std::string x, TermP a, TermP m0, TermP m1) {
  return make(Tag::BridgeTy, {}, {{{std::move(x)}, std::move(a)}, {{}, std::move(m0)}, {{}, std::move(m1)}});
}
TermP blam(std::string x, TermP m) { return make(Tag::BLam, {}, {{{std::move(x)}, std::move(m)}}); }
TermP bapp(TermP m, Dim r) { return make(Tag::BApp, {std::move(r)}, {{{}, std::move(m)}}); }
TermP gelty(Dim r, TermP a, TermP b, std::string x, std::string y, TermP rel) {
  return make(Tag::GelTy, {std::move(r)},
              {{{}, std::move(a)}, {{}, std::move(b)}, {{std::move(x), std::move(y)}, std::move(rel)}});
}
TermP gel(Dim r, TermP m, TermP n, TermP p) {
  return make(Tag::GelIntro, {std::move(r)}, {{{}, std::move(m)}, {{}, std::move(n)}, {{}, std::move(p)}});
}
TermP ungel(std::string x, TermP m) { return make(Tag::Ungel, {}, {{{std::move(x)}, std::move(m)}}); }
TermP extent(Dim r, TermP m, std::string a, TermP n, std::string a1, TermP p, std::string qa,
             std::string qa1, std::string qc, TermP q) {
  return make(Tag::Extent, {std::move(r)},
              {{{}, std::move(m)},
               {{std::move(a)}, std::move(n)},
               {{std::move(a1)}, std::move(p)},
               {{std::move(qa), std::move(qa1), std::move(qc)}, std::move(q)}});
}
TermP hcom(TermP a, Dim r, Dim s, TermP m, std::vector<Tube> tubes) {
  return make(Tag::Hcom, {std::move(r), std::move(s)}, {{{}, std::move(a)}, {{}, std::move(m)}},
              std::move(tubes));
}
TermP coe(std::string y, TermP a, Dim r, Dim s, TermP m) {
  return make(Tag::Coe, {std::move(r), std::move(s)}, {{{std::move(y)}, std::move(a)}, {{}, std::move(m)}});
}
TermP com(std::string y, TermP a, Dim r, Dim s, TermP m, std::vector<Tube> tubes) {
  return make(Tag::Com, {std::move(r), std::move(s)}, {{{std::move(y)}, std::move(a)}, {{}, std::move(m)}},
              std::move(tubes));
}
TermP ite(std::string b, TermP motive, TermP m, TermP n1, TermP n2) {
  return make(Tag::If, {},
              {{{std::move(b)}, std::move(motive)}, {{}, std::move(m)}, {{}, std::move(n1)}, {{}, std::move(n2)}});
}
TermP void_elim(std::string b, TermP motive, TermP m) {
  return make(Tag::VoidElim, {}, {{{std::move(b)}, std::move(motive)}, {{}, std::move(m)}});
}
TermP the(TermP a, TermP m) { return make(Tag::The, {}, {{{}, std::move(a)}, {{}, std::move(m)}}); }
TermP vty(Dim r, TermP a, TermP b, TermP e) {
  return make(Tag::VTy, {std::move(r)}, {{{}, std::move(a)}, {{}, std::move(b)}, {{}, std::move(e)}});
}
TermP vin(Dim r, TermP m, TermP n) {
  return make(Tag::Vin, {std::move(r)}, {{{}, std::move(m)}, {{}, std::move(n)}});
}
TermP vproj(Dim r, TermP m, TermP f) {
  return make(Tag::Vproj, {std::move(r)}, {{{}, std::move(m)}, {{}, std::move(f)}});
}
Tube tube(Constraint xi, std::string y, TermP body) { return {std::move(xi), std::move(y), std::move(body)}; }
}  // namespace mk

std::string fresh_name(const std::string& base) {
  static std::atomic<unsigned long> counter{0};
  std::string stem = base.substr(0, base.find('#'));
  if (stem.empty()) stem = "v";
  return stem + "#" + std::to_string(++counter);
}

namespace {

struct Substituter {
  // Names free in some image; binders with these names must be renamed.
  std::set<std::string> image_names;

  bool touches(const Term& m, const Env& env) const {
    if (env.empty()) return false;
    auto check = [&](const std::vector<std::string>& names) {
      if (names.size() < env.size()) {
        for (auto& n : names)
          if (env.count(n)) return true;
      } else {
        for (auto& [k, _] : env)
          if (std::binary_search(names.begin(), names.end(), k)) return true;
      }
      return false;
    };
    return check(m.free_terms) || check(m.free_dims);
  }

  Dim dim(const Dim& d, const Env& env) const {
    if (!d.is_var()) return d;
    auto it = env.find(d.name);
    if (it == env.end()) return d;
    if (auto* r = std::get_if<Dim>(&it->second)) return *r;
    return d;
  }

  Constraint constraint(const Constraint& c, const Env& env) const {
    return {c.sort, dim(c.lhs, env), dim(c.rhs, env)};
  }

  // Extends env for going under binders vars of the given sorts.
  Env under(const Env& env, std::vector<std::string>& vars, const std::vector<Sort>& sorts) {
    Env inner = env;
    for (auto& v : vars) inner.erase(v);
    for (size_t i = 0; i < vars.size(); ++i) {
      if (!image_names.count(vars[i])) continue;
      std::string nv = fresh_name(vars[i]);
      inner[vars[i]] = sorts[i] == Sort::Term ? Image{mk::var(nv)} : Image{Dim::var(nv)};
      image_names.insert(nv);
      vars[i] = nv;
    }
    return inner;
  }

  TermP go(const TermP& m, const Env& env) {
    if (!m || !touches(*m, env)) return m;
    if (m->tag == Tag::Var) {
      auto it = env.find(m->name);
      if (it != env.end())
        if (auto* t = std::get_if<TermP>(&it->second)) return *t;
      return m;
    }
    std::vector<Dim> dims;
    for (auto& d : m->dims) dims.push_back(dim(d, env));
    std::vector<Bound> args;
    for (size_t i = 0; i < m->args.size(); ++i) {
      Bound b = m->args[i];
      if (b.vars.empty()) {
        b.body = go(b.body, env);
      } else {
        std::vector<Sort> sorts;
        for (size_t j = 0; j < b.vars.size(); ++j) sorts.push_back(binder_sort(m->tag, i, j));
        Env inner = under(env, b.vars, sorts);
        b.body = go(b.body, inner);
      }
      args.push_back(std::move(b));
    }
    std::vector<Tube> tubes;
    for (auto& tb : m->tubes) {
      Tube t2{constraint(tb.xi, env), tb.y, nullptr};
      std::vector<std::string> vs{tb.y};
      Env inner = under(env, vs, {Sort::Path});
      t2.y = vs[0];
      t2.body = go(tb.body, inner);
      tubes.push_back(std::move(t2));
    }
    return make(m->tag, std::move(dims), std::move(args), std::move(tubes), m->name, m->loc);
  }
};

Substituter make_substituter(const Env& env) {
  Substituter s;
  for (auto& [k, img] : env) {
    if (auto* t = std::get_if<TermP>(&img)) {
      s.image_names.insert((*t)->free_terms.begin(), (*t)->free_terms.end());
      s.image_names.insert((*t)->free_dims.begin(), (*t)->free_dims.end());
    } else {
      auto& d = std::get<Dim>(img);
      if (d.is_var()) s.image_names.insert(d.name);
    }
  }
  return s;
}

}  // namespace

TermP substitute(const TermP& m, const Env& env) {
  if (env.empty()) return m;
  Substituter s = make_substituter(env);
  return s.go(m, env);
}

Constraint subst_constraint(const Constraint& c, const Env& env) {
  Substituter s;
  return s.constraint(c, env);
}

TermP subst1(const TermP& m, const std::string& x, const TermP& n) { return substitute(m, {{x, n}}); }
TermP dsubst(const TermP& m, const Dim& r, const std::string& x) { return substitute(m, {{x, r}}); }
TermP bsubst(const TermP& m, const Dim& r, const std::string& x) { return substitute(m, {{x, r}}); }

TermP subst_dims(const TermP& m, const DimSubst& psi) {
  Env env;
  for (auto& [k, v] : psi.bridge_map) env[k] = v;
  for (auto& [k, v] : psi.path_map) env[k] = v;
  return substitute(m, env);
}

TermP instantiate(const Bound& b, const std::vector<Image>& images) {
  Env env;
  for (size_t i = 0; i < b.vars.size() && i < images.size(); ++i) env[b.vars[i]] = images[i];
  return substitute(b.body, env);
}

namespace {

struct Alpha {
  std::vector<std::string> left, right;

  // Binding depth of a name, or -1 when free.
  static int level(const std::vector<std::string>& stack, const std::string& n) {
    for (size_t i = stack.size(); i-- > 0;)
      if (stack[i] == n) return static_cast<int>(i);
    return -1;
  }

  bool name(const std::string& a, const std::string& b) const {
    int la = level(left, a), lb = level(right, b);
    if (la != lb) return false;
    return la >= 0 || a == b;
  }

  bool dim(const Dim& a, const Dim& b) const {
    if (a.kind != b.kind) return false;
    return !a.is_var() || name(a.name, b.name);
  }

  bool bound(const std::vector<std::string>& va, const TermP& a, const std::vector<std::string>& vb,
             const TermP& b) {
    if (va.size() != vb.size()) return false;
    if (!a || !b) return !a && !b;
    left.insert(left.end(), va.begin(), va.end());
    right.insert(right.end(), vb.begin(), vb.end());
    bool ok = eq(a, b);
    left.resize(left.size() - va.size());
    right.resize(right.size() - vb.size());
    return ok;
  }

  bool eq(const TermP& a, const TermP& b) {
    if (a == b && left == right) return true;
    if (a->tag != b->tag) return false;
    if (a->tag == Tag::Var) return name(a->name, b->name);
    if (a->dims.size() != b->dims.size() || a->args.size() != b->args.size() ||
        a->tubes.size() != b->tubes.size())
      return false;
    for (size_t i = 0; i < a->dims.size(); ++i)
      if (!dim(a->dims[i], b->dims[i])) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!bound(a->args[i].vars, a->args[i].body, b->args[i].vars, b->args[i].body)) return false;
    for (size_t i = 0; i < a->tubes.size(); ++i) {
      auto& ta = a->tubes[i];
      auto& tb = b->tubes[i];
      // Between two constants the sort of a constraint is not observable.
      bool closed = ta.xi.lhs.is_const() && ta.xi.rhs.is_const();
      if ((!closed && ta.xi.sort != tb.xi.sort) || !dim(ta.xi.lhs, tb.xi.lhs) || !dim(ta.xi.rhs, tb.xi.rhs))
        return false;
      if (!bound({ta.y}, ta.body, {tb.y}, tb.body)) return false;
    }
    return true;
  }
};

}  // namespace

bool alpha_equal(const TermP& a, const TermP& b) {
  if (!a || !b) return !a && !b;
  Alpha al;
  return al.eq(a, b);
}

TypingCtx ctx_apart(const TypingCtx& gamma, const Dim& r) {
  if (!r.is_var()) return gamma;
  for (size_t i = gamma.size(); i-- > 0;) {
    auto& e = gamma[i];
    if (e.kind == CtxEntry::Kind::Marker && e.marker == r)
      return TypingCtx(gamma.begin(), gamma.begin() + static_cast<long>(i));
  }
  return gamma;
}

const CtxEntry* ctx_lookup(const TypingCtx& gamma, const std::string& n) {
  for (size_t i = gamma.size(); i-- > 0;)
    if (gamma[i].kind == CtxEntry::Kind::Hyp && gamma[i].name == n) return &gamma[i];
  return nullptr;
}

}  // namespace ptt
