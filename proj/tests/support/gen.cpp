#include "gen.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "ptt/print.hpp"

namespace ptt::testing {

namespace {

GenScope with_term(GenScope s, const std::string& n) {
  s.terms.push_back(n);
  return s;
}
GenScope with_bridge(GenScope s, const std::string& n) {
  s.bridge.push_back(n);
  return s;
}
GenScope with_path(GenScope s, const std::string& n) {
  s.path.push_back(n);
  return s;
}

}  // namespace

std::string TermGen::name(const char* pool) {
  std::string p(pool);
  return std::string(1, p[pick(p.size())]);
}

Dim TermGen::bdim(const GenScope& s) {
  size_t k = pick(s.bridge.size() + 2);
  if (k < 2) return Dim::constant(k == 1);
  return Dim::var(s.bridge[k - 2]);
}

Dim TermGen::pdim(const GenScope& s) {
  size_t k = pick(s.path.size() + 2);
  if (k < 2) return Dim::constant(k == 1);
  return Dim::var(s.path[k - 2]);
}

TermP TermGen::leaf(const GenScope& s) {
  switch (pick(7)) {
    case 0: return mk::tt();
    case 1: return mk::ff();
    case 2: return mk::star();
    case 3:
    case 4:
    case 5: return mk::var(s.terms[pick(s.terms.size())]);
    default: return mk::boolean();
  }
}

std::vector<Tube> TermGen::tubes(const GenScope& s, int depth) {
  std::vector<Tube> ts;
  size_t n = pick(3);
  for (size_t k = 0; k < n; ++k) {
    Constraint xi = coin(0.5) ? Constraint::bridge(bdim(s), coin(0.5)) : Constraint::path(pdim(s), pdim(s));
    std::string y = name("kl");
    ts.push_back(mk::tube(xi, y, term(with_path(s, y), depth + 1)));
  }
  return ts;
}

TermP TermGen::type(const GenScope& s, int depth) {
  if (depth >= max_depth_) return coin(0.5) ? mk::boolean() : mk::unit();
  int d = depth + 1;
  switch (pick(12)) {
    case 0: return mk::boolean();
    case 1: return mk::unit();
    case 2: return mk::voidty();
    case 3: return mk::univ();
    case 4: {
      std::string a = name("ab");
      return mk::pi(a, type(s, d), type(with_term(s, a), d));
    }
    case 5: {
      std::string a = name("ab");
      return mk::sigma(a, type(s, d), type(with_term(s, a), d));
    }
    case 6: {
      std::string z = name("ik");
      return mk::path(z, type(with_path(s, z), d), term(s, d), term(s, d));
    }
    case 7: {
      std::string z = name("xz");
      return mk::bridge(z, type(with_bridge(s, z), d), term(s, d), term(s, d));
    }
    case 8:
    case 9: {
      std::string a = name("ab"), b = name("cd");
      return mk::gelty(bdim(s), type(s, d), type(s, d), a, b, term(with_term(with_term(s, a), b), d));
    }
    case 10: return mk::vty(pdim(s), type(s, d), type(s, d), term(s, d));
    default: return mk::the(mk::univ(), type(s, d));
  }
}

TermP TermGen::term(const GenScope& s, int depth) {
  if (depth >= max_depth_) return leaf(s);
  int d = depth + 1;
  switch (pick(26)) {
    case 0:
    case 1: return leaf(s);
    case 2: {
      std::string a = name("ab");
      return mk::lam(a, term(with_term(s, a), d));
    }
    case 3: {
      std::string a = name("ab");
      return mk::app(mk::lam(a, term(with_term(s, a), d)), term(s, d));
    }
    case 4: return mk::app(term(s, d), term(s, d));
    case 5: return mk::pair(term(s, d), term(s, d));
    case 6: return coin(0.5) ? mk::fst(term(s, d)) : mk::snd(term(s, d));
    case 7: {
      std::string z = name("ik");
      return mk::plam(z, term(with_path(s, z), d));
    }
    case 8: {
      std::string z = name("ik");
      return mk::papp(coin(0.6) ? mk::plam(z, term(with_path(s, z), d)) : term(s, d), pdim(s));
    }
    case 9: {
      std::string z = name("xz");
      return mk::blam(z, term(with_bridge(s, z), d));
    }
    case 10: {
      std::string z = name("xz");
      return mk::bapp(coin(0.6) ? mk::blam(z, term(with_bridge(s, z), d)) : term(s, d), bdim(s));
    }
    case 11: return type(s, depth);
    case 12: return mk::gel(bdim(s), term(s, d), term(s, d), term(s, d));
    case 13: {
      std::string z = name("xz");
      GenScope in = with_bridge(s, z);
      TermP body = coin(0.5) ? mk::gel(Dim::var(z), term(s, d), term(s, d), term(s, d)) : term(in, d);
      return mk::ungel(z, body);
    }
    case 14: {
      std::string a = name("ab"), a1 = name("cd"), c = name("ce");
      if (a1 == a) a1 = a + "1";
      if (c == a || c == a1) c = "c2";
      GenScope q = with_term(with_term(with_term(s, a), a1), c);
      return mk::extent(bdim(s), term(s, d), a, term(with_term(s, a), d), a1, term(with_term(s, a1), d), a, a1, c,
                        term(q, d));
    }
    case 15:
    case 16: return mk::hcom(type(s, d), pdim(s), pdim(s), term(s, d), tubes(s, d));
    case 17:
    case 18: {
      std::string y = name("kl");
      return mk::coe(y, type(with_path(s, y), d), pdim(s), pdim(s), term(s, d));
    }
    case 19: {
      std::string y = name("kl");
      return mk::com(y, type(with_path(s, y), d), pdim(s), pdim(s), term(s, d), tubes(s, d));
    }
    case 20: {
      std::string b = name("ab");
      TermP scrut = coin(0.6) ? (coin(0.5) ? mk::tt() : mk::ff()) : term(s, d);
      return mk::ite(b, coin(0.5) ? type(with_term(s, b), d) : nullptr, scrut, term(s, d), term(s, d));
    }
    case 21: return mk::void_elim(name("ab"), nullptr, term(s, d));
    case 22: return mk::the(type(s, d), term(s, d));
    case 23: return mk::vin(pdim(s), term(s, d), term(s, d));
    case 24: {
      Dim r = pdim(s);
      TermP v = coin(0.5) ? mk::vin(r, term(s, d), term(s, d)) : term(s, d);
      return mk::vproj(r, v, term(s, d));
    }
    default: return make(Tag::Fcom, {pdim(s), pdim(s)}, {{{}, term(s, d)}}, tubes(s, d));
  }
}

namespace {

bool steps(const TermP& m, const StepOptions& o) { return step(m, o).kind == StepResult::Kind::Stepped; }

using Premise = std::function<bool(const Term&, const StepOptions&)>;

bool kan_law_hcom(const Term& m, const StepOptions& o) {
  if (!o.kan_laws) return false;
  if (m.dims[0] == m.dims[1]) return true;
  return std::any_of(m.tubes.begin(), m.tubes.end(), [](const Tube& t) { return t.xi.lhs == t.xi.rhs; });
}

bool some_tube_true(const Term& m) {
  for (auto& t : m.tubes)
    if (t.xi.lhs == t.xi.rhs) return true;
  return false;
}

// hcom at a type former: the type is already that former and no Kan law
// takes precedence.
Premise hcom_at(Tag t, std::function<bool(const Term&)> extra = nullptr) {
  return [t, extra](const Term& m, const StepOptions&) {
    if (m.tag != Tag::Hcom || m.arg(0)->tag != t) return false;
    return !extra || extra(m);
  };
}

Premise coe_at(Tag t, std::function<bool(const Term&)> extra = nullptr) {
  return [t, extra](const Term& m, const StepOptions&) {
    if (m.tag != Tag::Coe || m.arg(0)->tag != t) return false;
    return !extra || extra(m);
  };
}

bool var_dim(const Term& ty) { return ty.dims[0].is_var(); }

Premise const_dim(Tag t, Dim::Kind k) {
  return [t, k](const Term& m, const StepOptions&) { return m.tag == t && m.dims[0].kind == k; };
}

bool boundary_fires(const Term& m, const StepOptions& o, Tag lam) {
  if (m.arg(0)->tag == lam || !m.dims[0].is_const() || !o.boundary) return false;
  StepResult s = step(m.arg(0), o);
  if (s.kind != StepResult::Kind::Stuck) return false;
  return o.boundary(m.arg(0), m.tag == Tag::BApp, m.dims[0].kind == Dim::Kind::One) != nullptr;
}

const std::vector<std::pair<std::string, Premise>>& premises() {
  using K = Dim::Kind;
  static const std::vector<std::pair<std::string, Premise>> table = {
      {"delta",
       [](const Term& m, const StepOptions& o) {
         if (m.tag != Tag::Var || !o.globals) return false;
         auto* e = o.globals->find(m.name);
         return e && e->value;
       }},
      {"the", [](const Term& m, const StepOptions&) { return m.tag == Tag::The; }},
      {"app-beta", [](const Term& m, const StepOptions&) { return m.tag == Tag::App && m.arg(0)->tag == Tag::Lam; }},
      {"app-head",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::App && m.arg(0)->tag != Tag::Lam && steps(m.arg(0), o);
       }},
      {"fst-beta", [](const Term& m, const StepOptions&) { return m.tag == Tag::Fst && m.arg(0)->tag == Tag::Pair; }},
      {"fst-head",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::Fst && m.arg(0)->tag != Tag::Pair && steps(m.arg(0), o);
       }},
      {"snd-beta", [](const Term& m, const StepOptions&) { return m.tag == Tag::Snd && m.arg(0)->tag == Tag::Pair; }},
      {"snd-head",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::Snd && m.arg(0)->tag != Tag::Pair && steps(m.arg(0), o);
       }},
      {"papp-beta",
       [](const Term& m, const StepOptions&) { return m.tag == Tag::PApp && m.arg(0)->tag == Tag::PLam; }},
      {"papp-head",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::PApp && m.arg(0)->tag != Tag::PLam && steps(m.arg(0), o);
       }},
      {"papp-boundary",
       [](const Term& m, const StepOptions& o) { return m.tag == Tag::PApp && boundary_fires(m, o, Tag::PLam); }},
      {"bapp-beta",
       [](const Term& m, const StepOptions&) { return m.tag == Tag::BApp && m.arg(0)->tag == Tag::BLam; }},
      {"bapp-head",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::BApp && m.arg(0)->tag != Tag::BLam && steps(m.arg(0), o);
       }},
      {"bapp-boundary",
       [](const Term& m, const StepOptions& o) { return m.tag == Tag::BApp && boundary_fires(m, o, Tag::BLam); }},
      {"if-true", [](const Term& m, const StepOptions&) { return m.tag == Tag::If && m.arg(1)->tag == Tag::True; }},
      {"if-false", [](const Term& m, const StepOptions&) { return m.tag == Tag::If && m.arg(1)->tag == Tag::False; }},
      {"if-head",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::If && m.arg(1)->tag != Tag::True && m.arg(1)->tag != Tag::False && steps(m.arg(1), o);
       }},
      {"void-elim-head",
       [](const Term& m, const StepOptions& o) { return m.tag == Tag::VoidElim && steps(m.arg(1), o); }},
      {"vty-0", const_dim(Tag::VTy, K::Zero)},
      {"vty-1", const_dim(Tag::VTy, K::One)},
      {"vin-0", const_dim(Tag::Vin, K::Zero)},
      {"vin-1", const_dim(Tag::Vin, K::One)},
      {"vproj-0", const_dim(Tag::Vproj, K::Zero)},
      {"vproj-1", const_dim(Tag::Vproj, K::One)},
      {"vproj-beta",
       [](const Term& m, const StepOptions&) {
         return m.tag == Tag::Vproj && m.dims[0].is_var() && m.arg(0)->tag == Tag::Vin &&
                m.arg(0)->dims[0] == m.dims[0];
       }},
      {"vproj-head",
       [](const Term& m, const StepOptions& o) {
         if (m.tag != Tag::Vproj || !m.dims[0].is_var()) return false;
         if (m.arg(0)->tag == Tag::Vin && m.arg(0)->dims[0] == m.dims[0]) return false;
         return steps(m.arg(0), o);
       }},
      {"extent-0", const_dim(Tag::Extent, K::Zero)},
      {"extent-1", const_dim(Tag::Extent, K::One)},
      {"extent-var",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::Extent && m.dims[0].is_var() && (!o.capture_ok || o.capture_ok(m.arg(0), m.dims[0].name));
       }},
      {"gel-0", const_dim(Tag::GelTy, K::Zero)},
      {"gel-1", const_dim(Tag::GelTy, K::One)},
      {"gelintro-0", const_dim(Tag::GelIntro, K::Zero)},
      {"gelintro-1", const_dim(Tag::GelIntro, K::One)},
      {"ungel-beta",
       [](const Term& m, const StepOptions&) {
         return m.tag == Tag::Ungel && m.arg(0)->tag == Tag::GelIntro && m.arg(0)->dims[0].mentions(m.bvar(0));
       }},
      {"ungel-body",
       [](const Term& m, const StepOptions& o) {
         if (m.tag != Tag::Ungel) return false;
         if (m.arg(0)->tag == Tag::GelIntro && m.arg(0)->dims[0].mentions(m.bvar(0))) return false;
         return steps(m.arg(0), o);
       }},
      {"com", [](const Term& m, const StepOptions&) { return m.tag == Tag::Com; }},
      {"hcom-refl", [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::Hcom && o.kan_laws && m.dims[0] == m.dims[1];
       }},
      {"hcom-face", [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::Hcom && o.kan_laws && m.dims[0] != m.dims[1] && some_tube_true(m);
       }},
      {"hcom-type",
       [](const Term& m, const StepOptions& o) { return m.tag == Tag::Hcom && !kan_law_hcom(m, o) && steps(m.arg(0), o); }},
      {"coe-refl",
       [](const Term& m, const StepOptions& o) { return m.tag == Tag::Coe && o.kan_laws && m.dims[0] == m.dims[1]; }},
      {"coe-type",
       [](const Term& m, const StepOptions& o) {
         return m.tag == Tag::Coe && !(o.kan_laws && m.dims[0] == m.dims[1]) && steps(m.arg(0), o);
       }},
  };
  return table;
}

// Type-former cases; the Kan laws, when enabled, are checked first and make
// these inapplicable.
const std::vector<std::pair<std::string, Premise>>& kan_premises() {
  auto same = [](const Term& m) { return m.dims[0] == m.dims[1]; };
  auto gel_var = [](const Term& m) { return var_dim(*m.arg(0)); };
  static const std::vector<std::pair<std::string, Premise>> table = {
      {"hcom-pi", hcom_at(Tag::Pi)},
      {"hcom-sigma", hcom_at(Tag::Sigma)},
      {"hcom-path", hcom_at(Tag::PathTy)},
      {"hcom-bridge", hcom_at(Tag::BridgeTy)},
      {"hcom-gel", hcom_at(Tag::GelTy, gel_var)},
      {"hcom-bool", hcom_at(Tag::Bool)},
      {"hcom-unit", hcom_at(Tag::Unit)},
      {"hcom-void", hcom_at(Tag::Void)},
      {"hcom-univ", hcom_at(Tag::Univ, [same](const Term& m) { return same(m) || some_tube_true(m); })},
      {"hcom-v",
       hcom_at(Tag::VTy, [same, gel_var](const Term& m) { return gel_var(m) && (same(m) || some_tube_true(m)); })},
      {"coe-pi", coe_at(Tag::Pi)},
      {"coe-sigma", coe_at(Tag::Sigma)},
      {"coe-path", coe_at(Tag::PathTy)},
      {"coe-bridge", coe_at(Tag::BridgeTy)},
      {"coe-gel", coe_at(Tag::GelTy, gel_var)},
      {"coe-bool", coe_at(Tag::Bool)},
      {"coe-unit", coe_at(Tag::Unit)},
      {"coe-void", coe_at(Tag::Void)},
      {"coe-univ", coe_at(Tag::Univ)},
      {"coe-v", coe_at(Tag::VTy, [same, gel_var](const Term& m) { return gel_var(m) && same(m); })},
  };
  return table;
}

}  // namespace

std::vector<std::string> premises_holding(const TermP& m, const StepOptions& o) {
  std::vector<std::string> out;
  for (auto& [rule, p] : premises())
    if (p(*m, o)) out.push_back(rule);
  bool law = (m->tag == Tag::Hcom && kan_law_hcom(*m, o)) ||
             (m->tag == Tag::Coe && o.kan_laws && m->dims[0] == m->dims[1]);
  if (!law)
    for (auto& [rule, p] : kan_premises())
      if (p(*m, o)) out.push_back(rule);
  return out;
}

namespace {

bool dims_subset(const TermP& after, const TermP& before) {
  return std::includes(before->free_dims.begin(), before->free_dims.end(), after->free_dims.begin(),
                       after->free_dims.end());
}

}  // namespace

DeterminismReport check_determinism(uint64_t seed, size_t n, size_t trace_len) {
  DeterminismReport rep;
  TermGen gen(seed);
  StepOptions o;
  auto violation = [&](const std::string& what, const TermP& m) {
    ++rep.violations;
    if (rep.examples.size() < 5) rep.examples.push_back(what + ": " + show(m));
  };
  for (size_t k = 0; k < n; ++k) {
    TermP m = gen.term();
    ++rep.terms;
    for (size_t s = 0; s <= trace_len; ++s) {
      ++rep.checked;
      auto rules = premises_holding(m, o);
      StepResult r = step(m, o);
      if (rules.size() > 1) violation("several rules (" + rules[0] + ", " + rules[1] + ")", m);
      if (is_value(m) && (!rules.empty() || r.kind == StepResult::Kind::Stepped)) violation("value steps", m);
      if (r.kind == StepResult::Kind::Stepped) {
        if (rules.size() == 1 && rules[0] != r.rule) violation("took " + r.rule + " but premises of " + rules[0] + " hold", m);
        if (rules.empty()) violation("took " + r.rule + " with no premise holding", m);
        if (!dims_subset(r.term, m)) violation("free dimensions grew", m);
        m = r.term;
      } else {
        if (!rules.empty()) violation("premises of " + rules[0] + " hold but no step", m);
        break;
      }
    }
  }
  return rep;
}

}  // namespace ptt::testing
