#include "ptt/print.hpp"

#include <sstream>

namespace ptt {

namespace {

void out(std::ostream& os, const TermP& m);

void tubes(std::ostream& os, const Term& m) {
  for (auto& t : m.tubes) {
    os << " (tube " << show(t.xi) << " [" << t.y << " ";
    out(os, t.body);
    os << "])";
  }
}

void bound(std::ostream& os, const Bound& b) {
  os << "[";
  for (auto& v : b.vars) os << v << " ";
  out(os, b.body);
  os << "]";
}

void binders(std::ostream& os, const Bound& b) {
  os << "[";
  for (size_t i = 0; i < b.vars.size(); ++i) os << (i ? " " : "") << b.vars[i];
  os << "]";
}

void out(std::ostream& os, const TermP& m) {
  if (!m) {
    os << "?";
    return;
  }
  auto a = [&](size_t i) {
    os << " ";
    out(os, m->arg(i));
  };
  auto d = [&](size_t i) { os << " " << m->dims[i].str(); };
  switch (m->tag) {
    case Tag::Var: os << m->name; return;
    case Tag::Univ:
    case Tag::Bool:
    case Tag::True:
    case Tag::False:
    case Tag::Unit:
    case Tag::Star:
    case Tag::Void: os << tag_name(m->tag); return;
    case Tag::Pi:
      if (!m->arg(1)->has_free_term(m->bvar(1))) {
        os << "(->";
        a(0);
        a(1);
        os << ")";
        return;
      }
      os << "(pi [" << m->bvar(1) << " ";
      out(os, m->arg(0));
      os << "]";
      a(1);
      os << ")";
      return;
    case Tag::Sigma:
      if (!m->arg(1)->has_free_term(m->bvar(1))) {
        os << "(*";
        a(0);
        a(1);
        os << ")";
        return;
      }
      os << "(sigma [" << m->bvar(1) << " ";
      out(os, m->arg(0));
      os << "]";
      a(1);
      os << ")";
      return;
    case Tag::App: {
      std::vector<TermP> spine;
      TermP h = m;
      while (h->tag == Tag::App) {
        spine.push_back(h->arg(1));
        h = h->arg(0);
      }
      // A head printed as a bare keyword needs the explicit form.
      bool atom_head = h->args.empty() && h->tag != Tag::Var;
      os << (atom_head ? "(app " : "(");
      out(os, h);
      for (size_t i = spine.size(); i-- > 0;) {
        os << " ";
        out(os, spine[i]);
      }
      os << ")";
      return;
    }
    case Tag::Lam:
    case Tag::PLam:
    case Tag::BLam:
    case Tag::Ungel:
      os << "(" << tag_name(m->tag) << " ";
      binders(os, m->args[0]);
      a(0);
      os << ")";
      return;
    case Tag::PathTy:
    case Tag::BridgeTy:
      os << "(" << tag_name(m->tag) << " ";
      binders(os, m->args[0]);
      a(0);
      a(1);
      a(2);
      os << ")";
      return;
    case Tag::PApp:
    case Tag::BApp:
      os << "(" << tag_name(m->tag);
      a(0);
      d(0);
      os << ")";
      return;
    case Tag::GelTy:
      os << "(Gel";
      d(0);
      a(0);
      a(1);
      os << " ";
      bound(os, m->args[2]);
      os << ")";
      return;
    case Tag::Extent:
      os << "(extent";
      d(0);
      a(0);
      for (size_t i = 1; i < m->args.size(); ++i) {
        os << " ";
        bound(os, m->args[i]);
      }
      os << ")";
      return;
    case Tag::Hcom:
      os << "(hcom";
      a(0);
      d(0);
      d(1);
      a(1);
      tubes(os, *m);
      os << ")";
      return;
    case Tag::Fcom:
      os << "(fcom";
      d(0);
      d(1);
      a(0);
      tubes(os, *m);
      os << ")";
      return;
    case Tag::Coe:
    case Tag::Com:
      os << "(" << tag_name(m->tag) << " ";
      binders(os, m->args[0]);
      a(0);
      d(0);
      d(1);
      a(1);
      tubes(os, *m);
      os << ")";
      return;
    case Tag::If:
    case Tag::VoidElim:
      os << "(" << tag_name(m->tag);
      if (m->arg(0)) {
        os << " ";
        binders(os, m->args[0]);
        a(0);
      }
      for (size_t i = 1; i < m->args.size(); ++i) a(i);
      os << ")";
      return;
    default:
      os << "(" << tag_name(m->tag);
      for (size_t i = 0; i < m->dims.size(); ++i) d(i);
      for (size_t i = 0; i < m->args.size(); ++i) a(i);
      os << ")";
      return;
  }
}

}  // namespace

std::string show(const TermP& m) {
  std::ostringstream os;
  out(os, m);
  return os.str();
}

std::string show(const Constraint& c) { return "(= " + c.lhs.str() + " " + c.rhs.str() + ")"; }

std::string show(const TypingCtx& gamma) {
  std::string s;
  for (auto& e : gamma) {
    if (!s.empty()) s += ", ";
    if (e.kind == CtxEntry::Kind::Marker)
      s += "<" + e.marker.str() + ">";
    else
      s += e.name + " : " + show(e.type);
  }
  return s.empty() ? "." : s;
}

}  // namespace ptt
