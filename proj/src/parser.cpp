#include "ptt/parser.hpp"

#include <cctype>
#include <set>

namespace ptt {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("-_'?!*+<>=/.@:%&^~").find(c) != std::string_view::npos;
}

class Reader {
 public:
  explicit Reader(const std::string& s) : src_(s) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    for (;;) {
      skip();
      if (pos_ >= src_.size()) break;
      out.push_back(read());
    }
    return out;
  }

 private:
  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  Loc here() const { return {line_, col_}; }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", here());
    Loc loc = here();
    char c = src_[pos_];
    if (c == '(' || c == '[') {
      char close = c == '(' ? ')' : ']';
      advance();
      SExpr e;
      e.kind = SExpr::Kind::List;
      e.bracket = c == '[';
      e.loc = loc;
      for (;;) {
        skip();
        if (pos_ >= src_.size()) throw ParseError(std::string("missing '") + close + "'", loc);
        if (src_[pos_] == close) {
          advance();
          return e;
        }
        if (src_[pos_] == ')' || src_[pos_] == ']')
          throw ParseError(std::string("mismatched '") + src_[pos_] + "'", here());
        e.items.push_back(read());
      }
    }
    if (c == ')' || c == ']') throw ParseError(std::string("unexpected '") + c + "'", loc);
    if (c == '"') {
      advance();
      SExpr e;
      e.kind = SExpr::Kind::String;
      e.loc = loc;
      while (pos_ < src_.size() && src_[pos_] != '"') e.text += advance();
      if (pos_ >= src_.size()) throw ParseError("unterminated string", loc);
      advance();
      return e;
    }
    SExpr e;
    e.loc = loc;
    while (pos_ < src_.size() && ident_char(src_[pos_])) e.text += advance();
    if (e.text.empty()) throw ParseError(std::string("unexpected character '") + c + "'", loc);
    return e;
  }
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "U",     "bool",  "true",   "false",  "unit",  "star",      "void", "pi",    "->",   "lam",
      "app",   "sigma", "*",      "pair",   "fst",   "snd",       "path", "plam",  "papp", "bridge",
      "blam",  "bapp",  "Gel",    "gel",    "ungel", "extent",    "hcom", "coe",   "com",  "fcom",
      "tube",  "if",    "void-elim", "the", "V",     "vin",       "vproj", "=",    "_"};
  return k;
}

[[noreturn]] void fail(const SExpr& e, const std::string& msg) { throw ParseError(msg, e.loc); }

class TermParser {
 public:
  explicit TermParser(DimScope scope) : scope_(std::move(scope)) {}

  TermP term(const SExpr& e) {
    TermP t = term_raw(e);
    return t->loc.line ? t : with_loc(t, e.loc);
  }

  Dim dim(const SExpr& e) {
    if (e.kind != SExpr::Kind::Atom) fail(e, "expected a dimension");
    if (e.text == "0") return Dim::zero();
    if (e.text == "1") return Dim::one();
    check_name(e);
    return Dim::var(e.text);
  }

  Constraint constraint(const SExpr& e) {
    if (!e.is_list() || e.bracket || e.items.size() != 3 || !e.items[0].is_atom("="))
      fail(e, "expected a constraint (= r s)");
    Dim l = dim(e.items[1]), r = dim(e.items[2]);
    auto sort_of = [&](const Dim& d, const SExpr& at) -> std::optional<Sort> {
      if (!d.is_var()) return std::nullopt;
      auto it = scope_.find(d.name);
      if (it == scope_.end()) fail(at, "unknown dimension " + d.name + " in constraint");
      return it->second;
    };
    auto sl = sort_of(l, e.items[1]), sr = sort_of(r, e.items[2]);
    if (sl && sr && *sl != *sr) fail(e, "constraint mixes bridge and path dimensions");
    Sort s = sl ? *sl : sr ? *sr : Sort::Path;
    if (s == Sort::Bridge) {
      if (l.is_const()) std::swap(l, r);
      if (r.is_var()) fail(e, "bridge constraints must have the form (= r 0) or (= r 1)");
      return Constraint::bridge(l, r.kind == Dim::Kind::One);
    }
    return Constraint::path(l, r);
  }

  DimScope& scope() { return scope_; }

 private:
  DimScope scope_;

  static void check_name(const SExpr& e) {
    if (e.kind != SExpr::Kind::Atom) fail(e, "expected a name");
    if (keywords().count(e.text) && e.text != "_") fail(e, "reserved word '" + e.text + "' used as a name");
    if (e.text == "0" || e.text == "1") fail(e, "dimension constant used as a name");
  }

  static std::string binder_name(const SExpr& e) {
    check_name(e);
    return e.text == "_" ? fresh_name("_") : e.text;
  }

  std::vector<std::string> names(const SExpr& e) {
    if (!e.is_list() || !e.bracket) fail(e, "expected a binder list [x ...]");
    std::vector<std::string> out;
    for (auto& i : e.items) out.push_back(binder_name(i));
    return out;
  }

  // Parses body with dimension binders of the given sort in scope.
  TermP under(const std::vector<std::string>& dims, Sort s, const SExpr& body) {
    DimScope saved = scope_;
    for (auto& d : dims) scope_[d] = s;
    TermP t = term(body);
    scope_ = saved;
    return t;
  }

  // A term binder that shadows a dimension name removes it from scope.
  TermP under_terms(const std::vector<std::string>& xs, const SExpr& body) {
    DimScope saved = scope_;
    for (auto& x : xs) scope_.erase(x);
    TermP t = term(body);
    scope_ = saved;
    return t;
  }

  // [x1 .. xn BODY]
  Bound bound(const SExpr& e, size_t n, const std::vector<Sort>& sorts) {
    if (!e.is_list() || !e.bracket || e.items.size() != n + 1)
      fail(e, "expected a binding form with " + std::to_string(n) + " name(s)");
    Bound b;
    for (size_t i = 0; i < n; ++i) b.vars.push_back(binder_name(e.items[i]));
    DimScope saved = scope_;
    for (size_t i = 0; i < n; ++i) {
      if (sorts[i] == Sort::Term)
        scope_.erase(b.vars[i]);
      else
        scope_[b.vars[i]] = sorts[i];
    }
    b.body = term(e.items[n]);
    scope_ = saved;
    return b;
  }

  Tube tube(const SExpr& e) {
    if (!e.is_list() || e.bracket || e.items.size() != 3 || !e.items[0].is_atom("tube"))
      fail(e, "expected (tube (= r s) [y N])");
    Constraint xi = constraint(e.items[1]);
    Bound b = bound(e.items[2], 1, {Sort::Path});
    return {xi, b.vars[0], b.body};
  }

  std::vector<Tube> tubes(const SExpr& e, size_t from) {
    std::vector<Tube> out;
    for (size_t i = from; i < e.items.size(); ++i) out.push_back(tube(e.items[i]));
    return out;
  }

  void arity(const SExpr& e, size_t n) {
    if (e.items.size() != n)
      fail(e, "'" + e.items[0].text + "' expects " + std::to_string(n - 1) + " argument(s)");
  }

  // Telescope binders [x y A] for pi/sigma.
  TermP telescope(const SExpr& e, Tag tag) {
    if (e.items.size() < 3) fail(e, "'" + e.items[0].text + "' needs binders and a body");
    struct Entry {
      std::string x;
      TermP a;
    };
    std::vector<Entry> entries;
    DimScope saved = scope_;
    for (size_t i = 1; i + 1 < e.items.size(); ++i) {
      auto& b = e.items[i];
      if (!b.is_list() || !b.bracket || b.items.size() < 2) fail(b, "expected a binder [x A]");
      TermP a = term(b.items.back());
      for (size_t j = 0; j + 1 < b.items.size(); ++j) {
        entries.push_back({binder_name(b.items[j]), a});
        scope_.erase(entries.back().x);
      }
    }
    TermP body = term(e.items.back());
    scope_ = saved;
    for (size_t i = entries.size(); i-- > 0;)
      body = tag == Tag::Pi ? mk::pi(entries[i].x, entries[i].a, body) : mk::sigma(entries[i].x, entries[i].a, body);
    return body;
  }

  TermP term_raw(const SExpr& e) {
    if (e.kind == SExpr::Kind::String) fail(e, "unexpected string");
    if (e.kind == SExpr::Kind::Atom) {
      const std::string& s = e.text;
      if (s == "U") return mk::univ();
      if (s == "bool") return mk::boolean();
      if (s == "true") return mk::tt();
      if (s == "false") return mk::ff();
      if (s == "unit") return mk::unit();
      if (s == "star") return mk::star();
      if (s == "void") return mk::voidty();
      if (s == "_") fail(e, "'_' cannot be used as a variable");
      check_name(e);
      return mk::var(s);
    }
    if (e.bracket) fail(e, "unexpected binder list");
    if (e.items.empty()) fail(e, "empty form");
    const SExpr& head = e.items[0];
    if (head.kind == SExpr::Kind::Atom && keywords().count(head.text)) return form(e, head.text);
    TermP f = term(head);
    if (e.items.size() < 2) fail(e, "application needs an argument");
    for (size_t i = 1; i < e.items.size(); ++i) f = mk::app(f, term(e.items[i]));
    return f;
  }

  TermP form(const SExpr& e, const std::string& k) {
    const auto& it = e.items;
    if (k == "pi") return telescope(e, Tag::Pi);
    if (k == "sigma") return telescope(e, Tag::Sigma);
    if (k == "->" || k == "*") {
      if (it.size() < 3) fail(e, "'" + k + "' needs at least two arguments");
      TermP r = term(it.back());
      for (size_t i = it.size() - 1; i-- > 1;)
        r = k == "->" ? mk::arrow(term(it[i]), r) : mk::sigma(fresh_name("_"), term(it[i]), r);
      return r;
    }
    if (k == "lam") {
      arity(e, 3);
      auto xs = names(it[1]);
      if (xs.empty()) fail(it[1], "lam needs at least one binder");
      TermP body = under_terms(xs, it[2]);
      for (size_t i = xs.size(); i-- > 0;) body = mk::lam(xs[i], body);
      return body;
    }
    if (k == "app") {
      if (it.size() < 3) fail(e, "app needs a function and arguments");
      TermP f = term(it[1]);
      for (size_t i = 2; i < it.size(); ++i) f = mk::app(f, term(it[i]));
      return f;
    }
    if (k == "pair") {
      arity(e, 3);
      return mk::pair(term(it[1]), term(it[2]));
    }
    if (k == "fst" || k == "snd") {
      arity(e, 2);
      return k == "fst" ? mk::fst(term(it[1])) : mk::snd(term(it[1]));
    }
    if (k == "path" || k == "bridge") {
      Sort s = k == "path" ? Sort::Path : Sort::Bridge;
      std::string x;
      TermP a;
      size_t base;
      if (it.size() == 5) {
        auto xs = names(it[1]);
        if (xs.size() != 1) fail(it[1], "expected one dimension binder");
        x = xs[0];
        a = under(xs, s, it[2]);
        base = 3;
      } else if (it.size() == 4) {
        x = fresh_name("_");
        a = term(it[1]);
        base = 2;
      } else {
        fail(e, "expected (" + k + " [x] A M0 M1) or (" + k + " A M0 M1)");
      }
      TermP m0 = term(it[base]), m1 = term(it[base + 1]);
      return s == Sort::Path ? mk::path(x, a, m0, m1) : mk::bridge(x, a, m0, m1);
    }
    if (k == "plam" || k == "blam" || k == "ungel") {
      arity(e, 3);
      auto xs = names(it[1]);
      if (xs.empty()) fail(it[1], "expected a dimension binder");
      Sort s = k == "plam" ? Sort::Path : Sort::Bridge;
      TermP body = under(xs, s, it[2]);
      if (k == "ungel") {
        if (xs.size() != 1) fail(it[1], "ungel binds exactly one dimension");
        return mk::ungel(xs[0], body);
      }
      for (size_t i = xs.size(); i-- > 0;) body = s == Sort::Path ? mk::plam(xs[i], body) : mk::blam(xs[i], body);
      return body;
    }
    if (k == "papp" || k == "bapp") {
      if (it.size() < 3) fail(e, "'" + k + "' needs a term and dimension(s)");
      TermP m = term(it[1]);
      for (size_t i = 2; i < it.size(); ++i) m = k == "papp" ? mk::papp(m, dim(it[i])) : mk::bapp(m, dim(it[i]));
      return m;
    }
    if (k == "Gel") {
      arity(e, 5);
      Dim r = dim(it[1]);
      TermP a = term(it[2]), b = term(it[3]);
      Bound rel = bound(it[4], 2, {Sort::Term, Sort::Term});
      return mk::gelty(r, a, b, rel.vars[0], rel.vars[1], rel.body);
    }
    if (k == "gel") {
      arity(e, 5);
      return mk::gel(dim(it[1]), term(it[2]), term(it[3]), term(it[4]));
    }
    if (k == "extent") {
      if (it.size() != 6 && it.size() != 8)
        fail(e, "expected (extent r M [a N] [a' P] [a a' c Q]) with an optional motive [x A] [x d B]");
      Dim r = dim(it[1]);
      std::vector<Bound> args;
      args.push_back({{}, term(it[2])});
      args.push_back(bound(it[3], 1, {Sort::Term}));
      args.push_back(bound(it[4], 1, {Sort::Term}));
      args.push_back(bound(it[5], 3, {Sort::Term, Sort::Term, Sort::Term}));
      if (it.size() == 8) {
        args.push_back(bound(it[6], 1, {Sort::Bridge}));
        args.push_back(bound(it[7], 2, {Sort::Bridge, Sort::Term}));
      }
      return make(Tag::Extent, {r}, std::move(args));
    }
    if (k == "hcom") {
      if (it.size() < 5) fail(e, "expected (hcom A r s M tube...)");
      return mk::hcom(term(it[1]), dim(it[2]), dim(it[3]), term(it[4]), tubes(e, 5));
    }
    if (k == "fcom") {
      if (it.size() < 4) fail(e, "expected (fcom r s M tube...)");
      return make(Tag::Fcom, {dim(it[1]), dim(it[2])}, {{{}, term(it[3])}}, tubes(e, 4));
    }
    if (k == "coe" || k == "com") {
      if (it.size() < 6 || (k == "coe" && it.size() != 6)) fail(e, "expected (" + k + " [y] A r s M" + (k == "com" ? " tube...)" : ")"));
      auto ys = names(it[1]);
      if (ys.size() != 1) fail(it[1], "expected one dimension binder");
      TermP a = under(ys, Sort::Path, it[2]);
      Dim r = dim(it[3]), s = dim(it[4]);
      TermP m = term(it[5]);
      if (k == "coe") return mk::coe(ys[0], a, r, s, m);
      return mk::com(ys[0], a, r, s, m, tubes(e, 6));
    }
    if (k == "if") {
      if (it.size() == 6) {
        auto bs = names(it[1]);
        if (bs.size() != 1) fail(it[1], "expected one binder");
        TermP motive = under_terms(bs, it[2]);
        return mk::ite(bs[0], motive, term(it[3]), term(it[4]), term(it[5]));
      }
      if (it.size() == 4) return mk::ite(fresh_name("_"), nullptr, term(it[1]), term(it[2]), term(it[3]));
      fail(e, "expected (if [b] A M N1 N2) or (if M N1 N2)");
    }
    if (k == "void-elim") {
      if (it.size() == 4) {
        auto bs = names(it[1]);
        if (bs.size() != 1) fail(it[1], "expected one binder");
        return mk::void_elim(bs[0], under_terms(bs, it[2]), term(it[3]));
      }
      if (it.size() == 2) return mk::void_elim(fresh_name("_"), nullptr, term(it[1]));
      fail(e, "expected (void-elim [b] A M) or (void-elim M)");
    }
    if (k == "the") {
      arity(e, 3);
      return mk::the(term(it[1]), term(it[2]));
    }
    if (k == "V") {
      arity(e, 5);
      return mk::vty(dim(it[1]), term(it[2]), term(it[3]), term(it[4]));
    }
    if (k == "vin" || k == "vproj") {
      arity(e, 4);
      return k == "vin" ? mk::vin(dim(it[1]), term(it[2]), term(it[3])) : mk::vproj(dim(it[1]), term(it[2]), term(it[3]));
    }
    fail(e, "'" + k + "' cannot start a term");
  }
};

std::string label(const SExpr& e, size_t& i, const char* kind) {
  if (e.items.size() > i && e.items[i].kind == SExpr::Kind::String) return e.items[i++].text;
  return std::string(kind) + "@" + std::to_string(e.loc.line);
}

JudgmentForm judgment(const SExpr& e, TermParser& p) {
  if (!e.is_list() || e.bracket || e.items.empty() || e.items[0].kind != SExpr::Kind::Atom)
    fail(e, "expected a judgment (type A), (type= A B), (: M A) or (= M N A)");
  const std::string& k = e.items[0].text;
  JudgmentForm j;
  auto need = [&](size_t n) {
    if (e.items.size() != n) fail(e, "malformed judgment");
  };
  if (k == "type") {
    need(2);
    j.kind = JudgmentForm::Kind::Type;
    j.a = p.term(e.items[1]);
  } else if (k == "type=") {
    need(3);
    j.kind = JudgmentForm::Kind::TypeEq;
    j.a = p.term(e.items[1]);
    j.b = p.term(e.items[2]);
  } else if (k == ":") {
    need(3);
    j.kind = JudgmentForm::Kind::Elem;
    j.m = p.term(e.items[1]);
    j.a = p.term(e.items[2]);
  } else if (k == "=") {
    need(4);
    j.kind = JudgmentForm::Kind::ElemEq;
    j.m = p.term(e.items[1]);
    j.n = p.term(e.items[2]);
    j.a = p.term(e.items[3]);
  } else {
    fail(e, "unknown judgment form '" + k + "'");
  }
  return j;
}

std::vector<CtxDecl> context(const SExpr& e, TermParser& p) {
  if (!e.is_list() || e.bracket) fail(e, "expected a context list ( [entry] ... )");
  std::vector<CtxDecl> out;
  for (auto& en : e.items) {
    if (!en.is_list() || !en.bracket || en.items.size() < 2) fail(en, "expected a context entry [x A]");
    bool hyp = !(en.items[0].is_atom("bdim") || en.items[0].is_atom("pdim") || en.items[0].is_atom("bvar") ||
                 en.items[0].is_atom("bmark") || en.items[0].is_atom("face"));
    if (!hyp && en.items.size() != 2) fail(en, "expected a context entry [x A]");
    auto& h = en.items[0];
    CtxDecl d{};
    if (h.is_atom("bdim") || h.is_atom("pdim") || h.is_atom("bvar")) {
      d.kind = h.is_atom("bdim") ? CtxDecl::Kind::BDim : h.is_atom("pdim") ? CtxDecl::Kind::PDim : CtxDecl::Kind::BVar;
      if (en.items[1].kind != SExpr::Kind::Atom) fail(en, "expected a dimension name");
      d.name = en.items[1].text;
      p.scope()[d.name] = d.kind == CtxDecl::Kind::PDim ? Sort::Path : Sort::Bridge;
    } else if (h.is_atom("bmark")) {
      d.kind = CtxDecl::Kind::BMark;
      d.dim = p.dim(en.items[1]);
    } else if (h.is_atom("face")) {
      d.kind = CtxDecl::Kind::Face;
      d.xi = p.constraint(en.items[1]);
    } else {
      // [x y A] declares x and y with the same type, left to right.
      TermP a = p.term(en.items.back());
      for (size_t i = 0; i + 1 < en.items.size(); ++i) {
        if (en.items[i].kind != SExpr::Kind::Atom) fail(en, "expected a hypothesis name");
        CtxDecl h1{};
        h1.kind = CtxDecl::Kind::Hyp;
        h1.name = en.items[i].text;
        h1.type = a;
        p.scope().erase(h1.name);
        out.push_back(std::move(h1));
      }
      continue;
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

std::vector<SExpr> read_sexprs(const std::string& src) { return Reader(src).all(); }

bool is_keyword(const std::string& s) { return keywords().count(s) != 0; }

TermP parse_term(const SExpr& e, const DimScope& scope) { return TermParser(scope).term(e); }

TermP parse_term(const std::string& src, const DimScope& scope) {
  auto es = read_sexprs(src);
  if (es.size() != 1) throw ParseError("expected exactly one term", es.empty() ? Loc{1, 1} : es[1].loc);
  return parse_term(es[0], scope);
}

Constraint parse_constraint(const SExpr& e, const DimScope& scope) { return TermParser(scope).constraint(e); }

std::vector<Decl> parse_decls(const std::string& src) {
  std::vector<Decl> out;
  for (auto& e : read_sexprs(src)) {
    if (!e.is_list() || e.bracket || e.items.empty() || e.items[0].kind != SExpr::Kind::Atom)
      fail(e, "expected a declaration");
    const std::string& k = e.items[0].text;
    TermParser p({});
    Decl d{};
    d.loc = e.loc;
    size_t i = 1;
    auto rest = [&](size_t n) {
      if (e.items.size() != i + n) fail(e, "malformed '" + k + "' declaration");
    };
    if (k == "def" || k == "postulate") {
      d.kind = k == "def" ? Decl::Kind::Def : Decl::Kind::Postulate;
      rest(k == "def" ? 3 : 2);
      if (e.items[1].kind != SExpr::Kind::Atom || is_keyword(e.items[1].text))
        fail(e.items[1], "expected a definition name");
      d.name = e.items[1].text;
      d.type = p.term(e.items[2]);
      if (d.kind == Decl::Kind::Def) d.lhs = p.term(e.items[3]);
    } else if (k == "eq" || k == "neq") {
      d.kind = k == "eq" ? Decl::Kind::Eq : Decl::Kind::Neq;
      d.name = label(e, i, k.c_str());
      rest(3);
      d.type = p.term(e.items[i]);
      d.lhs = p.term(e.items[i + 1]);
      d.rhs = p.term(e.items[i + 2]);
    } else if (k == "normalize") {
      d.kind = Decl::Kind::Normalize;
      d.name = label(e, i, "normalize");
      rest(2);
      d.lhs = p.term(e.items[i]);
      d.rhs = p.term(e.items[i + 1]);
    } else if (k == "judge" || k == "reject") {
      d.kind = k == "judge" ? Decl::Kind::Judge : Decl::Kind::Reject;
      d.name = label(e, i, k.c_str());
      if (e.items.size() < i + 2) fail(e, "malformed '" + k + "' declaration");
      d.ctx = context(e.items[i], p);
      d.judgment = judgment(e.items[i + 1], p);
      if (e.items.size() == i + 3) {
        if (k != "reject" || e.items[i + 2].kind != SExpr::Kind::String) fail(e, "unexpected trailing item");
        d.expect_rule = e.items[i + 2].text;
      } else if (e.items.size() != i + 2) {
        fail(e, "malformed '" + k + "' declaration");
      }
    } else if (k == "import") {
      d.kind = Decl::Kind::Import;
      rest(1);
      if (e.items[1].kind != SExpr::Kind::String) fail(e.items[1], "expected a quoted file path");
      d.name = e.items[1].text;
    } else {
      fail(e, "unknown declaration '" + k + "'");
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace ptt
