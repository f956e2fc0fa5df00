// S-expression reader, term parser and declaration parser for .ptt files.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptt/term.hpp"

namespace ptt {

struct SExpr {
  enum class Kind { Atom, String, List };
  Kind kind = Kind::Atom;
  bool bracket = false;  // list written with [ ]
  std::string text;
  std::vector<SExpr> items;
  Loc loc;

  bool is_atom(const char* s) const { return kind == Kind::Atom && text == s; }
  bool is_list() const { return kind == Kind::List; }
};

struct ParseError : std::runtime_error {
  Loc loc;
  ParseError(const std::string& msg, Loc l)
      : std::runtime_error(std::to_string(l.line) + ":" + std::to_string(l.col) + ": " + msg), loc(l) {}
};

std::vector<SExpr> read_sexprs(const std::string& src);

// Dimension names in scope while parsing; needed only to sort constraints.
using DimScope = std::map<std::string, Sort>;

TermP parse_term(const SExpr& e, const DimScope& scope = {});
TermP parse_term(const std::string& src, const DimScope& scope = {});
Constraint parse_constraint(const SExpr& e, const DimScope& scope);

// Context entries of an open judgment.
struct CtxDecl {
  enum class Kind { BDim, PDim, BVar, BMark, Face, Hyp };
  Kind kind;
  std::string name;
  TermP type;
  Dim dim;
  Constraint xi;
};

struct JudgmentForm {
  enum class Kind { Type, TypeEq, Elem, ElemEq };
  Kind kind = Kind::Type;
  TermP a, b;  // types
  TermP m, n;  // elements
};

struct Decl {
  enum class Kind { Def, Postulate, Eq, Neq, Normalize, Judge, Reject, Import };
  Kind kind;
  std::string name;
  Loc loc;
  TermP type;  // unset for import, whose name is the imported path
  TermP lhs;  // def body, eq/neq lhs, normalize input
  TermP rhs;  // eq/neq rhs, normalize expectation
  std::vector<CtxDecl> ctx;
  JudgmentForm judgment;
  std::string expect_rule;  // reject only, optional
};

std::vector<Decl> parse_decls(const std::string& src);

// Reserved words that cannot be used as variable names.
bool is_keyword(const std::string& s);

}  // namespace ptt
