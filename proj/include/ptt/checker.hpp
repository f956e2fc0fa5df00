// Bidirectional type checker and file-level elaboration.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ptt/conversion.hpp"
#include "ptt/parser.hpp"

namespace ptt {

// A rejected judgment: the rule that was attempted, the 1-based index of the
// premise that failed (0 for side conditions such as scoping) and where.
struct CheckError : std::runtime_error {
  std::string rule;
  int premise = 0;
  Loc loc;
  std::string message;
  CheckError(std::string rule, int premise, Loc loc, std::string message);
};

// Judgments are checked in a ConvCx; constraints are applied eagerly through
// their most general unifier before a judgment reaches these functions.
void check_type(const ConvCx& cx, const TermP& a);
void check_elem(const ConvCx& cx, const TermP& m, const TermP& a);
TermP infer_type(const ConvCx& cx, const TermP& m);
void check_type_eq(const ConvCx& cx, const TermP& a, const TermP& b);
void check_elem_eq(const ConvCx& cx, const TermP& m, const TermP& n, const TermP& a);

// The equivalence type of A and B, built from contractible fibers.
TermP equiv_type(const TermP& a, const TermP& b);

// Outcome of one declaration.
struct DeclReport {
  std::string name;
  bool ok = false;
  std::string rule;
  int premise = 0;
  Loc loc;
  std::string message;
};

// Sequential elaboration of the declarations of one file.
class Elaborator {
 public:
  explicit Elaborator(size_t fuel = kDefaultFuel) : fuel_(fuel) {}
  // Continues from definitions loaded elsewhere, e.g. by check_file.
  Elaborator(Globals globals, size_t fuel) : globals_(std::move(globals)), fuel_(fuel) {}
  DeclReport check_decl(const Decl& d);
  const Globals& globals() const { return globals_; }

 private:
  void run(const Decl& d);
  void judge(const Decl& d);
  Globals globals_;
  size_t fuel_;
};

struct FileReport {
  std::string path;
  bool parse_failed = false;
  std::string parse_message;
  Loc parse_loc;
  std::vector<DeclReport> decls;
  bool ok() const;
};

FileReport check_source(const std::string& src, const std::string& path, size_t fuel = kDefaultFuel,
                        Globals* globals_out = nullptr);
// Throws std::runtime_error if the file cannot be read.
FileReport check_file(const std::string& path, size_t fuel = kDefaultFuel, Globals* globals_out = nullptr);
std::string read_text_file(const std::string& path);

// "OK name" / "FAIL name: rule premise N at file:line:col: message" lines.
std::string render_text(const FileReport& r);
// One JSON object per line and declaration.
std::string render_json(const FileReport& r);

}  // namespace ptt
