// ptt: check, evaluate and trace parametric cubical type theory files.
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "ptt/checker.hpp"
#include "ptt/corpus.hpp"
#include "ptt/print.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kParse = 2;

size_t default_fuel() {
  if (const char* env = std::getenv("PTT_FUEL")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed PTT_FUEL=" << env << "\n";
    }
  }
  return ptt::kDefaultFuel;
}

// Loads the definitions of a file for eval and trace. Returns an exit code
// when the file itself is not accepted.
std::optional<int> load(const std::string& path, size_t fuel, ptt::Globals& globals) {
  ptt::FileReport rep;
  try {
    rep = ptt::check_file(path, fuel, &globals);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kFailed;
  }
  if (rep.parse_failed) {
    std::cerr << ptt::render_text(rep);
    return kParse;
  }
  if (!rep.ok()) {
    std::cerr << ptt::render_text(rep);
    return kFailed;
  }
  return std::nullopt;
}

int run_eval(const std::string& path, const std::string& expr, size_t fuel, bool trace) {
  ptt::Globals globals;
  if (auto code = load(path, fuel, globals)) return *code;
  ptt::TermP m;
  try {
    m = ptt::parse_term(expr);
  } catch (const ptt::ParseError& e) {
    std::cerr << "-e:" << e.what() << "\n";
    return kParse;
  }
  ptt::ConvCx cx;
  cx.globals = &globals;
  cx.fuel = fuel;
  try {
    ptt::infer_type(cx, m);
  } catch (const ptt::CheckError& e) {
    std::cerr << "FAIL -e: " << e.rule << " premise " << e.premise << ": " << e.message << "\n";
    return kFailed;
  } catch (const ptt::DimError& e) {
    std::cerr << "FAIL -e: scope: " << e.what() << "\n";
    return kFailed;
  }
  ptt::StepOptions o;
  o.globals = &globals;
  constexpr size_t kTraceCap = 10000;
  ptt::EvalResult r = ptt::eval(m, fuel, o, trace ? kTraceCap : 0);
  if (trace) std::cout << ptt::render_trace(r.trace, kTraceCap);
  switch (r.status) {
    case ptt::EvalResult::Status::Value:
      if (!trace) std::cout << ptt::show(r.term) << "\n";
      return kOk;
    case ptt::EvalResult::Status::Stuck:
      std::cerr << "stuck: " << r.reason << "\n  at " << ptt::show(r.term) << "\n";
      return kFailed;
    case ptt::EvalResult::Status::Diverged:
      std::cerr << "diverged: " << r.reason << "\n";
      return kFailed;
  }
  return kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof checker and evaluator for parametric cubical type theory"};
  app.require_subcommand(1);
  size_t fuel = default_fuel();
  bool json = false;

  auto* check = app.add_subcommand("check", "Type-check files and report one line per declaration");
  std::vector<std::string> files;
  check->add_option("files", files, "Input .ptt files")->required()->check(CLI::ExistingFile);
  check->add_flag("--json", json, "Line-delimited JSON output");
  check->add_option("--fuel", fuel, "Reduction step budget");

  std::string expr;
  std::string file;
  auto* evalc = app.add_subcommand("eval", "Evaluate an expression in the scope of a file");
  evalc->add_option("file", file, "Input .ptt file")->required()->check(CLI::ExistingFile);
  evalc->add_option("-e,--expr", expr, "Expression")->required();
  evalc->add_option("--fuel", fuel, "Reduction step budget");

  auto* tracec = app.add_subcommand("trace", "Print the reduction trace of an expression");
  tracec->add_option("file", file, "Input .ptt file")->required()->check(CLI::ExistingFile);
  tracec->add_option("-e,--expr", expr, "Expression")->required();
  tracec->add_option("--fuel", fuel, "Reduction step budget");

  auto* corpus = app.add_subcommand("corpus", "Run a corpus manifest");
  std::string manifest;
  std::string tier = "all";
  corpus->add_option("manifest", manifest, "Manifest file")->required()->check(CLI::ExistingFile);
  corpus->add_option("--tier", tier, "core or all")->check(CLI::IsMember({"core", "all"}));
  corpus->add_flag("--json", json, "Line-delimited JSON output");
  corpus->add_option("--fuel", fuel, "Reduction step budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  if (check->parsed()) {
    int code = kOk;
    for (auto& f : files) {
      ptt::FileReport rep;
      try {
        rep = ptt::check_file(f, fuel);
      } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        code = std::max(code, kFailed);
        continue;
      }
      std::cout << (json ? ptt::render_json(rep) : ptt::render_text(rep));
      if (rep.parse_failed)
        code = kParse;
      else if (!rep.ok())
        code = std::max(code, kFailed);
    }
    return code;
  }
  if (evalc->parsed()) return run_eval(file, expr, fuel, false);
  if (tracec->parsed()) return run_eval(file, expr, fuel, true);
  if (corpus->parsed()) {
    ptt::CorpusReport rep;
    try {
      rep = ptt::run_corpus(manifest, tier == "all", fuel);
    } catch (const ptt::ParseError& e) {
      std::cerr << manifest << ":" << e.what() << "\n";
      return kParse;
    }
    std::cout << ptt::render_corpus(rep, json);
    return rep.core_ok() ? kOk : kFailed;
  }
  return kFailed;
}
