#include <gtest/gtest.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptt/corpus.hpp"

using namespace ptt;

namespace {

const std::string kCorpus = PTT_CORPUS_DIR;
const std::string kBin = PTT_BIN;

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI with stdout captured and stderr merged into it.
CliRun cli(const std::string& args) {
  CliRun r;
  std::string cmd = kBin + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpus(const std::string& f) { return kCorpus + "/" + f; }

}  // namespace

TEST(Manifest, Parses) {
  auto es = parse_manifest("# c\na.ptt all-ok core\nb.ptt fail:x,y stretch\n");
  ASSERT_EQ(es.size(), 2u);
  EXPECT_TRUE(es[0].all_ok);
  EXPECT_EQ(es[1].expected_fail, (std::set<std::string>{"x", "y"}));
  EXPECT_EQ(es[1].tier, "stretch");
  EXPECT_THROW(parse_manifest("a.ptt maybe core\n"), ParseError);
}

TEST(Corpus, CoreTierPasses) {
  CorpusReport r = run_corpus(corpus("manifest.txt"), false);
  EXPECT_TRUE(r.core_ok()) << render_corpus(r, false);
  for (auto& f : r.files) EXPECT_TRUE(f.passed) << f.entry.path << ": " << f.summary;
}

TEST(Corpus, StretchTierReported) {
  CorpusReport r = run_corpus(corpus("manifest.txt"), true);
  bool found = false;
  for (auto& f : r.files)
    if (f.entry.tier == "stretch") found = true;
  EXPECT_TRUE(found);
}

TEST(Corpus, PreludeUnderOneSecond) {
  auto t0 = std::chrono::steady_clock::now();
  FileReport r = check_file(corpus("prelude.ptt"));
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_TRUE(r.ok());
  EXPECT_LT(s, 1.0);
}

TEST(Corpus, WrongRoundTripIsRejected) {
  FileReport r = check_file(corpus("gel_link_neg.ptt"));
  EXPECT_TRUE(r.ok()) << render_text(r);
  bool found = false;
  for (auto& d : r.decls) found = found || d.name == "unlink-link-wrong";
  EXPECT_TRUE(found);
}

TEST(Corpus, CoverageTableListsEveryRule) {
  std::ifstream in(corpus("COVERAGE.md"));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  FileReport r = check_file(corpus("rules.ptt"));
  for (auto& d : r.decls) {
    auto slash = d.name.find('/');
    ASSERT_NE(slash, std::string::npos) << d.name;
    EXPECT_NE(text.find("| " + d.name.substr(0, slash) + " "), std::string::npos) << d.name;
  }
}

TEST(Cli, CheckPolyIdExitsZero) {
  CliRun r = cli("check " + corpus("poly_id.ptt"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("OK"), std::string::npos);
}

TEST(Cli, EvalPrintsValue) {
  CliRun r = cli("eval " + corpus("prelude.ptt") + " -e \"(fst (pair true false))\"");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "true\n");
}

TEST(Cli, BadDiagonalNamesBridgeE) {
  CliRun r = cli("check " + corpus("bad_diagonal.ptt"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("Bridge-E"), std::string::npos) << r.out;
}

TEST(Cli, ParseErrorExitsTwo) {
  std::string path = ::testing::TempDir() + "ptt_bad_syntax.ptt";
  std::ofstream(path) << "(def a bool\n";
  CliRun r = cli("check " + path);
  EXPECT_EQ(r.code, 2) << r.out;
  CliRun e = cli("eval " + corpus("prelude.ptt") + " -e \"(pair true\"");
  EXPECT_EQ(e.code, 2) << e.out;
}

TEST(Cli, JsonIsLineDelimitedAndStable) {
  CliRun a = cli("check --json " + corpus("gel_link.ptt"));
  CliRun b = cli("check --json " + corpus("gel_link.ptt"));
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  size_t n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("name"));
    EXPECT_TRUE(j.contains("status"));
    ++n;
  }
  EXPECT_GT(n, 5u);
}

TEST(Cli, TraceAndCorpus) {
  CliRun t = cli("trace " + corpus("prelude.ptt") + " -e \"(if (fst (pair true star)) false true)\"");
  EXPECT_EQ(t.code, 0) << t.out;
  EXPECT_NE(t.out.find("if-head"), std::string::npos) << t.out;
  CliRun c = cli("corpus " + corpus("manifest.txt") + " --tier core");
  EXPECT_EQ(c.code, 0) << c.out;
  CliRun s = cli("eval " + corpus("prelude.ptt") + " -e \"(if m true false)\"");
  EXPECT_EQ(s.code, 1);
}
