#include <gtest/gtest.h>

#include "gen.hpp"
#include "goldens.hpp"
#include "ptt/parser.hpp"
#include "ptt/print.hpp"

using namespace ptt;
namespace pt = ptt::testing;

namespace {

TermP P(const std::string& s) { return parse_term(s, pt::golden_scope()); }

TermP value_of(const std::string& s) {
  StepOptions o;
  EvalResult r = eval(P(s), 10000, o);
  EXPECT_EQ(r.status, EvalResult::Status::Value) << s << ": " << r.reason;
  return r.term;
}

class Golden : public ::testing::TestWithParam<pt::StepGolden> {};

}  // namespace

TEST_P(Golden, OneStep) {
  auto out = pt::run_golden(GetParam());
  EXPECT_TRUE(out.ok) << GetParam().input << ": " << out.detail;
}

// The restated premises single out the same rule as the stepper.
TEST_P(Golden, PremiseOracleAgrees) {
  const auto& g = GetParam();
  StepOptions o;
  o.globals = &pt::golden_globals();
  o.kan_laws = g.kan_laws;
  if (g.boundary) o.boundary = [](const TermP&, bool, bool one) { return mk::var(one ? "e1" : "e0"); };
  auto rules = pt::premises_holding(P(g.input), o);
  ASSERT_EQ(rules.size(), 1u) << g.input;
  EXPECT_EQ(rules[0], g.rule);
}

INSTANTIATE_TEST_SUITE_P(Rules, Golden, ::testing::ValuesIn(pt::step_goldens()),
                         [](const ::testing::TestParamInfo<pt::StepGolden>& i) {
                           std::string n = std::to_string(i.index) + "_" + i.param.rule;
                           for (auto& c : n)
                             if (!isalnum(static_cast<unsigned char>(c))) c = '_';
                           return n;
                         });

TEST(Step, GoldensCoverCatalog) {
  std::set<std::string> covered;
  for (auto& g : pt::step_goldens()) covered.insert(g.rule);
  for (auto& [group, names] : rule_catalog())
    for (auto& n : names) EXPECT_TRUE(covered.count(n)) << group << "/" << n;
}

TEST(Step, ValuesAndStuckTerms) {
  EXPECT_EQ(step(P("(blam [z] m)")).kind, StepResult::Kind::Value);
  EXPECT_EQ(step(P("(Gel x bool unit [a b unit])")).kind, StepResult::Kind::Value);
  EXPECT_EQ(step(P("(gel x m n p)")).kind, StepResult::Kind::Value);
  StepResult f = step(P("(fcom 0 1 true)"));
  EXPECT_EQ(f.kind, StepResult::Kind::Stuck);
  EXPECT_NE(f.reason.find("unsupported-fcom"), std::string::npos);
  StepResult u = step(P("(hcom U 0 1 bool)"));
  EXPECT_EQ(u.kind, StepResult::Kind::Stuck);
  EXPECT_NE(u.reason.find("unsupported-fcom"), std::string::npos);
  EXPECT_EQ(step(P("(ungel [z] m)")).kind, StepResult::Kind::Stuck);
  EXPECT_EQ(step(P("(bapp q x)")).kind, StepResult::Kind::Stuck);
}

TEST(Step, CaptureGuardBlocksExtent) {
  StepOptions o;
  o.capture_ok = [](const TermP&, const std::string&) { return false; };
  StepResult r = step(P("(extent x (bapp q x) [a a] [b b] [a b c c])"), o);
  EXPECT_EQ(r.kind, StepResult::Kind::Stuck);
  EXPECT_EQ(step(P("(extent 0 m [a a] [b b] [a b c c])"), o).kind, StepResult::Kind::Stepped);
}

TEST(Eval, Examples) {
  EXPECT_EQ(value_of("(fst (pair true false))")->tag, Tag::True);
  // F at the Gel type of a relation, then ungel.
  TermP v = value_of(
      "(ungel [x] (((lam [X] (lam [a] a)) (Gel x bool unit [a b (path bool a true)]))"
      " (gel x true star (plam [_] true))))");
  EXPECT_TRUE(alpha_equal(v, P("(plam [_] true)")));
}

TEST(Eval, ExtentAtZeroMatchesLeftBranch) {
  StepOptions o;
  EvalResult r = eval(P("(bapp (blam [x] (extent x (bapp (blam [z] true) x) [a (if a false true)] [a a] [a b d d])) 0)"),
                      1000, o, 100);
  ASSERT_EQ(r.status, EvalResult::Status::Value);
  EXPECT_EQ(r.term->tag, Tag::False);
  ASSERT_FALSE(r.trace.rules.empty());
  EXPECT_EQ(r.trace.rules[0], "bapp-beta");
  EXPECT_EQ(r.trace.rules[1], "extent-0");
}

TEST(Eval, FuelAndTrace) {
  Globals g;
  g.add("loop", mk::boolean(), mk::var("loop"));
  StepOptions o;
  o.globals = &g;
  EvalResult r = eval(mk::var("loop"), 50, o, 10);
  EXPECT_EQ(r.status, EvalResult::Status::Diverged);
  EXPECT_TRUE(r.trace.truncated);
  std::string t = render_trace(r.trace, 5);
  EXPECT_NE(t.find("truncated"), std::string::npos);
  EvalResult s = eval(P("(if m true false)"));
  EXPECT_EQ(s.status, EvalResult::Status::Stuck);
}

TEST(ExpandCom, NoTubes) {
  TermP a = P("(papp T k)");
  TermP e = expand_com("k", a, Dim::zero(), Dim::one(), mk::var("m"), {});
  EXPECT_TRUE(alpha_equal(e, P("(hcom (papp T 1) 0 1 (coe [k] (papp T k) 0 1 m))")));
}

TEST(ExpandCom, OneTube) {
  TermP a = P("(papp T k)");
  std::vector<Tube> ts{mk::tube(Constraint::path(Dim::var("i"), Dim::zero()), "l", mk::var("n"))};
  TermP e = expand_com("k", a, Dim::zero(), Dim::var("j"), mk::var("m"), ts);
  EXPECT_TRUE(alpha_equal(
      e, P("(hcom (papp T j) 0 j (coe [k] (papp T k) 0 j m) (tube (= i 0) [l (coe [k] (papp T k) l j n)]))")));
}

TEST(ExpandCom, ReflexiveEvaluatesToCap) {
  StepOptions o;
  EvalResult r = eval(P("(com [k] bool 0 0 true)"), 100, o);
  ASSERT_EQ(r.status, EvalResult::Status::Value);
  EXPECT_EQ(r.term->tag, Tag::True);
}

TEST(Laws, GelEndpoints) {
  for (const char* a : {"bool", "unit", "(-> bool bool)"}) {
    std::string g = std::string("(Gel 0 ") + a + " void [u v unit])";
    EXPECT_TRUE(alpha_equal(value_of(g), value_of(a)));
    std::string g1 = std::string("(Gel 1 void ") + a + " [u v unit])";
    EXPECT_TRUE(alpha_equal(value_of(g1), value_of(a)));
  }
  EXPECT_EQ(value_of("(gel 0 (if true false true) star star)")->tag, Tag::False);
  EXPECT_EQ(value_of("(gel 1 star (fst (pair true star)) star)")->tag, Tag::True);
}

TEST(Laws, GelBeta) {
  EXPECT_TRUE(alpha_equal(value_of("(ungel [x] (gel x true false (pair (snd (pair star true)) star)))"),
                          value_of("(pair (snd (pair star true)) star)")));
}

TEST(Laws, BridgeHcomBoundary) {
  // The bridge produced by hcom at a bridge type meets the endpoints.
  TermP h = value_of("(hcom (bridge [z] bool true false) 0 1 (blam [z] (if [_] bool true true false)))");
  ASSERT_EQ(h->tag, Tag::BLam);
  StepOptions o;
  EXPECT_EQ(eval(bsubst(instantiate(h->args[0], {Dim::var("w")}), Dim::zero(), "w"), 1000, o).term->tag, Tag::True);
}

TEST(Determinism, RandomTerms) {
  auto rep = pt::check_determinism(1234, 3000);
  EXPECT_EQ(rep.violations, 0u) << (rep.examples.empty() ? "" : rep.examples[0]);
  EXPECT_EQ(rep.terms, 3000u);
}
