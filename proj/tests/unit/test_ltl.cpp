#include <catch_amalgamated.hpp>

#include "ltl_oracle.hpp"
#include "stratrew/engine.hpp"
#include "stratrew/error.hpp"
#include "stratrew/modelcheck.hpp"
#include "support.hpp"

using namespace stratrew;
using testing::ExplicitKripke;
using testing::module;
using testing::strategy;
using testing::term;

namespace {

const Symbol p("p"), q("q");

// Chain 0 -> 1 -> 2 with 2 deadlocked; `labels` gives the states where p holds.
ExplicitKripke chain(std::vector<bool> pHolds) {
  ExplicitKripke k;
  k.edges = {{{1, "a"}}, {{2, "b"}}, {}};
  k.labels.resize(3);
  for (std::size_t i = 0; i < 3; ++i)
    if (pHolds[i]) k.labels[i].push_back(p);
  return k;
}

struct GameCheck {
  CheckResult result;
  std::vector<std::string> terms;  // states of prefix then cycle
  bool replays = false;
};

GameCheck checkGame(const char* formula, const char* s0, const char* s1) {
  auto m = module("TICTACTOE-CHECK");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, s0), strategy(*m, s1)}, GlobalStrategy::turns());
  MultiStrategyKripke k(ms, term(*m, "initial"));
  GameCheck g;
  g.result = modelCheck(k, parseFormula(*m, formula));
  if (!g.result.holds) {
    g.replays = testing::replay(k, g.result).has_value();
    for (const auto* part : {&g.result.prefix, &g.result.cycle})
      for (const LassoStep& s : *part) g.terms.push_back(printTerm(m->sig, k.context(s.state).subject));
  }
  return g;
}

}  // namespace

TEST_CASE("automaton of true accepts everything", "[ltl]") {
  Buchi b = ltlToBuchi(ltl::truth());
  REQUIRE_FALSE(b.initial.empty());
  for (const auto& s : b.states) {
    CHECK(s.accepting);
    CHECK(s.pos.empty());
    CHECK(s.neg.empty());
    CHECK_FALSE(s.next.empty());
  }
  CHECK(ltlToBuchi(ltl::falsity()).initial.empty());
}

TEST_CASE("always and until on chains", "[ltl]") {
  LtlPtr always = ltl::unary(LtlKind::Always, ltl::prop(p));
  for (auto labels : std::vector<std::vector<bool>>{{true, true, true}, {true, false, true},
                                                    {true, true, false}}) {
    ExplicitKripke k = chain(labels);
    bool expected = labels[0] && labels[1] && labels[2];
    CHECK(modelCheck(k, always).holds == expected);
  }
  LtlPtr until = ltl::binary(LtlKind::Until, ltl::prop(p), ltl::prop(q));
  ExplicitKripke k = chain({true, true, false});
  CHECK_FALSE(modelCheck(k, until).holds);
  k.labels[2].push_back(q);
  CHECK(modelCheck(k, until).holds);
  k.labels[1].clear();
  CHECK_FALSE(modelCheck(k, until).holds);
}

TEST_CASE("deadlocks stutter", "[ltl]") {
  ExplicitKripke k;
  k.edges = {{}};
  k.labels = {{p}};
  CHECK(modelCheck(k, ltl::unary(LtlKind::Always, ltl::prop(p))).holds);
  CHECK(modelCheck(k, ltl::unary(LtlKind::Next, ltl::unary(LtlKind::Next, ltl::prop(p)))).holds);
  k.labels = {{}};
  CheckResult r = modelCheck(k, ltl::unary(LtlKind::Always, ltl::prop(p)));
  REQUIRE_FALSE(r.holds);
  REQUIRE(r.cycle.size() == 1);
  CHECK(r.cycle[0].label == "deadlock");
  CHECK(r.prefix.empty());
}

TEST_CASE("fairness-like properties need cycles", "[ltl]") {
  // 0 <-> 1, p only in 1: every path visits 1 infinitely often.
  ExplicitKripke k;
  k.edges = {{{1, "go"}}, {{0, "back"}}};
  k.labels = {{}, {p}};
  LtlPtr gf = ltl::unary(LtlKind::Always, ltl::unary(LtlKind::Eventually, ltl::prop(p)));
  CHECK(modelCheck(k, gf).holds);
  k.edges[0].push_back({0, "stay"});
  CheckResult r = modelCheck(k, gf);
  REQUIRE_FALSE(r.holds);
  auto lasso = testing::replay(k, r);
  REQUIRE(lasso);
  CHECK_FALSE(testing::LassoSemantics(k, *lasso).eval(*gf, 0));
}

TEST_CASE("propositions over terms", "[ltl]") {
  auto m = module("TICTACTOE-CHECK");
  Rewriter rw(m);
  Term row = term(*m, "[1, 2, O] [2, 2, O] [3, 2, O] [1, 1, X] [2, 1, X]");
  CHECK(evalProp(rw, Symbol("Owins"), row));
  CHECK_FALSE(evalProp(rw, Symbol("Xwins"), row));
  CHECK_FALSE(evalProp(rw, Symbol("Xwins"), term(*m, "initial")));
  CHECK_THROWS_AS(evalProp(rw, Symbol("Nope"), row), PropositionError);

  ModuleRegistry reg;
  reg.load("fmod P is protecting BOOL . sort S . op a : -> S . op h : S -> Bool . prop always := true . prop stuck := h(@) . endfm");
  Rewriter prw(reg.share(Symbol("P")));
  CHECK(evalProp(prw, Symbol("always"), parseTerm(reg.get(Symbol("P")), "a")));
  CHECK_THROWS_AS(evalProp(prw, Symbol("stuck"), parseTerm(reg.get(Symbol("P")), "a")),
                  PropositionError);
}

TEST_CASE("the perfect player never loses", "[ltl][game]") {
  CHECK(checkGame("[] ~ Owins", "perfectX", "randomO").result.holds);
  CHECK(checkGame("[] ~ Owins", "randomO", "perfectX").result.holds);
  CHECK(checkGame("[] (~ Owins /\\ ~ Xwins)", "perfectX", "perfectO").result.holds);
}

TEST_CASE("the better player can lose", "[ltl][game]") {
  GameCheck g = checkGame("[] ~ Owins", "betterX", "randomO");
  REQUIRE_FALSE(g.result.holds);
  CHECK(g.replays);
  auto m = module("TICTACTOE-CHECK");
  Rewriter rw(m);
  CHECK(evalProp(rw, Symbol("Owins"), term(*m, g.terms.back())));
  for (const auto& s : g.result.prefix) CHECK(s.label.find(" does ") != std::string::npos);
}

TEST_CASE("the perfect player does not always win", "[ltl][game]") {
  GameCheck g = checkGame("<> Xwins", "perfectX", "randomO");
  REQUIRE_FALSE(g.result.holds);
  CHECK(g.replays);
  auto m = module("TICTACTOE-CHECK");
  Rewriter rw(m);
  Term last = term(*m, g.terms.back());
  // A draw: the board is full and nobody has a row.
  CHECK(g.terms.back().find('-') == std::string::npos);
  CHECK_FALSE(evalProp(rw, Symbol("Xwins"), last));
  CHECK_FALSE(evalProp(rw, Symbol("Owins"), last));
  REQUIRE(g.result.cycle.size() == 1);
  CHECK(g.result.cycle[0].label == "deadlock");
}

TEST_CASE("model checking honours the state budget", "[ltl]") {
  auto m = module("TICTACTOE-CHECK");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, "perfectX"), strategy(*m, "randomO")}, GlobalStrategy::turns());
  MultiStrategyKripke k(ms, term(*m, "initial"));
  CHECK_THROWS_AS(modelCheck(k, parseFormula(*m, "[] ~ Owins"), 100), SearchLimitError);
  CHECK(modelCheck(k, parseFormula(*m, "[] ~ Owins"), 100000).holds);
}
