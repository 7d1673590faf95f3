#include <catch_amalgamated.hpp>

#include <functional>

#include "stratrew/engine.hpp"
#include "stratrew/multistrat.hpp"
#include "support.hpp"
#include "ttt_oracle.hpp"

using namespace stratrew;
using testing::module;
using testing::printed;
using testing::printedList;
using testing::strategy;
using testing::term;

using Set = std::set<std::string>;

namespace {

std::vector<std::string> run(const char* mod, const char* subject,
                             std::vector<const char*> strats, GlobalStrategy g) {
  auto m = module(mod);
  StrategyEngine eng(m);
  std::vector<StratPtr> ss;
  for (const char* s : strats) ss.push_back(strategy(*m, s));
  MultiStrategy ms(eng, ss, g);
  return printedList(m->sig, ms.run(term(*m, subject)));
}

Set asSet(const std::vector<std::string>& v) { return Set(v.begin(), v.end()); }

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Number of maximal interleavings, counted without merging equal contexts.
std::size_t countPaths(MultiStrategy& ms, const MSContext& ctx) {
  auto next = ms.successors(ctx);
  if (next.empty()) return 1;
  std::size_t n = 0;
  for (const MSTransition& t : next) n += countPaths(ms, t.next);
  return n;
}

}  // namespace

TEST_CASE("interleaving the list sequences", "[multistrat]") {
  CHECK(run("LLIST", "nil", {"seq(a b)", "seq(c d)"}, GlobalStrategy::turns()) ==
        std::vector<std::string>{"a c b d"});
  CHECK(asSet(run("LLIST", "nil", {"seq(a b)", "seq(c d)"}, GlobalStrategy::freec())) ==
        Set{"a b c d", "a c b d", "a c d b", "c a b d", "c a d b", "c d a b"});
  CHECK(run("LLIST", "a b", {"seq(c d)", "pop"}, GlobalStrategy::freec(0)) ==
        std::vector<std::string>{"a b"});
}

TEST_CASE("a single context step", "[multistrat]") {
  auto m = module("LLIST");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, "seq(a b)"), strategy(*m, "seq(c d)")},
                   GlobalStrategy::turns());
  MSContext c0 = ms.initial(term(*m, "nil"));
  auto s0 = ms.msStep(c0, 0);
  REQUIRE(s0.size() == 1);
  CHECK(printTerm(m->sig, s0[0].next.subject) == "a");
  CHECK(s0[0].next.threads[0] != nullptr);

  MultiStrategy done(eng, {strategy(*m, "idle")}, GlobalStrategy::turns());
  MSContext d0 = done.initial(term(*m, "nil"));
  // A thread that can only finish has no step to take.
  CHECK(done.msStep(d0, 0).empty());
  CHECK(done.run(term(*m, "nil")).size() == 1);
}

TEST_CASE("a choice offers both branches", "[multistrat]") {
  auto m = module("LLIST");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, "top(put[L <- a]) | top(put[L <- b])")},
                   GlobalStrategy::turns());
  auto next = ms.msStep(ms.initial(term(*m, "nil")), 0);
  std::vector<Term> subjects;
  for (const auto& t : next) subjects.push_back(t.next.subject);
  CHECK(printed(m->sig, subjects) == Set{"a", "b"});
}

TEST_CASE("one terminating thread by turns is srewrite", "[multistrat]") {
  for (const char* s : {"seq(a b c)", "pop !", "top(pop) ; top(pop)", "(pop | idle) ; pop"}) {
    auto m = module("LLIST");
    StrategyEngine eng(m);
    Set direct = printed(m->sig, eng.srewrite(term(*m, "a b c"), strategy(*m, s)));
    INFO(s);
    CHECK(asSet(run("LLIST", "a b c", {s}, GlobalStrategy::turns())) == direct);
  }
}

TEST_CASE("free concurrency yields every interleaving", "[multistrat]") {
  auto m = module("LLIST");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, "seq(a)"), strategy(*m, "seq(b c)"), strategy(*m, "seq(d e)")},
                   GlobalStrategy::freec());
  std::size_t expected = factorial(5) / (factorial(1) * factorial(2) * factorial(2));
  CHECK(countPaths(ms, ms.initial(term(*m, "nil"))) == expected);
  CHECK(ms.run(term(*m, "nil")).size() == expected);

  MultiStrategy two(eng, {strategy(*m, "seq(a b)"), strategy(*m, "seq(c d)")},
                    GlobalStrategy::freec());
  CHECK(countPaths(two, two.initial(term(*m, "nil"))) == 6);
}

TEST_CASE("bounded free concurrency", "[multistrat]") {
  auto one = asSet(run("LLIST", "nil", {"seq(a b)", "seq(c d)"}, GlobalStrategy::freec(1)));
  CHECK(one == Set{"a", "c"});
  auto two = asSet(run("LLIST", "nil", {"seq(a b)", "seq(c d)"}, GlobalStrategy::freec(2)));
  CHECK(two == Set{"a b", "a c", "c a", "c d"});
}

TEST_CASE("custom global strategies", "[multistrat]") {
  auto custom = [](const char* g) {
    return asSet(run("LLIST", "nil", {"seq(a b)", "seq(c d)"},
                     GlobalStrategy::customOf(parseGamma(g))));
  };
  CHECK(custom("turns") == Set{"a c b d"});
  CHECK(custom("freec") == asSet(run("LLIST", "nil", {"seq(a b)", "seq(c d)"},
                                     GlobalStrategy::freec())));
  CHECK(custom("step(0) ; step(1) ; freec").size() == 2);
  CHECK(custom("step(1) ! ; step(0) !") == Set{"c d a b"});
  CHECK(custom("fail").empty());
  CHECK(custom("idle") == Set{"nil"});
  CHECK(printGamma(*parseGamma("(step(0) ; step(1)) * ; freec(2)")) ==
        printGamma(*parseGamma(printGamma(*parseGamma("(step(0) ; step(1)) * ; freec(2)")))));
}

TEST_CASE("turn labels in the game", "[multistrat]") {
  auto m = module("TICTACTOE-STRAT");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, "perfectX"), strategy(*m, "randomO")},
                   GlobalStrategy::turns());
  auto first = ms.successors(ms.initial(term(*m, "initial")));
  REQUIRE_FALSE(first.empty());
  for (const auto& t : first) {
    CHECK(t.thread == 0);
    CHECK(t.label == Symbol("perfect-step"));
    for (const auto& u : ms.successors(t.next)) {
      CHECK(u.thread == 1);
      CHECK(u.label == Symbol("putO"));
      // Every thread sees the stepped subject.
      CHECK(u.next.subject == eng.rewriter().reduce(u.next.subject));
    }
  }
}

TEST_CASE("game results match a direct model of the players", "[multistrat][game]") {
  auto m = module("TICTACTOE-STRAT");
  StrategyEngine eng(m);
  using Game = testing::TicTacToe;
  auto grids = [&](const char* s0, const char* s1) {
    MultiStrategy ms(eng, {strategy(*m, s0), strategy(*m, s1)}, GlobalStrategy::turns());
    std::set<Game::Grid> out;
    for (const Term& t : ms.run(term(*m, "initial"))) {
      Game::Grid g;
      g.fill('?');
      for (const Term& cell : t.args())
        g[(cell.arg(0).value() - 1) * 3 + (cell.arg(1).value() - 1)] = cell.arg(2).head().str()[0];
      out.insert(g);
    }
    return out;
  };
  CHECK(grids("perfectX", "randomO") == Game::finalGrids({'X', true}, {'O', false}));
  CHECK(grids("perfectX", "perfectO") == Game::finalGrids({'X', true}, {'O', true}));
  CHECK(grids("randomO", "perfectX") == Game::finalGrids({'O', false}, {'X', true}));
}
