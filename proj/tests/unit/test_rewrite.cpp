#include <catch_amalgamated.hpp>

#include "stratrew/error.hpp"
#include "stratrew/kernel.hpp"
#include "stratrew/rewrite.hpp"
#include "support.hpp"

using namespace stratrew;
using testing::module;
using testing::printed;
using testing::term;

using Set = std::set<std::string>;

TEST_CASE("equational reduction", "[rewrite]") {
  auto l = module("LLIST-M");
  Rewriter rw(l);
  CHECK(printTerm(l->sig, rw.reduce(term(*l, "length(a b c)"))) == "3");
  CHECK(printTerm(l->sig, rw.reduce(term(*l, "length(nil)"))) == "0");
}

TEST_CASE("strat(1 0) leaves the list tail unevaluated", "[rewrite]") {
  auto m = module("LAZY-LIST");
  Rewriter rw(m);
  CHECK(printTerm(m->sig, rw.reduce(term(*m, "take(3, natsFrom(0))"))) ==
        "0 : take(2, natsFrom(0 + 1))");
}

TEST_CASE("owise equations", "[rewrite]") {
  auto m = module("TICTACTOE");
  Rewriter rw(m);
  CHECK(rw.reduce(term(*m, "hasHRow(X, empty)")) == term(*m, "false"));
  CHECK(rw.reduce(term(*m, "hasWon(X, initial)")) == term(*m, "false"));
  CHECK(rw.reduce(term(*m, "hasWon(O, [1, 2, O] [2, 2, O] [3, 2, O] [1, 1, X])")) ==
        term(*m, "true"));
  CHECK(printTerm(m->sig, rw.reduce(term(*m, "size(initial)"))) == "9");
}

TEST_CASE("reduction is a fixpoint", "[rewrite]") {
  auto m = module("TICTACTOE");
  Rewriter rw(m);
  Term once = rw.reduce(term(*m, "winningPos(X, [1, 1, X] [1, 2, X] [2, 2, -] initial)"));
  CHECK(rw.reduce(once) == once);
}

TEST_CASE("assignment conditions enumerate matches", "[rewrite]") {
  auto m = module("TICTACTOE");
  Rewriter rw(m);
  // O threatens both [1, 3] (column 3) and [3, 1] (row 3 in the other direction).
  Term g = term(*m,
                "[1, 1, O] [1, 2, O] [1, 3, -] [2, 1, O] [2, 2, X] [2, 3, X] [3, 1, -] "
                "[3, 2, X] [3, 3, -]");
  Subst s;
  s.bind(term(*m, "G:Grid"), g);
  Condition c = parseCondition(*m, "[I:Nat, J:Nat, -] R:Grid := winningPos(O, G:Grid)");
  Set cells;
  rw.forEachSolution(c, s, [&](const Subst& r) {
    cells.insert(printTerm(m->sig, *r.findByName(Symbol("I"))) + "," +
                 printTerm(m->sig, *r.findByName(Symbol("J"))));
    return false;
  });
  CHECK(cells == Set{"1,3", "3,1"});
  CHECK(rw.holds(Condition{}, s));
  CHECK_FALSE(rw.holds(parseCondition(*m, "0 = 1"), s));
}

TEST_CASE("rule application with extension matching", "[rewrite]") {
  auto l = module("LLIST-M");
  Rewriter rw(l);
  CHECK(printed(l->sig, rw.applyRule(term(*l, "a b c"), Symbol("pop"))) ==
        Set{"a b", "a c", "b c"});
  CHECK(printed(l->sig, rw.applyRule(term(*l, "a b"), Symbol("put"), {{Symbol("L"), term(*l, "d")}},
                                     true)) == Set{"a b d"});
  CHECK_THROWS_AS(rw.applyRule(term(*l, "a b"), Symbol("put")), InstantiationError);
}

TEST_CASE("one-step successors", "[rewrite]") {
  auto l = module("LLIST-M");
  Rewriter rl(l);
  CHECK(printed(l->sig, rl.applyAll(term(*l, "a b c"))) == Set{"a b", "a c", "b c"});
  CHECK(rl.applyAll(term(*l, "nil")).empty());
  auto f = module("FOO");
  Rewriter rf(f);
  CHECK(printed(f->sig, rf.applyAll(term(*f, "f(a, b)"))) == Set{"f(b, a)", "f(b, b)"});
}

TEST_CASE("frozen arguments block rule application", "[rewrite]") {
  auto m = module("LAZY-LIST-RLS");
  Rewriter rw(m);
  CHECK(printed(m->sig, rw.applyAll(term(*m, "0 : natsFrom(1)"))).empty());
  CHECK(printed(m->sig, rw.applyAll(term(*m, "take(0, natsFrom(1))"))) ==
        Set{"nil", "take(0, 1 : natsFrom(2))"});
}

TEST_CASE("bounded rewriting stops on non-terminating systems", "[rewrite]") {
  auto f = module("FOO");
  Rewriter rw(f);
  auto [t, steps] = rw.rewrite(term(*f, "f(a, b)"), 10);
  CHECK(steps == 10);
  (void)t;
  auto l = module("LLIST-M");
  Rewriter rl(l);
  auto [u, n] = rl.rewrite(term(*l, "a b c"));
  CHECK(u == term(*l, "nil"));
  CHECK(n == 3);
}
