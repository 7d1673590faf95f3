#include <catch_amalgamated.hpp>

#include <deque>
#include <random>

#include "stratrew/engine.hpp"
#include "stratrew/ext.hpp"
#include "support.hpp"

using namespace stratrew;
using testing::module;
using testing::strategy;
using testing::term;

using Set = std::set<std::string>;

namespace {

class StratGen {
 public:
  explicit StratGen(unsigned seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string listSubject() {
    int n = pick(10) == 0 ? 0 : 1 + pick(4);
    std::string s;
    for (int i = 0; i < n; ++i) s += std::string(i ? " " : "") + static_cast<char>('a' + pick(5));
    return n ? s : "nil";
  }

  // Strategy text over LLIST; `finite` forbids list growth so that
  // iterations have finite state spaces.
  std::string llist(int depth, bool finite) {
    static const char* shrinking[] = {"idle", "fail", "pop", "pop", "top(pop)", "match nil",
                                      "amatch a", "match L:Letter LS:List", "all", "all"};
    static const char* growing[] = {"top(put[L <- a])", "top(put[L <- b])", "seq(c)", "seq(d e)"};
    if (depth == 0 || pick(4) == 0) {
      if (!finite && pick(3) == 0) return growing[pick(4)];
      return shrinking[pick(10)];
    }
    auto sub = [&](bool f) { return llist(depth - 1, f); };
    switch (pick(10)) {
      case 0:
        return "(" + sub(finite) + " ; " + sub(finite) + ")";
      case 1:
        return "(" + sub(finite) + " | " + sub(finite) + ")";
      case 2:
        return "(" + sub(true) + ") *";
      case 3:
        return "(" + sub(true) + ") !";
      case 4:
        return "one(" + sub(finite) + ")";
      case 5:
        return "(" + sub(finite) + " ? " + sub(finite) + " : " + sub(finite) + ")";
      case 6:
        return "try(" + sub(finite) + ")";
      case 7:
        return "not(" + sub(finite) + ")";
      case 8:
        return "test(" + sub(finite) + ")";
      default:
        return "matchrew LS:List L:Letter by LS using " + sub(finite);
    }
  }

  std::string fooSubject(int depth) {
    if (depth == 0 || pick(3) == 0) return pick(2) ? "a" : "b";
    return "f(" + fooSubject(depth - 1) + ", " + fooSubject(depth - 1) + ")";
  }

  // Strategy text over FOO mixing core and extended combinators.
  std::string foo(int depth) {
    static const char* atoms[] = {"idle", "fail", "swap", "next", "next", "top(swap)", "top(next)",
                                  "match f(X:Foo, a)", "amatch b", "a", "b", "swap"};
    if (depth == 0 || pick(4) == 0) return atoms[pick(12)];
    auto sub = [&] { return foo(depth - 1); };
    switch (pick(9)) {
      case 0:
        return "gt-all(" + sub() + ")";
      case 1:
        return "gt-one(" + sub() + ")";
      case 2:
        return "gt-some(" + sub() + ")";
      case 3:
        return "f(" + sub() + ", " + sub() + ")";
      case 4:
        return "(" + sub() + " ; " + sub() + ")";
      case 5:
        return "(" + sub() + " | " + sub() + ")";
      case 6:
        return "(" + sub() + " ? " + sub() + " : " + sub() + ")";
      case 7:
        return "one(" + sub() + ")";
      default:
        return "try(" + sub() + ")";
    }
  }

 private:
  std::mt19937 rng_;
};

struct Runner {
  std::shared_ptr<const ModuleDef> mod;
  StrategyEngine eng;

  explicit Runner(const char* name) : mod(module(name)), eng(mod) {}

  std::vector<Term> run(const Term& t, const std::string& s, bool dfs = false) {
    return eng.srewrite(t, strategy(*mod, s), dfs);
  }
  Set show(const std::vector<Term>& ts) { return testing::printed(mod->sig, ts); }
  Set runSet(const Term& t, const std::string& s) { return show(run(t, s)); }
};

bool hasExtendedNode(const Strategy& s) { return isExtended(s); }

}  // namespace

TEST_CASE("strategy combinator laws", "[property][laws]") {
  Runner r("LLIST");
  StratGen gen(99);
  int productive = 0;
  for (int i = 0; i < 300; ++i) {
    const Term t = term(*r.mod, gen.listSubject());
    const std::string a = gen.llist(2, false), b = gen.llist(2, false), c = gen.llist(2, false);
    const std::string fin = gen.llist(2, true);
    INFO("subject " << printTerm(r.mod->sig, t) << "\nalpha " << a << "\nbeta " << b
                    << "\ngamma " << c << "\nfinite " << fin);
    const std::vector<Term> ra = r.run(t, a);
    const Set sa = r.show(ra);
    if (sa.size() > 1) ++productive;

    // Choice is union.
    Set sb = r.runSet(t, b);
    Set uni = sa;
    uni.insert(sb.begin(), sb.end());
    CHECK(r.runSet(t, "(" + a + ") | (" + b + ")") == uni);

    // Sequence composes solution sets.
    Set composed;
    for (const Term& x : ra) {
      Set step = r.runSet(x, b);
      composed.insert(step.begin(), step.end());
    }
    CHECK(r.runSet(t, "(" + a + ") ; (" + b + ")") == composed);

    // Conditional: then-branch on the results, else-branch on none.
    CHECK(r.runSet(t, "(" + a + ") ? (" + b + ") : (" + c + ")") ==
          (ra.empty() ? r.runSet(t, c) : composed));

    // one picks a single solution, when there is any.
    Set one = r.runSet(t, "one(" + a + ")");
    CHECK(one.size() == std::min<std::size_t>(1, sa.size()));
    CHECK(std::includes(sa.begin(), sa.end(), one.begin(), one.end()));

    // Iteration is the reflexive-transitive closure; normalization keeps
    // the closure elements where another iteration fails.
    Set closure{printTerm(r.mod->sig, t)};
    std::deque<Term> queue{t};
    Set irreducible;
    while (!queue.empty()) {
      Term x = queue.front();
      queue.pop_front();
      std::vector<Term> next = r.run(x, fin);
      if (next.empty()) irreducible.insert(printTerm(r.mod->sig, x));
      for (const Term& y : next)
        if (closure.insert(printTerm(r.mod->sig, y)).second) queue.push_back(y);
    }
    CHECK(r.runSet(t, "(" + fin + ") *") == closure);
    CHECK(r.runSet(t, "(" + fin + ") !") == irreducible);

    // The search order does not change the solution set.
    CHECK(r.show(r.run(t, a, true)) == sa);
  }
  // Cases with several solutions, where the laws have something to say.
  CHECK(productive >= 40);
}

TEST_CASE("native and translated extended strategies agree", "[property][translation]") {
  auto m = module("FOO");
  auto translated = std::make_shared<const ModuleDef>(translateModule(*m));
  StrategyEngine native(m);
  StrategyEngine viaCore(translated);
  StratGen gen(4242);
  int productive = 0;
  for (int i = 0; i < 250; ++i) {
    const std::string subject = gen.fooSubject(3);
    const std::string text = gen.foo(3);
    INFO("subject " << subject << "\nstrategy " << text);
    StratPtr s = strategy(*m, text);
    StratPtr core = translateExtended(s, translated->sig);
    CHECK_FALSE(hasExtendedNode(*core));
    Set a = testing::printed(m->sig, native.srewrite(term(*m, subject), s));
    Set b = testing::printed(translated->sig, viaCore.srewrite(term(*translated, subject), core));
    CHECK(a == b);
    if (!a.empty() && a != Set{subject}) ++productive;

    // gt-some succeeds where gt-one does and then tries every argument.
    const std::string inner = gen.foo(1);
    INFO("inner " << inner);
    auto sols = [&](const std::string& x) {
      return testing::printed(m->sig, native.srewrite(term(*m, subject), strategy(*m, x)));
    };
    CHECK(sols("gt-some(" + inner + ")") ==
          sols("test(gt-one(" + inner + ")) ; gt-all(try(" + inner + "))"));
  }
  CHECK(productive >= 50);
}
