// Acceptance checks, one line per criterion. With a number argument only
// that criterion runs; the exit status is nonzero if any check fails.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "ltl_oracle.hpp"
#include "stratrew/csr.hpp"
#include "stratrew/engine.hpp"
#include "stratrew/ext.hpp"
#include "stratrew/modelcheck.hpp"
#include "stratrew/multistrat.hpp"
#include "support.hpp"
#include "ttt_oracle.hpp"

using namespace stratrew;
using testing::module;
using testing::printed;
using testing::strategy;
using testing::term;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what;
  }
};

using Set = std::set<std::string>;

std::string join(const Set& s) {
  std::string out = "{";
  for (const auto& x : s) out += (out.size() > 1 ? ", " : "") + x;
  return out + "}";
}

void lazyNormalization(Outcome& o) {
  auto m = module("LAZY-LIST");
  auto sols = normViaMunorm(term(*m, "take(3, natsFrom(0))"), *m);
  Set got = printed(m->sig, sols);
  o.expect(sols.size() == 1 && got == Set{"0 : 1 : 2 : nil"}, "norm-via-munorm gave " + join(got));
  std::string mu = printTerm(m->sig, muNormalize(term(*m, "take(3, natsFrom(0))"), m));
  o.expect(mu == "0 : take(2, natsFrom(0 + 1))", "mu-normal form " + mu);
}

void extensionSemantics(Outcome& o) {
  auto m = module("FOO");
  const char* subject = "f(f(a, b), f(a, a))";
  const char* text = "f(swap, gt-all(next))";
  StrategyEngine native(m);
  Set a = printed(m->sig, native.srewrite(term(*m, subject), strategy(*m, text)));
  auto t = std::make_shared<const ModuleDef>(translateModule(*m));
  StrategyEngine core(t);
  Set b = printed(t->sig, core.srewrite(term(*t, subject), translateExtended(strategy(*m, text), t->sig)));
  const Set expected{"f(f(b, a), f(b, b))"};
  o.expect(a == expected, "native " + join(a));
  o.expect(b == expected, "translated " + join(b));
}

void interleaving(Outcome& o) {
  auto m = module("LLIST");
  StrategyEngine eng(m);
  std::vector<StratPtr> ss{strategy(*m, "seq(a b)"), strategy(*m, "seq(c d)")};
  MultiStrategy turns(eng, ss, GlobalStrategy::turns());
  auto byTurns = testing::printedList(m->sig, turns.run(term(*m, "nil")));
  o.expect(byTurns == std::vector<std::string>{"a c b d"}, "turns gave " + std::to_string(byTurns.size()));
  MultiStrategy conc(eng, ss, GlobalStrategy::freec());
  auto all = conc.run(term(*m, "nil"));
  Set got = printed(m->sig, all);
  o.expect(all.size() == 6 && got == Set{"a b c d", "a c b d", "a c d b", "c a b d", "c a d b", "c d a b"},
           "concurrent gave " + join(got));
}

struct Verdict {
  CheckResult result;
  bool replays = false;
  std::string last;
  bool lastOwins = false, lastXwins = false;
};

Verdict check(const char* formula, const char* s0, const char* s1) {
  auto m = module("TICTACTOE-CHECK");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, s0), strategy(*m, s1)}, GlobalStrategy::turns());
  MultiStrategyKripke k(ms, term(*m, "initial"));
  Verdict v;
  v.result = modelCheck(k, parseFormula(*m, formula));
  if (!v.result.holds) {
    v.replays = testing::replay(k, v.result).has_value();
    const LassoStep& end = v.result.cycle.empty() ? v.result.prefix.back() : v.result.cycle.back();
    Term t = k.context(end.state).subject;
    v.last = printTerm(m->sig, t);
    v.lastOwins = k.holds(end.state, Symbol("Owins"));
    v.lastXwins = k.holds(end.state, Symbol("Xwins"));
  }
  return v;
}

void gameVerdicts(Outcome& o) {
  o.expect(check("[] ~ Owins", "perfectX", "randomO").result.holds, "perfectX first can lose");
  o.expect(check("[] ~ Owins", "randomO", "perfectX").result.holds, "perfectX second can lose");
  Verdict better = check("[] ~ Owins", "betterX", "randomO");
  o.expect(!better.result.holds && better.replays && better.lastOwins,
           "betterX counterexample missing or not an O win");
  Verdict draw = check("<> Xwins", "perfectX", "randomO");
  o.expect(!draw.result.holds && draw.replays && draw.last.find('-') == std::string::npos &&
               !draw.lastOwins && !draw.lastXwins,
           "no drawn counterexample for <> Xwins: " + draw.last);
  o.expect(check("[] (~ Owins /\\ ~ Xwins)", "perfectX", "perfectO").result.holds,
           "perfect players can win");
}

testing::TicTacToe::Grid toGrid(const Term& t) {
  testing::TicTacToe::Grid g;
  g.fill('?');
  for (const Term& cell : t.args())
    g[(cell.arg(0).value() - 1) * 3 + (cell.arg(1).value() - 1)] = cell.arg(2).head().str()[0];
  return g;
}

void solutionCount(Outcome& o) {
  auto m = module("TICTACTOE-STRAT");
  StrategyEngine eng(m);
  MultiStrategy ms(eng, {strategy(*m, "perfectX"), strategy(*m, "randomO")}, GlobalStrategy::turns());
  std::vector<Term> finals = ms.run(term(*m, "initial"));
  std::set<testing::TicTacToe::Grid> engineGrids;
  for (const Term& t : finals) engineGrids.insert(toGrid(t));
  auto oracle = testing::TicTacToe::finalGrids({'X', true}, {'O', false});
  o.detail << "engine " << finals.size() << ", independent game model " << oracle.size()
           << (engineGrids == oracle ? " (same grids)" : " (different grids)") << ", expected 134";
  o.ok = finals.size() == 134;
}

void propertySuites(Outcome& o) {
  const std::string cmd = std::string("\"") + STRATREW_PROPERTY_TESTS + "\" --reporter compact > /dev/null";
  int status = std::system(cmd.c_str());
  o.expect(status == 0, "property_tests exited with status " + std::to_string(status));
}

void equationalBaseline(Outcome& o) {
  auto l = module("LLIST");
  Rewriter rl(l);
  std::string len = printTerm(l->sig, rl.reduce(term(*l, "length(a b c)")));
  o.expect(len == "3", "length(a b c) = " + len);
  auto t = module("TICTACTOE");
  Rewriter rt(t);
  for (const char* g : {"hasHRow(X, empty)", "hasHRow(O, initial)",
                        "hasHRow(X, [1, 1, X] [2, 2, X] [3, 3, X])"}) {
    std::string r = printTerm(t->sig, rt.reduce(term(*t, g)));
    o.expect(r == "false", std::string(g) + " = " + r);
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"lazy normalization", lazyNormalization},
      {"extension semantics, native and translated", extensionSemantics},
      {"multistrategy interleaving", interleaving},
      {"tic-tac-toe verdicts", gameVerdicts},
      {"tic-tac-toe final grid count", solutionCount},
      {"property suites", propertySuites},
      {"equational baseline", equationalBaseline},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool allOk = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<std::size_t>(only) != i + 1) continue;
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    allOk = allOk && o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (o.detail.tellp() > 0) std::cout << " (" << o.detail.str() << ")";
    std::cout << "\n";
  }
  return allOk ? 0 : 1;
}
