#include <catch_amalgamated.hpp>

#include "stratrew/csr.hpp"
#include "stratrew/engine.hpp"
#include "stratrew/ext.hpp"
#include "support.hpp"

using namespace stratrew;
using testing::module;
using testing::printed;
using testing::strategy;
using testing::term;

using Set = std::set<std::string>;

namespace {

Set native(const char* mod, const char* subject, const char* strat) {
  auto m = module(mod);
  StrategyEngine eng(m);
  return printed(m->sig, eng.srewrite(term(*m, subject), strategy(*m, strat)));
}

Set translated(const char* mod, const char* subject, const char* strat) {
  auto m = module(mod);
  auto t = std::make_shared<const ModuleDef>(translateModule(*m));
  StrategyEngine eng(t);
  StratPtr s = translateExtended(strategy(*m, strat), t->sig);
  CHECK_FALSE(isExtended(*s));
  return printed(t->sig, eng.srewrite(term(*t, subject), s));
}

std::set<std::string> opsOf(const Signature& sig) {
  std::set<std::string> out;
  for (auto [name, arity] : congruenceOps(sig)) out.insert(name.str() + "/" + std::to_string(arity));
  return out;
}

}  // namespace

TEST_CASE("congruence operators", "[ext]") {
  CHECK(opsOf(module("FOO")->sig) == Set{"a/0", "b/0", "f/2"});
  CHECK(opsOf(module("LAZY-LIST")->sig) == Set{"nil/0", "_:_/2"});
  ModuleRegistry reg;
  reg.load("fmod NOCTOR is sort S . op a : -> S . endfm");
  CHECK(opsOf(reg.get(Symbol("NOCTOR")).sig).empty());
}

TEST_CASE("congruence translation shape", "[ext]") {
  auto m = module("FOO");
  StratPtr t = translateExtended(strategy(*m, "f(idle, idle)"), m->sig);
  REQUIRE(t->kind == StratKind::MatchRew);
  CHECK(t->usingVars.size() == 2);
  CHECK(t->children[0]->kind == StratKind::Idle);
  CHECK(t->children[1]->kind == StratKind::Idle);

  // One branch per constructor declaration of FOO plus the builtin ones.
  StratPtr all = translateExtended(strategy(*m, "gt-all(next)"), m->sig);
  REQUIRE(all->kind == StratKind::Choice);
  std::size_t user = 0;
  for (const StratPtr& b : all->children) {
    std::string head = b->pattern.isApplication() ? b->pattern.head().str() : "";
    if (head == "a" || head == "b" || head == "f") ++user;
  }
  CHECK(user == 3);
  CHECK(all->children.size() == ctorDecls(m->sig).size());

  StratPtr some = translateExtended(strategy(*m, "gt-some(next)"), m->sig);
  REQUIRE(some->kind == StratKind::Seq);
  CHECK(some->children[0]->kind == StratKind::Test);
  CHECK_FALSE(isExtended(*some));
}

TEST_CASE("extended strategies on FOO", "[ext]") {
  const char* subject = "f(f(a, b), f(a, a))";
  for (auto run : {native, translated}) {
    CHECK(run("FOO", subject, "f(swap, gt-all(next))") == Set{"f(f(b, a), f(b, b))"});
    CHECK(run("FOO", "f(a, a)", "gt-one(next)") == Set{"f(b, a)"});
    CHECK(run("FOO", "b", "gt-all(next)") == Set{"b"});
    CHECK(run("FOO", "b", "gt-one(next)").empty());
    CHECK(run("FOO", "f(a, a)", "gt-some(next)") == Set{"f(b, b)"});
    CHECK(run("FOO", "f(a, b)", "f(next, idle)") == Set{"f(b, b)"});
    CHECK(run("FOO", "f(a, b)", "f(idle, next)").empty());
    CHECK(run("FOO", "a", "a") == Set{"a"});
    CHECK(run("FOO", "f(a, b)", "gt-all(try(next))") == Set{"f(b, b)"});
  }
}

TEST_CASE("lazy list normalization through the extended strategy", "[ext]") {
  for (auto run : {native, translated})
    CHECK(run("LAZY-LIST-STRAT", "take(3, natsFrom(0))", "norm-via-munorm") ==
          Set{"0 : 1 : 2 : nil"});
}

TEST_CASE("strategy-module definitions agree with the csr transformation", "[ext]") {
  auto lazy = module("LAZY-LIST");
  auto strat = module("LAZY-LIST-STRAT");
  StrategyEngine eng(strat);
  for (int k = 0; k < 5; ++k)
    for (int m = 0; m < 4; ++m) {
      std::string text = "take(" + std::to_string(k) + ", natsFrom(" + std::to_string(m) + "))";
      INFO(text);
      auto viaCsr = printed(lazy->sig, normViaMunorm(term(*lazy, text), *lazy));
      auto viaStrat = printed(strat->sig, eng.srewrite(term(*strat, text),
                                                       strategy(*strat, "norm-via-munorm")));
      CHECK(viaCsr.size() == 1);
      CHECK(viaCsr == viaStrat);
    }
}
