#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stratrew/term.hpp"

namespace stratrew {

/// One fragment of an equational condition.
struct CondFragment {
  enum class Kind { Equality, Assignment, SortTest };
  Kind kind = Kind::Equality;
  Term lhs;  // pattern of an assignment, tested term of a sort test
  Term rhs;
  Symbol sort;  // sort tests only

  bool operator==(const CondFragment&) const = default;
};
using Condition = std::vector<CondFragment>;

enum class StratKind {
  Idle,
  Fail,
  Apply,       // name = label; assignments; top
  All,
  Match,       // anywhere; pattern; cond
  Seq,         // children (>= 2)
  Choice,      // children (>= 2)
  Star,        // children[0]
  Bang,        // children[0]
  Cond,        // children = {condition, then, else}
  One,         // children[0]
  MatchRew,    // anywhere; pattern; cond; usingVars[i] rewritten by children[i]
  Call,        // name; args
  Congruence,  // name; children
  GtAll,
  GtOne,
  GtSome,
  // Sugar, removed by desugar().
  Try,
  Not,
  Test,
  OrElse,  // children = {first, second}
};

struct Strategy;
using StratPtr = std::shared_ptr<const Strategy>;

struct Strategy {
  StratKind kind = StratKind::Idle;
  Symbol name;
  bool top = false;
  bool anywhere = false;
  std::vector<std::pair<Symbol, Term>> assignments;
  Term pattern;
  Condition cond;
  std::vector<Term> args;
  std::vector<Term> usingVars;
  std::vector<StratPtr> children;
};

namespace strat {
StratPtr idle();
StratPtr fail();
StratPtr all();
StratPtr apply(Symbol label, std::vector<std::pair<Symbol, Term>> assignments = {},
               bool top = false);
StratPtr match(Term pattern, Condition cond = {}, bool anywhere = false);
/// Flattens nested sequences; a single element is returned as is.
StratPtr seq(std::vector<StratPtr> xs);
StratPtr seq(StratPtr a, StratPtr b);
/// Flattens nested choices; an empty list is `fail`.
StratPtr choice(std::vector<StratPtr> xs);
StratPtr choice(StratPtr a, StratPtr b);
StratPtr star(StratPtr a);
StratPtr bang(StratPtr a);
StratPtr cond(StratPtr c, StratPtr t, StratPtr e);
StratPtr one(StratPtr a);
StratPtr matchRew(Term pattern, Condition cond, std::vector<Term> vars,
                  std::vector<StratPtr> strategies, bool anywhere = false);
StratPtr call(Symbol name, std::vector<Term> args = {});
StratPtr congruence(Symbol op, std::vector<StratPtr> children);
StratPtr unary(StratKind kind, StratPtr a);
StratPtr orElse(StratPtr a, StratPtr b);
}  // namespace strat

/// Removes try/not/test/or-else (recursively; extended nodes are kept).
StratPtr desugar(const StratPtr& s);
bool strategyEquals(const Strategy& a, const Strategy& b);
/// True if the expression contains congruences or generic traversals.
bool isExtended(const Strategy& s);
bool containsSugar(const Strategy& s);

}  // namespace stratrew
