#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stratrew/kernel.hpp"
#include "stratrew/module.hpp"

namespace stratrew {

struct Limits {
  std::size_t rewrites = 1'000'000;  // equational steps per reduction
  std::size_t states = 1'000'000;    // search states per command
  std::size_t depth = 4000;          // nesting of equational reduction
};

/// Equational reduction and rule application for one flat module.
class Rewriter {
 public:
  explicit Rewriter(std::shared_ptr<const ModuleDef> mod, Limits limits = {});

  const ModuleDef& module() const { return *mod_; }
  const Signature& sig() const { return mod_->sig; }
  const Limits& limits() const { return limits_; }

  /// Equational normal form of a canonical term.
  Term reduce(const Term& t);
  /// Equational rewrites performed so far (memoized results are free).
  std::size_t rewriteCount() const { return rewrites_; }

  /// Enumerates the substitutions extending `s` that satisfy the condition.
  /// Returns true if the callback stopped the enumeration.
  bool forEachSolution(const Condition& cond, const Subst& s,
                       const std::function<bool(const Subst&)>& cb);
  bool holds(const Condition& cond, const Subst& s);

  /// One-step results of the rules labelled `label` (nonexec ones too),
  /// with the initial substitution `init` given by variable names. Results
  /// are reduced and duplicate-free, in discovery order.
  std::vector<Term> applyRule(const Term& t, Symbol label,
                              const std::vector<std::pair<Symbol, Term>>& init = {},
                              bool top = false);
  /// One-step results of every executable rule at every unfrozen position.
  std::vector<Term> applyAll(const Term& t);
  /// Like `applyAll`, keeping the label of the rule that produced each result.
  std::vector<std::pair<Symbol, Term>> successors(const Term& t);

  /// Applies rules leftmost-innermost until none applies or `maxSteps`
  /// rewrites were done. Returns the final term and the number of steps.
  std::pair<Term, std::size_t> rewrite(const Term& t,
                                       std::size_t maxSteps = static_cast<std::size_t>(-1));

  const std::vector<const Rule*>& rulesLabelled(Symbol label) const;

  /// One builtin or equation step at the root, without reducing the result.
  std::optional<Term> equationStep(const Term& t) { return topStep(t); }
  /// Reduced results of executable rules applied at the root only.
  std::vector<Term> topRuleSteps(const Term& t);

 private:
  struct Frame;
  Term reduceRec(const Term& t);
  std::optional<Term> topStep(const Term& t);
  std::optional<Term> builtin(const SymbolInfo& info, const Term& t);
  bool solve(const Condition& cond, std::size_t i, const Subst& s,
             const std::function<bool(const Subst&)>& cb);
  void ruleResults(const Rule& r, const Term& t, const Subst& init, bool top,
                   const std::function<void(const Term&)>& out);
  Term boolConstant(bool b) const;
  void countRewrite();

  std::shared_ptr<const ModuleDef> mod_;
  Limits limits_;
  std::size_t rewrites_ = 0;
  std::size_t budgetStart_ = 0;
  std::size_t depth_ = 0;
  std::unordered_map<Term, Term, TermHash> memo_;
  struct KeyHash {
    std::size_t operator()(const std::pair<Symbol, std::size_t>& k) const {
      return hashCombine(SymbolHash()(k.first), k.second);
    }
  };
  // Equations indexed by the (name, declared arity) of their top symbol;
  // owise ones last.
  std::unordered_map<std::pair<Symbol, std::size_t>, std::vector<const Equation*>, KeyHash> eqs_;
  std::unordered_map<Symbol, std::vector<const Rule*>, SymbolHash> rulesByLabel_;
  std::vector<const Rule*> execRules_;
  Term true_, false_;
};

}  // namespace stratrew
