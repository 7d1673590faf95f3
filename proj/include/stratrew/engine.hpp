#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stratrew/module.hpp"
#include "stratrew/rewrite.hpp"
#include "stratrew/strategy.hpp"

namespace stratrew {

/// Continuation frame: a pending strategy with its variable environment.
/// Frames are interned, so stacks compare by pointer.
struct Frame {
  const Strategy* strategy;
  const Subst* env;
  const Frame* next;
  std::size_t hash;
};

struct ExecState {
  Term term;
  const Frame* stack = nullptr;  // null: execution finished

  bool finished() const { return stack == nullptr; }
  bool operator==(const ExecState&) const = default;
};

struct ExecStateHash {
  std::size_t operator()(const ExecState& s) const {
    return hashCombine(s.term.hash(), s.stack ? s.stack->hash : 0);
  }
};

enum class StepClass { Control, System };

struct Step {
  StepClass cls;
  ExecState state;
  Symbol label;  // System steps: rule label or strategy name of the atomic step
};

/// Evaluates core strategies (and, natively, congruences and generic
/// traversals) over one module. Results of atomic sub-strategies are cached
/// for the lifetime of the engine.
class StrategyEngine {
 public:
  explicit StrategyEngine(std::shared_ptr<const ModuleDef> mod, Limits limits = {});

  const ModuleDef& module() const { return rw_.module(); }
  const Signature& sig() const { return rw_.sig(); }
  Rewriter& rewriter() { return rw_; }

  /// Initial state; `t` is reduced first.
  ExecState initial(const Term& t, const StratPtr& s, const Subst& env = {});
  std::vector<Step> stepSuccessors(const ExecState& st);

  /// Full solution set of `s` on `t` under `env`, in search order.
  std::vector<Term> atomicSuccessors(const Term& t, const StratPtr& s, const Subst& env);

  /// Distinct results in discovery order. `onSolution` may return false to
  /// stop the search early.
  std::vector<Term> srewrite(const Term& t, const StratPtr& s, bool depthFirst = false,
                             const std::function<bool(const Term&)>& onSolution = {});

  /// Counts search states against `Limits::states`; multistrategy and model
  /// checking searches share the budget.
  void countState();
  void resetBudget() { states_ = 0; }
  std::size_t statesExplored() const { return states_; }

  /// Label shown for an atomic step running `s`.
  static Symbol labelOf(const Strategy& s);

 private:
  const Frame* push(const Strategy* s, const Subst* env, const Frame* next);
  const Subst* intern(const Subst& s);
  const Strategy* keep(StratPtr s);
  const Strategy* desugared(const Strategy* s);
  const Strategy* tryOf(const Strategy* s);

  std::vector<Term> search(const ExecState& init, bool depthFirst, std::size_t maxSolutions,
                           const std::function<bool(const Term&)>& onSolution);
  std::vector<Term> atomic(const Term& t, const Strategy& s, const Subst& env);
  std::vector<Term> firstSolution(const Term& t, const Strategy& s, const Subst& env);
  void callTargets(const Strategy& s, const Subst& env,
                   std::vector<std::pair<const Strategy*, const Subst*>>& out);
  std::vector<Term> matchRewResults(const Term& t, const Strategy& s, const Subst& env);
  void matchTest(const Term& t, const Strategy& s, const Subst& env, bool& ok);

  // Native extended operators.
  using TermSet = std::unordered_set<Term, TermHash>;
  std::vector<Term> extended(const Term& t, const Strategy& s, const Subst& env);
  void congruenceBranch(const Term& t, std::size_t decl, const std::vector<const Strategy*>& kids,
                        const Subst& env, std::vector<Term>& out, TermSet& seen);
  void gtAll(const Term& t, const Strategy& a, const Subst& env, std::vector<Term>& out,
             TermSet& seen);
  void gtOne(const Term& t, const Strategy& a, const Subst& env, std::vector<Term>& out,
             TermSet& seen);
  const Term& patternFor(std::size_t decl);

  Rewriter rw_;
  Limits limits_;
  std::size_t states_ = 0;
  std::size_t nesting_ = 0;

  struct FrameKeyHash {
    std::size_t operator()(const Frame& f) const { return f.hash; }
  };
  struct FrameKeyEq {
    bool operator()(const Frame& a, const Frame& b) const {
      return a.strategy == b.strategy && a.env == b.env && a.next == b.next;
    }
  };
  std::unordered_set<Frame, FrameKeyHash, FrameKeyEq> frames_;
  std::unordered_set<Subst, SubstHash> envs_;
  std::vector<StratPtr> kept_;
  std::unordered_map<const Strategy*, const Strategy*> desugared_;
  std::unordered_map<const Strategy*, const Strategy*> tries_;
  std::unordered_map<std::size_t, Term> declPatterns_;

  struct AtomKey {
    Term term;
    const Strategy* strategy;
    const Subst* env;
    bool first;
    bool operator==(const AtomKey&) const = default;
  };
  struct AtomKeyHash {
    std::size_t operator()(const AtomKey& k) const {
      std::size_t h = hashCombine(k.term.hash(), std::hash<const void*>()(k.strategy));
      return hashCombine(hashCombine(h, std::hash<const void*>()(k.env)), k.first);
    }
  };
  std::unordered_map<AtomKey, std::vector<Term>, AtomKeyHash> atoms_;
  std::unordered_set<AtomKey, AtomKeyHash> inProgress_;

  using DefKey = std::pair<Symbol, std::size_t>;
  struct DefKeyHash {
    std::size_t operator()(const DefKey& k) const {
      return hashCombine(SymbolHash()(k.first), k.second);
    }
  };
  std::unordered_map<DefKey, std::vector<const StratDef*>, DefKeyHash> defs_;
};

}  // namespace stratrew
