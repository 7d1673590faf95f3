#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stratrew/ltl.hpp"
#include "stratrew/multistrat.hpp"

namespace stratrew {

/// Transition system explored on demand. States are dense indices.
class Kripke {
 public:
  virtual ~Kripke() = default;
  virtual std::size_t initialState() = 0;
  /// Successors with a display label. An empty list is a deadlock, which
  /// the checker closes with a self-loop.
  virtual const std::vector<std::pair<std::size_t, std::string>>& successors(std::size_t s) = 0;
  virtual bool holds(std::size_t s, Symbol prop) = 0;
};

/// State-labelled Büchi automaton: a run in state q requires the current
/// Kripke state to satisfy the literals of q.
struct Buchi {
  struct State {
    std::vector<Symbol> pos;  // propositions that must hold
    std::vector<Symbol> neg;  // propositions that must not hold
    bool accepting = false;
    std::vector<std::size_t> next;
  };
  std::vector<State> states;
  std::vector<std::size_t> initial;
};

/// Automaton accepting exactly the models of `f` (any LTL formula).
Buchi ltlToBuchi(const LtlPtr& f);

struct LassoStep {
  std::size_t state;
  std::string label;  // label of the transition leaving `state`
};

struct CheckResult {
  bool holds = true;
  std::vector<LassoStep> prefix;
  std::vector<LassoStep> cycle;  // leaves the last state back to cycle[0]
  std::size_t states = 0;        // product states visited
};

/// Checks `f` on every path from the initial state by nested depth-first
/// search of the product with the automaton of the negation.
CheckResult modelCheck(Kripke& k, const LtlPtr& f, std::size_t stateLimit = 1'000'000);

/// `prop` evaluated on `t`: its defining term with `@` replaced by `t`,
/// reduced. Throws PropositionError unless the result is true or false.
bool evalProp(Rewriter& rw, Symbol prop, const Term& t);

/// Kripke structure of a multistrategy run; states are full contexts and
/// propositions are evaluated on the subject term.
class MultiStrategyKripke : public Kripke {
 public:
  MultiStrategyKripke(MultiStrategy& ms, const Term& t);

  std::size_t initialState() override { return 0; }
  const std::vector<std::pair<std::size_t, std::string>>& successors(std::size_t s) override;
  bool holds(std::size_t s, Symbol prop) override;

  const MSContext& context(std::size_t s) const { return contexts_.at(s); }
  std::size_t size() const { return contexts_.size(); }

 private:
  std::size_t intern(const MSContext& c);

  MultiStrategy& ms_;
  Rewriter& rw_;
  std::vector<MSContext> contexts_;
  std::unordered_map<MSContext, std::size_t, MSContextHash> index_;
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::string>>> succ_;
  struct PropKey {
    Term term;
    Symbol prop;
    bool operator==(const PropKey&) const = default;
  };
  struct PropKeyHash {
    std::size_t operator()(const PropKey& k) const {
      return hashCombine(k.term.hash(), SymbolHash()(k.prop));
    }
  };
  std::unordered_map<PropKey, bool, PropKeyHash> props_;
};

}  // namespace stratrew
