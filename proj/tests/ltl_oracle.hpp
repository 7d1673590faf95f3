#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stratrew/ltl.hpp"
#include "stratrew/modelcheck.hpp"

namespace testing {

/// Finite Kripke structure given by explicit tables.
class ExplicitKripke : public stratrew::Kripke {
 public:
  std::vector<std::vector<std::pair<std::size_t, std::string>>> edges;
  std::vector<std::vector<stratrew::Symbol>> labels;

  std::size_t initialState() override { return 0; }
  const std::vector<std::pair<std::size_t, std::string>>& successors(std::size_t s) override {
    return edges.at(s);
  }
  bool holds(std::size_t s, stratrew::Symbol p) override {
    for (const auto& q : labels.at(s))
      if (q == p) return true;
    return false;
  }
  /// Successor states, with the stuttering loop on deadlocks.
  std::vector<std::size_t> next(std::size_t s) const {
    std::vector<std::size_t> out;
    for (const auto& e : edges.at(s)) out.push_back(e.first);
    if (out.empty()) out.push_back(s);
    return out;
  }
};

/// Ultimately periodic path: states[0..n), then back to states[loop].
struct Lasso {
  std::vector<std::size_t> states;
  std::size_t loop = 0;
};

/// LTL path semantics evaluated directly on a lasso.
class LassoSemantics {
 public:
  LassoSemantics(stratrew::Kripke& k, const Lasso& l) : k_(k), l_(l) {}

  bool eval(const stratrew::Ltl& f, std::size_t i) {
    using stratrew::LtlKind;
    const std::size_t n = l_.states.size();
    switch (f.kind) {
      case LtlKind::True:
        return true;
      case LtlKind::False:
        return false;
      case LtlKind::Prop:
        return k_.holds(l_.states[i], f.prop);
      case LtlKind::Not:
        return !eval(*f.left, i);
      case LtlKind::And:
        return eval(*f.left, i) && eval(*f.right, i);
      case LtlKind::Or:
        return eval(*f.left, i) || eval(*f.right, i);
      case LtlKind::Implies:
        return !eval(*f.left, i) || eval(*f.right, i);
      case LtlKind::Next:
        return eval(*f.left, succ(i));
      case LtlKind::Always: {
        // Positions from i onwards: the rest of the path, then the loop.
        std::size_t j = i;
        for (std::size_t k = 0; k < n + 1; ++k, j = succ(j))
          if (!eval(*f.left, j)) return false;
        return true;
      }
      case LtlKind::Eventually: {
        std::size_t j = i;
        for (std::size_t k = 0; k < n + 1; ++k, j = succ(j))
          if (eval(*f.left, j)) return true;
        return false;
      }
      case LtlKind::Until: {
        std::size_t j = i;
        for (std::size_t k = 0; k < n + 1; ++k, j = succ(j)) {
          if (eval(*f.right, j)) return true;
          if (!eval(*f.left, j)) return false;
        }
        return false;
      }
      case LtlKind::Release: {
        std::size_t j = i;
        for (std::size_t k = 0; k < n + 1; ++k, j = succ(j)) {
          if (!eval(*f.right, j)) return false;
          if (eval(*f.left, j)) return true;
        }
        return true;
      }
    }
    return false;
  }

 private:
  std::size_t succ(std::size_t i) const { return i + 1 < l_.states.size() ? i + 1 : l_.loop; }

  stratrew::Kripke& k_;
  const Lasso& l_;
};

/// Searches lassos whose walk from the initial state has at most
/// `maxLength` states for one violating `f`.
inline std::optional<Lasso> findViolation(ExplicitKripke& k, const stratrew::LtlPtr& f,
                                          std::size_t maxLength) {
  std::vector<std::size_t> walk{k.initialState()};
  std::optional<Lasso> found;
  std::function<void()> extend = [&] {
    if (found) return;
    for (std::size_t t : k.next(walk.back())) {
      for (std::size_t j = 0; j < walk.size() && !found; ++j)
        if (walk[j] == t) {
          Lasso l{walk, j};
          if (!LassoSemantics(k, l).eval(*f, 0)) found = l;
        }
    }
    if (found || walk.size() >= maxLength) return;
    for (std::size_t t : k.next(walk.back())) {
      walk.push_back(t);
      extend();
      walk.pop_back();
      if (found) return;
    }
  };
  extend();
  return found;
}

/// Lasso of a checker counterexample, after validating that each step is
/// a transition of `k`.
inline std::optional<Lasso> replay(stratrew::Kripke& k, const stratrew::CheckResult& r) {
  std::vector<stratrew::LassoStep> all = r.prefix;
  all.insert(all.end(), r.cycle.begin(), r.cycle.end());
  if (all.empty() || r.cycle.empty() || all.front().state != k.initialState()) return std::nullopt;
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::size_t target = i + 1 < all.size() ? all[i + 1].state : r.cycle.front().state;
    const auto& succ = k.successors(all[i].state);
    bool ok = false;
    if (succ.empty())
      ok = target == all[i].state && all[i].label == "deadlock";
    for (const auto& [t, label] : succ)
      if (t == target && label == all[i].label) ok = true;
    if (!ok) return std::nullopt;
  }
  Lasso l;
  for (const auto& s : all) l.states.push_back(s.state);
  l.loop = r.prefix.size();
  return l;
}

inline ExplicitKripke randomKripke(std::mt19937& rng, std::size_t maxStates,
                                   const std::vector<stratrew::Symbol>& props) {
  ExplicitKripke k;
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, maxStates)(rng);
  k.edges.resize(n);
  k.labels.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t deg = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    for (std::size_t e = 0; e < deg; ++e) {
      std::size_t t = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      bool dup = false;
      for (const auto& x : k.edges[s]) dup = dup || x.first == t;
      if (!dup) k.edges[s].push_back({t, "e" + std::to_string(s) + "_" + std::to_string(t)});
    }
    for (stratrew::Symbol p : props)
      if (rng() % 2) k.labels[s].push_back(p);
  }
  return k;
}

inline stratrew::LtlPtr randomFormula(std::mt19937& rng, int depth,
                                      const std::vector<stratrew::Symbol>& props) {
  using namespace stratrew;
  if (depth == 0 || rng() % 4 == 0) {
    if (rng() % 8 == 0) return rng() % 2 ? ltl::truth() : ltl::falsity();
    return ltl::prop(props[rng() % props.size()]);
  }
  static const LtlKind unary[] = {LtlKind::Not, LtlKind::Next, LtlKind::Always, LtlKind::Eventually};
  static const LtlKind binary[] = {LtlKind::And, LtlKind::Or, LtlKind::Implies, LtlKind::Until,
                                   LtlKind::Release};
  if (rng() % 2) return ltl::unary(unary[rng() % 4], randomFormula(rng, depth - 1, props));
  return ltl::binary(binary[rng() % 5], randomFormula(rng, depth - 1, props),
                     randomFormula(rng, depth - 1, props));
}

}  // namespace testing
