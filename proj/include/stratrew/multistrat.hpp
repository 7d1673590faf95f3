#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stratrew/engine.hpp"

namespace stratrew {

/// Expression of the custom global-strategy language.
struct Gamma;
using GammaPtr = std::shared_ptr<const Gamma>;

struct Gamma {
  enum class Kind { Idle, Fail, Step, Control, System, Turns, Freec, Seq, Choice, Star, Bang, Cond };
  Kind kind = Kind::Idle;
  std::size_t thread = 0;  // Step, Control, System
  std::size_t bound = 0;   // Freec with hasBound
  bool hasBound = false;
  std::vector<GammaPtr> children;
};

/// Parses e.g. `(step(0) ; step(1)) * ; freec`.
GammaPtr parseGamma(std::string_view text);
std::string printGamma(const Gamma& g);

struct GlobalStrategy {
  enum class Kind { Turns, Freec, FreecBounded, Custom };
  Kind kind = Kind::Turns;
  std::size_t bound = 0;
  GammaPtr custom;

  static GlobalStrategy turns() { return {Kind::Turns, 0, nullptr}; }
  static GlobalStrategy freec() { return {Kind::Freec, 0, nullptr}; }
  static GlobalStrategy freec(std::size_t k) { return {Kind::FreecBounded, k, nullptr}; }
  static GlobalStrategy customOf(GammaPtr g) { return {Kind::Custom, 0, std::move(g)}; }
};

/// Subject term with one pending continuation per thread, plus the
/// scheduler position (next thread for turns, steps taken for freec(K)).
struct MSContext {
  Term subject;
  std::vector<const Frame*> threads;
  std::size_t turn = 0;
  std::size_t steps = 0;

  bool operator==(const MSContext&) const = default;
};

struct MSContextHash {
  std::size_t operator()(const MSContext& c) const;
};

struct MSTransition {
  std::size_t thread;
  Symbol label;
  MSContext next;
};

/// Runs several strategies over one term under a global strategy.
class MultiStrategy {
 public:
  MultiStrategy(StrategyEngine& engine, std::vector<StratPtr> strategies, GlobalStrategy g);

  MSContext initial(const Term& t);
  StrategyEngine& engine() { return engine_; }
  std::size_t threadCount() const { return strategies_.size(); }
  const GlobalStrategy& global() const { return global_; }

  /// Contexts after thread `n` exhausts control steps and takes exactly
  /// one system step.
  std::vector<MSTransition> msStep(const MSContext& ctx, std::size_t n);
  /// One-step successors allowed by the global strategy (turns, freec and
  /// freec(K) only).
  std::vector<MSTransition> successors(const MSContext& ctx);
  /// Distinct final subjects in breadth-first discovery order.
  std::vector<Term> run(const Term& t);

 private:
  std::vector<MSContext> evalGamma(const Gamma& g, const MSContext& ctx);
  std::vector<MSContext> closure(const Gamma& g, const MSContext& ctx, bool bang);
  std::vector<MSContext> controlStep(const MSContext& ctx, std::size_t n);
  std::vector<MSContext> systemStep(const MSContext& ctx, std::size_t n);
  std::vector<MSContext> runBuiltin(const MSContext& ctx, const GlobalStrategy& g);
  void checkThread(std::size_t n) const;

  StrategyEngine& engine_;
  std::vector<StratPtr> strategies_;
  GlobalStrategy global_;
};

}  // namespace stratrew
