#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stratrew/module.hpp"
#include "stratrew/rewrite.hpp"

namespace stratrew {

/// Replacing argument indices (1-based) per operator name and arity.
class ReplacementMap {
 public:
  void set(Symbol op, std::size_t arity, std::vector<int> indices);
  /// Indices for `op`; every argument when the operator is unknown.
  std::vector<int> of(Symbol op, std::size_t arity) const;
  /// Whether argument `i` (0-based) of a node with this head is replacing.
  /// Flattened nodes of binary associative operators replace their
  /// arguments only if both declared arguments are replacing.
  bool replacing(Symbol op, std::size_t nodeArity, std::size_t i) const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<Symbol, std::size_t>& k) const {
      return hashCombine(SymbolHash()(k.first), k.second);
    }
  };
  std::unordered_map<std::pair<Symbol, std::size_t>, std::vector<int>, KeyHash> map_;
};

/// μ(f) = evaluation-strategy indices minus frozen indices.
ReplacementMap replacementMapOf(const Signature& sig);

/// Replacing positions of `t` (paths of 0-based argument indices) in
/// pre-order, the root first.
std::vector<std::vector<std::uint32_t>> muPositions(const Term& t, const ReplacementMap& mu);

/// Rewrites with equations and rules at replacing positions, innermost
/// first, until no step applies.
Term muNormalize(const Term& t, Rewriter& rw, const ReplacementMap& mu);
Term muNormalize(const Term& t, std::shared_ptr<const ModuleDef> mod, Limits limits = {});

/// Strategy module `<name>-CSR`: equations become rules, evaluation
/// strategies become frozen attributes, and the strategies `munorm`,
/// `decomp` and `norm-via-munorm` are added. Throws TransformError on
/// owise equations.
ModuleDef csrTransform(const ModuleDef& mod);

/// Solutions of `norm-via-munorm` on `t` in the transformed module.
std::vector<Term> normViaMunorm(const Term& t, const ModuleDef& mod, Limits limits = {});

}  // namespace stratrew
