#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "stratrew/module.hpp"
#include "stratrew/signature.hpp"
#include "stratrew/strategy.hpp"

namespace stratrew {

/// Operators that get a homonym congruence strategy: one entry per
/// non-builtin constructor name and arity.
std::vector<std::pair<Symbol, std::size_t>> congruenceOps(const Signature& sig);

/// Indices into `sig.ops()` of every constructor declaration, builtin ones
/// included, in declaration order. Generic traversals range over these.
std::vector<std::size_t> ctorDecls(const Signature& sig);

/// Variable with a globally fresh name of the form `%X<n>`.
Term freshVariable(Symbol sort);

/// `f(%X1:S1, ..., %Xn:Sn)` for the declaration with index `decl`.
Term declPattern(const Signature& sig, std::size_t decl);

/// Rewrites congruences and generic traversals into core strategies
/// (matchrew, match, or-else, choice). Sugar is kept.
StratPtr translateExtended(const StratPtr& s, const Signature& sig);

/// Copy of `mod` whose strategy definitions are translated one by one.
ModuleDef translateModule(const ModuleDef& mod);

}  // namespace stratrew
