#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stratrew/signature.hpp"
#include "stratrew/term.hpp"

namespace stratrew {

/// Builds the canonical application of `op` to canonical arguments:
/// flattens associative symbols, erases identities, collapses unit
/// applications and sorts commutative arguments. `s_` applied to a numeral
/// folds into the numeral.
Term makeApp(const Signature& sig, Symbol op, std::vector<Term> args);

/// Canonical form of an arbitrary term. Throws SortError when an operator
/// is undeclared or an argument lies outside the kind of its declaration.
Term canonicalize(const Signature& sig, const Term& t);

/// Simultaneous replacement of the bound variables, then canonicalization.
Term applySubst(const Signature& sig, const Subst& s, const Term& t);

/// Arguments of `t` seen as an argument list of the associative or
/// commutative symbol `op`: its own arguments when headed by `op`, nothing
/// when `t` is the identity, and `t` itself otherwise.
std::vector<Term> argumentsUnder(const Signature& sig, const SymbolInfo& op, const Term& t);

/// Address of a subterm. `ext` selects a proper part of the arguments of
/// an associative (contiguous run) or commutative (sub-multiset) node; when
/// empty the whole subterm at `path` is addressed.
struct Position {
  std::vector<std::uint32_t> path;
  std::vector<std::uint32_t> ext;
  bool operator==(const Position&) const = default;
};

const Term& subtermAt(const Term& t, const std::vector<std::uint32_t>& path);
/// Term addressed by the position (an extension is rebuilt as a term).
Term termAt(const Signature& sig, const Term& t, const Position& p);
/// Replaces the addressed subterm by `r` and re-canonicalizes the ancestors.
Term replaceAt(const Signature& sig, const Term& t, const Position& p, const Term& r);

/// Returns true to stop the enumeration.
using MatchCallback = std::function<bool(const Subst&)>;
using PositionedMatchCallback = std::function<bool(const Position&, const Subst&)>;

/// Enumerates the substitutions extending `init` that make `pat` equal to
/// `subj` modulo the axioms. Returns true if the callback stopped early.
bool forEachMatch(const Signature& sig, const Term& pat, const Term& subj, const Subst& init,
                  const MatchCallback& cb);

/// Complete, duplicate-free list of root matches in a fixed order.
std::vector<Subst> matchRoot(const Signature& sig, const Term& pat, const Term& subj,
                             const Subst& init = {});

struct AnywhereOptions {
  /// Skip arguments frozen for rules.
  bool respectFrozen = false;
  /// Only the root position (no extension).
  bool topOnly = false;
};

/// Matches at every position in pre-order, including extension positions
/// of associative and commutative nodes headed by the pattern's symbol.
bool forEachMatchAnywhere(const Signature& sig, const Term& pat, const Term& subj,
                          const Subst& init, const AnywhereOptions& opts,
                          const PositionedMatchCallback& cb);

std::vector<std::pair<Position, Subst>> matchAnywhere(const Signature& sig, const Term& pat,
                                                      const Term& subj,
                                                      const AnywhereOptions& opts = {});

/// Every position of `t` without extensions, in pre-order.
std::vector<std::vector<std::uint32_t>> allPaths(const Term& t);

}  // namespace stratrew
