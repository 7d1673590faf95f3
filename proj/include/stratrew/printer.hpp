#pragma once

#include <string>

#include "stratrew/module.hpp"
#include "stratrew/signature.hpp"
#include "stratrew/strategy.hpp"
#include "stratrew/term.hpp"

namespace stratrew {

/// Mixfix rendering: `0 : 1 : nil`, `f(a, b)`, `[1, 1, -] [1, 2, X]`.
/// Variables print as `Name:Sort`.
std::string printTerm(const Signature& sig, const Term& t);
std::string printCondition(const Signature& sig, const Condition& c);
std::string printStrategy(const Signature& sig, const Strategy& s);
inline std::string printStrategy(const Signature& sig, const StratPtr& s) {
  return printStrategy(sig, *s);
}
/// Source text of a whole module (flat, imports omitted).
std::string printModule(const ModuleDef& m);

}  // namespace stratrew
