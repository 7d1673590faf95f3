#pragma once

#include <optional>
#include <vector>

#include "stratrew/signature.hpp"
#include "stratrew/strategy.hpp"
#include "stratrew/term.hpp"

namespace stratrew {

struct Equation {
  Symbol label;
  Term lhs;
  Term rhs;
  Condition cond;
  bool owise = false;
};

struct Rule {
  Symbol label;  // empty for unlabeled rules
  Term lhs;
  Term rhs;
  Condition cond;
  bool nonexec = false;
};

struct StratDecl {
  Symbol name;
  std::vector<Symbol> argSorts;
  Symbol subjectSort;
};

struct StratDef {
  Symbol name;
  std::vector<Term> lhs;  // argument patterns
  StratPtr body;
  Condition cond;
};

/// Atomic proposition `name` defined by a boolean term over the placeholder
/// variable `@`.
struct PropDef {
  Symbol name;
  Term body;
};

enum class ModuleKind { Functional, System, Strategy };

/// A flat specification: imports are already resolved into the components.
struct ModuleDef {
  Symbol name;
  ModuleKind kind = ModuleKind::Functional;
  bool prelude = false;
  std::vector<Symbol> imports;
  Signature sig;
  std::vector<Equation> equations;
  std::vector<Rule> rules;
  std::vector<StratDecl> stratDecls;
  std::vector<StratDef> stratDefs;
  std::vector<PropDef> props;
  /// Variables declared in this module (not inherited by importers).
  std::vector<Term> vars;

  bool hasStrategy(Symbol name) const;
  bool hasStrategy(Symbol name, std::size_t arity) const;
  bool hasRuleLabel(Symbol label) const;
  const PropDef* prop(Symbol name) const;
  const Term* variable(Symbol name) const;
};

/// The placeholder variable used in proposition definitions.
Term placeholderVariable();

}  // namespace stratrew
