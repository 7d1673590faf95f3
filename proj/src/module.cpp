#include "stratrew/module.hpp"

namespace stratrew {

bool ModuleDef::hasStrategy(Symbol n) const {
  for (const StratDecl& d : stratDecls)
    if (d.name == n) return true;
  return false;
}

bool ModuleDef::hasStrategy(Symbol n, std::size_t arity) const {
  for (const StratDecl& d : stratDecls)
    if (d.name == n && d.argSorts.size() == arity) return true;
  return false;
}

bool ModuleDef::hasRuleLabel(Symbol label) const {
  for (const Rule& r : rules)
    if (r.label == label) return true;
  return false;
}

const PropDef* ModuleDef::prop(Symbol n) const {
  for (const PropDef& p : props)
    if (p.name == n) return &p;
  return nullptr;
}

const Term* ModuleDef::variable(Symbol n) const {
  for (const Term& v : vars)
    if (v.head() == n) return &v;
  return nullptr;
}

Term placeholderVariable() {
  static const Term v = Term::variable(Symbol("@"), Signature::anySortName());
  return v;
}

}  // namespace stratrew
