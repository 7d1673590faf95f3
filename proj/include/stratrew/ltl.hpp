#pragma once

#include <memory>
#include <string>
#include <vector>

#include "stratrew/term.hpp"

namespace stratrew {

enum class LtlKind {
  True,
  False,
  Prop,
  Not,
  And,
  Or,
  Implies,
  Next,
  Always,
  Eventually,
  Until,
  Release,  // only produced by negation normal form
};

struct Ltl;
using LtlPtr = std::shared_ptr<const Ltl>;

struct Ltl {
  LtlKind kind = LtlKind::True;
  Symbol prop;
  LtlPtr left;
  LtlPtr right;
};

namespace ltl {
LtlPtr truth();
LtlPtr falsity();
LtlPtr prop(Symbol name);
LtlPtr unary(LtlKind kind, LtlPtr a);
LtlPtr binary(LtlKind kind, LtlPtr a, LtlPtr b);
}  // namespace ltl

bool ltlEquals(const Ltl& a, const Ltl& b);
std::string printLtl(const Ltl& f);
/// Negation normal form over True, False, Prop, Not Prop, And, Or, Next,
/// Until and Release.
LtlPtr toNnf(const LtlPtr& f, bool negate = false);
/// Proposition names in first-occurrence order.
std::vector<Symbol> ltlProps(const Ltl& f);
int ltlDepth(const Ltl& f);

}  // namespace stratrew
