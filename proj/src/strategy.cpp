#include "stratrew/strategy.hpp"

namespace stratrew {

namespace {

StratPtr make(Strategy s) { return std::make_shared<const Strategy>(std::move(s)); }

Strategy ofKind(StratKind k) {
  Strategy s;
  s.kind = k;
  return s;
}

}  // namespace

namespace strat {

StratPtr idle() {
  static const StratPtr s = make(ofKind(StratKind::Idle));
  return s;
}

StratPtr fail() {
  static const StratPtr s = make(ofKind(StratKind::Fail));
  return s;
}

StratPtr all() {
  static const StratPtr s = make(ofKind(StratKind::All));
  return s;
}

StratPtr apply(Symbol label, std::vector<std::pair<Symbol, Term>> assignments, bool top) {
  Strategy s = ofKind(StratKind::Apply);
  s.name = label;
  s.assignments = std::move(assignments);
  s.top = top;
  return make(std::move(s));
}

StratPtr match(Term pattern, Condition cond, bool anywhere) {
  Strategy s = ofKind(StratKind::Match);
  s.pattern = pattern;
  s.cond = std::move(cond);
  s.anywhere = anywhere;
  return make(std::move(s));
}

namespace {
StratPtr nary(StratKind kind, std::vector<StratPtr> xs) {
  std::vector<StratPtr> flat;
  for (StratPtr& x : xs) {
    if (x->kind == kind) {
      for (const StratPtr& c : x->children) flat.push_back(c);
    } else {
      flat.push_back(std::move(x));
    }
  }
  if (flat.size() == 1) return flat.front();
  Strategy s = ofKind(kind);
  s.children = std::move(flat);
  return make(std::move(s));
}
}  // namespace

StratPtr seq(std::vector<StratPtr> xs) {
  if (xs.empty()) return idle();
  return nary(StratKind::Seq, std::move(xs));
}

StratPtr seq(StratPtr a, StratPtr b) { return seq(std::vector<StratPtr>{std::move(a), std::move(b)}); }

StratPtr choice(std::vector<StratPtr> xs) {
  if (xs.empty()) return fail();
  return nary(StratKind::Choice, std::move(xs));
}

StratPtr choice(StratPtr a, StratPtr b) {
  return choice(std::vector<StratPtr>{std::move(a), std::move(b)});
}

StratPtr unary(StratKind kind, StratPtr a) {
  Strategy s = ofKind(kind);
  s.children = {std::move(a)};
  return make(std::move(s));
}

StratPtr star(StratPtr a) { return unary(StratKind::Star, std::move(a)); }
StratPtr bang(StratPtr a) { return unary(StratKind::Bang, std::move(a)); }
StratPtr one(StratPtr a) { return unary(StratKind::One, std::move(a)); }

StratPtr cond(StratPtr c, StratPtr t, StratPtr e) {
  Strategy s = ofKind(StratKind::Cond);
  s.children = {std::move(c), std::move(t), std::move(e)};
  return make(std::move(s));
}

StratPtr matchRew(Term pattern, Condition cond, std::vector<Term> vars,
                  std::vector<StratPtr> strategies, bool anywhere) {
  Strategy s = ofKind(StratKind::MatchRew);
  s.pattern = pattern;
  s.cond = std::move(cond);
  s.usingVars = std::move(vars);
  s.children = std::move(strategies);
  s.anywhere = anywhere;
  return make(std::move(s));
}

StratPtr call(Symbol name, std::vector<Term> args) {
  Strategy s = ofKind(StratKind::Call);
  s.name = name;
  s.args = std::move(args);
  return make(std::move(s));
}

StratPtr congruence(Symbol op, std::vector<StratPtr> children) {
  Strategy s = ofKind(StratKind::Congruence);
  s.name = op;
  s.children = std::move(children);
  return make(std::move(s));
}

StratPtr orElse(StratPtr a, StratPtr b) {
  Strategy s = ofKind(StratKind::OrElse);
  s.children = {std::move(a), std::move(b)};
  return make(std::move(s));
}

}  // namespace strat

StratPtr desugar(const StratPtr& s) {
  switch (s->kind) {
    case StratKind::Try:
      return strat::cond(desugar(s->children[0]), strat::idle(), strat::idle());
    case StratKind::Not:
      return strat::cond(desugar(s->children[0]), strat::fail(), strat::idle());
    case StratKind::Test: {
      StratPtr inner = strat::cond(desugar(s->children[0]), strat::fail(), strat::idle());
      return strat::cond(inner, strat::fail(), strat::idle());
    }
    case StratKind::OrElse:
      return strat::cond(desugar(s->children[0]), strat::idle(), desugar(s->children[1]));
    default:
      break;
  }
  if (s->children.empty()) return s;
  bool changed = false;
  std::vector<StratPtr> kids;
  kids.reserve(s->children.size());
  for (const StratPtr& c : s->children) {
    kids.push_back(desugar(c));
    changed = changed || kids.back() != c;
  }
  if (!changed) return s;
  Strategy copy = *s;
  copy.children = std::move(kids);
  return make(std::move(copy));
}

bool strategyEquals(const Strategy& a, const Strategy& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind || !(a.name == b.name) || a.top != b.top || a.anywhere != b.anywhere ||
      a.assignments != b.assignments || !(a.pattern == b.pattern) || a.cond != b.cond ||
      a.args != b.args || a.usingVars != b.usingVars || a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!strategyEquals(*a.children[i], *b.children[i])) return false;
  return true;
}

bool isExtended(const Strategy& s) {
  switch (s.kind) {
    case StratKind::Congruence:
    case StratKind::GtAll:
    case StratKind::GtOne:
    case StratKind::GtSome:
      return true;
    default:
      break;
  }
  for (const StratPtr& c : s.children)
    if (isExtended(*c)) return true;
  return false;
}

bool containsSugar(const Strategy& s) {
  switch (s.kind) {
    case StratKind::Try:
    case StratKind::Not:
    case StratKind::Test:
    case StratKind::OrElse:
      return true;
    default:
      break;
  }
  for (const StratPtr& c : s.children)
    if (containsSugar(*c)) return true;
  return false;
}

}  // namespace stratrew
