#include "stratrew/ltl.hpp"

#include <algorithm>

namespace stratrew {

namespace ltl {

namespace {
LtlPtr make(LtlKind k, Symbol p = {}, LtlPtr a = nullptr, LtlPtr b = nullptr) {
  auto f = std::make_shared<Ltl>();
  f->kind = k;
  f->prop = p;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}
}  // namespace

LtlPtr truth() {
  static const LtlPtr t = make(LtlKind::True);
  return t;
}
LtlPtr falsity() {
  static const LtlPtr f = make(LtlKind::False);
  return f;
}
LtlPtr prop(Symbol name) { return make(LtlKind::Prop, name); }
LtlPtr unary(LtlKind kind, LtlPtr a) { return make(kind, {}, std::move(a)); }
LtlPtr binary(LtlKind kind, LtlPtr a, LtlPtr b) { return make(kind, {}, std::move(a), std::move(b)); }

}  // namespace ltl

bool ltlEquals(const Ltl& a, const Ltl& b) {
  if (a.kind != b.kind || !(a.prop == b.prop)) return false;
  if ((a.left == nullptr) != (b.left == nullptr) || (a.right == nullptr) != (b.right == nullptr))
    return false;
  if (a.left && !ltlEquals(*a.left, *b.left)) return false;
  if (a.right && !ltlEquals(*a.right, *b.right)) return false;
  return true;
}

namespace {

int precOf(const Ltl& f) {
  switch (f.kind) {
    case LtlKind::Not:
    case LtlKind::Next:
    case LtlKind::Always:
    case LtlKind::Eventually:
      return 53;
    case LtlKind::And:
      return 55;
    case LtlKind::Or:
      return 59;
    case LtlKind::Until:
    case LtlKind::Release:
      return 63;
    case LtlKind::Implies:
      return 65;
    default:
      return 0;
  }
}

void render(const Ltl& f, int maxPrec, std::string& out) {
  const int p = precOf(f);
  const bool parens = p > maxPrec;
  if (parens) out += '(';
  switch (f.kind) {
    case LtlKind::True:
      out += "true";
      break;
    case LtlKind::False:
      out += "false";
      break;
    case LtlKind::Prop:
      out += f.prop.str();
      break;
    case LtlKind::Not:
    case LtlKind::Next:
    case LtlKind::Always:
    case LtlKind::Eventually:
      out += f.kind == LtlKind::Not    ? "~ "
             : f.kind == LtlKind::Next ? "O "
             : f.kind == LtlKind::Always ? "[] "
                                         : "<> ";
      render(*f.left, 53, out);
      break;
    case LtlKind::And:
    case LtlKind::Or: {
      render(*f.left, p, out);
      out += f.kind == LtlKind::And ? " /\\ " : " \\/ ";
      render(*f.right, p - 1, out);
      break;
    }
    case LtlKind::Until:
    case LtlKind::Release:
    case LtlKind::Implies:
      render(*f.left, p - 1, out);
      out += f.kind == LtlKind::Until ? " U " : f.kind == LtlKind::Release ? " R " : " -> ";
      render(*f.right, p, out);
      break;
  }
  if (parens) out += ')';
}

void props(const Ltl& f, std::vector<Symbol>& out) {
  if (f.kind == LtlKind::Prop) {
    for (const Symbol& s : out)
      if (s == f.prop) return;
    out.push_back(f.prop);
  }
  if (f.left) props(*f.left, out);
  if (f.right) props(*f.right, out);
}

}  // namespace

std::string printLtl(const Ltl& f) {
  std::string out;
  render(f, 1000, out);
  return out;
}

LtlPtr toNnf(const LtlPtr& f, bool negate) {
  using namespace ltl;
  switch (f->kind) {
    case LtlKind::True:
      return negate ? falsity() : truth();
    case LtlKind::False:
      return negate ? truth() : falsity();
    case LtlKind::Prop:
      return negate ? unary(LtlKind::Not, f) : f;
    case LtlKind::Not:
      return toNnf(f->left, !negate);
    case LtlKind::And:
    case LtlKind::Or: {
      const bool isAnd = (f->kind == LtlKind::And) != negate;
      return binary(isAnd ? LtlKind::And : LtlKind::Or, toNnf(f->left, negate),
                    toNnf(f->right, negate));
    }
    case LtlKind::Implies:
      if (negate) return binary(LtlKind::And, toNnf(f->left, false), toNnf(f->right, true));
      return binary(LtlKind::Or, toNnf(f->left, true), toNnf(f->right, false));
    case LtlKind::Next:
      return unary(LtlKind::Next, toNnf(f->left, negate));
    case LtlKind::Always:
      if (negate) return binary(LtlKind::Until, truth(), toNnf(f->left, true));
      return binary(LtlKind::Release, falsity(), toNnf(f->left, false));
    case LtlKind::Eventually:
      if (negate) return binary(LtlKind::Release, falsity(), toNnf(f->left, true));
      return binary(LtlKind::Until, truth(), toNnf(f->left, false));
    case LtlKind::Until:
      return binary(negate ? LtlKind::Release : LtlKind::Until, toNnf(f->left, negate),
                    toNnf(f->right, negate));
    case LtlKind::Release:
      return binary(negate ? LtlKind::Until : LtlKind::Release, toNnf(f->left, negate),
                    toNnf(f->right, negate));
  }
  return f;
}

std::vector<Symbol> ltlProps(const Ltl& f) {
  std::vector<Symbol> out;
  props(f, out);
  return out;
}

int ltlDepth(const Ltl& f) {
  int d = 0;
  if (f.left) d = std::max(d, ltlDepth(*f.left));
  if (f.right) d = std::max(d, ltlDepth(*f.right));
  return f.kind == LtlKind::True || f.kind == LtlKind::False || f.kind == LtlKind::Prop ? 0
                                                                                          : d + 1;
}

}  // namespace stratrew
