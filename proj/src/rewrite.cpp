#include "stratrew/rewrite.hpp"

#include <algorithm>
#include <unordered_set>

#include "stratrew/error.hpp"

namespace stratrew {

namespace {

bool isConst(const Term& t, const char* name) {
  return t.isApplication() && t.arity() == 0 && t.head().str() == name;
}

struct PairHash {
  std::size_t operator()(const std::pair<Symbol, Term>& p) const {
    return hashCombine(SymbolHash()(p.first), p.second.hash());
  }
};

}  // namespace

struct Rewriter::Frame {
  explicit Frame(Rewriter& r) : r_(r) {
    if (++r_.depth_ > r_.limits_.depth)
      throw NonTerminationError("equational reduction nested more than " +
                                std::to_string(r_.limits_.depth) + " levels");
  }
  ~Frame() { --r_.depth_; }
  Rewriter& r_;
};

Rewriter::Rewriter(std::shared_ptr<const ModuleDef> mod, Limits limits)
    : mod_(std::move(mod)), limits_(limits) {
  std::vector<const Equation*> owise;
  for (const Equation& e : mod_->equations) {
    if (!e.lhs.isApplication()) continue;
    const SymbolInfo* info = sig().symbol(e.lhs.head(), e.lhs.arity());
    if (!info) continue;
    if (e.owise)
      owise.push_back(&e);
    else
      eqs_[{info->name, info->arity}].push_back(&e);
  }
  for (const Equation* e : owise) {
    const SymbolInfo* info = sig().symbol(e->lhs.head(), e->lhs.arity());
    eqs_[{info->name, info->arity}].push_back(e);
  }
  for (const Rule& r : mod_->rules) {
    if (!r.label.empty()) rulesByLabel_[r.label].push_back(&r);
    if (!r.nonexec) execRules_.push_back(&r);
  }
  if (sig().symbol(Symbol("true"), 0)) {
    true_ = Term::constant(Symbol("true"));
    false_ = Term::constant(Symbol("false"));
  }
}

const std::vector<const Rule*>& Rewriter::rulesLabelled(Symbol label) const {
  static const std::vector<const Rule*> none;
  auto it = rulesByLabel_.find(label);
  return it == rulesByLabel_.end() ? none : it->second;
}

Term Rewriter::boolConstant(bool b) const { return b ? true_ : false_; }

void Rewriter::countRewrite() {
  ++rewrites_;
  if (rewrites_ - budgetStart_ > limits_.rewrites)
    throw NonTerminationError("equational reduction exceeded " +
                              std::to_string(limits_.rewrites) + " rewrites");
}

Term Rewriter::reduce(const Term& t) {
  if (depth_ == 0) budgetStart_ = rewrites_;
  return reduceRec(t);
}

Term Rewriter::reduceRec(const Term& t) {
  if (!t.isApplication()) return t;
  if (auto it = memo_.find(t); it != memo_.end()) return it->second;
  Frame frame(*this);
  const SymbolInfo* info = sig().symbol(t.head(), t.arity());
  if (!info) throw SortError("no operator " + t.head().str());

  std::vector<int> order = info->strat;
  if (order.empty() || info->assoc) {
    order.clear();
    for (std::size_t i = 1; i <= t.arity(); ++i) order.push_back(static_cast<int>(i));
    order.push_back(0);
  }
  std::vector<Term> args(t.args().begin(), t.args().end());
  Term cur = t;
  bool dirty = false;
  Term result;
  bool done = false;
  for (int e : order) {
    if (e > 0) {
      Term& a = args[static_cast<std::size_t>(e - 1)];
      Term r = reduceRec(a);
      if (!(r == a)) {
        a = r;
        dirty = true;
      }
      continue;
    }
    if (dirty) {
      cur = makeApp(sig(), t.head(), args);
      dirty = false;
      if (!cur.isApplication() || cur.head() != t.head()) {
        result = reduceRec(cur);
        done = true;
        break;
      }
      args.assign(cur.args().begin(), cur.args().end());
    }
    if (auto step = topStep(cur)) {
      result = reduceRec(*step);
      done = true;
      break;
    }
  }
  if (!done) result = dirty ? makeApp(sig(), t.head(), args) : cur;
  memo_.emplace(t, result);
  if (!(result == t)) memo_.emplace(result, result);
  return result;
}

std::optional<Term> Rewriter::topStep(const Term& t) {
  if (!t.isApplication()) return std::nullopt;
  const SymbolInfo* info = sig().symbol(t.head(), t.arity());
  if (info->builtin != Builtin::None) {
    if (auto r = builtin(*info, t)) {
      countRewrite();
      return r;
    }
  }
  auto it = eqs_.find({info->name, info->arity});
  if (it == eqs_.end()) return std::nullopt;
  for (const Equation* e : it->second) {
    std::optional<Term> out;
    forEachMatch(sig(), e->lhs, t, {}, [&](const Subst& s) {
      return solve(e->cond, 0, s, [&](const Subst& s2) {
        out = applySubst(sig(), s2, e->rhs);
        return true;
      });
    });
    if (out) {
      countRewrite();
      return out;
    }
  }
  return std::nullopt;
}

std::optional<Term> Rewriter::builtin(const SymbolInfo& info, const Term& t) {
  if (t.arity() == 0) return std::nullopt;
  const Term& a = t.arg(0);
  if (info.builtin == Builtin::Not) {
    if (isConst(a, "true")) return false_;
    if (isConst(a, "false")) return true_;
    return std::nullopt;
  }
  if (t.arity() != 2) return std::nullopt;
  const Term& b = t.arg(1);
  const bool nums = a.isNumeral() && b.isNumeral();
  const std::uint64_t x = nums ? a.value() : 0, y = nums ? b.value() : 0;
  auto boolLit = [](const Term& u) { return isConst(u, "true") || isConst(u, "false"); };
  switch (info.builtin) {
    case Builtin::Plus:
      if (nums && x + y >= x) return Term::numeral(x + y);
      return std::nullopt;
    case Builtin::Times:
      if (nums && (x == 0 || (x * y) / x == y)) return Term::numeral(x * y);
      return std::nullopt;
    case Builtin::SymDiff:
      if (nums) return Term::numeral(x > y ? x - y : y - x);
      return std::nullopt;
    case Builtin::Rem:
      if (nums && y != 0) return Term::numeral(x % y);
      return std::nullopt;
    case Builtin::Quo:
      if (nums && y != 0) return Term::numeral(x / y);
      return std::nullopt;
    case Builtin::Min:
      if (nums) return Term::numeral(std::min(x, y));
      return std::nullopt;
    case Builtin::Max:
      if (nums) return Term::numeral(std::max(x, y));
      return std::nullopt;
    case Builtin::Less:
      if (nums) return boolConstant(x < y);
      return std::nullopt;
    case Builtin::LessEq:
      if (nums) return boolConstant(x <= y);
      return std::nullopt;
    case Builtin::Greater:
      if (nums) return boolConstant(x > y);
      return std::nullopt;
    case Builtin::GreaterEq:
      if (nums) return boolConstant(x >= y);
      return std::nullopt;
    case Builtin::And:
      if (isConst(a, "false") || isConst(b, "false")) return false_;
      if (isConst(a, "true")) return b;
      if (isConst(b, "true")) return a;
      return std::nullopt;
    case Builtin::Or:
      if (isConst(a, "true") || isConst(b, "true")) return true_;
      if (isConst(a, "false")) return b;
      if (isConst(b, "false")) return a;
      return std::nullopt;
    case Builtin::Xor:
      if (boolLit(a) && boolLit(b)) return boolConstant(!(a == b));
      return std::nullopt;
    case Builtin::Implies:
      if (isConst(a, "false") || isConst(b, "true")) return true_;
      if (isConst(a, "true")) return b;
      return std::nullopt;
    case Builtin::AndThen:
      if (isConst(a, "false")) return false_;
      if (isConst(a, "true")) return b;
      return std::nullopt;
    case Builtin::OrElse:
      if (isConst(a, "true")) return true_;
      if (isConst(a, "false")) return b;
      return std::nullopt;
    case Builtin::Equal:
      return boolConstant(a == b);
    case Builtin::NotEqual:
      return boolConstant(!(a == b));
    default:
      return std::nullopt;
  }
}

bool Rewriter::solve(const Condition& cond, std::size_t i, const Subst& s,
                     const std::function<bool(const Subst&)>& cb) {
  if (i == cond.size()) return cb(s);
  const CondFragment& f = cond[i];
  switch (f.kind) {
    case CondFragment::Kind::Equality: {
      Term l = reduceRec(applySubst(sig(), s, f.lhs));
      Term r = reduceRec(applySubst(sig(), s, f.rhs));
      return l == r ? solve(cond, i + 1, s, cb) : false;
    }
    case CondFragment::Kind::Assignment: {
      Term r = reduceRec(applySubst(sig(), s, f.rhs));
      return forEachMatch(sig(), f.lhs, r, s,
                          [&](const Subst& s2) { return solve(cond, i + 1, Subst(s2), cb); });
    }
    case CondFragment::Kind::SortTest: {
      Term v = reduceRec(applySubst(sig(), s, f.lhs));
      auto srt = sig().findSort(f.sort);
      if (!srt) throw SortError("unknown sort " + f.sort.str());
      return sig().hasSort(v, *srt) ? solve(cond, i + 1, s, cb) : false;
    }
  }
  return false;
}

bool Rewriter::forEachSolution(const Condition& cond, const Subst& s,
                               const std::function<bool(const Subst&)>& cb) {
  if (depth_ == 0) budgetStart_ = rewrites_;
  return solve(cond, 0, s, cb);
}

bool Rewriter::holds(const Condition& cond, const Subst& s) {
  return forEachSolution(cond, s, [](const Subst&) { return true; });
}

void Rewriter::ruleResults(const Rule& r, const Term& t, const Subst& init, bool top,
                           const std::function<void(const Term&)>& out) {
  AnywhereOptions opts;
  opts.respectFrozen = true;
  opts.topOnly = top;
  forEachMatchAnywhere(sig(), r.lhs, t, init, opts, [&](const Position& pos, const Subst& s) {
    solve(r.cond, 0, Subst(s), [&](const Subst& s2) {
      std::vector<Term> vars;
      collectVariables(r.rhs, vars);
      for (const Term& v : vars)
        if (!s2.find(v))
          throw InstantiationError("variable " + v.head().str() + " of rule " +
                                   (r.label.empty() ? std::string("(unlabeled)") : r.label.str()) +
                                   " is not bound");
      Term rhs = applySubst(sig(), s2, r.rhs);
      out(reduce(replaceAt(sig(), t, pos, rhs)));
      return false;
    });
    return false;
  });
}

std::vector<Term> Rewriter::topRuleSteps(const Term& t) {
  std::vector<Term> out;
  for (const Rule* r : execRules_)
    ruleResults(*r, t, {}, true, [&](const Term& res) {
      if (std::find(out.begin(), out.end(), res) == out.end()) out.push_back(res);
    });
  return out;
}

std::vector<Term> Rewriter::applyRule(const Term& t, Symbol label,
                                      const std::vector<std::pair<Symbol, Term>>& init,
                                      bool top) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  for (const Rule* r : rulesLabelled(label)) {
    std::vector<Term> vars;
    collectVariables(r->lhs, vars);
    collectVariables(r->rhs, vars);
    for (const CondFragment& f : r->cond) {
      collectVariables(f.lhs, vars);
      if (f.rhs) collectVariables(f.rhs, vars);
    }
    Subst s;
    bool ok = true;
    for (const auto& [name, value] : init) {
      for (const Term& v : vars) {
        if (v.head() != name) continue;
        SortId vs = sig().variableSort(v);
        if (vs != kAnySort && !sig().hasSort(value, vs)) ok = false;
        s.bind(v, value);
      }
    }
    if (!ok) continue;
    ruleResults(*r, t, s, top, [&](const Term& res) {
      if (seen.insert(res).second) out.push_back(res);
    });
  }
  return out;
}

std::vector<std::pair<Symbol, Term>> Rewriter::successors(const Term& t) {
  std::vector<std::pair<Symbol, Term>> out;
  std::unordered_set<std::pair<Symbol, Term>, PairHash> seen;
  for (const Rule* r : execRules_) {
    ruleResults(*r, t, {}, false, [&](const Term& res) {
      std::pair<Symbol, Term> p{r->label, res};
      if (seen.insert(p).second) out.push_back(p);
    });
  }
  return out;
}

std::vector<Term> Rewriter::applyAll(const Term& t) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  for (const Rule* r : execRules_)
    ruleResults(*r, t, {}, false, [&](const Term& res) {
      if (seen.insert(res).second) out.push_back(res);
    });
  return out;
}

std::pair<Term, std::size_t> Rewriter::rewrite(const Term& t, std::size_t maxSteps) {
  // Leftmost-innermost: the first unfrozen position in post-order where
  // some executable rule matches.
  std::function<std::optional<Term>(const Term&)> step = [&](const Term& u) -> std::optional<Term> {
    if (u.isApplication()) {
      const SymbolInfo* info = sig().symbol(u.head(), u.arity());
      for (std::size_t i = 0; i < u.arity(); ++i) {
        bool frozen = false;
        if (info) {
          if (info->assoc) {
            for (bool f : info->frozen) frozen = frozen || f;
          } else {
            frozen = i < info->frozen.size() && info->frozen[i];
          }
        }
        if (frozen) continue;
        if (auto r = step(u.arg(i))) {
          std::vector<Term> args(u.args().begin(), u.args().end());
          args[i] = *r;
          return makeApp(sig(), u.head(), std::move(args));
        }
      }
    }
    for (const Rule* r : execRules_) {
      std::optional<Term> out;
      forEachMatch(sig(), r->lhs, u, {}, [&](const Subst& s) {
        return solve(r->cond, 0, Subst(s), [&](const Subst& s2) {
          std::vector<Term> vars;
          collectVariables(r->rhs, vars);
          for (const Term& v : vars)
            if (!s2.find(v))
              throw InstantiationError("variable " + v.head().str() + " of rule " +
                                       r->label.str() + " is not bound");
          out = applySubst(sig(), s2, r->rhs);
          return true;
        });
      });
      if (out) return out;
    }
    return std::nullopt;
  };
  Term cur = reduce(t);
  std::size_t steps = 0;
  while (steps < maxSteps) {
    auto next = step(cur);
    if (!next) break;
    cur = reduce(*next);
    ++steps;
  }
  return {cur, steps};
}

}  // namespace stratrew
