#include "stratrew/engine.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "stratrew/error.hpp"
#include "stratrew/ext.hpp"
#include "stratrew/kernel.hpp"

namespace stratrew {

namespace {

constexpr std::size_t kUnlimited = static_cast<std::size_t>(-1);

// Appends `t` unless already present.
void addUnique(std::vector<Term>& out, std::unordered_set<Term, TermHash>& seen, const Term& t) {
  if (seen.insert(t).second) out.push_back(t);
}

const Term& boundValue(const Subst& s, const Term& var) {
  const Term* v = s.find(var);
  if (!v)
    throw InstantiationError("matchrew variable " + var.head().str() +
                             " is not bound by the pattern or condition");
  return *v;
}

// Calls `cb` for every combination of one element per slot.
void cartesian(const std::vector<std::vector<Term>>& slots,
               const std::function<void(const std::vector<Term>&)>& cb) {
  std::vector<Term> pick(slots.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == slots.size()) {
      cb(pick);
      return;
    }
    for (const Term& r : slots[i]) {
      pick[i] = r;
      rec(i + 1);
    }
  };
  rec(0);
}

}  // namespace

StrategyEngine::StrategyEngine(std::shared_ptr<const ModuleDef> mod, Limits limits)
    : rw_(std::move(mod), limits), limits_(limits) {
  for (const StratDef& d : rw_.module().stratDefs)
    defs_[{d.name, d.lhs.size()}].push_back(&d);
}

const Subst* StrategyEngine::intern(const Subst& s) { return &*envs_.insert(s).first; }

const Frame* StrategyEngine::push(const Strategy* s, const Subst* env, const Frame* next) {
  std::size_t h = std::hash<const void*>()(s);
  h = hashCombine(h, std::hash<const void*>()(env));
  h = hashCombine(h, next ? next->hash : 0x9e37);
  return &*frames_.insert(Frame{s, env, next, h}).first;
}

const Strategy* StrategyEngine::keep(StratPtr s) {
  kept_.push_back(std::move(s));
  return kept_.back().get();
}

const Strategy* StrategyEngine::desugared(const Strategy* s) {
  auto it = desugared_.find(s);
  if (it != desugared_.end()) return it->second;
  const Strategy* d = keep(desugar(StratPtr(StratPtr(), s)));
  desugared_.emplace(s, d);
  return d;
}

const Strategy* StrategyEngine::tryOf(const Strategy* s) {
  auto it = tries_.find(s);
  if (it != tries_.end()) return it->second;
  const Strategy* d = keep(strat::cond(StratPtr(StratPtr(), s), strat::idle(), strat::idle()));
  tries_.emplace(s, d);
  return d;
}

void StrategyEngine::countState() {
  if (++states_ > limits_.states)
    throw SearchLimitError("search state limit of " + std::to_string(limits_.states) +
                           " exceeded");
}

ExecState StrategyEngine::initial(const Term& t, const StratPtr& s, const Subst& env) {
  const Strategy* p = keep(s);
  return ExecState{rw_.reduce(t), push(p, intern(env), nullptr)};
}

Symbol StrategyEngine::labelOf(const Strategy& s) {
  switch (s.kind) {
    case StratKind::Apply:
    case StratKind::Call:
    case StratKind::Congruence:
      return s.name;
    case StratKind::All:
      return Symbol("all");
    case StratKind::GtAll:
      return Symbol("gt-all");
    case StratKind::GtOne:
      return Symbol("gt-one");
    case StratKind::GtSome:
      return Symbol("gt-some");
    case StratKind::MatchRew:
      for (const StratPtr& c : s.children)
        if (Symbol l = labelOf(*c); !l.empty()) return l;
      return Symbol("matchrew");
    case StratKind::Idle:
    case StratKind::Fail:
    case StratKind::Match:
      return Symbol();
    default:
      break;
  }
  for (const StratPtr& c : s.children)
    if (Symbol l = labelOf(*c); !l.empty()) return l;
  return Symbol();
}

std::vector<Step> StrategyEngine::stepSuccessors(const ExecState& st) {
  std::vector<Step> out;
  if (st.finished()) return out;
  const Frame* f = st.stack;
  const Strategy& s = *f->strategy;
  const Subst* envp = f->env;
  const Subst& env = *envp;
  const Frame* rest = f->next;
  const Term& t = st.term;

  auto control = [&](const Term& u, const Frame* stk) {
    out.push_back(Step{StepClass::Control, ExecState{u, stk}, Symbol()});
  };
  auto system = [&](const Term& u, const Frame* stk, Symbol label) {
    out.push_back(Step{StepClass::System, ExecState{u, stk}, label});
  };
  auto atomicLabel = [&](const Strategy& x) {
    Symbol l = labelOf(x);
    return l.empty() ? Symbol("idle") : l;
  };

  switch (s.kind) {
    case StratKind::Idle:
      control(t, rest);
      break;
    case StratKind::Fail:
      break;
    case StratKind::Apply: {
      std::vector<std::pair<Symbol, Term>> init;
      for (const auto& [name, value] : s.assignments)
        init.emplace_back(name, rw_.reduce(applySubst(sig(), env, value)));
      for (const Term& r : rw_.applyRule(t, s.name, init, s.top)) system(r, rest, s.name);
      break;
    }
    case StratKind::All:
      for (const Term& r : rw_.applyAll(t)) system(r, rest, Symbol("all"));
      break;
    case StratKind::Match: {
      bool ok = false;
      matchTest(t, s, env, ok);
      if (ok) system(t, rest, Symbol("match"));
      break;
    }
    case StratKind::Seq: {
      const Frame* stk = rest;
      for (auto it = s.children.rbegin(); it != s.children.rend(); ++it)
        stk = push(it->get(), envp, stk);
      control(t, stk);
      break;
    }
    case StratKind::Choice:
      for (const StratPtr& c : s.children) control(t, push(c.get(), envp, rest));
      break;
    case StratKind::Star:
      control(t, rest);
      control(t, push(s.children[0].get(), envp, push(&s, envp, rest)));
      break;
    case StratKind::Bang:
      if (atomic(t, *s.children[0], env).empty())
        control(t, rest);
      else
        control(t, push(s.children[0].get(), envp, push(&s, envp, rest)));
      break;
    case StratKind::Cond: {
      std::vector<Term> rs = atomic(t, *s.children[0], env);
      if (rs.empty()) {
        control(t, push(s.children[2].get(), envp, rest));
      } else {
        const Frame* thenStk = push(s.children[1].get(), envp, rest);
        Symbol label = atomicLabel(*s.children[0]);
        for (const Term& r : rs) system(r, thenStk, label);
      }
      break;
    }
    case StratKind::One: {
      Symbol label = atomicLabel(*s.children[0]);
      for (const Term& r : firstSolution(t, *s.children[0], env)) system(r, rest, label);
      break;
    }
    case StratKind::MatchRew: {
      Symbol label = atomicLabel(s);
      for (const Term& r : matchRewResults(t, s, env)) system(r, rest, label);
      break;
    }
    case StratKind::Call: {
      std::vector<std::pair<const Strategy*, const Subst*>> targets;
      callTargets(s, env, targets);
      for (const auto& [body, benv] : targets) control(t, push(body, benv, rest));
      break;
    }
    case StratKind::Congruence:
    case StratKind::GtAll:
    case StratKind::GtOne:
    case StratKind::GtSome: {
      Symbol label = labelOf(s);
      for (const Term& r : extended(t, s, env)) system(r, rest, label);
      break;
    }
    case StratKind::Try:
    case StratKind::Not:
    case StratKind::Test:
    case StratKind::OrElse:
      control(t, push(desugared(&s), envp, rest));
      break;
  }
  return out;
}

void StrategyEngine::matchTest(const Term& t, const Strategy& s, const Subst& env, bool& ok) {
  auto tryCond = [&](const Subst& sigma) {
    ok = rw_.holds(s.cond, sigma);
    return ok;
  };
  if (s.anywhere) {
    forEachMatchAnywhere(sig(), s.pattern, t, env, {},
                         [&](const Position&, const Subst& sigma) { return tryCond(sigma); });
  } else {
    forEachMatch(sig(), s.pattern, t, env, tryCond);
  }
}

void StrategyEngine::callTargets(const Strategy& s, const Subst& env,
                                 std::vector<std::pair<const Strategy*, const Subst*>>& out) {
  auto it = defs_.find({s.name, s.args.size()});
  if (it == defs_.end()) return;
  std::vector<Term> args;
  for (const Term& a : s.args) args.push_back(rw_.reduce(applySubst(sig(), env, a)));
  for (const StratDef* d : it->second) {
    std::vector<Subst> partial{Subst()};
    for (std::size_t i = 0; i < args.size() && !partial.empty(); ++i) {
      std::vector<Subst> next;
      for (const Subst& sigma : partial)
        for (Subst& m : matchRoot(sig(), d->lhs[i], args[i], sigma)) next.push_back(std::move(m));
      partial = std::move(next);
    }
    for (const Subst& sigma : partial) {
      rw_.forEachSolution(d->cond, sigma, [&](const Subst& full) {
        std::pair<const Strategy*, const Subst*> target{d->body.get(), intern(full)};
        if (std::find(out.begin(), out.end(), target) == out.end()) out.push_back(target);
        return false;
      });
    }
  }
}

std::vector<Term> StrategyEngine::matchRewResults(const Term& t, const Strategy& s,
                                                  const Subst& env) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  auto handle = [&](const Position* pos, const Subst& sigma) {
    rw_.forEachSolution(s.cond, sigma, [&](const Subst& full) {
      std::vector<std::vector<Term>> slots;
      for (std::size_t i = 0; i < s.usingVars.size(); ++i) {
        Term value = rw_.reduce(boundValue(full, s.usingVars[i]));
        slots.push_back(atomic(value, *s.children[i], full));
        if (slots.back().empty()) return false;
      }
      cartesian(slots, [&](const std::vector<Term>& pick) {
        Subst inst = full;
        for (std::size_t i = 0; i < pick.size(); ++i) inst.set(s.usingVars[i], pick[i]);
        Term repl = applySubst(sig(), inst, s.pattern);
        Term u = pos ? replaceAt(sig(), t, *pos, repl) : repl;
        addUnique(out, seen, rw_.reduce(u));
      });
      return false;
    });
    return false;
  };
  if (s.anywhere) {
    for (const auto& [pos, sigma] : [&] {
           std::vector<std::pair<Position, Subst>> ms;
           forEachMatchAnywhere(sig(), s.pattern, t, env, {},
                                [&](const Position& p, const Subst& sigma) {
                                  ms.emplace_back(p, sigma);
                                  return false;
                                });
           return ms;
         }())
      handle(&pos, sigma);
  } else {
    for (const Subst& sigma : matchRoot(sig(), s.pattern, t, env)) handle(nullptr, sigma);
  }
  return out;
}

std::vector<Term> StrategyEngine::search(const ExecState& init, bool depthFirst,
                                         std::size_t maxSolutions,
                                         const std::function<bool(const Term&)>& onSolution) {
  std::vector<Term> sols;
  std::unordered_set<Term, TermHash> seen;
  std::unordered_set<ExecState, ExecStateHash> visited{init};
  std::deque<ExecState> frontier{init};
  while (!frontier.empty()) {
    ExecState st;
    if (depthFirst) {
      st = frontier.back();
      frontier.pop_back();
    } else {
      st = frontier.front();
      frontier.pop_front();
    }
    countState();
    if (st.finished()) {
      if (seen.insert(st.term).second) {
        sols.push_back(st.term);
        if (onSolution && !onSolution(st.term)) break;
        if (sols.size() >= maxSolutions) break;
      }
      continue;
    }
    std::vector<Step> next = stepSuccessors(st);
    if (depthFirst) std::reverse(next.begin(), next.end());
    for (Step& n : next)
      if (visited.insert(n.state).second) frontier.push_back(n.state);
  }
  return sols;
}

std::vector<Term> StrategyEngine::srewrite(const Term& t, const StratPtr& s, bool depthFirst,
                                           const std::function<bool(const Term&)>& onSolution) {
  return search(initial(t, s), depthFirst, kUnlimited, onSolution);
}

namespace {
struct NestingGuard {
  std::size_t& n;
  NestingGuard(std::size_t& n, std::size_t limit) : n(n) {
    if (++n > limit) {
      --n;
      throw SearchLimitError("strategy nesting limit exceeded");
    }
  }
  ~NestingGuard() { --n; }
};
}  // namespace

std::vector<Term> StrategyEngine::atomicSuccessors(const Term& t, const StratPtr& s,
                                                   const Subst& env) {
  return atomic(rw_.reduce(t), *keep(s), env);
}

std::vector<Term> StrategyEngine::atomic(const Term& t, const Strategy& s, const Subst& env) {
  AtomKey key{t, &s, intern(env), false};
  if (auto it = atoms_.find(key); it != atoms_.end()) return it->second;
  if (!inProgress_.insert(key).second)
    throw SearchLimitError("strategy evaluation depends on its own result");
  std::vector<Term> rs;
  try {
    NestingGuard guard(nesting_, limits_.depth);
    rs = search(ExecState{t, push(&s, key.env, nullptr)}, false, kUnlimited, {});
  } catch (...) {
    inProgress_.erase(key);
    throw;
  }
  inProgress_.erase(key);
  atoms_.emplace(key, rs);
  return rs;
}

std::vector<Term> StrategyEngine::firstSolution(const Term& t, const Strategy& s,
                                                const Subst& env) {
  AtomKey key{t, &s, intern(env), true};
  if (auto it = atoms_.find(key); it != atoms_.end()) return it->second;
  if (!inProgress_.insert(key).second)
    throw SearchLimitError("strategy evaluation depends on its own result");
  std::vector<Term> rs;
  try {
    NestingGuard guard(nesting_, limits_.depth);
    rs = search(ExecState{t, push(&s, key.env, nullptr)}, true, 1, {});
  } catch (...) {
    inProgress_.erase(key);
    throw;
  }
  inProgress_.erase(key);
  atoms_.emplace(key, rs);
  return rs;
}

// Native extended operators. Each constructor declaration contributes the
// same branch as in the translation, so both agree on overloaded and
// associative constructors.

const Term& StrategyEngine::patternFor(std::size_t decl) {
  auto it = declPatterns_.find(decl);
  if (it == declPatterns_.end()) it = declPatterns_.emplace(decl, declPattern(sig(), decl)).first;
  return it->second;
}

void StrategyEngine::congruenceBranch(const Term& t, std::size_t decl,
                                      const std::vector<const Strategy*>& kids, const Subst& env,
                                      std::vector<Term>& out,
                                      std::unordered_set<Term, TermHash>& seen) {
  const OpDecl& d = sig().ops()[decl];
  if (d.domain.empty()) {
    if (t == makeApp(sig(), d.name, {})) addUnique(out, seen, t);
    return;
  }
  const Term& pat = patternFor(decl);
  for (const Subst& sigma : matchRoot(sig(), pat, t)) {
    std::vector<std::vector<Term>> slots;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      slots.push_back(atomic(rw_.reduce(boundValue(sigma, pat.arg(i))), *kids[i], env));
      if (slots.back().empty()) break;
    }
    if (slots.size() < kids.size() || slots.back().empty()) continue;
    cartesian(slots, [&](const std::vector<Term>& pick) {
      Subst inst = sigma;
      for (std::size_t i = 0; i < pick.size(); ++i) inst.set(pat.arg(i), pick[i]);
      addUnique(out, seen, rw_.reduce(applySubst(sig(), inst, pat)));
    });
  }
}

std::vector<Term> StrategyEngine::extended(const Term& t, const Strategy& s, const Subst& env) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  switch (s.kind) {
    case StratKind::Congruence: {
      std::vector<const Strategy*> kids;
      for (const StratPtr& c : s.children) kids.push_back(c.get());
      bool any = false;
      for (std::size_t d : ctorDecls(sig())) {
        const OpDecl& od = sig().ops()[d];
        if (od.name == s.name && od.domain.size() == kids.size()) {
          any = true;
          congruenceBranch(t, d, kids, env, out, seen);
        }
      }
      if (!any)
        throw SortError("no constructor " + s.name.str() + " with " +
                        std::to_string(kids.size()) + " arguments");
      break;
    }
    case StratKind::GtAll:
      gtAll(t, *s.children[0], env, out, seen);
      break;
    case StratKind::GtOne:
      gtOne(t, *s.children[0], env, out, seen);
      break;
    case StratKind::GtSome: {
      std::vector<Term> probe;
      std::unordered_set<Term, TermHash> probeSeen;
      gtOne(t, *s.children[0], env, probe, probeSeen);
      if (!probe.empty()) gtAll(t, *tryOf(s.children[0].get()), env, out, seen);
      break;
    }
    default:
      break;
  }
  return out;
}

void StrategyEngine::gtAll(const Term& t, const Strategy& a, const Subst& env,
                           std::vector<Term>& out, std::unordered_set<Term, TermHash>& seen) {
  for (std::size_t d : ctorDecls(sig())) {
    std::vector<const Strategy*> kids(sig().ops()[d].domain.size(), &a);
    congruenceBranch(t, d, kids, env, out, seen);
  }
}

void StrategyEngine::gtOne(const Term& t, const Strategy& a, const Subst& env,
                           std::vector<Term>& out, std::unordered_set<Term, TermHash>& seen) {
  for (std::size_t d : ctorDecls(sig())) {
    const OpDecl& od = sig().ops()[d];
    if (od.domain.empty()) continue;
    const Term& pat = patternFor(d);
    std::vector<Subst> matches = matchRoot(sig(), pat, t);
    if (matches.empty()) continue;
    for (std::size_t i = 0; i < od.domain.size(); ++i) {
      bool found = false;
      for (const Subst& sigma : matches) {
        for (const Term& r :
             atomic(rw_.reduce(boundValue(sigma, pat.arg(i))), a, env)) {
          Subst inst = sigma;
          inst.set(pat.arg(i), r);
          addUnique(out, seen, rw_.reduce(applySubst(sig(), inst, pat)));
          found = true;
        }
      }
      if (found) break;
    }
  }
}

}  // namespace stratrew
