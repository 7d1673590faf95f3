#include "stratrew/csr.hpp"

#include <algorithm>
#include <string>

#include "stratrew/engine.hpp"
#include "stratrew/error.hpp"
#include "stratrew/kernel.hpp"

namespace stratrew {

void ReplacementMap::set(Symbol op, std::size_t arity, std::vector<int> indices) {
  map_[{op, arity}] = std::move(indices);
}

std::vector<int> ReplacementMap::of(Symbol op, std::size_t arity) const {
  if (auto it = map_.find({op, arity}); it != map_.end()) return it->second;
  std::vector<int> all;
  for (std::size_t i = 1; i <= arity; ++i) all.push_back(static_cast<int>(i));
  return all;
}

bool ReplacementMap::replacing(Symbol op, std::size_t nodeArity, std::size_t i) const {
  auto contains = [](const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  if (auto it = map_.find({op, nodeArity}); it != map_.end())
    return contains(it->second, static_cast<int>(i + 1));
  if (nodeArity > 2)
    if (auto it = map_.find({op, 2}); it != map_.end())
      return contains(it->second, 1) && contains(it->second, 2);
  return true;
}

ReplacementMap replacementMapOf(const Signature& sig) {
  ReplacementMap mu;
  for (const SymbolInfo* info : sig.allSymbols()) {
    std::vector<int> idx;
    if (info->strat.empty()) {
      for (std::size_t i = 1; i <= info->arity; ++i) idx.push_back(static_cast<int>(i));
    } else {
      for (int k : info->strat)
        if (k > 0 && std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
      std::sort(idx.begin(), idx.end());
    }
    std::erase_if(idx, [&](int k) {
      return static_cast<std::size_t>(k - 1) < info->frozen.size() && info->frozen[k - 1];
    });
    mu.set(info->name, info->arity, std::move(idx));
  }
  return mu;
}

namespace {

void collect(const Term& t, const ReplacementMap& mu, std::vector<std::uint32_t>& path,
             std::vector<std::vector<std::uint32_t>>& out) {
  out.push_back(path);
  if (!t.isApplication()) return;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (!mu.replacing(t.head(), t.arity(), i)) continue;
    path.push_back(static_cast<std::uint32_t>(i));
    collect(t.arg(i), mu, path, out);
    path.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::uint32_t>> muPositions(const Term& t, const ReplacementMap& mu) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> path;
  collect(t, mu, path, out);
  return out;
}

Term muNormalize(const Term& t, Rewriter& rw, const ReplacementMap& mu) {
  Term cur = t;
  for (std::size_t steps = 0;; ++steps) {
    if (steps > rw.limits().rewrites)
      throw NonTerminationError("mu-normalization exceeded " +
                                std::to_string(rw.limits().rewrites) + " steps");
    std::vector<std::vector<std::uint32_t>> ps = muPositions(cur, mu);
    bool stepped = false;
    // Reverse pre-order visits every argument before its parent.
    for (auto it = ps.rbegin(); it != ps.rend() && !stepped; ++it) {
      Position pos{*it, {}};
      const Term& sub = subtermAt(cur, *it);
      if (!sub.isApplication()) continue;
      std::optional<Term> r = rw.equationStep(sub);
      if (!r) {
        std::vector<Term> rs = rw.topRuleSteps(sub);
        if (!rs.empty()) r = rs.front();
      }
      if (r) {
        cur = replaceAt(rw.sig(), cur, pos, *r);
        stepped = true;
      }
    }
    if (!stepped) return cur;
  }
}

Term muNormalize(const Term& t, std::shared_ptr<const ModuleDef> mod, Limits limits) {
  Rewriter rw(std::move(mod), limits);
  return muNormalize(t, rw, replacementMapOf(rw.sig()));
}

namespace {

// Same signature with every evaluation strategy turned into frozen
// arguments.
Signature frozenSignature(const Signature& src, const ReplacementMap& mu) {
  Signature out;
  for (std::size_t i = 0; i < src.sortCount(); ++i)
    out.addSort(Symbol(src.sortName(static_cast<SortId>(i))));
  for (auto [a, b] : src.subsortDecls()) out.addSubsort(a, b);
  for (const OpDecl& d : src.ops()) {
    OpDecl c = d;
    if (!c.attrs.strat.empty()) {
      std::vector<int> keep = mu.of(d.name, d.domain.size());
      c.attrs.frozen.clear();
      for (std::size_t i = 1; i <= d.domain.size(); ++i)
        if (std::find(keep.begin(), keep.end(), static_cast<int>(i)) == keep.end())
          c.attrs.frozen.push_back(static_cast<int>(i));
      c.attrs.strat.clear();
    }
    out.addOp(std::move(c));
  }
  out.finalize();
  return out;
}

}  // namespace

ModuleDef csrTransform(const ModuleDef& mod) {
  for (const Equation& e : mod.equations)
    if (e.owise)
      throw TransformError("csr transformation needs a module without owise equations");
  ReplacementMap mu = replacementMapOf(mod.sig);

  ModuleDef out;
  out.name = Symbol(mod.name.str() + "-CSR");
  out.kind = ModuleKind::Strategy;
  out.imports = mod.imports;
  out.sig = frozenSignature(mod.sig, mu);
  out.rules = mod.rules;
  for (const Equation& e : mod.equations) out.rules.push_back(Rule{e.label, e.lhs, e.rhs, e.cond, false});
  out.stratDecls = mod.stratDecls;
  out.stratDefs = mod.stratDefs;
  out.props = mod.props;
  out.vars = mod.vars;

  const Symbol nvm("norm-via-munorm"), munorm("munorm"), decomp("decomp");
  for (Symbol s : {nvm, munorm, decomp})
    if (mod.hasStrategy(s, 0))
      throw TransformError("module already declares a strategy " + s.str());
  const Symbol subject("AnyTerm");
  for (Symbol s : {nvm, munorm, decomp}) out.stratDecls.push_back(StratDecl{s, {}, subject});

  std::vector<StratPtr> branches;
  for (const OpDecl& d : out.sig.ops()) {
    if (d.attrs.polymorphic) continue;
    if (d.domain.empty()) {
      branches.push_back(strat::match(makeApp(out.sig, d.name, {})));
      continue;
    }
    std::vector<Term> vars;
    for (std::size_t i = 0; i < d.domain.size(); ++i)
      vars.push_back(Term::variable(Symbol("X" + std::to_string(i + 1)),
                                    Symbol(out.sig.sortName(d.domain[i]))));
    Term pat = canonicalize(out.sig, Term::application(d.name, vars));
    std::vector<StratPtr> kids(vars.size(), strat::call(nvm));
    branches.push_back(strat::matchRew(pat, {}, vars, std::move(kids)));
  }
  out.stratDefs.push_back(StratDef{munorm, {}, strat::bang(strat::one(strat::all())), {}});
  out.stratDefs.push_back(StratDef{decomp, {}, strat::choice(std::move(branches)), {}});
  out.stratDefs.push_back(
      StratDef{nvm, {}, strat::seq(strat::call(munorm), strat::call(decomp)), {}});
  return out;
}

std::vector<Term> normViaMunorm(const Term& t, const ModuleDef& mod, Limits limits) {
  auto csr = std::make_shared<const ModuleDef>(csrTransform(mod));
  StrategyEngine eng(csr, limits);
  return eng.srewrite(t, strat::call(Symbol("norm-via-munorm")));
}

}  // namespace stratrew
