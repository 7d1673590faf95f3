#include "stratrew/ext.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "stratrew/error.hpp"
#include "stratrew/kernel.hpp"

namespace stratrew {

std::vector<std::pair<Symbol, std::size_t>> congruenceOps(const Signature& sig) {
  std::vector<std::pair<Symbol, std::size_t>> out;
  for (const OpDecl& d : sig.ops()) {
    if (!d.attrs.ctor || d.attrs.prelude) continue;
    std::pair<Symbol, std::size_t> key{d.name, d.domain.size()};
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
  }
  return out;
}

std::vector<std::size_t> ctorDecls(const Signature& sig) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sig.ops().size(); ++i)
    if (sig.ops()[i].attrs.ctor) out.push_back(i);
  return out;
}

Term freshVariable(Symbol sort) {
  static std::atomic<std::uint64_t> counter{0};
  return Term::variable(Symbol("%X" + std::to_string(++counter)), sort);
}

Term declPattern(const Signature& sig, std::size_t decl) {
  const OpDecl& d = sig.ops().at(decl);
  std::vector<Term> vars;
  for (SortId s : d.domain) vars.push_back(freshVariable(Symbol(sig.sortName(s))));
  return canonicalize(sig, Term::application(d.name, std::move(vars)));
}

namespace {

class Translator {
 public:
  explicit Translator(const Signature& sig) : sig_(sig), ctors_(ctorDecls(sig)) {}

  StratPtr run(const StratPtr& s) {
    switch (s->kind) {
      case StratKind::Congruence: {
        std::vector<StratPtr> kids;
        for (const StratPtr& c : s->children) kids.push_back(run(c));
        std::vector<StratPtr> branches;
        for (std::size_t d : ctors_) {
          const OpDecl& od = sig_.ops()[d];
          if (od.name == s->name && od.domain.size() == kids.size())
            branches.push_back(branch(d, kids));
        }
        if (branches.empty())
          throw SortError("no constructor " + s->name.str() + " with " +
                          std::to_string(kids.size()) + " arguments");
        return strat::choice(std::move(branches));
      }
      case StratKind::GtAll: {
        StratPtr a = run(s->children[0]);
        std::vector<StratPtr> branches;
        for (std::size_t d : ctors_)
          branches.push_back(branch(d, std::vector<StratPtr>(sig_.ops()[d].domain.size(), a)));
        return strat::choice(std::move(branches));
      }
      case StratKind::GtOne: {
        StratPtr a = run(s->children[0]);
        std::vector<StratPtr> branches;
        for (std::size_t d : ctors_) {
          std::size_t n = sig_.ops()[d].domain.size();
          if (n == 0) continue;
          StratPtr chain;
          for (std::size_t i = n; i-- > 0;) {
            std::vector<StratPtr> kids(n, strat::idle());
            kids[i] = a;
            StratPtr b = branch(d, kids);
            chain = chain ? strat::orElse(b, chain) : b;
          }
          branches.push_back(chain);
        }
        return strat::choice(std::move(branches));
      }
      case StratKind::GtSome: {
        const StratPtr& a = s->children[0];
        Strategy one;
        one.kind = StratKind::GtOne;
        one.children = {a};
        Strategy all;
        all.kind = StratKind::GtAll;
        all.children = {strat::unary(StratKind::Try, a)};
        return run(strat::seq(strat::unary(StratKind::Test, std::make_shared<const Strategy>(one)),
                              std::make_shared<const Strategy>(all)));
      }
      default:
        break;
    }
    if (s->children.empty()) return s;
    bool changed = false;
    Strategy copy = *s;
    for (StratPtr& c : copy.children) {
      StratPtr r = run(c);
      changed = changed || r != c;
      c = std::move(r);
    }
    return changed ? std::make_shared<const Strategy>(std::move(copy)) : s;
  }

 private:
  // `f(X1, ..., Xn)` rewritten by the given strategies, or `match c`.
  StratPtr branch(std::size_t decl, const std::vector<StratPtr>& kids) {
    const OpDecl& od = sig_.ops()[decl];
    if (od.domain.empty()) return strat::match(makeApp(sig_, od.name, {}));
    Term pat = declPattern(sig_, decl);
    std::vector<Term> vars(pat.args().begin(), pat.args().end());
    return strat::matchRew(pat, {}, std::move(vars), kids);
  }

  const Signature& sig_;
  std::vector<std::size_t> ctors_;
};

}  // namespace

StratPtr translateExtended(const StratPtr& s, const Signature& sig) {
  if (!isExtended(*s)) return s;
  return Translator(sig).run(s);
}

ModuleDef translateModule(const ModuleDef& mod) {
  ModuleDef out = mod;
  for (StratDef& d : out.stratDefs) d.body = translateExtended(d.body, out.sig);
  return out;
}

}  // namespace stratrew
