#include "stratrew/kernel.hpp"

#include <algorithm>
#include <unordered_set>

#include "stratrew/error.hpp"

namespace stratrew {

namespace {

const Symbol& zeroName() {
  static const Symbol s("0");
  return s;
}

bool isFlattenable(const SymbolInfo& info) { return info.assoc; }

}  // namespace

Term makeApp(const Signature& sig, Symbol op, std::vector<Term> args) {
  const SymbolInfo* info = sig.symbol(op, args.size());
  if (!info) return Term::application(op, std::move(args));
  if (info->builtin == Builtin::Succ && args.size() == 1 && args[0].isNumeral())
    return Term::numeral(args[0].value() + 1);
  if (args.empty() && op == zeroName() && info->prelude) return Term::numeral(0);

  if (isFlattenable(*info)) {
    std::vector<Term> flat;
    flat.reserve(args.size());
    for (Term& a : args) {
      if (a.isApplication() && a.head() == op && a.arity() >= 2) {
        for (const Term& c : a.args()) flat.push_back(c);
      } else {
        flat.push_back(std::move(a));
      }
    }
    if (info->identity) {
      const Term& id = *info->identity;
      std::erase_if(flat, [&](const Term& x) { return x == id; });
      if (flat.empty()) return id;
    }
    if (flat.size() == 1) return flat.front();
    if (info->comm) std::sort(flat.begin(), flat.end(), termLess);
    return Term::application(op, std::move(flat));
  }
  if (info->comm && args.size() == 2) {
    if (info->identity) {
      if (args[0] == *info->identity) return args[1];
      if (args[1] == *info->identity) return args[0];
    }
    if (termLess(args[1], args[0])) std::swap(args[0], args[1]);
  }
  return Term::application(op, std::move(args));
}

namespace {

void checkApplication(const Signature& sig, const SymbolInfo& info, const Term& t) {
  if (info.polymorphic) return;
  auto kindFits = [&](std::size_t argIndex, SortId domain) {
    SortId s = sig.leastSort(t.arg(argIndex));
    return sig.sameKind(s, domain);
  };
  if (info.assoc && t.arity() > 2) {
    for (std::size_t di : info.decls) {
      const OpDecl& d = sig.ops()[di];
      bool ok = true;
      for (std::size_t i = 0; i < t.arity() && ok; ++i) ok = kindFits(i, d.domain[0]);
      if (ok) return;
    }
  } else {
    for (std::size_t di : info.decls) {
      const OpDecl& d = sig.ops()[di];
      bool ok = true;
      for (std::size_t i = 0; i < t.arity() && ok; ++i) ok = kindFits(i, d.domain[i]);
      if (ok) return;
    }
  }
  throw SortError("ill-sorted application of " + t.head().str());
}

}  // namespace

Term canonicalize(const Signature& sig, const Term& t) {
  if (!t.isApplication()) {
    if (t.isVariable()) sig.variableSort(t);
    return t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(canonicalize(sig, a));
  const SymbolInfo* info = sig.symbol(t.head(), args.size());
  if (!info)
    throw SortError("no operator " + t.head().str() + " with " + std::to_string(args.size()) +
                    " arguments");
  Term raw = Term::application(t.head(), args);
  checkApplication(sig, *info, raw);
  return makeApp(sig, t.head(), std::move(args));
}

Term applySubst(const Signature& sig, const Subst& s, const Term& t) {
  if (t.ground() || s.empty()) return t;
  if (t.isVariable()) {
    const Term* v = s.find(t);
    return v ? *v : t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(applySubst(sig, s, a));
    changed = changed || !(args.back() == a);
  }
  if (!changed) return t;
  return makeApp(sig, t.head(), std::move(args));
}

std::vector<Term> argumentsUnder(const Signature& sig, const SymbolInfo& op, const Term& t) {
  (void)sig;
  if (t.isApplication() && t.head() == op.name && t.arity() >= 2)
    return {t.args().begin(), t.args().end()};
  if (op.identity && t == *op.identity) return {};
  return {t};
}

const Term& subtermAt(const Term& t, const std::vector<std::uint32_t>& path) {
  const Term* cur = &t;
  for (std::uint32_t i : path) cur = &cur->arg(i);
  return *cur;
}

Term termAt(const Signature& sig, const Term& t, const Position& p) {
  const Term& node = subtermAt(t, p.path);
  if (p.ext.empty()) return node;
  std::vector<Term> sel;
  for (std::uint32_t i : p.ext) sel.push_back(node.arg(i));
  return makeApp(sig, node.head(), std::move(sel));
}

namespace {

Term rebuild(const Signature& sig, const Term& t, const Position& p, std::size_t depth,
             const Term& r) {
  if (depth == p.path.size()) {
    if (p.ext.empty()) return r;
    std::vector<Term> args;
    args.reserve(t.arity());
    std::size_t k = 0;
    for (std::uint32_t i = 0; i < t.arity(); ++i) {
      if (k < p.ext.size() && p.ext[k] == i) {
        if (k == 0) args.push_back(r);
        ++k;
      } else {
        args.push_back(t.arg(i));
      }
    }
    return makeApp(sig, t.head(), std::move(args));
  }
  std::vector<Term> args(t.args().begin(), t.args().end());
  std::uint32_t i = p.path[depth];
  args[i] = rebuild(sig, t.arg(i), p, depth + 1, r);
  return makeApp(sig, t.head(), std::move(args));
}

class Matcher {
 public:
  using Cont = std::function<bool()>;

  Matcher(const Signature& sig, const Subst& init) : sig_(sig), s_(init) {}

  const Subst& subst() const { return s_; }

  bool match(const Term& p, const Term& t, const Cont& k) {
    switch (p.kind()) {
      case TermKind::Variable:
        return matchVariable(p, t, k);
      case TermKind::Numeral:
        return p == t ? k() : false;
      case TermKind::Application:
        break;
    }
    if (p.ground()) return p == t ? k() : false;
    const SymbolInfo* info = sig_.symbol(p.head(), p.arity());
    if (!info) return false;
    if (info->builtin == Builtin::Succ && p.arity() == 1 && t.isNumeral()) {
      if (t.value() == 0) return false;
      return match(p.arg(0), Term::numeral(t.value() - 1), k);
    }
    if (info->assoc) return matchAssoc(*info, p, t, k);
    if (info->comm && p.arity() == 2) return matchComm(*info, p, t, k);
    if (!t.isApplication() || t.head() != p.head() || t.arity() != p.arity()) return false;
    return matchArgs(p.args(), t.args(), 0, k);
  }

 private:
  bool bindAndContinue(const Term& var, const Term& value, const Cont& k) {
    SortId vs = sig_.variableSort(var);
    if (vs != kAnySort && !sig_.hasSort(value, vs)) return false;
    std::size_t mark = s_.size();
    s_.bind(var, value);
    bool stop = k();
    s_.truncate(mark);
    return stop;
  }

  bool matchVariable(const Term& p, const Term& t, const Cont& k) {
    if (const Term* b = s_.find(p)) return *b == t ? k() : false;
    return bindAndContinue(p, t, k);
  }

  bool matchArgs(std::span<const Term> ps, std::span<const Term> ts, std::size_t i,
                 const Cont& k) {
    if (i == ps.size()) return k();
    return match(ps[i], ts[i], [&] { return matchArgs(ps, ts, i + 1, k); });
  }

  bool matchComm(const SymbolInfo& info, const Term& p, const Term& t, const Cont& k) {
    std::vector<Term> ts = argumentsUnder(sig_, info, t);
    if (info.identity)
      while (ts.size() < 2) ts.push_back(*info.identity);
    if (ts.size() != 2) return false;
    if (match(p.arg(0), ts[0], [&] { return match(p.arg(1), ts[1], k); })) return true;
    if (ts[0] == ts[1]) return false;
    return match(p.arg(0), ts[1], [&] { return match(p.arg(1), ts[0], k); });
  }

  bool matchAssoc(const SymbolInfo& info, const Term& p, const Term& t, const Cont& k) {
    std::vector<Term> ts = argumentsUnder(sig_, info, t);
    std::vector<Term> ps = argumentsUnder(sig_, info, p);
    if (info.comm) {
      std::vector<Term> nonVars, vars;
      for (const Term& x : ps) (x.isVariable() ? vars : nonVars).push_back(x);
      std::vector<bool> used(ts.size(), false);
      AcState st{info, ts, nonVars, vars, used};
      return acNonVar(st, 0, k);
    }
    return matchSeq(info, ps, 0, ts, 0, k);
  }

  Term collection(const SymbolInfo& info, std::vector<Term> elems) {
    if (elems.empty()) return *info.identity;
    if (elems.size() == 1) return elems.front();
    return makeApp(sig_, info.name, std::move(elems));
  }

  bool matchSeq(const SymbolInfo& info, const std::vector<Term>& ps, std::size_t i,
                const std::vector<Term>& ts, std::size_t j, const Cont& k) {
    if (i == ps.size()) return j == ts.size() ? k() : false;
    const Term& pi = ps[i];
    auto next = [&](std::size_t nj) {
      return [&, nj] { return matchSeq(info, ps, i + 1, ts, nj, k); };
    };
    if (!pi.isVariable()) {
      if (j >= ts.size()) return false;
      return match(pi, ts[j], next(j + 1));
    }
    if (const Term* b = s_.find(pi)) {
      std::vector<Term> vs = argumentsUnder(sig_, info, *b);
      if (j + vs.size() > ts.size()) return false;
      for (std::size_t x = 0; x < vs.size(); ++x)
        if (!(vs[x] == ts[j + x])) return false;
      return next(j + vs.size())();
    }
    const std::size_t remaining = ts.size() - j;
    // Later pattern elements that are not variables need one element each.
    std::size_t needed = 0;
    for (std::size_t x = i + 1; x < ps.size(); ++x)
      if (!ps[x].isVariable()) ++needed;
    if (needed > remaining) return false;
    const bool last = i + 1 == ps.size();
    for (std::size_t len = last ? remaining : 0; len <= remaining - needed; ++len) {
      if (len == 0 && !info.identity) continue;
      std::vector<Term> seg(ts.begin() + static_cast<std::ptrdiff_t>(j),
                            ts.begin() + static_cast<std::ptrdiff_t>(j + len));
      Term value = collection(info, std::move(seg));
      if (bindAndContinue(pi, value, next(j + len))) return true;
    }
    return false;
  }

  struct AcState {
    const SymbolInfo& info;
    const std::vector<Term>& ts;
    const std::vector<Term>& nonVars;
    const std::vector<Term>& vars;
    std::vector<bool>& used;
  };

  bool acNonVar(AcState& st, std::size_t idx, const Cont& k) {
    if (idx == st.nonVars.size()) return acVar(st, 0, k);
    std::vector<Term> tried;
    for (std::size_t j = 0; j < st.ts.size(); ++j) {
      if (st.used[j]) continue;
      if (std::find(tried.begin(), tried.end(), st.ts[j]) != tried.end()) continue;
      tried.push_back(st.ts[j]);
      st.used[j] = true;
      bool stop = match(st.nonVars[idx], st.ts[j], [&] { return acNonVar(st, idx + 1, k); });
      st.used[j] = false;
      if (stop) return true;
    }
    return false;
  }

  bool acVar(AcState& st, std::size_t idx, const Cont& k) {
    if (idx == st.vars.size()) {
      for (bool u : st.used)
        if (!u) return false;
      return k();
    }
    const Term& v = st.vars[idx];
    if (const Term* b = s_.find(v)) {
      std::vector<Term> vs = argumentsUnder(sig_, st.info, *b);
      std::vector<std::size_t> taken;
      for (const Term& e : vs) {
        bool found = false;
        for (std::size_t j = 0; j < st.ts.size(); ++j)
          if (!st.used[j] && st.ts[j] == e) {
            st.used[j] = true;
            taken.push_back(j);
            found = true;
            break;
          }
        if (!found) break;
      }
      bool stop = false;
      if (taken.size() == vs.size()) stop = acVar(st, idx + 1, k);
      for (std::size_t j : taken) st.used[j] = false;
      return stop;
    }
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < st.ts.size(); ++j)
      if (!st.used[j]) free.push_back(j);
    bool takeAll = true;
    for (std::size_t x = idx + 1; x < st.vars.size() && takeAll; ++x)
      takeAll = s_.find(st.vars[x]) != nullptr;
    if (takeAll) {
      if (free.empty() && !st.info.identity) return false;
      std::vector<Term> elems;
      for (std::size_t j : free) elems.push_back(st.ts[j]);
      for (std::size_t j : free) st.used[j] = true;
      bool stop = bindAndContinue(v, collection(st.info, std::move(elems)),
                                  [&] { return acVar(st, idx + 1, k); });
      for (std::size_t j : free) st.used[j] = false;
      return stop;
    }
    // Enumerate the sub-multisets of the free elements.
    std::vector<std::size_t> chosen;
    return acSubsets(st, idx, free, 0, chosen, k);
  }

  bool acSubsets(AcState& st, std::size_t idx, const std::vector<std::size_t>& free,
                 std::size_t pos, std::vector<std::size_t>& chosen, const Cont& k) {
    if (pos == free.size()) {
      if (chosen.empty() && !st.info.identity) return false;
      std::vector<Term> elems;
      for (std::size_t j : chosen) elems.push_back(st.ts[j]);
      for (std::size_t j : chosen) st.used[j] = true;
      bool stop = bindAndContinue(st.vars[idx], collection(st.info, std::move(elems)),
                                  [&] { return acVar(st, idx + 1, k); });
      for (std::size_t j : chosen) st.used[j] = false;
      return stop;
    }
    chosen.push_back(free[pos]);
    bool stop = acSubsets(st, idx, free, pos + 1, chosen, k);
    chosen.pop_back();
    if (stop) return true;
    return acSubsets(st, idx, free, pos + 1, chosen, k);
  }

  const Signature& sig_;
  Subst s_;
};

void sortUnique(std::vector<Subst>& v) {
  std::sort(v.begin(), v.end(), substLess);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool anywhere(const Signature& sig, const Term& pat, const Term& node,
              std::vector<std::uint32_t>& path, const Subst& init,
              const AnywhereOptions& opts, const SymbolInfo* patInfo,
              const PositionedMatchCallback& cb) {
  {
    Matcher m(sig, init);
    Position pos{path, {}};
    if (m.match(pat, node, [&] { return cb(pos, m.subst()); })) return true;
  }
  if (!node.isApplication() || opts.topOnly) return false;
  const std::size_t n = node.arity();
  if (patInfo && node.head() == patInfo->name && n >= 3) {
    if (patInfo->comm) {
      // Proper sub-multisets of size at least two, by ascending bitmask.
      std::vector<std::uint32_t> ext;
      const std::uint64_t limit = n < 63 ? (std::uint64_t{1} << n) : 0;
      for (std::uint64_t mask = 1; mask < limit; ++mask) {
        auto bits = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (bits < 2 || bits == n) continue;
        ext.clear();
        for (std::uint32_t i = 0; i < n; ++i)
          if (mask & (std::uint64_t{1} << i)) ext.push_back(i);
        Position pos{path, ext};
        Term sub = termAt(sig, node, Position{{}, ext});
        Matcher m(sig, init);
        if (m.match(pat, sub, [&] { return cb(pos, m.subst()); })) return true;
      }
    } else {
      for (std::uint32_t start = 0; start < n; ++start)
        for (std::uint32_t len = 2; start + len <= n; ++len) {
          if (len == n) continue;
          std::vector<std::uint32_t> ext;
          for (std::uint32_t i = start; i < start + len; ++i) ext.push_back(i);
          Position pos{path, ext};
          Term sub = termAt(sig, node, Position{{}, ext});
          Matcher m(sig, init);
          if (m.match(pat, sub, [&] { return cb(pos, m.subst()); })) return true;
        }
    }
  }
  const SymbolInfo* info = sig.symbol(node.head(), n);
  bool anyFrozen = false;
  if (info && info->assoc)
    anyFrozen = std::find(info->frozen.begin(), info->frozen.end(), true) != info->frozen.end();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (opts.respectFrozen && info) {
      bool frozen = info->assoc ? anyFrozen : (i < info->frozen.size() && info->frozen[i]);
      if (frozen) continue;
    }
    path.push_back(i);
    bool stop = anywhere(sig, pat, node.arg(i), path, init, opts, patInfo, cb);
    path.pop_back();
    if (stop) return true;
  }
  return false;
}

}  // namespace

Term replaceAt(const Signature& sig, const Term& t, const Position& p, const Term& r) {
  return rebuild(sig, t, p, 0, r);
}

bool forEachMatch(const Signature& sig, const Term& pat, const Term& subj, const Subst& init,
                  const MatchCallback& cb) {
  Matcher m(sig, init);
  return m.match(pat, subj, [&] { return cb(m.subst()); });
}

std::vector<Subst> matchRoot(const Signature& sig, const Term& pat, const Term& subj,
                             const Subst& init) {
  std::vector<Subst> out;
  forEachMatch(sig, pat, subj, init, [&](const Subst& s) {
    out.push_back(s);
    return false;
  });
  sortUnique(out);
  return out;
}

bool forEachMatchAnywhere(const Signature& sig, const Term& pat, const Term& subj,
                          const Subst& init, const AnywhereOptions& opts,
                          const PositionedMatchCallback& cb) {
  const SymbolInfo* patInfo = nullptr;
  if (pat.isApplication()) {
    const SymbolInfo* info = sig.symbol(pat.head(), pat.arity());
    if (info && info->assoc) patInfo = info;
  }
  std::vector<std::uint32_t> path;
  return anywhere(sig, pat, subj, path, init, opts, patInfo, cb);
}

std::vector<std::pair<Position, Subst>> matchAnywhere(const Signature& sig, const Term& pat,
                                                      const Term& subj,
                                                      const AnywhereOptions& opts) {
  std::vector<std::pair<Position, Subst>> out;
  std::vector<Subst> group;
  Position current;
  bool have = false;
  auto flush = [&] {
    sortUnique(group);
    for (Subst& s : group) out.emplace_back(current, std::move(s));
    group.clear();
  };
  forEachMatchAnywhere(sig, pat, subj, {}, opts, [&](const Position& p, const Subst& s) {
    if (!have || !(p == current)) {
      if (have) flush();
      current = p;
      have = true;
    }
    group.push_back(s);
    return false;
  });
  if (have) flush();
  return out;
}

namespace {
void pathsRec(const Term& t, std::vector<std::uint32_t>& cur,
              std::vector<std::vector<std::uint32_t>>& out) {
  out.push_back(cur);
  if (!t.isApplication()) return;
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    cur.push_back(i);
    pathsRec(t.arg(i), cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<std::vector<std::uint32_t>> allPaths(const Term& t) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  pathsRec(t, cur, out);
  return out;
}

}  // namespace stratrew
