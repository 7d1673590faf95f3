#include "stratrew/modelcheck.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_set>

#include "stratrew/error.hpp"
#include "stratrew/kernel.hpp"

namespace stratrew {

namespace {

// Formulas in negation normal form, interned so that sets of subformulas
// are sorted vectors of ids.
struct Closure {
  struct Node {
    LtlKind kind;
    Symbol prop;
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  std::map<std::tuple<int, std::string, int, int>, int> index;

  int intern(LtlKind k, Symbol p, int l, int r) {
    auto key = std::make_tuple(static_cast<int>(k), k == LtlKind::Prop ? p.str() : std::string(), l, r);
    if (auto it = index.find(key); it != index.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    nodes.push_back({k, p, l, r});
    index.emplace(key, id);
    return id;
  }
  int add(const Ltl& f) {
    int l = f.left ? add(*f.left) : -1;
    int r = f.right ? add(*f.right) : -1;
    return intern(f.kind, f.prop, l, r);
  }
  int find(LtlKind k, Symbol p, int l, int r) const {
    auto key = std::make_tuple(static_cast<int>(k), k == LtlKind::Prop ? p.str() : std::string(), l, r);
    auto it = index.find(key);
    return it == index.end() ? -1 : it->second;
  }
};

using IdSet = std::vector<int>;

bool contains(const IdSet& s, int x) { return std::binary_search(s.begin(), s.end(), x); }
void insert(IdSet& s, int x) {
  auto it = std::lower_bound(s.begin(), s.end(), x);
  if (it == s.end() || *it != x) s.insert(it, x);
}

struct TNode {
  IdSet incoming;  // -1 is the virtual initial node
  IdSet fresh;     // still to process
  IdSet old;
  IdSet next;
};

}  // namespace

Buchi ltlToBuchi(const LtlPtr& f) {
  Closure cl;
  int root = cl.add(*toNnf(f));

  std::vector<TNode> done;
  std::vector<TNode> todo;
  todo.push_back({{-1}, {root}, {}, {}});
  while (!todo.empty()) {
    TNode n = std::move(todo.back());
    todo.pop_back();
    if (n.fresh.empty()) {
      auto same = std::find_if(done.begin(), done.end(), [&](const TNode& d) {
        return d.old == n.old && d.next == n.next;
      });
      if (same != done.end()) {
        for (int i : n.incoming) insert(same->incoming, i);
        continue;
      }
      int id = static_cast<int>(done.size());
      done.push_back(n);
      todo.push_back({{id}, n.next, {}, {}});
      continue;
    }
    int eta = n.fresh.back();
    n.fresh.pop_back();
    if (contains(n.old, eta)) {
      todo.push_back(std::move(n));
      continue;
    }
    const Closure::Node& e = cl.nodes[eta];
    auto addFresh = [&](TNode& m, int x) {
      if (!contains(m.old, x)) insert(m.fresh, x);
    };
    switch (e.kind) {
      case LtlKind::False:
        break;
      case LtlKind::True:
        insert(n.old, eta);
        todo.push_back(std::move(n));
        break;
      case LtlKind::Prop: {
        int negated = cl.find(LtlKind::Not, Symbol(), eta, -1);
        if (negated >= 0 && contains(n.old, negated)) break;
        insert(n.old, eta);
        todo.push_back(std::move(n));
        break;
      }
      case LtlKind::Not:
        if (contains(n.old, e.left)) break;
        insert(n.old, eta);
        todo.push_back(std::move(n));
        break;
      case LtlKind::And:
        insert(n.old, eta);
        addFresh(n, e.left);
        addFresh(n, e.right);
        todo.push_back(std::move(n));
        break;
      case LtlKind::Next:
        insert(n.old, eta);
        insert(n.next, e.left);
        todo.push_back(std::move(n));
        break;
      case LtlKind::Or:
      case LtlKind::Until:
      case LtlKind::Release: {
        insert(n.old, eta);
        TNode a = n, b = std::move(n);
        if (e.kind == LtlKind::Or) {
          addFresh(a, e.left);
          addFresh(b, e.right);
        } else if (e.kind == LtlKind::Until) {
          addFresh(a, e.left);
          insert(a.next, eta);
          addFresh(b, e.right);
        } else {
          addFresh(a, e.right);
          insert(a.next, eta);
          addFresh(b, e.left);
          addFresh(b, e.right);
        }
        todo.push_back(std::move(b));
        todo.push_back(std::move(a));
        break;
      }
      default:
        throw Error("formula not in negation normal form");
    }
  }

  // Generalized acceptance: one set per until subformula.
  std::vector<int> untils;
  for (std::size_t i = 0; i < cl.nodes.size(); ++i)
    if (cl.nodes[i].kind == LtlKind::Until) untils.push_back(static_cast<int>(i));
  auto inSet = [&](std::size_t q, std::size_t k) {
    const TNode& n = done[q];
    int u = untils[k];
    return !contains(n.old, u) || contains(n.old, cl.nodes[u].right);
  };

  const std::size_t m = std::max<std::size_t>(untils.size(), 1);
  const std::size_t nq = done.size();
  Buchi b;
  b.states.resize(nq * m);
  for (std::size_t q = 0; q < nq; ++q) {
    std::vector<std::size_t> succ;
    for (std::size_t r = 0; r < nq; ++r)
      if (contains(done[r].incoming, static_cast<int>(q))) succ.push_back(r);
    for (std::size_t i = 0; i < m; ++i) {
      Buchi::State& s = b.states[q * m + i];
      for (int x : done[q].old) {
        const Closure::Node& e = cl.nodes[x];
        if (e.kind == LtlKind::Prop) s.pos.push_back(e.prop);
        if (e.kind == LtlKind::Not) s.neg.push_back(cl.nodes[e.left].prop);
      }
      bool hit = untils.empty() || inSet(q, i);
      s.accepting = i == 0 && hit;
      std::size_t j = hit ? (i + 1) % m : i;
      for (std::size_t r : succ) s.next.push_back(r * m + j);
    }
    if (contains(done[q].incoming, -1)) b.initial.push_back(q * m);
  }
  return b;
}

namespace {

class ProductSearch {
 public:
  ProductSearch(Kripke& k, const Buchi& b, std::size_t limit) : k_(k), b_(b), limit_(limit) {}

  CheckResult run() {
    CheckResult res;
    std::size_t k0 = k_.initialState();
    for (std::size_t q : b_.initial) {
      if (!compatible(k0, q)) continue;
      std::size_t p = intern(k0, q);
      if (blue_.count(p)) continue;
      if (blue(p, res)) break;
    }
    res.states = states_.size();
    return res;
  }

 private:
  struct Frame {
    std::size_t p;
    std::size_t idx = 0;
  };

  bool compatible(std::size_t k, std::size_t q) {
    const Buchi::State& s = b_.states[q];
    for (Symbol p : s.pos)
      if (!k_.holds(k, p)) return false;
    for (Symbol p : s.neg)
      if (k_.holds(k, p)) return false;
    return true;
  }

  std::size_t intern(std::size_t k, std::size_t q) {
    auto [it, fresh] = index_.try_emplace({k, q}, states_.size());
    if (fresh) {
      if (states_.size() >= limit_)
        throw SearchLimitError("model checking exceeded " + std::to_string(limit_) +
                               " product states");
      states_.push_back({k, q});
    }
    return it->second;
  }

  const std::vector<std::pair<std::size_t, std::string>>& kripkeSucc(std::size_t k) {
    const auto& s = k_.successors(k);
    if (!s.empty()) return s;
    auto& loop = deadlock_[k];
    if (loop.empty()) loop.push_back({k, "deadlock"});
    return loop;
  }

  const std::vector<std::size_t>& succ(std::size_t p) {
    if (auto it = succ_.find(p); it != succ_.end()) return it->second;
    std::vector<std::size_t> out;
    auto [k, q] = states_[p];
    // Copy: interning may trigger more Kripke expansion.
    auto ks = kripkeSucc(k);
    for (const auto& [k2, label] : ks)
      for (std::size_t q2 : b_.states[q].next)
        if (compatible(k2, q2)) out.push_back(intern(k2, q2));
    return succ_[p] = std::move(out);
  }

  bool blue(std::size_t p0, CheckResult& res) {
    std::vector<Frame> stack;
    auto push = [&](std::size_t p) {
      blue_.insert(p);
      onStack_.insert(p);
      stack.push_back({p});
    };
    push(p0);
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& s = succ(f.p);
      if (f.idx < s.size()) {
        std::size_t q = s[f.idx++];
        if (!blue_.count(q)) push(q);
        continue;
      }
      std::size_t p = f.p;
      if (b_.states[states_[p].second].accepting) {
        std::vector<std::size_t> redPath;
        std::size_t target = 0;
        if (red(p, redPath, target)) {
          build(stack, redPath, target, res);
          return true;
        }
      }
      onStack_.erase(p);
      stack.pop_back();
    }
    return false;
  }

  // Searches from accepting `seed` for a state on the blue stack. On
  // success `path` runs from seed to the state that closes the cycle.
  bool red(std::size_t seed, std::vector<std::size_t>& path, std::size_t& target) {
    std::vector<Frame> stack{{seed}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& s = succ(f.p);
      if (f.idx < s.size()) {
        std::size_t q = s[f.idx++];
        if (onStack_.count(q)) {
          for (const Frame& g : stack) path.push_back(g.p);
          target = q;
          return true;
        }
        if (red_.insert(q).second) stack.push_back({q});
        continue;
      }
      stack.pop_back();
    }
    return false;
  }

  std::string labelBetween(std::size_t k, std::size_t k2) {
    for (const auto& [t, label] : kripkeSucc(k))
      if (t == k2) return label;
    return {};
  }

  void build(const std::vector<Frame>& blueStack, const std::vector<std::size_t>& redPath,
             std::size_t target, CheckResult& res) {
    std::vector<std::size_t> prefix, cycle;
    bool inCycle = false;
    for (const Frame& f : blueStack) {
      if (f.p == target) inCycle = true;
      (inCycle ? cycle : prefix).push_back(f.p);
    }
    // The red path starts at the top of the blue stack, already in cycle.
    cycle.insert(cycle.end(), redPath.begin() + 1, redPath.end());
    res.holds = false;
    auto kOf = [&](std::size_t p) { return states_[p].first; };
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      std::size_t nxt = i + 1 < prefix.size() ? prefix[i + 1] : cycle.front();
      res.prefix.push_back({kOf(prefix[i]), labelBetween(kOf(prefix[i]), kOf(nxt))});
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      std::size_t nxt = cycle[(i + 1) % cycle.size()];
      res.cycle.push_back({kOf(cycle[i]), labelBetween(kOf(cycle[i]), kOf(nxt))});
    }
    compact(res);
  }

  // Product states that differ only in the automaton component project to
  // repeated Kripke steps; fold them so the lasso is minimal.
  static void compact(CheckResult& res) {
    auto same = [](const LassoStep& a, const LassoStep& b) {
      return a.state == b.state && a.label == b.label;
    };
    while (!res.prefix.empty() && same(res.prefix.back(), res.cycle.back())) {
      res.prefix.pop_back();
      std::rotate(res.cycle.rbegin(), res.cycle.rbegin() + 1, res.cycle.rend());
    }
    const std::size_t n = res.cycle.size();
    for (std::size_t period = 1; period < n; ++period) {
      if (n % period) continue;
      bool ok = true;
      for (std::size_t i = period; i < n && ok; ++i) ok = same(res.cycle[i], res.cycle[i - period]);
      if (ok) {
        res.cycle.resize(period);
        break;
      }
    }
  }

  struct PairHash {
    std::size_t operator()(const std::pair<std::size_t, std::size_t>& x) const {
      return hashCombine(x.first, x.second);
    }
  };

  Kripke& k_;
  const Buchi& b_;
  std::size_t limit_;
  std::vector<std::pair<std::size_t, std::size_t>> states_;
  std::unordered_map<std::pair<std::size_t, std::size_t>, std::size_t, PairHash> index_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> succ_;
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::string>>> deadlock_;
  std::unordered_set<std::size_t> blue_, red_, onStack_;
};

}  // namespace

CheckResult modelCheck(Kripke& k, const LtlPtr& f, std::size_t stateLimit) {
  Buchi b = ltlToBuchi(ltl::unary(LtlKind::Not, f));
  return ProductSearch(k, b, stateLimit).run();
}

bool evalProp(Rewriter& rw, Symbol prop, const Term& t) {
  const PropDef* def = rw.module().prop(prop);
  if (!def) throw PropositionError("unknown proposition " + prop.str());
  Subst s;
  s.bind(placeholderVariable(), t);
  Term r = rw.reduce(applySubst(rw.sig(), s, def->body));
  if (r == Term::constant(Symbol("true"))) return true;
  if (r == Term::constant(Symbol("false"))) return false;
  throw PropositionError("proposition " + prop.str() + " does not reduce to a truth value");
}

MultiStrategyKripke::MultiStrategyKripke(MultiStrategy& ms, const Term& t)
    : ms_(ms), rw_(ms.engine().rewriter()) {
  intern(ms_.initial(t));
}

std::size_t MultiStrategyKripke::intern(const MSContext& c) {
  auto [it, fresh] = index_.try_emplace(c, contexts_.size());
  if (fresh) contexts_.push_back(c);
  return it->second;
}

const std::vector<std::pair<std::size_t, std::string>>& MultiStrategyKripke::successors(
    std::size_t s) {
  if (auto it = succ_.find(s); it != succ_.end()) return it->second;
  std::vector<std::pair<std::size_t, std::string>> out;
  MSContext ctx = contexts_.at(s);
  for (const MSTransition& tr : ms_.successors(ctx)) {
    std::pair<std::size_t, std::string> e{intern(tr.next),
                                          std::to_string(tr.thread) + " does " + tr.label.str()};
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  }
  return succ_[s] = std::move(out);
}

bool MultiStrategyKripke::holds(std::size_t s, Symbol prop) {
  const Term& t = contexts_.at(s).subject;
  PropKey key{t, prop};
  if (auto it = props_.find(key); it != props_.end()) return it->second;
  bool v = evalProp(rw_, prop, t);
  props_.emplace(key, v);
  return v;
}

}  // namespace stratrew
