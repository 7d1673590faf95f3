#include "stratrew/multistrat.hpp"

#include <cctype>
#include <deque>
#include <unordered_set>

#include "stratrew/error.hpp"

namespace stratrew {

std::size_t MSContextHash::operator()(const MSContext& c) const {
  std::size_t h = c.subject.hash();
  for (const Frame* f : c.threads) h = hashCombine(h, f ? f->hash : 0x51);
  return hashCombine(hashCombine(h, c.turn), c.steps);
}

namespace {

using ContextSet = std::unordered_set<MSContext, MSContextHash>;

void addUnique(std::vector<MSContext>& out, ContextSet& seen, MSContext c) {
  if (seen.insert(c).second) out.push_back(std::move(c));
}

GammaPtr node(Gamma::Kind k, std::vector<GammaPtr> kids = {}, std::size_t thread = 0) {
  auto g = std::make_shared<Gamma>();
  g->kind = k;
  g->children = std::move(kids);
  g->thread = thread;
  return g;
}

class GammaParser {
 public:
  explicit GammaParser(std::string_view text) : text_(text) {}

  GammaPtr parse() {
    GammaPtr g = cond();
    skipSpace();
    if (pos_ != text_.size()) fail("unexpected input");
    return g;
  }

 private:
  GammaPtr cond() {
    GammaPtr c = choice();
    if (!eat('?')) return c;
    GammaPtr t = choice();
    if (!eat(':')) fail("expected ':'");
    return node(Gamma::Kind::Cond, {c, t, cond()});
  }
  GammaPtr choice() {
    std::vector<GammaPtr> xs{seq()};
    while (eat('|')) xs.push_back(seq());
    return xs.size() == 1 ? xs[0] : node(Gamma::Kind::Choice, std::move(xs));
  }
  GammaPtr seq() {
    std::vector<GammaPtr> xs{postfix()};
    while (eat(';')) xs.push_back(postfix());
    return xs.size() == 1 ? xs[0] : node(Gamma::Kind::Seq, std::move(xs));
  }
  GammaPtr postfix() {
    GammaPtr g = primary();
    for (;;) {
      if (eat('*'))
        g = node(Gamma::Kind::Star, {g});
      else if (eat('!'))
        g = node(Gamma::Kind::Bang, {g});
      else
        return g;
    }
  }
  GammaPtr primary() {
    if (eat('(')) {
      GammaPtr g = cond();
      if (!eat(')')) fail("expected ')'");
      return g;
    }
    std::string w = word();
    if (w == "idle") return node(Gamma::Kind::Idle);
    if (w == "fail") return node(Gamma::Kind::Fail);
    if (w == "turns") return node(Gamma::Kind::Turns);
    if (w == "freec") {
      auto g = std::make_shared<Gamma>();
      g->kind = Gamma::Kind::Freec;
      if (eat('(')) {
        g->bound = number();
        g->hasBound = true;
        if (!eat(')')) fail("expected ')'");
      }
      return g;
    }
    Gamma::Kind k;
    if (w == "step")
      k = Gamma::Kind::Step;
    else if (w == "control")
      k = Gamma::Kind::Control;
    else if (w == "system")
      k = Gamma::Kind::System;
    else
      fail(w.empty() ? "expected a global strategy" : "unknown global strategy '" + w + "'");
    if (!eat('(')) fail("expected '('");
    std::size_t n = number();
    if (!eat(')')) fail("expected ')'");
    return node(k, {}, n);
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string word() {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  std::size_t number() {
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("global strategy: " + msg + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GammaPtr parseGamma(std::string_view text) { return GammaParser(text).parse(); }

std::string printGamma(const Gamma& g) {
  auto join = [&](const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < g.children.size(); ++i) {
      if (i) s += sep;
      s += "(" + printGamma(*g.children[i]) + ")";
    }
    return s;
  };
  switch (g.kind) {
    case Gamma::Kind::Idle:
      return "idle";
    case Gamma::Kind::Fail:
      return "fail";
    case Gamma::Kind::Step:
      return "step(" + std::to_string(g.thread) + ")";
    case Gamma::Kind::Control:
      return "control(" + std::to_string(g.thread) + ")";
    case Gamma::Kind::System:
      return "system(" + std::to_string(g.thread) + ")";
    case Gamma::Kind::Turns:
      return "turns";
    case Gamma::Kind::Freec:
      return g.hasBound ? "freec(" + std::to_string(g.bound) + ")" : "freec";
    case Gamma::Kind::Seq:
      return join(" ; ");
    case Gamma::Kind::Choice:
      return join(" | ");
    case Gamma::Kind::Star:
      return "(" + printGamma(*g.children[0]) + ") *";
    case Gamma::Kind::Bang:
      return "(" + printGamma(*g.children[0]) + ") !";
    case Gamma::Kind::Cond:
      return "(" + printGamma(*g.children[0]) + ") ? (" + printGamma(*g.children[1]) + ") : (" +
             printGamma(*g.children[2]) + ")";
  }
  return "";
}

MultiStrategy::MultiStrategy(StrategyEngine& engine, std::vector<StratPtr> strategies,
                             GlobalStrategy g)
    : engine_(engine), strategies_(std::move(strategies)), global_(std::move(g)) {
  if (strategies_.empty()) throw Error("a multistrategy needs at least one strategy");
  if (global_.kind == GlobalStrategy::Kind::Custom && !global_.custom)
    throw Error("missing custom global strategy");
}

MSContext MultiStrategy::initial(const Term& t) {
  MSContext ctx;
  for (const StratPtr& s : strategies_) {
    ExecState st = engine_.initial(t, s);
    ctx.subject = st.term;
    ctx.threads.push_back(st.stack);
  }
  return ctx;
}

void MultiStrategy::checkThread(std::size_t n) const {
  if (n >= strategies_.size())
    throw Error("thread " + std::to_string(n) + " does not exist (threads are 0-based, " +
                std::to_string(strategies_.size()) + " given)");
}

std::vector<MSTransition> MultiStrategy::msStep(const MSContext& ctx, std::size_t n) {
  checkThread(n);
  std::vector<MSTransition> out;
  ContextSet seen;
  ExecState start{ctx.subject, ctx.threads[n]};
  std::unordered_set<ExecState, ExecStateHash> visited{start};
  std::deque<ExecState> queue{start};
  while (!queue.empty()) {
    ExecState st = queue.front();
    queue.pop_front();
    engine_.countState();
    for (Step& s : engine_.stepSuccessors(st)) {
      if (s.cls == StepClass::Control) {
        if (visited.insert(s.state).second) queue.push_back(s.state);
        continue;
      }
      MSContext next = ctx;
      next.subject = s.state.term;
      next.threads[n] = s.state.stack;
      if (seen.insert(next).second) out.push_back(MSTransition{n, s.label, std::move(next)});
    }
  }
  return out;
}

std::vector<MSTransition> MultiStrategy::successors(const MSContext& ctx) {
  std::vector<MSTransition> out;
  const std::size_t n = strategies_.size();
  switch (global_.kind) {
    case GlobalStrategy::Kind::Turns:
      for (MSTransition& tr : msStep(ctx, ctx.turn)) {
        tr.next.turn = (ctx.turn + 1) % n;
        out.push_back(std::move(tr));
      }
      break;
    case GlobalStrategy::Kind::FreecBounded:
      if (ctx.steps >= global_.bound) break;
      [[fallthrough]];
    case GlobalStrategy::Kind::Freec:
      for (std::size_t i = 0; i < n; ++i)
        for (MSTransition& tr : msStep(ctx, i)) {
          if (global_.kind == GlobalStrategy::Kind::FreecBounded) tr.next.steps = ctx.steps + 1;
          out.push_back(std::move(tr));
        }
      break;
    case GlobalStrategy::Kind::Custom:
      throw Error("custom global strategies have no step relation");
  }
  return out;
}

std::vector<MSContext> MultiStrategy::runBuiltin(const MSContext& start, const GlobalStrategy& g) {
  GlobalStrategy saved = global_;
  global_ = g;
  std::vector<MSContext> sols;
  ContextSet solSeen;
  try {
    MSContext init = start;
    init.turn = 0;
    init.steps = 0;
    ContextSet visited{init};
    std::deque<MSContext> queue{init};
    while (!queue.empty()) {
      MSContext ctx = std::move(queue.front());
      queue.pop_front();
      engine_.countState();
      std::vector<MSTransition> next = successors(ctx);
      bool bounded = g.kind == GlobalStrategy::Kind::FreecBounded && ctx.steps == g.bound;
      if (next.empty() || bounded) addUnique(sols, solSeen, ctx);
      for (MSTransition& tr : next)
        if (visited.insert(tr.next).second) queue.push_back(std::move(tr.next));
    }
  } catch (...) {
    global_ = saved;
    throw;
  }
  global_ = saved;
  return sols;
}

std::vector<MSContext> MultiStrategy::controlStep(const MSContext& ctx, std::size_t n) {
  checkThread(n);
  std::vector<MSContext> out;
  ContextSet seen;
  for (Step& s : engine_.stepSuccessors(ExecState{ctx.subject, ctx.threads[n]})) {
    if (s.cls != StepClass::Control) continue;
    MSContext next = ctx;
    next.threads[n] = s.state.stack;
    addUnique(out, seen, std::move(next));
  }
  return out;
}

std::vector<MSContext> MultiStrategy::systemStep(const MSContext& ctx, std::size_t n) {
  checkThread(n);
  std::vector<MSContext> out;
  ContextSet seen;
  for (Step& s : engine_.stepSuccessors(ExecState{ctx.subject, ctx.threads[n]})) {
    if (s.cls != StepClass::System) continue;
    MSContext next = ctx;
    next.subject = s.state.term;
    next.threads[n] = s.state.stack;
    addUnique(out, seen, std::move(next));
  }
  return out;
}

std::vector<MSContext> MultiStrategy::closure(const Gamma& g, const MSContext& ctx, bool bang) {
  std::vector<MSContext> out;
  ContextSet visited{ctx};
  std::deque<MSContext> queue{ctx};
  while (!queue.empty()) {
    MSContext c = std::move(queue.front());
    queue.pop_front();
    engine_.countState();
    std::vector<MSContext> next = evalGamma(g, c);
    if (!bang || next.empty()) out.push_back(c);
    for (MSContext& n : next)
      if (visited.insert(n).second) queue.push_back(std::move(n));
  }
  return out;
}

std::vector<MSContext> MultiStrategy::evalGamma(const Gamma& g, const MSContext& ctx) {
  switch (g.kind) {
    case Gamma::Kind::Idle:
      return {ctx};
    case Gamma::Kind::Fail:
      return {};
    case Gamma::Kind::Step: {
      std::vector<MSContext> out;
      for (MSTransition& tr : msStep(ctx, g.thread)) out.push_back(std::move(tr.next));
      return out;
    }
    case Gamma::Kind::Control:
      return controlStep(ctx, g.thread);
    case Gamma::Kind::System:
      return systemStep(ctx, g.thread);
    case Gamma::Kind::Turns:
      return runBuiltin(ctx, GlobalStrategy::turns());
    case Gamma::Kind::Freec:
      return runBuiltin(ctx, g.hasBound ? GlobalStrategy::freec(g.bound) : GlobalStrategy::freec());
    case Gamma::Kind::Seq: {
      std::vector<MSContext> cur{ctx};
      for (const GammaPtr& c : g.children) {
        std::vector<MSContext> next;
        ContextSet seen;
        for (const MSContext& x : cur)
          for (MSContext& y : evalGamma(*c, x)) addUnique(next, seen, std::move(y));
        cur = std::move(next);
      }
      return cur;
    }
    case Gamma::Kind::Choice: {
      std::vector<MSContext> out;
      ContextSet seen;
      for (const GammaPtr& c : g.children)
        for (MSContext& y : evalGamma(*c, ctx)) addUnique(out, seen, std::move(y));
      return out;
    }
    case Gamma::Kind::Star:
      return closure(*g.children[0], ctx, false);
    case Gamma::Kind::Bang:
      return closure(*g.children[0], ctx, true);
    case Gamma::Kind::Cond: {
      std::vector<MSContext> rs = evalGamma(*g.children[0], ctx);
      if (rs.empty()) return evalGamma(*g.children[2], ctx);
      std::vector<MSContext> out;
      ContextSet seen;
      for (const MSContext& x : rs)
        for (MSContext& y : evalGamma(*g.children[1], x)) addUnique(out, seen, std::move(y));
      return out;
    }
  }
  return {};
}

std::vector<Term> MultiStrategy::run(const Term& t) {
  MSContext init = initial(t);
  std::vector<MSContext> finals = global_.kind == GlobalStrategy::Kind::Custom
                                      ? evalGamma(*global_.custom, init)
                                      : runBuiltin(init, global_);
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  for (const MSContext& c : finals)
    if (seen.insert(c.subject).second) out.push_back(c.subject);
  return out;
}

}  // namespace stratrew
