#include "stratrew/printer.hpp"

#include <sstream>

#include "stratrew/frontend.hpp"

namespace stratrew {

namespace {

constexpr int kAnyPrec = 1000;

int termPrec(const Signature& sig, const Term& t) {
  if (!t.isApplication() || t.arity() == 0) return 0;
  const SymbolInfo* info = sig.symbol(t.head(), t.arity());
  if (!info) return 0;
  switch (opForm(t.head().str(), info->arity)) {
    case OpForm::Infix:
    case OpForm::Juxtaposition:
    case OpForm::PrefixUnary:
      return info->prec;
    case OpForm::Other: {
      const std::string& n = t.head().str();
      if (n.front() == '_' || n.back() == '_') return info->prec;
      return 0;
    }
    default:
      return 0;
  }
}

void render(const Signature& sig, const Term& t, int maxPrec, std::string& out);

// A comma operator printed bare inside an argument list would split it.
bool printsTopLevelComma(const Signature& sig, const Term& t) {
  if (!t.isApplication() || t.arity() == 0) return false;
  const std::string& name = t.head().str();
  if (name.find(',') == std::string::npos) return false;
  const SymbolInfo* info = sig.symbol(t.head(), t.arity());
  const OpForm form = opForm(name, info ? info->arity : t.arity());
  return form != OpForm::Prefix && form != OpForm::Bracket;
}

void renderArg(const Signature& sig, const Term& t, int maxPrec, std::string& out) {
  if (printsTopLevelComma(sig, t)) {
    out += '(';
    render(sig, t, kAnyPrec, out);
    out += ')';
    return;
  }
  render(sig, t, maxPrec, out);
}

void renderApp(const Signature& sig, const Term& t, std::string& out) {
  const std::string& name = t.head().str();
  const SymbolInfo* info = sig.symbol(t.head(), t.arity());
  const std::size_t declArity = info ? info->arity : t.arity();
  const OpForm form = opForm(name, declArity);
  const int p = info ? info->prec : 0;
  switch (form) {
    case OpForm::Prefix: {
      out += name;
      if (t.arity() == 0) return;
      out += '(';
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ", ";
        renderArg(sig, t.arg(i), kAnyPrec, out);
      }
      out += ')';
      return;
    }
    case OpForm::Infix: {
      const std::string tok = opToken(name);
      const std::string sep = tok == "," ? ", " : " " + tok + " ";
      if (t.arity() == 2 && !(info && info->assoc)) {
        const bool left = info && info->gather == Gather::Left;
        render(sig, t.arg(0), left ? p : p - 1, out);
        out += sep;
        render(sig, t.arg(1), left ? p - 1 : p, out);
        return;
      }
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += sep;
        render(sig, t.arg(i), p - 1, out);
      }
      return;
    }
    case OpForm::Juxtaposition:
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ' ';
        render(sig, t.arg(i), p - 1, out);
      }
      return;
    case OpForm::PrefixUnary:
      out += opToken(name);
      out += ' ';
      render(sig, t.arg(0), p, out);
      return;
    case OpForm::Bracket:
    case OpForm::Other: {
      std::size_t k = 0;
      for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        if (c == '_' && k < t.arity()) {
          if (form == OpForm::Bracket)
            render(sig, t.arg(k++), kAnyPrec, out);
          else
            renderArg(sig, t.arg(k++), 0, out);
        } else {
          out += c;
          if (c == ',') out += ' ';
        }
      }
      return;
    }
  }
}

void render(const Signature& sig, const Term& t, int maxPrec, std::string& out) {
  switch (t.kind()) {
    case TermKind::Variable:
      out += t.head().str();
      if (t.head().str() != "@") {
        out += ':';
        out += t.sort().str();
      }
      return;
    case TermKind::Numeral:
      out += std::to_string(t.value());
      return;
    case TermKind::Application:
      break;
  }
  const bool parens = termPrec(sig, t) > maxPrec;
  if (parens) out += '(';
  renderApp(sig, t, out);
  if (parens) out += ')';
}

// Strategy precedences; larger binds looser.
int stratPrec(const Strategy& s) {
  switch (s.kind) {
    case StratKind::Seq:
      return 39;
    case StratKind::Choice:
      return 41;
    case StratKind::OrElse:
      return 43;
    case StratKind::Cond:
      return 55;
    case StratKind::MatchRew:
      return 60;
    case StratKind::Match:
      return s.cond.empty() ? 0 : 60;
    default:
      return 0;
  }
}

void renderStrat(const Signature& sig, const Strategy& s, int maxPrec, std::string& out);

void renderChild(const Signature& sig, const StratPtr& c, int maxPrec, std::string& out) {
  renderStrat(sig, *c, maxPrec, out);
}

void renderCondition(const Signature& sig, const Condition& cond, std::string& out) {
  for (std::size_t i = 0; i < cond.size(); ++i) {
    if (i) out += " /\\ ";
    const CondFragment& f = cond[i];
    switch (f.kind) {
      case CondFragment::Kind::Equality:
        render(sig, f.lhs, kAnyPrec, out);
        if (f.rhs.isApplication() && f.rhs.arity() == 0 && f.rhs.head().str() == "true") break;
        out += " = ";
        render(sig, f.rhs, kAnyPrec, out);
        break;
      case CondFragment::Kind::Assignment:
        render(sig, f.lhs, kAnyPrec, out);
        out += " := ";
        render(sig, f.rhs, kAnyPrec, out);
        break;
      case CondFragment::Kind::SortTest:
        render(sig, f.lhs, kAnyPrec, out);
        out += " : ";
        out += f.sort.str();
        break;
    }
  }
}

void renderStratBody(const Signature& sig, const Strategy& s, std::string& out) {
  auto wrapped = [&](const char* kw, const StratPtr& c) {
    out += kw;
    out += '(';
    renderChild(sig, c, kAnyPrec, out);
    out += ')';
  };
  switch (s.kind) {
    case StratKind::Idle:
      out += "idle";
      return;
    case StratKind::Fail:
      out += "fail";
      return;
    case StratKind::All:
      out += "all";
      return;
    case StratKind::Apply: {
      if (s.top) out += "top(";
      out += s.name.str();
      if (!s.assignments.empty()) {
        out += '[';
        for (std::size_t i = 0; i < s.assignments.size(); ++i) {
          if (i) out += ", ";
          out += s.assignments[i].first.str();
          out += " <- ";
          render(sig, s.assignments[i].second, kAnyPrec, out);
        }
        out += ']';
      }
      if (s.top) out += ')';
      return;
    }
    case StratKind::Match:
      out += s.anywhere ? "amatch " : "match ";
      render(sig, s.pattern, kAnyPrec, out);
      if (!s.cond.empty()) {
        out += " s.t. ";
        renderCondition(sig, s.cond, out);
      }
      return;
    case StratKind::MatchRew:
      out += s.anywhere ? "amatchrew " : "matchrew ";
      render(sig, s.pattern, kAnyPrec, out);
      if (!s.cond.empty()) {
        out += " s.t. ";
        renderCondition(sig, s.cond, out);
      }
      out += " by ";
      for (std::size_t i = 0; i < s.usingVars.size(); ++i) {
        if (i) out += ", ";
        render(sig, s.usingVars[i], kAnyPrec, out);
        out += " using ";
        renderChild(sig, s.children[i], 59, out);
      }
      return;
    case StratKind::Seq:
    case StratKind::Choice: {
      const char* op = s.kind == StratKind::Seq ? " ; " : " | ";
      const int p = stratPrec(s);
      for (std::size_t i = 0; i < s.children.size(); ++i) {
        if (i) out += op;
        renderChild(sig, s.children[i], p - 1, out);
      }
      return;
    }
    case StratKind::OrElse:
      renderChild(sig, s.children[0], 43, out);
      out += " or-else ";
      renderChild(sig, s.children[1], 42, out);
      return;
    case StratKind::Star:
    case StratKind::Bang:
      renderChild(sig, s.children[0], 0, out);
      out += s.kind == StratKind::Star ? " *" : " !";
      return;
    case StratKind::Cond:
      renderChild(sig, s.children[0], 54, out);
      out += " ? ";
      renderChild(sig, s.children[1], 54, out);
      out += " : ";
      renderChild(sig, s.children[2], 55, out);
      return;
    case StratKind::One:
      wrapped("one", s.children[0]);
      return;
    case StratKind::Try:
      wrapped("try", s.children[0]);
      return;
    case StratKind::Not:
      wrapped("not", s.children[0]);
      return;
    case StratKind::Test:
      wrapped("test", s.children[0]);
      return;
    case StratKind::GtAll:
      wrapped("gt-all", s.children[0]);
      return;
    case StratKind::GtOne:
      wrapped("gt-one", s.children[0]);
      return;
    case StratKind::GtSome:
      wrapped("gt-some", s.children[0]);
      return;
    case StratKind::Call:
      out += s.name.str();
      if (!s.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < s.args.size(); ++i) {
          if (i) out += ", ";
          render(sig, s.args[i], kAnyPrec, out);
        }
        out += ')';
      }
      return;
    case StratKind::Congruence:
      out += s.name.str();
      if (!s.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < s.children.size(); ++i) {
          if (i) out += ", ";
          renderChild(sig, s.children[i], 59, out);
        }
        out += ')';
      }
      return;
  }
}

void renderStrat(const Signature& sig, const Strategy& s, int maxPrec, std::string& out) {
  const bool parens = stratPrec(s) > maxPrec;
  if (parens) out += '(';
  renderStratBody(sig, s, out);
  if (parens) out += ')';
}

std::string sortList(const Signature& sig, const std::vector<SortId>& sorts) {
  std::string out;
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (i) out += ' ';
    out += sig.sortName(sorts[i]);
  }
  return out;
}

std::string intList(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::string printTerm(const Signature& sig, const Term& t) {
  std::string out;
  render(sig, t, kAnyPrec, out);
  return out;
}

std::string printCondition(const Signature& sig, const Condition& c) {
  std::string out;
  renderCondition(sig, c, out);
  return out;
}

std::string printStrategy(const Signature& sig, const Strategy& s) {
  std::string out;
  renderStrat(sig, s, kAnyPrec, out);
  return out;
}

std::string printModule(const ModuleDef& m) {
  const Signature& sig = m.sig;
  std::ostringstream os;
  const char* open = m.kind == ModuleKind::Functional ? "fmod"
                     : m.kind == ModuleKind::System   ? "mod"
                                                      : "smod";
  const char* close = m.kind == ModuleKind::Functional ? "endfm"
                      : m.kind == ModuleKind::System   ? "endm"
                                                       : "endsm";
  os << open << ' ' << m.name.str() << " is\n";
  // Builtin modules stay imports; everything else is printed flat.
  for (Symbol imp : m.imports)
    if (isPreludeModule(imp)) os << "  protecting " << imp.str() << " .\n";
  std::vector<std::string> sorts;
  for (std::size_t i = 0; i < sig.sortCount(); ++i) {
    std::string n = sig.sortName(static_cast<SortId>(i));
    if (!isPreludeSort(n)) sorts.push_back(n);
  }
  if (!sorts.empty()) {
    os << "  sorts";
    for (const std::string& n : sorts) os << ' ' << n;
    os << " .\n";
  }
  for (auto [a, b] : sig.subsortDecls()) {
    if (isPreludeSort(sig.sortName(a)) && isPreludeSort(sig.sortName(b))) continue;
    os << "  subsort " << sig.sortName(a) << " < " << sig.sortName(b) << " .\n";
  }
  for (const OpDecl& d : sig.ops()) {
    if (d.attrs.prelude) continue;
    os << "  op " << d.name.str() << " : " << sortList(sig, d.domain)
       << (d.domain.empty() ? "" : " ") << (d.attrs.partial ? "~> " : "-> ")
       << sig.sortName(d.range);
    std::vector<std::string> attrs;
    if (d.attrs.ctor) attrs.push_back("ctor");
    if (d.attrs.assoc) attrs.push_back("assoc");
    if (d.attrs.comm) attrs.push_back("comm");
    if (d.attrs.identity) attrs.push_back("id: " + printTerm(sig, *d.attrs.identity));
    if (!d.attrs.frozen.empty()) attrs.push_back("frozen(" + intList(d.attrs.frozen) + ")");
    if (!d.attrs.strat.empty()) attrs.push_back("strat(" + intList(d.attrs.strat) + ")");
    if (d.attrs.prec >= 0) attrs.push_back("prec " + std::to_string(d.attrs.prec));
    if (d.attrs.gather == Gather::Left) attrs.push_back("gather (E e)");
    if (d.attrs.gather == Gather::Right) attrs.push_back("gather (e E)");
    if (!attrs.empty()) {
      os << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) os << (i ? " " : "") << attrs[i];
      os << ']';
    }
    os << " .\n";
  }
  for (const Term& v : m.vars) os << "  var " << v.head().str() << " : " << v.sort().str() << " .\n";
  for (const Equation& e : m.equations) {
    os << (e.cond.empty() ? "  eq " : "  ceq ");
    if (!e.label.empty()) os << '[' << e.label.str() << "] : ";
    os << printTerm(sig, e.lhs) << " = " << printTerm(sig, e.rhs);
    if (!e.cond.empty()) os << " if " << printCondition(sig, e.cond);
    if (e.owise) os << " [owise]";
    os << " .\n";
  }
  for (const Rule& r : m.rules) {
    os << (r.cond.empty() ? "  rl " : "  crl ");
    if (!r.label.empty()) os << '[' << r.label.str() << "] : ";
    os << printTerm(sig, r.lhs) << " => " << printTerm(sig, r.rhs);
    if (!r.cond.empty()) os << " if " << printCondition(sig, r.cond);
    if (r.nonexec) os << " [nonexec]";
    os << " .\n";
  }
  for (const StratDecl& d : m.stratDecls) {
    os << "  strat " << d.name.str();
    if (!d.argSorts.empty()) {
      os << " :";
      for (Symbol s : d.argSorts) os << ' ' << s.str();
    }
    os << " @ " << d.subjectSort.str() << " .\n";
  }
  for (const StratDef& d : m.stratDefs) {
    os << (d.cond.empty() ? "  sd " : "  csd ") << d.name.str();
    if (!d.lhs.empty()) {
      os << '(';
      for (std::size_t i = 0; i < d.lhs.size(); ++i)
        os << (i ? ", " : "") << printTerm(sig, d.lhs[i]);
      os << ')';
    }
    os << " := " << printStrategy(sig, *d.body);
    if (!d.cond.empty()) os << " if " << printCondition(sig, d.cond);
    os << " .\n";
  }
  for (const PropDef& p : m.props)
    os << "  prop " << p.name.str() << " := " << printTerm(sig, p.body) << " .\n";
  os << close << '\n';
  return os.str();
}

}  // namespace stratrew
