#include "stratrew/parser.hpp"

#include <algorithm>
#include <cctype>

#include "stratrew/error.hpp"
#include "stratrew/kernel.hpp"

namespace stratrew {

namespace {

constexpr int kMaxPrec = 1000;

bool allDigits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::vector<std::string> splitPieces(const std::string& name) {
  std::vector<std::string> pieces(1);
  for (char c : name) {
    if (c == '_')
      pieces.emplace_back();
    else
      pieces.back() += c;
  }
  return pieces;
}

// Tokens that never continue a term, whatever the signature says.
bool hardStop(const std::string& t) {
  static const char* const stops[] = {"=",  "=>", ":=", "if", "/\\", "s.t.", "by", "using", ".",
                                      "<-", ";",  "|",  "?",  ")",   "]",    ",",  "}"};
  for (const char* s : stops)
    if (t == s) return true;
  return false;
}

}  // namespace

ExprParser::ExprParser(TokenStream& ts, const ModuleDef& mod, bool extended)
    : ts_(ts), mod_(mod), extended_(extended) {
  for (const SymbolInfo* info : mod_.sig.allSymbols()) {
    const std::string& name = info->name.str();
    switch (opForm(name, info->arity)) {
      case OpForm::Prefix:
        prefix_[name].push_back(info);
        break;
      case OpForm::Infix:
        infix_[opToken(name)] = info;
        break;
      case OpForm::PrefixUnary:
        unary_[opToken(name)] = info;
        break;
      case OpForm::Juxtaposition:
        juxtaposition_ = info;
        break;
      case OpForm::Bracket:
      case OpForm::Other: {
        std::vector<std::string> pieces = splitPieces(name);
        if (pieces.front().empty()) break;  // postfix-like mixfix is not supported
        mixfix_[pieces.front()].push_back(Mixfix{info, std::move(pieces)});
        break;
      }
    }
  }
}

bool ExprParser::isSortName(const std::string& word) const {
  return mod_.sig.findSort(Symbol(word)).has_value();
}

const Term* ExprParser::lookupVariable(const std::string& word, Term& inlineVar) const {
  if (word == "@" && placeholder_) {
    inlineVar = placeholderVariable();
    return &inlineVar;
  }
  auto colon = word.find(':');
  if (colon != std::string::npos && colon > 0 && colon + 1 < word.size()) {
    std::string sort = word.substr(colon + 1);
    if (isSortName(sort)) {
      inlineVar = Term::variable(Symbol(word.substr(0, colon)), Symbol(sort));
      return &inlineVar;
    }
  }
  return mod_.variable(Symbol(word));
}

bool ExprParser::pieceAhead(const std::string& piece, std::size_t ahead) const {
  if (piece.empty()) return true;
  std::string acc;
  while (acc.size() < piece.size()) {
    const Token& t = ts_.peek(ahead++);
    if (t.text.empty()) return false;
    acc += t.text;
    if (piece.compare(0, acc.size(), acc) != 0) return false;
  }
  return acc == piece;
}

void ExprParser::expectPiece(const std::string& piece) {
  if (!pieceAhead(piece)) ts_.fail("expected '" + piece + "'");
  std::string acc;
  while (acc.size() < piece.size()) acc += ts_.next().text;
}

bool ExprParser::isStop(std::size_t ahead) const {
  const std::string& t = ts_.peek(ahead).text;
  if (t == "," && commaIsOperator_ && infix_.count(",")) return false;
  if (hardStop(t)) return true;
  if (inStrategy_ > 0) {
    if (t == "or-else") return true;
    if ((t == "*" || t == "!" || t == "+") && !canStartTerm(ahead + 1)) return true;
  }
  if (colonStops_ > 0 && t == ":") return true;
  return false;
}

bool ExprParser::canStartTerm(std::size_t ahead) const {
  const Token& tok = ts_.peek(ahead);
  const std::string& w = tok.text;
  if (w.empty() || hardStop(w)) return false;
  if (w == "(" || allDigits(w)) return true;
  Term tmp;
  if (lookupVariable(w, tmp)) return true;
  if (prefix_.count(w) || unary_.count(w)) return true;
  for (const auto& [first, ms] : mixfix_)
    if (pieceAhead(first, ahead)) return true;
  return false;
}

Term ExprParser::canonical(const Term& raw) { return canonicalize(mod_.sig, raw); }

Term ExprParser::term() { return canonical(parseTerm(kMaxPrec)); }

std::vector<Term> ExprParser::parseArgs() {
  ts_.expect("(");
  const int savedColon = colonStops_;
  const bool savedComma = commaIsOperator_;
  colonStops_ = 0;
  commaIsOperator_ = false;
  std::vector<Term> args;
  if (!ts_.peekIs(")")) {
    do {
      args.push_back(parseTerm(kMaxPrec));
    } while (ts_.accept(","));
  }
  colonStops_ = savedColon;
  commaIsOperator_ = savedComma;
  ts_.expect(")");
  return args;
}

Term ExprParser::parseMixfix(const Mixfix& m) {
  expectPiece(m.pieces.front());
  std::vector<Term> args;
  const int savedColon = colonStops_;
  const bool savedComma = commaIsOperator_;
  colonStops_ = 0;
  commaIsOperator_ = false;
  for (std::size_t i = 1; i < m.pieces.size(); ++i) {
    args.push_back(parseTerm(kMaxPrec));
    expectPiece(m.pieces[i]);
  }
  colonStops_ = savedColon;
  commaIsOperator_ = savedComma;
  return Term::application(m.info->name, std::move(args));
}

Term ExprParser::parseOperand(int maxPrec, int& prec) {
  prec = 0;
  if (ts_.atEnd()) ts_.fail("expected a term but input ended");
  const std::string w = ts_.peek().text;
  if (w == "(") {
    ts_.next();
    const int savedColon = colonStops_;
    const bool savedComma = commaIsOperator_;
    colonStops_ = 0;
    commaIsOperator_ = true;
    Term t = parseTerm(kMaxPrec);
    colonStops_ = savedColon;
    commaIsOperator_ = savedComma;
    ts_.expect(")");
    return t;
  }
  if (allDigits(w)) {
    ts_.next();
    try {
      return Term::numeral(std::stoull(w));
    } catch (const std::out_of_range&) {
      ts_.fail("numeral out of range: " + w);
    }
  }
  if (hardStop(w)) ts_.fail("expected a term but found '" + w + "'");

  if (ts_.peekIs("(", 1)) {
    auto pit = prefix_.find(w);
    auto uit = unary_.find(w);
    // A constant followed by a parenthesis is juxtaposition, as in `a (b c)`.
    if (pit != prefix_.end() &&
        std::none_of(pit->second.begin(), pit->second.end(),
                     [](const SymbolInfo* i) { return i->arity > 0; }))
      pit = prefix_.end();
    if (pit != prefix_.end() || uit != unary_.end()) {
      ts_.next();
      std::vector<Term> args = parseArgs();
      if (pit != prefix_.end()) {
        for (const SymbolInfo* info : pit->second)
          if (info->arity == args.size() || (info->assoc && args.size() >= 2))
            return Term::application(info->name, std::move(args));
      }
      if (uit != unary_.end() && args.size() == 1) {
        prec = 0;
        return Term::application(uit->second->name, std::move(args));
      }
      ts_.fail("no operator " + w + " with " + std::to_string(args.size()) + " arguments");
    }
  }
  Term inlineVar;
  if (const Term* v = lookupVariable(w, inlineVar)) {
    Term out = *v;
    ts_.next();
    return out;
  }
  if (auto uit = unary_.find(w); uit != unary_.end()) {
    ts_.next();
    const SymbolInfo* info = uit->second;
    Term arg = parseTerm(std::max(info->prec, 0));
    prec = info->prec;
    (void)maxPrec;
    return Term::application(info->name, {arg});
  }
  if (auto pit = prefix_.find(w); pit != prefix_.end()) {
    for (const SymbolInfo* info : pit->second)
      if (info->arity == 0) {
        ts_.next();
        return Term::constant(info->name);
      }
  }
  for (const auto& [first, ms] : mixfix_) {
    if (!pieceAhead(first)) continue;
    return parseMixfix(ms.front());
  }
  ts_.fail("unexpected '" + w + "' in term");
}

Term ExprParser::parseTerm(int maxPrec, int* precOut) {
  int leftPrec = 0;
  Term left = parseOperand(maxPrec, leftPrec);
  const SymbolInfo* leftOp = nullptr;
  while (!ts_.atEnd() && !isStop(0)) {
    const std::string& tok = ts_.peek().text;
    const SymbolInfo* info = nullptr;
    bool juxt = false;
    if (auto it = infix_.find(tok); it != infix_.end()) {
      info = it->second;
    } else if (juxtaposition_ && canStartTerm(0)) {
      info = juxtaposition_;
      juxt = true;
    } else {
      break;
    }
    const int p = info->prec;
    if (p > maxPrec) break;
    const bool leftOk =
        leftPrec < p ||
        (leftPrec == p && (info->gather == Gather::Left || (info->assoc && leftOp == info)));
    if (!leftOk) break;
    if (!juxt) ts_.next();
    const int rightMax = (info->gather == Gather::Left || info->assoc) ? p - 1 : p;
    Term right = parseTerm(rightMax);
    left = Term::application(info->name, {left, right});
    leftPrec = p;
    leftOp = info;
  }
  if (precOut) *precOut = leftPrec;
  return left;
}

bool ExprParser::fragmentIsSortTest() const {
  int depth = 0;
  std::string last, beforeLast;
  for (std::size_t k = 0;; ++k) {
    const std::string& t = ts_.peek(k).text;
    if (t.empty()) break;
    if (depth == 0) {
      if (t == "=" || t == ":=") return false;
      if (t == "/\\" || t == "?" || t == ";" || t == "|" || t == "by" || t == "." ||
          t == "or-else" || t == "if" || t == "," || t == "=>" || t == ")" || t == "]")
        break;
    }
    if (t == "(" || t == "[") ++depth;
    if (t == ")" || t == "]") --depth;
    beforeLast = last;
    last = t;
  }
  return beforeLast == ":" && isSortName(last);
}

CondFragment ExprParser::parseFragment() {
  CondFragment f;
  if (fragmentIsSortTest()) {
    ++colonStops_;
    Term t = parseTerm(kMaxPrec);
    --colonStops_;
    ts_.expect(":");
    f.kind = CondFragment::Kind::SortTest;
    f.lhs = canonical(t);
    f.sort = Symbol(ts_.next().text);
    return f;
  }
  f.lhs = term();
  if (ts_.accept("=")) {
    f.kind = CondFragment::Kind::Equality;
    f.rhs = term();
  } else if (ts_.accept(":=")) {
    f.kind = CondFragment::Kind::Assignment;
    f.rhs = term();
  } else {
    f.kind = CondFragment::Kind::Equality;
    if (!mod_.sig.symbol(Symbol("true"), 0))
      ts_.fail("boolean condition in a module without Bool");
    f.rhs = canonical(Term::constant(Symbol("true")));
  }
  return f;
}

Condition ExprParser::condition() {
  Condition c;
  do {
    c.push_back(parseFragment());
  } while (ts_.accept("/\\"));
  return c;
}

StratPtr ExprParser::strategy() {
  ++inStrategy_;
  StratPtr s = parseStrategy(kMaxPrec);
  --inStrategy_;
  return s;
}

StratPtr ExprParser::parseStrategy(int maxPrec) {
  StratPtr left = parseStrategyPrimary();
  for (;;) {
    if (ts_.accept("*"))
      left = strat::star(left);
    else if (ts_.accept("!"))
      left = strat::bang(left);
    else if (ts_.accept("+"))
      left = strat::seq(left, strat::star(left));
    else
      break;
  }
  for (;;) {
    const std::string& tok = ts_.peek().text;
    if (tok == ";" && 39 <= maxPrec) {
      ts_.next();
      left = strat::seq(left, parseStrategy(38));
    } else if (tok == "|" && 41 <= maxPrec) {
      ts_.next();
      left = strat::choice(left, parseStrategy(40));
    } else if (tok == "or-else" && 43 <= maxPrec) {
      ts_.next();
      left = strat::orElse(left, parseStrategy(43));
    } else if (tok == "?" && 55 <= maxPrec) {
      ts_.next();
      ++colonStops_;
      StratPtr yes = parseStrategy(54);
      --colonStops_;
      ts_.expect(":");
      StratPtr no = parseStrategy(55);
      left = strat::cond(left, yes, no);
    } else {
      break;
    }
  }
  return left;
}

StratPtr ExprParser::parseStrategyPrimary() {
  if (ts_.atEnd()) ts_.fail("expected a strategy but input ended");
  const std::string w = ts_.peek().text;
  const bool call = ts_.peekIs("(", 1);
  if (w == "(") {
    ts_.next();
    const int savedColon = colonStops_;
    colonStops_ = 0;
    StratPtr s = parseStrategy(kMaxPrec);
    colonStops_ = savedColon;
    ts_.expect(")");
    return s;
  }
  if (w == "idle") return ts_.next(), strat::idle();
  if (w == "fail") return ts_.next(), strat::fail();
  if (w == "all" && !call) return ts_.next(), strat::all();
  if (w == "top" && call) {
    ts_.next();
    ts_.expect("(");
    StratPtr inner = parseNamedStrategy();
    ts_.expect(")");
    if (inner->kind != StratKind::Apply) ts_.fail("top expects a rule application");
    return strat::apply(inner->name, inner->assignments, true);
  }
  if (w == "match" || w == "amatch" || w == "xmatch") {
    ts_.next();
    const int savedColon = colonStops_;
    colonStops_ = 0;
    Term pattern = term();
    colonStops_ = savedColon;
    Condition cond;
    if (ts_.accept("s.t.")) cond = condition();
    return strat::match(pattern, std::move(cond), w == "amatch");
  }
  if (w == "matchrew" || w == "amatchrew" || w == "xmatchrew") {
    ts_.next();
    const int savedColon = colonStops_;
    colonStops_ = 0;
    Term pattern = term();
    Condition cond;
    if (ts_.accept("s.t.")) cond = condition();
    colonStops_ = savedColon;
    ts_.expect("by");
    std::vector<Term> patternVars;
    collectVariables(pattern, patternVars);
    for (const CondFragment& f : cond)
      if (f.kind == CondFragment::Kind::Assignment) collectVariables(f.lhs, patternVars);
    std::vector<Term> vars;
    std::vector<StratPtr> subs;
    do {
      Term v = term();
      if (!v.isVariable() ||
          std::find(patternVars.begin(), patternVars.end(), v) == patternVars.end())
        ts_.fail("matchrew target must be a variable of the pattern");
      if (std::find(vars.begin(), vars.end(), v) != vars.end())
        ts_.fail("matchrew variable rewritten twice");
      ts_.expect("using");
      vars.push_back(v);
      subs.push_back(parseStrategy(kMaxPrec));
    } while (ts_.accept(","));
    return strat::matchRew(pattern, std::move(cond), std::move(vars), std::move(subs),
                           w == "amatchrew");
  }
  auto unaryKeyword = [&](StratKind kind) {
    ts_.next();
    ts_.expect("(");
    const int savedColon = colonStops_;
    colonStops_ = 0;
    StratPtr a = parseStrategy(kMaxPrec);
    colonStops_ = savedColon;
    ts_.expect(")");
    return strat::unary(kind, a);
  };
  if (call) {
    if (w == "one") return unaryKeyword(StratKind::One);
    if (w == "try") return unaryKeyword(StratKind::Try);
    if (w == "not") return unaryKeyword(StratKind::Not);
    if (w == "test") return unaryKeyword(StratKind::Test);
    if (w == "gt-all" || w == "gt-one" || w == "gt-some") {
      if (!extended_) ts_.fail(w + " requires the extended strategy language");
      return unaryKeyword(w == "gt-all"   ? StratKind::GtAll
                          : w == "gt-one" ? StratKind::GtOne
                                          : StratKind::GtSome);
    }
  }
  return parseNamedStrategy();
}

StratPtr ExprParser::parseNamedStrategy() {
  const Token& tok = ts_.next();
  const std::string w = tok.text;
  const Symbol name(w);
  if (ts_.peekIs("[") && mod_.hasRuleLabel(name)) {
    ts_.next();
    std::vector<std::pair<Symbol, Term>> assigns;
    const int savedColon = colonStops_;
    colonStops_ = 0;
    do {
      const Token& var = ts_.next();
      ts_.expect("<-");
      assigns.emplace_back(Symbol(var.text), term());
    } while (ts_.accept(","));
    colonStops_ = savedColon;
    ts_.expect("]");
    return strat::apply(name, std::move(assigns));
  }
  if (ts_.peekIs("(")) {
    if (mod_.hasStrategy(name)) {
      std::vector<Term> args;
      ts_.next();
      const int savedColon = colonStops_;
      colonStops_ = 0;
      if (!ts_.peekIs(")")) {
        do {
          args.push_back(term());
        } while (ts_.accept(","));
      }
      colonStops_ = savedColon;
      ts_.expect(")");
      if (!mod_.hasStrategy(name, args.size()))
        ts_.fail("strategy " + w + " does not take " + std::to_string(args.size()) +
                 " arguments");
      return strat::call(name, std::move(args));
    }
    bool isCtor = false;
    for (const SymbolInfo* info : mod_.sig.symbolsNamed(name)) isCtor = isCtor || info->ctor;
    if (isCtor) {
      if (!extended_) ts_.fail("congruence operator " + w + " requires the extended strategy language");
      ts_.next();
      const int savedColon = colonStops_;
      colonStops_ = 0;
      std::vector<StratPtr> subs;
      do {
        subs.push_back(parseStrategy(kMaxPrec));
      } while (ts_.accept(","));
      colonStops_ = savedColon;
      ts_.expect(")");
      const SymbolInfo* info = mod_.sig.symbol(name, subs.size());
      if (!info || !info->ctor || info->arity != subs.size())
        ts_.fail("no constructor " + w + " with " + std::to_string(subs.size()) + " arguments");
      return strat::congruence(name, std::move(subs));
    }
    ts_.fail("unknown strategy '" + w + "'");
  }
  if (mod_.hasStrategy(name, 0)) return strat::call(name);
  if (mod_.hasRuleLabel(name)) return strat::apply(name);
  if (const SymbolInfo* info = mod_.sig.symbol(name, 0); info && info->ctor) {
    if (!extended_) ts_.fail("congruence operator " + w + " requires the extended strategy language");
    return strat::congruence(name, {});
  }
  throw ParseError("unknown strategy or rule label '" + w + "'", tok.line, tok.column);
}

LtlPtr ExprParser::formula() { return parseFormula(kMaxPrec); }

LtlPtr ExprParser::parseFormula(int maxPrec) {
  LtlPtr left = parseFormulaPrimary();
  for (;;) {
    const std::string& tok = ts_.peek().text;
    if (tok == "/\\" && 55 <= maxPrec) {
      ts_.next();
      left = ltl::binary(LtlKind::And, left, parseFormula(54));
    } else if (tok == "\\/" && 59 <= maxPrec) {
      ts_.next();
      left = ltl::binary(LtlKind::Or, left, parseFormula(58));
    } else if (tok == "U" && 63 <= maxPrec) {
      ts_.next();
      left = ltl::binary(LtlKind::Until, left, parseFormula(63));
    } else if (tok == "R" && 63 <= maxPrec) {
      ts_.next();
      left = ltl::binary(LtlKind::Release, left, parseFormula(63));
    } else if (tok == "->" && 65 <= maxPrec) {
      ts_.next();
      left = ltl::binary(LtlKind::Implies, left, parseFormula(65));
    } else {
      break;
    }
  }
  return left;
}

LtlPtr ExprParser::parseFormulaPrimary() {
  if (ts_.atEnd()) ts_.fail("expected a formula but input ended");
  const Token& tok = ts_.peek();
  const std::string w = tok.text;
  if (w == "(") {
    ts_.next();
    LtlPtr f = parseFormula(kMaxPrec);
    ts_.expect(")");
    return f;
  }
  if (mod_.prop(Symbol(w))) {
    ts_.next();
    return ltl::prop(Symbol(w));
  }
  if (w == "true") return ts_.next(), ltl::truth();
  if (w == "false") return ts_.next(), ltl::falsity();
  if (w == "~") return ts_.next(), ltl::unary(LtlKind::Not, parseFormula(53));
  if (w == "O") return ts_.next(), ltl::unary(LtlKind::Next, parseFormula(53));
  if (w == "<>") return ts_.next(), ltl::unary(LtlKind::Eventually, parseFormula(53));
  if (w == "[" && ts_.peekIs("]", 1)) {
    ts_.next();
    ts_.next();
    return ltl::unary(LtlKind::Always, parseFormula(53));
  }
  if (w == "[]") return ts_.next(), ltl::unary(LtlKind::Always, parseFormula(53));
  throw ParseError("unknown atomic proposition '" + w + "'", tok.line, tok.column);
}

namespace {

template <class F>
auto parseWhole(std::string_view text, F&& f) {
  TokenStream ts(tokenize(text));
  auto out = f(ts);
  if (!ts.atEnd()) ts.fail("unexpected '" + ts.peek().text + "'");
  return out;
}

}  // namespace

Term parseTerm(const ModuleDef& mod, std::string_view text, bool placeholder) {
  return parseWhole(text, [&](TokenStream& ts) {
    ExprParser p(ts, mod);
    p.allowPlaceholder(placeholder);
    return p.term();
  });
}

Condition parseCondition(const ModuleDef& mod, std::string_view text) {
  return parseWhole(text, [&](TokenStream& ts) { return ExprParser(ts, mod).condition(); });
}

StratPtr parseStrategy(const ModuleDef& mod, std::string_view text, bool extended) {
  return parseWhole(text,
                    [&](TokenStream& ts) { return ExprParser(ts, mod, extended).strategy(); });
}

LtlPtr parseFormula(const ModuleDef& mod, std::string_view text) {
  return parseWhole(text, [&](TokenStream& ts) { return ExprParser(ts, mod).formula(); });
}

}  // namespace stratrew
