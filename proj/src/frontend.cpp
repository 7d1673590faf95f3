#include "stratrew/frontend.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "stratrew/error.hpp"
#include "stratrew/kernel.hpp"
#include "stratrew/lexer.hpp"
#include "stratrew/parser.hpp"

namespace stratrew {

void mergeSignature(Signature& dst, const Signature& src) {
  std::vector<SortId> map(src.sortCount());
  for (std::size_t i = 0; i < src.sortCount(); ++i)
    map[i] = dst.addSort(Symbol(src.sortName(static_cast<SortId>(i))));
  auto m = [&](SortId s) { return s == kAnySort ? s : map.at(static_cast<std::size_t>(s)); };
  for (auto [a, b] : src.subsortDecls()) dst.addSubsort(m(a), m(b));
  for (const OpDecl& d : src.ops()) {
    OpDecl c = d;
    for (SortId& s : c.domain) s = m(s);
    c.range = m(c.range);
    dst.addOp(std::move(c));
  }
}

namespace {

using Tokens = std::vector<Token>;

[[noreturn]] void failAt(const Token& t, const std::string& msg) {
  throw ParseError(msg, t.line, t.column);
}

struct RawOp {
  Token at;
  Symbol name;
  std::vector<Symbol> domain;
  Symbol range;
  bool partial = false;
  OpAttrs attrs;
  Tokens identity;  // unparsed identity element
};

struct RawVar {
  Token at;
  Symbol name;
  Symbol sort;
};

bool isModuleStart(const std::string& t) { return t == "fmod" || t == "mod" || t == "smod"; }
bool isModuleEnd(const std::string& t) { return t == "endfm" || t == "endm" || t == "endsm"; }

Builtin builtinNamed(const std::string& n) {
  static const std::pair<const char*, Builtin> table[] = {
      {"succ", Builtin::Succ},      {"plus", Builtin::Plus},      {"times", Builtin::Times},
      {"sd", Builtin::SymDiff},     {"rem", Builtin::Rem},        {"quo", Builtin::Quo},
      {"min", Builtin::Min},        {"max", Builtin::Max},        {"lt", Builtin::Less},
      {"le", Builtin::LessEq},      {"gt", Builtin::Greater},     {"ge", Builtin::GreaterEq},
      {"not", Builtin::Not},        {"and", Builtin::And},        {"or", Builtin::Or},
      {"xor", Builtin::Xor},        {"implies", Builtin::Implies}, {"and-then", Builtin::AndThen},
      {"or-else", Builtin::OrElse}, {"eq", Builtin::Equal},       {"neq", Builtin::NotEqual},
  };
  for (const auto& [name, b] : table)
    if (n == name) return b;
  return Builtin::None;
}

bool isOpAttrKeyword(const std::string& t) {
  static const std::set<std::string> keys = {
      "ctor", "assoc", "comm", "id:", "id", "frozen", "strat", "prec", "gather", "memo",
      "format", "metadata", "builtin", "poly", "iter", "idem", "left", "right", "left-id:",
      "right-id:", "label", "config", "object", "msg", "special", "nonexec"};
  return keys.count(t) > 0;
}

bool isStmtAttrKeyword(const std::string& t) {
  return t == "owise" || t == "otherwise" || t == "nonexec" || t == "label" || t == "metadata" ||
         t == "print" || t == "variant" || t == "narrowing";
}

struct StmtAttrs {
  bool owise = false;
  bool nonexec = false;
  Symbol label;
};

// Splits a trailing `[attrs]` off a statement body.
StmtAttrs stripStmtAttrs(Tokens& body) {
  StmtAttrs out;
  if (body.empty() || body.back().text != "]") return out;
  int depth = 0;
  std::size_t open = body.size();
  for (std::size_t i = body.size(); i-- > 0;) {
    if (body[i].text == "]") ++depth;
    if (body[i].text == "[" && --depth == 0) {
      open = i;
      break;
    }
  }
  if (open + 1 >= body.size() || !isStmtAttrKeyword(body[open + 1].text)) return out;
  for (std::size_t i = open + 1; i + 1 < body.size(); ++i) {
    const std::string& t = body[i].text;
    if (t == "owise" || t == "otherwise") {
      out.owise = true;
    } else if (t == "nonexec") {
      out.nonexec = true;
    } else if (t == "label") {
      if (i + 2 >= body.size()) failAt(body[i], "label attribute needs a name");
      out.label = Symbol(body[++i].text);
    } else if (t == "metadata") {
      ++i;  // the quoted text is one token when it has no blanks
      while (i + 1 < body.size() && body[i].text.back() != '"') ++i;
    } else if (t == "print" || t == "variant" || t == "narrowing") {
      // accepted and ignored
    } else {
      failAt(body[i], "unsupported statement attribute '" + t + "'");
    }
  }
  body.resize(open);
  return out;
}

// Reads a `[label] :` prefix.
Symbol stripLabel(Tokens& body) {
  if (body.size() >= 4 && body[0].text == "[" && body[2].text == "]" && body[3].text == ":") {
    Symbol l(body[1].text);
    body.erase(body.begin(), body.begin() + 4);
    return l;
  }
  return {};
}

void checkBound(const Tokens& stmt, const Term& lhs, const Condition& cond, const Term& rhs,
                const char* what) {
  std::vector<Term> bound;
  collectVariables(lhs, bound);
  auto requireBound = [&](const Term& t) {
    std::vector<Term> vs;
    collectVariables(t, vs);
    for (const Term& v : vs)
      if (std::find(bound.begin(), bound.end(), v) == bound.end())
        failAt(stmt.front(), std::string("variable ") + v.head().str() + " in " + what +
                                 " is not bound by the left-hand side");
  };
  for (const CondFragment& f : cond) {
    if (f.kind == CondFragment::Kind::Assignment) {
      requireBound(f.rhs);
      collectVariables(f.lhs, bound);
    } else {
      requireBound(f.lhs);
      if (f.kind == CondFragment::Kind::Equality) requireBound(f.rhs);
    }
  }
  requireBound(rhs);
}

}  // namespace

class ModuleBuilder {
 public:
  ModuleBuilder(ModuleRegistry& reg, bool prelude) : reg_(reg), prelude_(prelude) {}

  ModuleRegistry::Entry build(const Token& headerTok, Symbol name, ModuleKind kind,
                              std::vector<Tokens> stmts);

 private:
  void declare(const Tokens& s);
  void parseOp(const Tokens& s);
  void parseAttrs(RawOp& op, const Tokens& s, std::size_t& i);
  Signature ownSignature() const;
  void buildFlatSignature();
  void define(const Tokens& s);
  void defineStrategy(const Tokens& s);

  ModuleRegistry& reg_;
  bool prelude_;
  ModuleDef own_;
  ModuleDef flat_;
  std::vector<Symbol> closure_;
  std::vector<Symbol> sorts_;
  std::vector<std::pair<Symbol, Symbol>> subsorts_;
  std::vector<RawOp> ops_;
  std::vector<RawVar> vars_;
};

void ModuleBuilder::declare(const Tokens& s) {
  const std::string& kw = s.front().text;
  if (kw == "protecting" || kw == "extending" || kw == "including" || kw == "pr" ||
      kw == "ex" || kw == "inc") {
    if (s.size() != 2) failAt(s.front(), "expected a single module name after " + kw);
    Symbol m(s[1].text);
    const auto it = reg_.modules_.find(m);
    if (it == reg_.modules_.end()) failAt(s[1], "unknown module " + m.str());
    for (Symbol dep : it->second.flat->imports)
      if (std::find(closure_.begin(), closure_.end(), dep) == closure_.end())
        closure_.push_back(dep);
    if (std::find(closure_.begin(), closure_.end(), m) == closure_.end()) closure_.push_back(m);
    own_.imports.push_back(m);
  } else if (kw == "sort" || kw == "sorts") {
    for (std::size_t i = 1; i < s.size(); ++i) sorts_.emplace_back(s[i].text);
  } else if (kw == "subsort" || kw == "subsorts") {
    std::vector<std::vector<Symbol>> groups(1);
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i].text == "<")
        groups.emplace_back();
      else
        groups.back().emplace_back(s[i].text);
    }
    if (groups.size() < 2) failAt(s.front(), "subsort declaration needs '<'");
    for (std::size_t g = 0; g + 1 < groups.size(); ++g)
      for (Symbol a : groups[g])
        for (Symbol b : groups[g + 1]) subsorts_.emplace_back(a, b);
  } else if (kw == "op" || kw == "ops") {
    parseOp(s);
  } else if (kw == "var" || kw == "vars") {
    auto colon = std::find_if(s.begin(), s.end(), [](const Token& t) { return t.text == ":"; });
    if (colon == s.end() || colon + 2 != s.end()) failAt(s.front(), "expected 'var X : Sort .'");
    for (auto it = s.begin() + 1; it != colon; ++it)
      vars_.push_back(RawVar{*it, Symbol(it->text), Symbol((colon + 1)->text)});
  } else if (kw == "strat" || kw == "strats") {
    if (own_.kind != ModuleKind::Strategy)
      failAt(s.front(), "strategy declarations are only allowed in strategy modules");
    std::size_t i = 1;
    std::vector<Symbol> names;
    while (i < s.size() && s[i].text != ":" && s[i].text != "@") names.emplace_back(s[i++].text);
    std::vector<Symbol> args;
    if (i < s.size() && s[i].text == ":") {
      ++i;
      while (i < s.size() && s[i].text != "@") args.emplace_back(s[i++].text);
    }
    if (i + 2 != s.size() || s[i].text != "@")
      failAt(s.front(), "expected 'strat name : Sorts @ Sort .'");
    for (Symbol n : names) own_.stratDecls.push_back(StratDecl{n, args, Symbol(s[i + 1].text)});
  } else if (kw == "mb" || kw == "cmb") {
    failAt(s.front(), "membership axioms are not supported");
  } else if (kw == "eq" || kw == "ceq" || kw == "rl" || kw == "crl" || kw == "sd" ||
             kw == "csd" || kw == "prop") {
    // second pass
  } else {
    failAt(s.front(), "unknown declaration '" + kw + "'");
  }
}

void ModuleBuilder::parseOp(const Tokens& s) {
  const bool many = s.front().text == "ops";
  std::size_t colon = 1;
  while (colon < s.size() && s[colon].text != ":") ++colon;
  if (colon == s.size() || colon == 1) failAt(s.front(), "expected 'op name : Sorts -> Sort'");
  std::vector<std::string> names;
  for (std::size_t i = 1; i < colon; ++i) {
    if (names.empty() || (many && s[i].spaceBefore))
      names.push_back(s[i].text);
    else
      names.back() += s[i].text;
  }
  std::size_t i = colon + 1;
  RawOp proto;
  proto.at = s.front();
  while (i < s.size() && s[i].text != "->" && s[i].text != "~>") proto.domain.emplace_back(s[i++].text);
  if (i + 1 >= s.size()) failAt(s.front(), "expected '->' in operator declaration");
  proto.partial = s[i].text == "~>";
  proto.attrs.partial = proto.partial;
  proto.range = Symbol(s[i + 1].text);
  i += 2;
  if (i < s.size()) {
    if (s[i].text != "[") failAt(s[i], "unexpected '" + s[i].text + "' in operator declaration");
    parseAttrs(proto, s, i);
  }
  proto.attrs.prelude = prelude_;
  for (const std::string& n : names) {
    RawOp op = proto;
    op.name = Symbol(n);
    const std::size_t underscores = std::count(n.begin(), n.end(), '_');
    if (underscores != 0 && underscores != op.domain.size())
      failAt(s.front(), "operator " + n + " has " + std::to_string(underscores) +
                            " placeholders but " + std::to_string(op.domain.size()) +
                            " arguments");
    ops_.push_back(std::move(op));
  }
}

void ModuleBuilder::parseAttrs(RawOp& op, const Tokens& s, std::size_t& i) {
  ++i;  // '['
  auto intList = [&](std::vector<int>& out) {
    if (i >= s.size() || s[i].text != "(") {
      return false;
    }
    ++i;
    while (i < s.size() && s[i].text != ")") {
      try {
        out.push_back(std::stoi(s[i].text));
      } catch (const std::exception&) {
        failAt(s[i], "expected a number");
      }
      ++i;
    }
    if (i >= s.size()) failAt(s.back(), "unterminated attribute");
    ++i;
    return true;
  };
  while (i < s.size() && s[i].text != "]") {
    const Token& t = s[i++];
    const std::string& a = t.text;
    if (a == "ctor" || a == "constr") {
      op.attrs.ctor = true;
    } else if (a == "assoc") {
      op.attrs.assoc = true;
    } else if (a == "comm") {
      op.attrs.comm = true;
    } else if (a == "id:" || a == "id") {
      if (a == "id") {
        if (i >= s.size() || s[i].text != ":") failAt(t, "expected 'id:'");
        ++i;
      }
      int depth = 0;
      while (i < s.size()) {
        const std::string& x = s[i].text;
        if (depth == 0 && (x == "]" || isOpAttrKeyword(x))) break;
        if (x == "(" || x == "[") ++depth;
        if (x == ")" || x == "]") --depth;
        op.identity.push_back(s[i++]);
      }
      if (op.identity.empty()) failAt(t, "missing identity element");
    } else if (a == "frozen") {
      if (!intList(op.attrs.frozen)) {
        for (std::size_t k = 1; k <= op.domain.size(); ++k)
          op.attrs.frozen.push_back(static_cast<int>(k));
      }
    } else if (a == "strat") {
      if (!intList(op.attrs.strat)) failAt(t, "expected '(' after strat");
    } else if (a == "prec") {
      if (i >= s.size()) failAt(t, "expected a precedence");
      try {
        op.attrs.prec = std::stoi(s[i++].text);
      } catch (const std::exception&) {
        failAt(t, "expected a precedence");
      }
    } else if (a == "gather") {
      if (i >= s.size() || s[i].text != "(") failAt(t, "expected '(' after gather");
      std::string pattern;
      ++i;
      while (i < s.size() && s[i].text != ")") pattern += s[i++].text;
      ++i;
      op.attrs.gather = pattern == "Ee" ? Gather::Left : pattern == "eE" ? Gather::Right
                                                                          : Gather::Default;
    } else if (a == "memo" || a == "iter") {
      // no effect here
    } else if (a == "format" || a == "metadata") {
      if (i < s.size() && s[i].text == "(") {
        while (i < s.size() && s[i].text != ")") ++i;
        ++i;
      } else if (i < s.size()) {
        while (i < s.size() && s[i].text.back() != '"') ++i;
        ++i;
      }
    } else if (prelude_ && a == "poly") {
      op.attrs.polymorphic = true;
    } else if (prelude_ && a == "builtin") {
      if (i + 2 >= s.size() || s[i].text != "(") failAt(t, "expected builtin(name)");
      op.attrs.builtin = builtinNamed(s[i + 1].text);
      if (op.attrs.builtin == Builtin::None) failAt(t, "unknown builtin " + s[i + 1].text);
      i += 3;
    } else {
      failAt(t, "unsupported operator attribute '" + a + "'");
    }
  }
  if (i >= s.size()) failAt(s.back(), "unterminated attribute list");
  ++i;
  if (i != s.size()) failAt(s[i], "unexpected text after attribute list");
}

Signature ModuleBuilder::ownSignature() const {
  Signature sig;
  for (Symbol srt : sorts_) sig.addSort(srt);
  for (auto [a, b] : subsorts_) sig.addSubsort(sig.addSort(a), sig.addSort(b));
  for (const RawOp& op : ops_) {
    OpDecl d;
    d.name = op.name;
    d.attrs = op.attrs;
    for (Symbol srt : op.domain)
      d.domain.push_back(srt == Signature::anySortName() ? kAnySort : sig.addSort(srt));
    d.range = sig.addSort(op.range);
    sig.addOp(std::move(d));
  }
  return sig;
}

void ModuleBuilder::buildFlatSignature() {
  flat_.sig = Signature();
  for (Symbol m : closure_) mergeSignature(flat_.sig, reg_.modules_.at(m).own->sig);
  // Sorts referenced by own declarations must exist somewhere.
  std::set<std::string> known;
  for (std::size_t i = 0; i < flat_.sig.sortCount(); ++i)
    known.insert(flat_.sig.sortName(static_cast<SortId>(i)));
  for (Symbol srt : sorts_) known.insert(srt.str());
  auto check = [&](Symbol srt, const Token& at) {
    if (srt == Signature::anySortName() && prelude_) return;
    if (!known.count(srt.str())) failAt(at, "unknown sort " + srt.str());
  };
  for (const RawOp& op : ops_) {
    for (Symbol srt : op.domain) check(srt, op.at);
    check(op.range, op.at);
  }
  for (auto [a, b] : subsorts_) {
    if (!known.count(a.str())) throw ParseError("unknown sort " + a.str() + " in subsort declaration");
    if (!known.count(b.str())) throw ParseError("unknown sort " + b.str() + " in subsort declaration");
  }
  for (const RawVar& v : vars_) check(v.sort, v.at);
  for (const StratDecl& d : own_.stratDecls) {
    for (Symbol srt : d.argSorts) check(srt, Token{});
    check(d.subjectSort, Token{});
  }
  own_.sig = ownSignature();
  mergeSignature(flat_.sig, own_.sig);
  flat_.sig.finalize();
}

void ModuleBuilder::define(const Tokens& stmt) {
  const std::string& kw = stmt.front().text;
  if (kw != "eq" && kw != "ceq" && kw != "rl" && kw != "crl") return;
  const bool rule = kw == "rl" || kw == "crl";
  const bool conditional = kw == "ceq" || kw == "crl";
  if (rule && own_.kind == ModuleKind::Functional)
    failAt(stmt.front(), "rules are not allowed in functional modules");
  Tokens body(stmt.begin() + 1, stmt.end());
  StmtAttrs attrs = stripStmtAttrs(body);
  Symbol label = stripLabel(body);
  if (!attrs.label.empty()) label = attrs.label;
  TokenStream ts(body);
  ExprParser p(ts, flat_, reg_.extended());
  Term lhs = p.term();
  ts.expect(rule ? "=>" : "=");
  Term rhs = p.term();
  Condition cond;
  if (conditional) {
    ts.expect("if");
    cond = p.condition();
    if (ts.peekIs("=>")) ts.fail("rewrite conditions are not supported");
  } else if (ts.peekIs("if")) {
    ts.fail("use c" + kw + " for conditional statements");
  }
  if (!ts.atEnd()) ts.fail("unexpected '" + ts.peek().text + "'");
  if (!flat_.sig.sameKind(flat_.sig.leastSort(lhs), flat_.sig.leastSort(rhs)))
    failAt(stmt.front(), "left- and right-hand sides have different kinds");
  if (rule) {
    if (attrs.owise) failAt(stmt.front(), "owise is only allowed on equations");
    Rule r{label, lhs, rhs, std::move(cond), attrs.nonexec};
    own_.rules.push_back(r);
    flat_.rules.push_back(std::move(r));
  } else {
    if (!attrs.nonexec) checkBound(stmt, lhs, cond, rhs, "right-hand side");
    if (lhs.isVariable()) failAt(stmt.front(), "left-hand side of an equation is a variable");
    Equation e{label, lhs, rhs, std::move(cond), attrs.owise};
    own_.equations.push_back(e);
    flat_.equations.push_back(std::move(e));
  }
}

void ModuleBuilder::defineStrategy(const Tokens& stmt) {
  const std::string& kw = stmt.front().text;
  if (kw == "prop") {
    if (stmt.size() < 4 || stmt[2].text != ":=") failAt(stmt.front(), "expected 'prop Name := term .'");
    Symbol name(stmt[1].text);
    TokenStream ts(Tokens(stmt.begin() + 3, stmt.end()));
    ExprParser p(ts, flat_, reg_.extended());
    p.allowPlaceholder(true);
    Term body = p.term();
    if (!ts.atEnd()) ts.fail("unexpected '" + ts.peek().text + "'");
    auto boolSort = flat_.sig.findSort(Symbol("Bool"));
    if (!boolSort || !flat_.sig.sameKind(flat_.sig.leastSort(body), *boolSort))
      failAt(stmt.front(), "proposition " + name.str() + " is not a boolean term");
    std::vector<Term> vs;
    collectVariables(body, vs);
    for (const Term& v : vs)
      if (!(v == placeholderVariable()))
        failAt(stmt.front(), "proposition " + name.str() + " has free variable " + v.head().str());
    if (flat_.prop(name)) failAt(stmt[1], "proposition " + name.str() + " defined twice");
    own_.props.push_back(PropDef{name, body});
    flat_.props.push_back(PropDef{name, body});
    return;
  }
  if (kw != "sd" && kw != "csd") return;
  if (own_.kind != ModuleKind::Strategy)
    failAt(stmt.front(), "strategy definitions are only allowed in strategy modules");
  Tokens body(stmt.begin() + 1, stmt.end());
  stripStmtAttrs(body);
  TokenStream ts(body);
  ExprParser p(ts, flat_, reg_.extended());
  const Token& nameTok = ts.next();
  Symbol name(nameTok.text);
  std::vector<Term> args;
  if (ts.accept("(")) {
    do {
      args.push_back(p.term());
    } while (ts.accept(","));
    ts.expect(")");
  }
  if (!flat_.hasStrategy(name, args.size()))
    failAt(nameTok, "strategy " + name.str() + " with " + std::to_string(args.size()) +
                        " arguments is not declared");
  ts.expect(":=");
  StratPtr s = p.strategy();
  Condition cond;
  if (kw == "csd") {
    ts.expect("if");
    cond = p.condition();
  }
  if (!ts.atEnd()) ts.fail("unexpected '" + ts.peek().text + "'");
  StratDef d{name, std::move(args), s, std::move(cond)};
  own_.stratDefs.push_back(d);
  flat_.stratDefs.push_back(std::move(d));
}

ModuleRegistry::Entry ModuleBuilder::build(const Token& headerTok, Symbol name, ModuleKind kind,
                                           std::vector<Tokens> stmts) {
  own_.name = name;
  own_.kind = kind;
  own_.prelude = prelude_;
  for (const Tokens& s : stmts) declare(s);
  if (kind == ModuleKind::Functional || kind == ModuleKind::System) {
    for (Symbol m : own_.imports) {
      const ModuleDef& im = *reg_.modules_.at(m).flat;
      if (static_cast<int>(im.kind) > static_cast<int>(kind))
        failAt(headerTok, "module " + name.str() + " cannot import " + m.str());
    }
  }

  // Two rounds: identity elements can only be parsed once the operators exist.
  buildFlatSignature();
  bool identities = false;
  for (RawOp& op : ops_) {
    if (op.identity.empty()) continue;
    TokenStream ts(op.identity);
    ExprParser p(ts, flat_);
    op.attrs.identity = p.term();
    if (!ts.atEnd()) ts.fail("unexpected '" + ts.peek().text + "' in identity element");
    identities = true;
  }
  if (identities) buildFlatSignature();

  flat_.name = name;
  flat_.kind = kind;
  flat_.prelude = prelude_;
  flat_.imports = closure_;
  for (Symbol m : closure_) {
    const ModuleDef& o = *reg_.modules_.at(m).own;
    flat_.equations.insert(flat_.equations.end(), o.equations.begin(), o.equations.end());
    flat_.rules.insert(flat_.rules.end(), o.rules.begin(), o.rules.end());
    flat_.stratDecls.insert(flat_.stratDecls.end(), o.stratDecls.begin(), o.stratDecls.end());
    flat_.stratDefs.insert(flat_.stratDefs.end(), o.stratDefs.begin(), o.stratDefs.end());
    flat_.props.insert(flat_.props.end(), o.props.begin(), o.props.end());
  }
  flat_.stratDecls.insert(flat_.stratDecls.end(), own_.stratDecls.begin(),
                          own_.stratDecls.end());
  for (const RawVar& v : vars_) {
    Term t = Term::variable(v.name, v.sort);
    own_.vars.push_back(t);
  }
  flat_.vars = own_.vars;

  for (const Tokens& s : stmts) define(s);
  for (const Tokens& s : stmts) defineStrategy(s);
  return ModuleRegistry::Entry{std::make_shared<const ModuleDef>(std::move(flat_)),
                               std::make_shared<const ModuleDef>(std::move(own_))};
}

ModuleRegistry::ModuleRegistry() { loadText(preludeText(), true, nullptr); }

std::vector<Symbol> ModuleRegistry::load(std::string_view text) {
  std::vector<Symbol> names;
  loadText(text, false, &names);
  return names;
}

void ModuleRegistry::loadText(std::string_view text, bool prelude, std::vector<Symbol>* names) {
  std::vector<Token> toks = tokenize(text);
  std::size_t i = 0;
  while (i < toks.size()) {
    const Token& header = toks[i];
    if (!isModuleStart(header.text))
      failAt(header, "expected fmod, mod or smod but found '" + header.text + "'");
    if (i + 2 >= toks.size() || toks[i + 2].text != "is")
      failAt(header, "expected '" + header.text + " NAME is'");
    const ModuleKind kind = header.text == "fmod"  ? ModuleKind::Functional
                            : header.text == "mod" ? ModuleKind::System
                                                   : ModuleKind::Strategy;
    const char* endKw = kind == ModuleKind::Functional ? "endfm"
                        : kind == ModuleKind::System   ? "endm"
                                                       : "endsm";
    Symbol name(toks[i + 1].text);
    i += 3;
    std::vector<Tokens> stmts;
    Tokens cur;
    int depth = 0;
    bool closed = false;
    while (i < toks.size()) {
      const Token& t = toks[i++];
      if (cur.empty() && isModuleEnd(t.text)) {
        if (t.text != endKw) failAt(t, std::string("expected ") + endKw);
        closed = true;
        break;
      }
      if (cur.empty() && isModuleStart(t.text)) failAt(t, "missing " + std::string(endKw));
      if (t.text == "(" || t.text == "[") ++depth;
      if (t.text == ")" || t.text == "]") --depth;
      if (t.text == "." && depth <= 0) {
        if (cur.empty()) failAt(t, "empty statement");
        stmts.push_back(std::move(cur));
        cur.clear();
        depth = 0;
        continue;
      }
      cur.push_back(t);
    }
    if (!closed) failAt(header, "module " + name.str() + " is not closed with " + endKw);
    if (!cur.empty()) failAt(cur.front(), "statement is not terminated by '.'");
    ModuleBuilder b(*this, prelude);
    Entry e = b.build(header, name, kind, std::move(stmts));
    modules_[name] = std::move(e);
    if (!prelude) {
      order_.erase(std::remove(order_.begin(), order_.end(), name), order_.end());
      order_.push_back(name);
      if (names) names->push_back(name);
    }
  }
}

void ModuleRegistry::insert(ModuleDef flat) {
  Symbol name = flat.name;
  auto own = std::make_shared<ModuleDef>(flat);
  own->imports.clear();
  modules_[name] = Entry{std::make_shared<const ModuleDef>(std::move(flat)), std::move(own)};
  order_.erase(std::remove(order_.begin(), order_.end(), name), order_.end());
  order_.push_back(name);
}

const ModuleDef* ModuleRegistry::find(Symbol name) const {
  auto it = modules_.find(name);
  return it == modules_.end() ? nullptr : it->second.flat.get();
}

std::shared_ptr<const ModuleDef> ModuleRegistry::share(Symbol name) const {
  auto it = modules_.find(name);
  if (it == modules_.end()) throw Error("no module " + name.str());
  return it->second.flat;
}

const ModuleDef& ModuleRegistry::get(Symbol name) const {
  if (const ModuleDef* m = find(name)) return *m;
  throw Error("no module " + name.str());
}

}  // namespace stratrew
