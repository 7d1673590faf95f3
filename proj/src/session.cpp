#include "stratrew/session.hpp"

#include <cctype>
#include <filesystem>
#include <functional>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stratrew/csr.hpp"
#include "stratrew/engine.hpp"
#include "stratrew/error.hpp"
#include "stratrew/ext.hpp"
#include "stratrew/modelcheck.hpp"
#include "stratrew/multistrat.hpp"
#include "stratrew/parser.hpp"
#include "stratrew/printer.hpp"

namespace stratrew {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool isSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Offset of `kw` as a whole word outside brackets.
std::optional<std::size_t> findKeyword(std::string_view s, std::string_view kw, bool last) {
  std::optional<std::size_t> found;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth != 0 || s.compare(i, kw.size(), kw) != 0) continue;
    bool before = i == 0 || isSpace(s[i - 1]);
    bool after = i + kw.size() == s.size() || isSpace(s[i + kw.size()]);
    if (!before || !after) continue;
    found = i;
    if (!last) break;
  }
  return found;
}

std::vector<std::string> splitTopLevel(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.emplace_back(s.substr(start));
  return out;
}

std::string firstWord(std::string_view s) {
  s = trim(s);
  std::size_t n = 0;
  while (n < s.size() && !isSpace(s[n])) ++n;
  return std::string(s.substr(0, n));
}

bool isModuleKeyword(const std::string& w) {
  return w == "fmod" || w == "mod" || w == "smod";
}

bool isModuleEnd(const std::string& w) {
  return w == "endfm" || w == "endm" || w == "endsm";
}

std::optional<GlobalStrategy> parseGlobal(std::string_view text) {
  text = trim(text);
  std::string w = firstWord(text);
  std::string_view rest = trim(text.substr(w.size()));
  if (w == "turns" && rest.empty()) return GlobalStrategy::turns();
  if (w == "concurrent" && rest.empty()) return GlobalStrategy::freec();
  if (w == "steps") {
    std::size_t k = 0;
    std::istringstream in{std::string(rest)};
    if (!(in >> k) || !(in >> std::ws).eof()) throw Error("expected a step count after 'steps'");
    return GlobalStrategy::freec(k);
  }
  if (w == "custom") return GlobalStrategy::customOf(parseGamma(rest));
  return std::nullopt;
}

}  // namespace

struct Session::Prepared {
  std::shared_ptr<const ModuleDef> mod;
  std::vector<StratPtr> strategies;
  std::optional<GlobalStrategy> global;
};

Session::Session(SessionOptions opts, std::ostream& out, std::ostream& err)
    : opts_(opts), out_(out), err_(err) {
  reg_.setExtended(opts_.extended);
}

Session::~Session() = default;

int Session::exitCode() const {
  if (error_) return 1;
  return lastCheckFailed_ ? 2 : 0;
}

const ModuleDef* Session::current() const {
  return hasCurrent_ ? reg_.find(current_) : nullptr;
}

std::shared_ptr<const ModuleDef> Session::requireModule() const {
  if (!hasCurrent_) throw Error("no module selected");
  return reg_.share(current_);
}

Limits Session::limits() const {
  Limits l;
  l.rewrites = opts_.stepLimit;
  l.states = opts_.stateLimit;
  return l;
}

std::vector<std::string> Session::splitCommands(std::string_view text, std::string* remainder) {
  std::vector<std::string> out;
  std::string cur;
  bool inModule = false;
  std::istringstream in{std::string(text)};
  std::string line;
  auto flush = [&] {
    std::string_view t = trim(cur);
    if (!t.empty()) out.emplace_back(t);
    cur.clear();
  };
  while (std::getline(in, line)) {
    std::string_view l = trim(line);
    if (l.starts_with("***") || l.starts_with("---")) continue;
    if (!inModule && trim(cur).empty() && isModuleKeyword(firstWord(l))) inModule = true;
    if (inModule) {
      cur += line;
      cur += '\n';
      std::string last;
      for (std::istringstream ws{std::string(l)}; ws >> last;) {
      }
      if (isModuleEnd(last)) {
        flush();
        inModule = false;
      }
      continue;
    }
    // A command ends at a period that stands alone as a word.
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      bool terminator = c == '.' && (i == 0 || isSpace(line[i - 1])) &&
                        (i + 1 == line.size() || isSpace(line[i + 1]));
      if (terminator) {
        flush();
        continue;
      }
      cur += c;
    }
    cur += '\n';
  }
  if (remainder) {
    *remainder = trim(cur).empty() ? std::string() : cur;
    return out;
  }
  std::string_view rest = trim(cur);
  if (!rest.empty()) {
    // Tolerate a final period attached to the last word.
    if (rest.back() == '.') rest.remove_suffix(1);
    cur = std::string(rest);
    flush();
  }
  return out;
}

Session::Status Session::runScript(std::string_view text) {
  Status last = Status::Ok;
  for (const std::string& cmd : splitCommands(text)) {
    last = execute(cmd);
    if (last == Status::Quit) break;
  }
  return last;
}

Session::Status Session::fail(const std::string& msg) {
  error_ = true;
  if (opts_.json)
    out_ << json{{"error", msg}}.dump() << '\n';
  else
    err_ << "Error: " << msg << '\n';
  return Status::Error;
}

Session::Status Session::execute(std::string_view command) {
  command = trim(command);
  if (command.empty()) return Status::Ok;
  std::string verb = firstWord(command);
  try {
    if (isModuleKeyword(verb)) return loadText(command);
    return dispatch(verb, trim(command.substr(verb.size())));
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

Session::Status Session::dispatch(const std::string& verb, std::string_view rest) {
  if (verb == "quit" || verb == "q") {
    quit_ = true;
    return Status::Quit;
  }
  if (verb == "load") return load(rest);
  if (verb == "select") return select(rest);
  if (verb == "red" || verb == "reduce") return reduce(rest);
  if (verb == "rew" || verb == "rewrite") return rewrite(rest);
  if (verb == "srew" || verb == "srewrite") return srewrite(rest, false);
  if (verb == "dsrew" || verb == "dsrewrite") return srewrite(rest, true);
  if (verb == "check") return check(rest);
  if (verb == "transform") return transform(rest);
  if (verb == "show") {
    if (trim(rest) != "module") throw Error("expected 'show module'");
    return showModule();
  }
  throw Error("unknown command '" + verb + "'");
}

Session::Status Session::load(std::string_view path) {
  namespace fs = std::filesystem;
  fs::path p{std::string(trim(path))};
  if (p.is_relative() && !baseDir_.empty()) p = fs::path(baseDir_) / p;
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return loadText(ss.str());
}

Session::Status Session::loadText(std::string_view text) {
  std::vector<Symbol> names = reg_.load(text);
  if (!names.empty()) {
    current_ = names.back();
    hasCurrent_ = true;
  }
  if (opts_.json) {
    json j = json::array();
    for (Symbol n : names) j.push_back(n.str());
    out_ << json{{"command", "load"}, {"modules", j}}.dump() << '\n';
  }
  return Status::Ok;
}

Session::Status Session::select(std::string_view name) {
  Symbol s{std::string(trim(name))};
  reg_.get(s);
  current_ = s;
  hasCurrent_ = true;
  return Status::Ok;
}

Session::Status Session::reduce(std::string_view rest) {
  auto mod = requireModule();
  Rewriter rw(mod, limits());
  Term t = rw.reduce(parseTerm(*mod, rest));
  std::string sort = mod->sig.sortName(mod->sig.leastSort(t));
  std::string printed = printTerm(mod->sig, t);
  if (opts_.json)
    out_ << json{{"command", "red"}, {"sort", sort}, {"result", printed}}.dump() << '\n';
  else
    out_ << "result " << sort << ": " << printed << '\n';
  return Status::Ok;
}

Session::Status Session::rewrite(std::string_view rest) {
  std::size_t bound = opts_.stepLimit;
  if (!rest.empty() && rest.front() == '[') {
    std::size_t close = rest.find(']');
    if (close == std::string_view::npos) throw Error("missing ']' in rewrite bound");
    std::istringstream in{std::string(rest.substr(1, close - 1))};
    if (!(in >> bound)) throw Error("invalid rewrite bound");
    rest = trim(rest.substr(close + 1));
  }
  auto mod = requireModule();
  Rewriter rw(mod, limits());
  auto [t, steps] = rw.rewrite(rw.reduce(parseTerm(*mod, rest)), bound);
  std::string sort = mod->sig.sortName(mod->sig.leastSort(t));
  std::string printed = printTerm(mod->sig, t);
  if (opts_.json)
    out_ << json{{"command", "rew"}, {"sort", sort}, {"result", printed}, {"rewrites", steps}}.dump()
         << '\n';
  else
    out_ << "result " << sort << ": " << printed << '\n';
  return Status::Ok;
}

Session::Prepared Session::prepare(std::string_view text) {
  Prepared p;
  p.mod = requireModule();
  if (auto by = findKeyword(text, "by", true)) {
    if (auto g = parseGlobal(text.substr(*by + 2))) {
      p.global = g;
      text = trim(text.substr(0, *by));
    }
  }
  // Commas also separate matchrew slots, so pieces are regrouped until
  // each group parses.
  std::vector<std::string> pieces = splitTopLevel(text, ',');
  std::string lastError;
  std::function<bool(std::size_t)> group = [&](std::size_t i) {
    if (i == pieces.size()) return true;
    std::string acc;
    for (std::size_t j = i; j < pieces.size(); ++j) {
      acc += (j > i ? "," : "") + pieces[j];
      try {
        StratPtr s = parseStrategy(*p.mod, acc, opts_.extended);
        p.strategies.push_back(s);
        if (group(j + 1)) return true;
        p.strategies.pop_back();
      } catch (const ParseError& e) {
        if (lastError.empty()) lastError = e.what();
      }
    }
    return false;
  };
  if (!group(0)) throw ParseError(lastError.empty() ? "cannot parse strategy" : lastError);
  if (p.strategies.size() > 1 && !p.global)
    throw Error("several strategies need 'by turns', 'by concurrent', 'by steps K' or 'by custom'");

  if (opts_.extended && !opts_.nativeExtended) {
    auto translated = std::make_shared<const ModuleDef>(translateModule(*p.mod));
    for (StratPtr& s : p.strategies) s = translateExtended(s, translated->sig);
    p.mod = std::move(translated);
  }
  return p;
}

Session::Status Session::srewrite(std::string_view rest, bool depthFirst) {
  auto using_ = findKeyword(rest, "using", false);
  if (!using_) throw Error("expected 'using'");
  Prepared p = prepare(trim(rest.substr(*using_ + 5)));
  StrategyEngine eng(p.mod, limits());
  Term t = parseTerm(*p.mod, trim(rest.substr(0, *using_)));

  std::vector<Term> sols;
  if (p.global) {
    MultiStrategy ms(eng, p.strategies, *p.global);
    sols = ms.run(t);
  } else {
    sols = eng.srewrite(t, p.strategies.front(), depthFirst);
  }
  const Signature& sig = p.mod->sig;
  if (opts_.json) {
    json j = json::array();
    for (const Term& s : sols) j.push_back(printTerm(sig, s));
    out_ << json{{"command", "srew"}, {"solutions", j}}.dump() << '\n';
    return Status::Ok;
  }
  if (sols.empty()) {
    out_ << "No solution.\n";
    return Status::Ok;
  }
  for (std::size_t i = 0; i < sols.size(); ++i)
    out_ << "Solution " << i + 1 << ": " << printTerm(sig, sols[i]) << '\n';
  out_ << "No more solutions.\n";
  return Status::Ok;
}

Session::Status Session::check(std::string_view rest) {
  auto from = findKeyword(rest, "from", false);
  if (!from) throw Error("expected 'from'");
  std::string_view tail = rest.substr(*from + 4);
  auto using_ = findKeyword(tail, "using", false);
  if (!using_) throw Error("expected 'using'");
  Prepared p = prepare(trim(tail.substr(*using_ + 5)));
  LtlPtr f = parseFormula(*p.mod, trim(rest.substr(0, *from)));
  Term t = parseTerm(*p.mod, trim(tail.substr(0, *using_)));
  StrategyEngine eng(p.mod, limits());
  MultiStrategy ms(eng, p.strategies, p.global.value_or(GlobalStrategy::turns()));
  MultiStrategyKripke k(ms, t);
  CheckResult r = modelCheck(k, f, opts_.stateLimit);
  lastCheckFailed_ = !r.holds;

  const Signature& sig = p.mod->sig;
  auto termOf = [&](const LassoStep& s) { return printTerm(sig, k.context(s.state).subject); };
  if (opts_.json) {
    json j{{"command", "check"}, {"verdict", r.holds ? "holds" : "fails"}};
    if (!r.holds) {
      auto steps = [&](const std::vector<LassoStep>& v) {
        json a = json::array();
        for (const LassoStep& s : v) a.push_back({{"term", termOf(s)}, {"label", s.label}});
        return a;
      };
      j["counterexample"] = {{"prefix", steps(r.prefix)}, {"cycle", steps(r.cycle)}};
    }
    out_ << j.dump() << '\n';
  } else if (r.holds) {
    out_ << "The property is satisfied.\n";
  } else {
    out_ << "The property is not satisfied.\n";
    auto print = [&](const std::vector<LassoStep>& v) {
      for (const LassoStep& s : v) out_ << "  " << termOf(s) << "\n    " << s.label << '\n';
    };
    out_ << "Path:\n";
    print(r.prefix);
    out_ << "Cycle:\n";
    print(r.cycle);
  }
  return r.holds ? Status::Holds : Status::Fails;
}

Session::Status Session::transform(std::string_view rest) {
  std::string kind = firstWord(rest);
  if (kind != "csr") throw Error("unknown transformation '" + kind + "'");
  std::string name{trim(trim(rest).substr(kind.size()))};
  ModuleDef out = csrTransform(name.empty() ? *requireModule() : reg_.get(Symbol(name)));
  Symbol outName = out.name;
  reg_.insert(std::move(out));
  current_ = outName;
  hasCurrent_ = true;
  if (opts_.json)
    out_ << json{{"command", "transform"}, {"module", outName.str()}}.dump() << '\n';
  else
    out_ << "Module " << outName.str() << " created.\n";
  return Status::Ok;
}

Session::Status Session::showModule() {
  auto mod = requireModule();
  if (opts_.json)
    out_ << json{{"command", "show"}, {"module", printModule(*mod)}}.dump() << '\n';
  else
    out_ << printModule(*mod);
  return Status::Ok;
}

}  // namespace stratrew
