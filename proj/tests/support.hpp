#pragma once

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stratrew/frontend.hpp"
#include "stratrew/parser.hpp"
#include "stratrew/printer.hpp"

namespace testing {

inline std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture(const std::string& name) {
  return std::string(STRATREW_FIXTURE_DIR) + "/" + name;
}

/// Registry with every fixture loaded; shared across tests.
inline stratrew::ModuleRegistry& fixtures() {
  static stratrew::ModuleRegistry reg = [] {
    stratrew::ModuleRegistry r;
    for (const char* f : {"llist.maude", "foo.maude", "lazy-list.maude", "tictactoe.maude"})
      r.load(readFile(fixture(f)));
    return r;
  }();
  return reg;
}

inline std::shared_ptr<const stratrew::ModuleDef> module(const std::string& name) {
  return fixtures().share(stratrew::Symbol(name));
}

inline stratrew::Term term(const stratrew::ModuleDef& m, const std::string& text) {
  return stratrew::parseTerm(m, text);
}

inline stratrew::StratPtr strategy(const stratrew::ModuleDef& m, const std::string& text) {
  return stratrew::parseStrategy(m, text);
}

inline std::set<std::string> printed(const stratrew::Signature& sig,
                                     const std::vector<stratrew::Term>& ts) {
  std::set<std::string> out;
  for (const auto& t : ts) out.insert(stratrew::printTerm(sig, t));
  return out;
}

inline std::vector<std::string> printedList(const stratrew::Signature& sig,
                                            const std::vector<stratrew::Term>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(stratrew::printTerm(sig, t));
  return out;
}

}  // namespace testing
