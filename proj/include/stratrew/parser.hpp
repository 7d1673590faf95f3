#pragma once

#include <string_view>
#include <unordered_map>
#include <vector>

#include "stratrew/lexer.hpp"
#include "stratrew/ltl.hpp"
#include "stratrew/module.hpp"
#include "stratrew/strategy.hpp"
#include "stratrew/term.hpp"

namespace stratrew {

/// Parses terms, conditions, strategy expressions and LTL formulas in the
/// context of a flat module, consuming tokens from a shared stream.
class ExprParser {
 public:
  ExprParser(TokenStream& ts, const ModuleDef& mod, bool extended = true);

  /// Accept `@` as the proposition placeholder.
  void allowPlaceholder(bool on) { placeholder_ = on; }

  /// Canonical term.
  Term term();
  Condition condition();
  StratPtr strategy();
  LtlPtr formula();

  bool canStartTerm(std::size_t ahead = 0) const;

 private:
  struct Mixfix {
    const SymbolInfo* info;
    std::vector<std::string> pieces;  // literal text between the arguments
  };

  Term parseTerm(int maxPrec, int* precOut = nullptr);
  Term parseOperand(int maxPrec, int& prec);
  Term parseMixfix(const Mixfix& m);
  void expectPiece(const std::string& piece);
  bool pieceAhead(const std::string& piece, std::size_t ahead = 0) const;
  std::vector<Term> parseArgs();
  bool isStop(std::size_t ahead) const;
  const Term* lookupVariable(const std::string& word, Term& inlineVar) const;
  bool isSortName(const std::string& word) const;
  Term canonical(const Term& raw);

  CondFragment parseFragment();
  bool fragmentIsSortTest() const;

  StratPtr parseStrategy(int maxPrec);
  StratPtr parseStrategyPrimary();
  StratPtr parseNamedStrategy();

  LtlPtr parseFormula(int maxPrec);
  LtlPtr parseFormulaPrimary();

  TokenStream& ts_;
  const ModuleDef& mod_;
  bool extended_;
  bool placeholder_ = false;
  int inStrategy_ = 0;
  int colonStops_ = 0;
  // Inside plain parentheses a comma may be an infix operator.
  bool commaIsOperator_ = false;
  std::unordered_map<std::string, const SymbolInfo*> infix_;
  std::unordered_map<std::string, const SymbolInfo*> unary_;
  std::unordered_map<std::string, std::vector<const SymbolInfo*>> prefix_;
  std::unordered_map<std::string, std::vector<Mixfix>> mixfix_;  // by first piece
  const SymbolInfo* juxtaposition_ = nullptr;
};

Term parseTerm(const ModuleDef& mod, std::string_view text, bool placeholder = false);
Condition parseCondition(const ModuleDef& mod, std::string_view text);
StratPtr parseStrategy(const ModuleDef& mod, std::string_view text, bool extended = true);
LtlPtr parseFormula(const ModuleDef& mod, std::string_view text);

}  // namespace stratrew
