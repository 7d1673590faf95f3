#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stratrew {

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
  bool spaceBefore = true;  // separated from the previous token by blanks
};

/// Splits source text into whitespace-separated tokens. Parentheses,
/// brackets, braces and commas are always tokens of their own, a final
/// period is split off a word (`nil.` is `nil` `.`), and `***` or `---`
/// start a comment running to the end of the line.
std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token vector with one-token lookahead helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  bool atEnd() const { return pos_ >= toks_.size(); }
  const Token& peek(std::size_t ahead = 0) const;
  bool peekIs(std::string_view text, std::size_t ahead = 0) const;
  const Token& next();
  bool accept(std::string_view text);
  /// Consumes the expected token or throws ParseError.
  const Token& expect(std::string_view text);
  [[noreturn]] void fail(const std::string& msg) const;

  std::size_t position() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }
  std::size_t size() const { return toks_.size(); }
  const Token& at(std::size_t i) const { return toks_.at(i); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace stratrew
