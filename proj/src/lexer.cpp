#include "stratrew/lexer.hpp"

#include "stratrew/error.hpp"

namespace stratrew {

namespace {

bool isSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }
bool isSpecial(char c) {
  return c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  bool space = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (isSpace(c)) {
      space = true;
      advance(1);
      continue;
    }
    if (space && (text.substr(i, 3) == "***" || text.substr(i, 3) == "---")) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    tok.spaceBefore = space;
    if (isSpecial(c)) {
      tok.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(tok));
      space = false;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !isSpace(text[j]) && !isSpecial(text[j])) ++j;
    std::string word(text.substr(i, j - i));
    advance(j - i);
    const bool splitPeriod = word.size() > 1 && word.back() == '.' && word != "s.t." &&
                             word.find_first_not_of('.') != std::string::npos;
    if (splitPeriod) {
      tok.text = word.substr(0, word.size() - 1);
      Token dot;
      dot.text = ".";
      dot.line = line;
      dot.column = col - 1;
      dot.spaceBefore = false;
      out.push_back(std::move(tok));
      out.push_back(std::move(dot));
    } else {
      tok.text = std::move(word);
      out.push_back(std::move(tok));
    }
    space = false;
  }
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  static const Token eof{"", 0, 0, true};
  if (pos_ + ahead >= toks_.size()) return eof;
  return toks_[pos_ + ahead];
}

bool TokenStream::peekIs(std::string_view text, std::size_t ahead) const {
  return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].text == text;
}

const Token& TokenStream::next() {
  if (atEnd()) fail("unexpected end of input");
  return toks_[pos_++];
}

bool TokenStream::accept(std::string_view text) {
  if (!peekIs(text)) return false;
  ++pos_;
  return true;
}

const Token& TokenStream::expect(std::string_view text) {
  if (!peekIs(text)) {
    if (atEnd()) fail("expected '" + std::string(text) + "' but input ended");
    fail("expected '" + std::string(text) + "' but found '" + peek().text + "'");
  }
  return toks_[pos_++];
}

void TokenStream::fail(const std::string& msg) const {
  if (atEnd()) {
    if (!toks_.empty()) throw ParseError(msg, toks_.back().line, toks_.back().column);
    throw ParseError(msg);
  }
  throw ParseError(msg, toks_[pos_].line, toks_[pos_].column);
}

}  // namespace stratrew
