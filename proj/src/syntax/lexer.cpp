#include <cctype>
#include <sstream>

#include "lpa/syntax.hpp"

namespace lpa {

std::string SourceSpan::str() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Int: return "integer";
    case TokenKind::Ident: return "identifier";
    case TokenKind::KwLet: return "'let'";
    case TokenKind::KwIn: return "'in'";
    case TokenKind::KwNew: return "'new'";
    case TokenKind::KwFree: return "'free'";
    case TokenKind::KwMut: return "'mut'";
    case TokenKind::Assign: return "':='";
    case TokenKind::Equals: return "'='";
    case TokenKind::Star: return "'*'";
    case TokenKind::Amp: return "'&'";
    case TokenKind::Semi: return "';'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::ostringstream out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out << (i + 1 == expected.size() ? " or " : ", ");
    out << expected[i];
  }
  return out.str();
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= text_.size()) {
        out.push_back({TokenKind::End, "", here(0)});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  SourceSpan here(std::size_t length) const { return {line_, column_, length, pos_}; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  Token take(TokenKind kind, std::size_t length) {
    Token tok{kind, std::string(text_.substr(pos_, length)), here(length)};
    advance(length);
    return tok;
  }

  Token next() {
    char c = text_[pos_];
    char n = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    if (digit(c) || (c == '-' && digit(n))) {
      std::size_t len = c == '-' ? 1 : 0;
      while (pos_ + len < text_.size() && digit(text_[pos_ + len])) ++len;
      return take(TokenKind::Int, len);
    }
    if (ident_start(c)) {
      std::size_t len = 0;
      while (pos_ + len < text_.size() && ident_char(text_[pos_ + len])) ++len;
      std::string_view word = text_.substr(pos_, len);
      TokenKind kind = TokenKind::Ident;
      if (word == "let") kind = TokenKind::KwLet;
      else if (word == "in") kind = TokenKind::KwIn;
      else if (word == "new") kind = TokenKind::KwNew;
      else if (word == "free") kind = TokenKind::KwFree;
      else if (word == "mut") kind = TokenKind::KwMut;
      return take(kind, len);
    }
    switch (c) {
      case ':':
        if (n == '=') return take(TokenKind::Assign, 2);
        break;
      case '=': return take(TokenKind::Equals, 1);
      case '*': return take(TokenKind::Star, 1);
      case '&': return take(TokenKind::Amp, 1);
      case ';': return take(TokenKind::Semi, 1);
      case '(': return take(TokenKind::LParen, 1);
      case ')': return take(TokenKind::RParen, 1);
      default: break;
    }
    throw ParseError(here(1), {"expression"}, "character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

ParseError::ParseError(SourceSpan span, std::vector<std::string> expected, std::string found)
    : std::runtime_error(span.str() + ": expected " + describe_expected(expected) + ", found " +
                         found),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::vector<Token> lex(std::string_view text) { return Lexer(text).run(); }

}  // namespace lpa
