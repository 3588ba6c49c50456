// Abstract syntax, parser and printer for the aliasing mini-language.
//
// Surface grammar (`;` is right-associative and binds looser than `:=`,
// `let ... in` extends as far right as possible):
//
//   expr   ::= 'let' IDENT (':=' | '=') expr 'in' expr
//            | assign (';' expr)?
//   assign ::= '*' unary ':=' (assign | let)
//            | unary
//   unary  ::= '*' unary | '&' 'mut' '*' unary | '&' '*' unary
//            | 'new' '(' expr ')' | 'free' '(' expr ')' | atom
//   atom   ::= INT | IDENT | '(' expr ')'
//
// `//` starts a comment that runs to the end of the line.

#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lpa {

using BigInt = boost::multiprecision::cpp_int;

/// Position of a node in the source text. `line` and `column` are 1-based;
/// `offset` and `length` are in bytes.
struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t length = 0;
  std::size_t offset = 0;

  std::string str() const;
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace ast {

struct IntLit {
  BigInt value;
};
struct Var {
  std::string name;
};
struct New {
  ExprPtr init;
};
struct Free {
  ExprPtr target;
};
struct Read {
  ExprPtr target;
};
struct Write {
  ExprPtr target;
  ExprPtr value;
};
struct MutBorrow {
  ExprPtr target;
};
struct ShrBorrow {
  ExprPtr target;
};
struct Let {
  std::string name;
  ExprPtr bound;
  ExprPtr body;
};
struct Seq {
  ExprPtr first;
  ExprPtr second;
};

}  // namespace ast

using ExprNode = std::variant<ast::IntLit, ast::Var, ast::New, ast::Free, ast::Read, ast::Write,
                              ast::MutBorrow, ast::ShrBorrow, ast::Let, ast::Seq>;

/// Immutable expression tree node. Subtrees are shared, so copying an
/// `ExprPtr` is cheap and rewriting builds new spines only.
struct Expr {
  ExprNode node;
  SourceSpan span;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

// Builders. Spans default to empty; the parser fills them in.
ExprPtr make_expr(ExprNode node, SourceSpan span = {});
ExprPtr int_lit(BigInt value);
ExprPtr var(std::string name);
ExprPtr new_(ExprPtr init);
ExprPtr free_(ExprPtr target);
ExprPtr read(ExprPtr target);
ExprPtr write(ExprPtr target, ExprPtr value);
ExprPtr mut_borrow(ExprPtr target);
ExprPtr shr_borrow(ExprPtr target);
ExprPtr let(std::string name, ExprPtr bound, ExprPtr body);
ExprPtr seq(ExprPtr first, ExprPtr second);

/// Structural equality, ignoring spans.
bool same_tree(const Expr& a, const Expr& b);

/// Number of nodes in the tree.
std::size_t tree_size(const Expr& e);

// ---------------------------------------------------------------------------
// Lexing

enum class TokenKind {
  Int,
  Ident,
  KwLet,
  KwIn,
  KwNew,
  KwFree,
  KwMut,
  Assign,  // :=
  Equals,  // =
  Star,
  Amp,
  Semi,
  LParen,
  RParen,
  End,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  SourceSpan span;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::vector<std::string> expected, std::string found);

  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
  std::string found_;
};

std::vector<Token> lex(std::string_view text);

// ---------------------------------------------------------------------------
// Parsing, printing, scoping

ExprPtr parse(std::string_view text);

/// Canonical rendering; `parse(pretty(e))` is structurally equal to `e`.
std::string pretty(const Expr& e);

class ScopeError : public std::runtime_error {
 public:
  ScopeError(std::string name, SourceSpan span);

  const std::string& name() const { return name_; }
  const SourceSpan& span() const { return span_; }

 private:
  std::string name_;
  SourceSpan span_;
};

/// Throws ScopeError for the first (leftmost) unbound variable.
void check_scopes(const Expr& e);

/// Non-throwing variant of check_scopes.
bool is_closed(const Expr& e);

}  // namespace lpa
