#include "lpa/syntax.hpp"

namespace lpa {

ExprPtr make_expr(ExprNode node, SourceSpan span) {
  return std::make_shared<const Expr>(Expr{std::move(node), span});
}
ExprPtr int_lit(BigInt value) { return make_expr(ast::IntLit{std::move(value)}); }
ExprPtr var(std::string name) { return make_expr(ast::Var{std::move(name)}); }
ExprPtr new_(ExprPtr init) { return make_expr(ast::New{std::move(init)}); }
ExprPtr free_(ExprPtr target) { return make_expr(ast::Free{std::move(target)}); }
ExprPtr read(ExprPtr target) { return make_expr(ast::Read{std::move(target)}); }
ExprPtr write(ExprPtr target, ExprPtr value) {
  return make_expr(ast::Write{std::move(target), std::move(value)});
}
ExprPtr mut_borrow(ExprPtr target) { return make_expr(ast::MutBorrow{std::move(target)}); }
ExprPtr shr_borrow(ExprPtr target) { return make_expr(ast::ShrBorrow{std::move(target)}); }
ExprPtr let(std::string name, ExprPtr bound, ExprPtr body) {
  return make_expr(ast::Let{std::move(name), std::move(bound), std::move(body)});
}
ExprPtr seq(ExprPtr first, ExprPtr second) {
  return make_expr(ast::Seq{std::move(first), std::move(second)});
}

bool same_tree(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, ast::IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ast::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ast::New>) {
          return same_tree(*x.init, *y.init);
        } else if constexpr (std::is_same_v<T, ast::Write>) {
          return same_tree(*x.target, *y.target) && same_tree(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, ast::Let>) {
          return x.name == y.name && same_tree(*x.bound, *y.bound) && same_tree(*x.body, *y.body);
        } else if constexpr (std::is_same_v<T, ast::Seq>) {
          return same_tree(*x.first, *y.first) && same_tree(*x.second, *y.second);
        } else {
          return same_tree(*x.target, *y.target);
        }
      },
      a.node);
}

std::size_t tree_size(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ast::IntLit> || std::is_same_v<T, ast::Var>) {
          return 1;
        } else if constexpr (std::is_same_v<T, ast::New>) {
          return 1 + tree_size(*x.init);
        } else if constexpr (std::is_same_v<T, ast::Write>) {
          return 1 + tree_size(*x.target) + tree_size(*x.value);
        } else if constexpr (std::is_same_v<T, ast::Let>) {
          return 1 + tree_size(*x.bound) + tree_size(*x.body);
        } else if constexpr (std::is_same_v<T, ast::Seq>) {
          return 1 + tree_size(*x.first) + tree_size(*x.second);
        } else {
          return 1 + tree_size(*x.target);
        }
      },
      e.node);
}

namespace {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ExprPtr program() {
    ExprPtr e = expr();
    if (peek().kind != TokenKind::End) fail({"';'", "':='", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  const Token& bump() {
    const Token& t = toks_[pos_];
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }

  const Token& last() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.span, std::move(expected), std::move(found));
  }

  const Token& expect(TokenKind kind) {
    if (peek().kind != kind) fail({std::string(token_kind_name(kind))});
    return bump();
  }

  // Span from `start` through the most recently consumed token.
  SourceSpan close(const SourceSpan& start) const {
    const SourceSpan& end = last().span;
    return {start.line, start.column, end.offset + end.length - start.offset, start.offset};
  }

  ExprPtr node(ExprNode n, const SourceSpan& start) const {
    return make_expr(std::move(n), close(start));
  }

  ExprPtr expr() {
    if (peek().kind == TokenKind::KwLet) return let_expr();
    SourceSpan start = peek().span;
    ExprPtr first = assign();
    if (peek().kind != TokenKind::Semi) return first;
    bump();
    ExprPtr second = expr();
    return node(ast::Seq{std::move(first), std::move(second)}, start);
  }

  ExprPtr let_expr() {
    SourceSpan start = expect(TokenKind::KwLet).span;
    if (peek().kind != TokenKind::Ident) fail({"identifier"});
    std::string name = bump().text;
    if (peek().kind != TokenKind::Assign && peek().kind != TokenKind::Equals) {
      fail({"':='", "'='"});
    }
    bump();
    ExprPtr bound = expr();
    if (peek().kind != TokenKind::KwIn) fail({"';'", "':='", "'in'"});
    bump();
    ExprPtr body = expr();
    return node(ast::Let{std::move(name), std::move(bound), std::move(body)}, start);
  }

  ExprPtr assign() {
    SourceSpan start = peek().span;
    ExprPtr lhs = unary();
    if (peek().kind != TokenKind::Assign) return lhs;
    const auto* deref = lhs->as<ast::Read>();
    if (deref == nullptr) {
      throw ParseError(peek().span, {"';'", "end of input"},
                       "':=' after a target that is not a dereference");
    }
    bump();
    ExprPtr rhs = peek().kind == TokenKind::KwLet ? let_expr() : assign();
    return node(ast::Write{deref->target, std::move(rhs)}, start);
  }

  ExprPtr unary() {
    SourceSpan start = peek().span;
    switch (peek().kind) {
      case TokenKind::Star: {
        bump();
        ExprPtr target = unary();
        return node(ast::Read{std::move(target)}, start);
      }
      case TokenKind::Amp: {
        bump();
        bool mut = false;
        if (peek().kind == TokenKind::KwMut) {
          bump();
          mut = true;
        }
        if (peek().kind != TokenKind::Star) {
          fail(mut ? std::vector<std::string>{"'*'"} : std::vector<std::string>{"'mut'", "'*'"});
        }
        bump();
        ExprPtr target = unary();
        if (mut) return node(ast::MutBorrow{std::move(target)}, start);
        return node(ast::ShrBorrow{std::move(target)}, start);
      }
      case TokenKind::KwNew:
      case TokenKind::KwFree: {
        bool is_new = bump().kind == TokenKind::KwNew;
        expect(TokenKind::LParen);
        ExprPtr inner = expr();
        if (peek().kind != TokenKind::RParen) fail({"';'", "':='", "')'"});
        bump();
        if (is_new) return node(ast::New{std::move(inner)}, start);
        return node(ast::Free{std::move(inner)}, start);
      }
      default:
        return atom();
    }
  }

  ExprPtr atom() {
    SourceSpan start = peek().span;
    switch (peek().kind) {
      case TokenKind::Int: {
        BigInt value(bump().text);
        return node(ast::IntLit{std::move(value)}, start);
      }
      case TokenKind::Ident: {
        std::string name = bump().text;
        return node(ast::Var{std::move(name)}, start);
      }
      case TokenKind::LParen: {
        bump();
        ExprPtr inner = expr();
        if (peek().kind != TokenKind::RParen) fail({"';'", "':='", "')'"});
        bump();
        // Parentheses widen the span but add no node.
        return make_expr(inner->node, close(start));
      }
      default:
        fail({"expression"});
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(lex(text)).program(); }

}  // namespace lpa
