#include "lpa/syntax.hpp"

namespace lpa {

namespace {

// Binding levels, loosest first.
enum Level { kExpr = 0, kAssign = 1, kUnary = 2 };

// `open_right` is true when nothing follows the printed text at this level,
// so a trailing `let` may extend to the end without brackets.
void print(const Expr& e, Level level, bool open_right, std::string& out);

void print_wrapped(const Expr& e, std::string& out) {
  out += '(';
  print(e, kExpr, true, out);
  out += ')';
}

void print(const Expr& e, Level level, bool open_right, std::string& out) {
  if (const auto* n = e.as<ast::IntLit>()) {
    out += n->value.str();
  } else if (const auto* n = e.as<ast::Var>()) {
    out += n->name;
  } else if (const auto* n = e.as<ast::New>()) {
    out += "new(";
    print(*n->init, kExpr, true, out);
    out += ')';
  } else if (const auto* n = e.as<ast::Free>()) {
    out += "free(";
    print(*n->target, kExpr, true, out);
    out += ')';
  } else if (const auto* n = e.as<ast::Read>()) {
    out += '*';
    print(*n->target, kUnary, open_right, out);
  } else if (const auto* n = e.as<ast::MutBorrow>()) {
    out += "&mut *";
    print(*n->target, kUnary, open_right, out);
  } else if (const auto* n = e.as<ast::ShrBorrow>()) {
    out += "&*";
    print(*n->target, kUnary, open_right, out);
  } else if (const auto* n = e.as<ast::Write>()) {
    if (level > kAssign) return print_wrapped(e, out);
    out += '*';
    print(*n->target, kUnary, false, out);
    out += " := ";
    print(*n->value, kAssign, open_right, out);
  } else if (const auto* n = e.as<ast::Let>()) {
    if (level > kAssign || !open_right) return print_wrapped(e, out);
    out += "let ";
    out += n->name;
    out += " := ";
    print(*n->bound, kExpr, true, out);
    out += " in ";
    print(*n->body, kExpr, open_right, out);
  } else if (const auto* n = e.as<ast::Seq>()) {
    if (level > kExpr) return print_wrapped(e, out);
    print(*n->first, kAssign, false, out);
    out += "; ";
    print(*n->second, kExpr, open_right, out);
  }
}

}  // namespace

std::string pretty(const Expr& e) {
  std::string out;
  print(e, kExpr, true, out);
  return out;
}

}  // namespace lpa
