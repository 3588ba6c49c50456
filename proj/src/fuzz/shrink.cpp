#include "lpa/fuzz.hpp"

namespace lpa {

ExprPtr substitute(const ExprPtr& body, const std::string& name, const ExprPtr& value) {
  const Expr& e = *body;
  auto sub = [&](const ExprPtr& child) { return substitute(child, name, value); };
  if (const auto* n = e.as<ast::Var>()) return n->name == name ? value : body;
  if (e.is<ast::IntLit>()) return body;
  if (const auto* n = e.as<ast::Let>()) {
    ExprPtr bound = sub(n->bound);
    ExprPtr inner = n->name == name ? n->body : sub(n->body);
    return make_expr(ast::Let{n->name, std::move(bound), std::move(inner)}, e.span);
  }
  if (const auto* n = e.as<ast::Seq>()) return make_expr(ast::Seq{sub(n->first), sub(n->second)}, e.span);
  if (const auto* n = e.as<ast::Write>()) return make_expr(ast::Write{sub(n->target), sub(n->value)}, e.span);
  if (const auto* n = e.as<ast::New>()) return make_expr(ast::New{sub(n->init)}, e.span);
  if (const auto* n = e.as<ast::Free>()) return make_expr(ast::Free{sub(n->target)}, e.span);
  if (const auto* n = e.as<ast::Read>()) return make_expr(ast::Read{sub(n->target)}, e.span);
  if (const auto* n = e.as<ast::MutBorrow>()) return make_expr(ast::MutBorrow{sub(n->target)}, e.span);
  if (const auto* n = e.as<ast::ShrBorrow>()) return make_expr(ast::ShrBorrow{sub(n->target)}, e.span);
  return body;
}

namespace {

// Every tree one reduction step smaller than `e`.
std::vector<ExprPtr> reductions(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  if (const auto* n = e->as<ast::Seq>()) {
    out.push_back(n->second);
    out.push_back(n->first);
    for (auto& r : reductions(n->first)) out.push_back(make_expr(ast::Seq{r, n->second}, e->span));
    for (auto& r : reductions(n->second)) out.push_back(make_expr(ast::Seq{n->first, r}, e->span));
  } else if (const auto* n = e->as<ast::Let>()) {
    out.push_back(substitute(n->body, n->name, n->bound));
    for (auto& r : reductions(n->bound)) {
      out.push_back(make_expr(ast::Let{n->name, r, n->body}, e->span));
    }
    for (auto& r : reductions(n->body)) {
      out.push_back(make_expr(ast::Let{n->name, n->bound, r}, e->span));
    }
  }
  return out;
}

}  // namespace

ExprPtr shrink(const ExprPtr& program, const std::function<bool(const Expr&)>& still_failing) {
  ExprPtr current = program;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const ExprPtr& candidate : reductions(current)) {
      if (tree_size(*candidate) >= tree_size(*current)) continue;
      if (!is_closed(*candidate) || !still_failing(*candidate)) continue;
      current = candidate;
      progress = true;
      break;
    }
  }
  return current;
}

}  // namespace lpa
