#include <optional>

#include "lpa/syntax.hpp"

namespace lpa {

ScopeError::ScopeError(std::string name, SourceSpan span)
    : std::runtime_error(span.str() + ": unbound variable '" + name + "'"),
      name_(std::move(name)),
      span_(span) {}

namespace {

// Returns the first unbound Var in evaluation order, if any.
const Expr* find_unbound(const Expr& e, std::vector<std::string_view>& bound) {
  if (const auto* v = e.as<ast::Var>()) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
      if (*it == v->name) return nullptr;
    }
    return &e;
  }
  if (const auto* l = e.as<ast::Let>()) {
    if (const Expr* hit = find_unbound(*l->bound, bound)) return hit;
    bound.push_back(l->name);
    const Expr* hit = find_unbound(*l->body, bound);
    bound.pop_back();
    return hit;
  }
  if (const auto* s = e.as<ast::Seq>()) {
    if (const Expr* hit = find_unbound(*s->first, bound)) return hit;
    return find_unbound(*s->second, bound);
  }
  if (const auto* w = e.as<ast::Write>()) {
    if (const Expr* hit = find_unbound(*w->target, bound)) return hit;
    return find_unbound(*w->value, bound);
  }
  if (const auto* n = e.as<ast::New>()) return find_unbound(*n->init, bound);
  if (const auto* n = e.as<ast::Free>()) return find_unbound(*n->target, bound);
  if (const auto* n = e.as<ast::Read>()) return find_unbound(*n->target, bound);
  if (const auto* n = e.as<ast::MutBorrow>()) return find_unbound(*n->target, bound);
  if (const auto* n = e.as<ast::ShrBorrow>()) return find_unbound(*n->target, bound);
  return nullptr;
}

}  // namespace

void check_scopes(const Expr& e) {
  std::vector<std::string_view> bound;
  if (const Expr* hit = find_unbound(e, bound)) {
    throw ScopeError(hit->as<ast::Var>()->name, hit->span);
  }
}

bool is_closed(const Expr& e) {
  std::vector<std::string_view> bound;
  return find_unbound(e, bound) == nullptr;
}

}  // namespace lpa
