#include <random>
#include <stdexcept>

#include "lpa/fuzz.hpp"

namespace lpa {

std::map<NodeKind, unsigned> GenConfig::default_weights() {
  return {{NodeKind::IntLit, 1}, {NodeKind::New, 3},       {NodeKind::Free, 2},
          {NodeKind::Read, 3},   {NodeKind::Write, 3},     {NodeKind::MutBorrow, 3},
          {NodeKind::ShrBorrow, 3}, {NodeKind::Let, 6},    {NodeKind::Seq, 4}};
}

void GenConfig::validate() const {
  auto weight = [&](NodeKind k) {
    auto it = weights.find(k);
    return it == weights.end() ? 0u : it->second;
  };
  if (weight(NodeKind::Let) == 0 || weight(NodeKind::New) == 0) {
    throw std::invalid_argument("generator weights for Let and New must be positive");
  }
  if (max_depth < 0 || max_allocs < 0) {
    throw std::invalid_argument("generator limits must be non-negative");
  }
}

std::uint64_t program_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool contains_borrow(const Expr& e) {
  if (e.is<ast::MutBorrow>() || e.is<ast::ShrBorrow>()) return true;
  if (const auto* n = e.as<ast::New>()) return contains_borrow(*n->init);
  if (const auto* n = e.as<ast::Free>()) return contains_borrow(*n->target);
  if (const auto* n = e.as<ast::Read>()) return contains_borrow(*n->target);
  if (const auto* n = e.as<ast::Write>()) return contains_borrow(*n->target) || contains_borrow(*n->value);
  if (const auto* n = e.as<ast::Let>()) return contains_borrow(*n->bound) || contains_borrow(*n->body);
  if (const auto* n = e.as<ast::Seq>()) return contains_borrow(*n->first) || contains_borrow(*n->second);
  return false;
}

namespace {

class Generator {
 public:
  explicit Generator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed), allocs_left_(cfg.max_allocs) {}

  ExprPtr program() { return block(cfg_.max_depth); }

 private:
  // A variable in scope and how many dereferences reach an integer.
  struct Binding {
    std::string name;
    int level;
  };

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  bool chance(unsigned percent) { return below(100) < percent; }

  unsigned weight(NodeKind k) const {
    auto it = cfg_.weights.find(k);
    return it == cfg_.weights.end() ? 0u : it->second;
  }

  NodeKind pick(std::initializer_list<NodeKind> kinds) {
    unsigned total = 0;
    for (NodeKind k : kinds) total += weight(k);
    if (total == 0) return NodeKind::IntLit;
    std::uint64_t roll = below(total);
    for (NodeKind k : kinds) {
      if (roll < weight(k)) return k;
      roll -= weight(k);
    }
    return NodeKind::IntLit;
  }

  ExprPtr literal() { return int_lit(BigInt(static_cast<int>(below(100)))); }

  std::vector<const Binding*> refs(int min_level = 1) const {
    std::vector<const Binding*> out;
    for (const Binding& b : scope_) {
      if (b.level >= min_level && !shadowed(b)) out.push_back(&b);
    }
    return out;
  }

  bool shadowed(const Binding& b) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->name == b.name) return &*it != &b;
    }
    return false;
  }

  // A target expression with at least one level of indirection.
  std::pair<ExprPtr, int> target() {
    auto candidates = refs();
    const Binding* b = candidates[below(candidates.size())];
    if (b->level >= 2 && chance(50)) return {read(var(b->name)), b->level - 1};
    return {var(b->name), b->level};
  }

  std::pair<ExprPtr, int> allocation() {
    --allocs_left_;
    auto candidates = refs();
    if (!candidates.empty() && chance(15)) {
      const Binding* b = candidates[below(candidates.size())];
      return {new_(var(b->name)), b->level + 1};
    }
    return {new_(literal()), 1};
  }

  // A leaf-level operation; returns the expression and its level.
  std::pair<ExprPtr, int> operation() {
    bool have_refs = !refs().empty();
    if (!have_refs) {
      if (allocs_left_ > 0 && chance(70)) return allocation();
      return {literal(), 0};
    }
    NodeKind k = pick({NodeKind::IntLit, NodeKind::New, NodeKind::Free, NodeKind::Read,
                       NodeKind::Write, NodeKind::MutBorrow, NodeKind::ShrBorrow});
    switch (k) {
      case NodeKind::New:
        if (allocs_left_ > 0) return allocation();
        return {literal(), 0};
      case NodeKind::Free:
        return {free_(target().first), 0};
      case NodeKind::Read: {
        auto [t, level] = target();
        return {read(std::move(t)), level - 1};
      }
      case NodeKind::Write: {
        auto [t, level] = target();
        ExprPtr value = literal();
        if (level >= 2) {
          // Keep the cell's level: store another pointer one level down.
          auto inner = refs(level - 1);
          std::erase_if(inner, [&](const Binding* b) { return b->level != level - 1; });
          if (inner.empty()) return {read(std::move(t)), level - 1};
          value = var(inner[below(inner.size())]->name);
        }
        return {write(std::move(t), std::move(value)), 0};
      }
      case NodeKind::MutBorrow: {
        auto [t, level] = target();
        return {mut_borrow(std::move(t)), level};
      }
      case NodeKind::ShrBorrow: {
        auto [t, level] = target();
        return {shr_borrow(std::move(t)), level};
      }
      default:
        return {literal(), 0};
    }
  }

  std::string fresh_name() {
    static constexpr const char* kNames[] = {"x", "y", "z", "p", "q", "r", "s", "t"};
    if (!scope_.empty() && chance(10)) return scope_[below(scope_.size())].name;
    return std::string(kNames[scope_.size() % 8]) + (scope_.size() >= 8 ? std::to_string(scope_.size()) : "");
  }

  ExprPtr block(int depth) {
    if (depth <= 0) return literal();
    NodeKind k = pick({NodeKind::Let, NodeKind::Seq, NodeKind::IntLit});
    if (k == NodeKind::Let) {
      auto [bound, level] = operation();
      std::string name = fresh_name();
      scope_.push_back({name, level});
      ExprPtr body = block(depth - 1);
      scope_.pop_back();
      return let(std::move(name), std::move(bound), std::move(body));
    }
    if (k == NodeKind::Seq) {
      ExprPtr first = operation().first;
      return seq(std::move(first), block(depth - 1));
    }
    return operation().first;
  }

  const GenConfig& cfg_;
  std::mt19937_64 rng_;
  int allocs_left_;
  std::vector<Binding> scope_;
};

class AnyGenerator {
 public:
  explicit AnyGenerator(std::uint64_t seed) : rng_(seed) {}

  ExprPtr expr(int depth) {
    std::uint64_t kind = depth <= 0 ? rng_() % 2 : rng_() % 10;
    switch (kind) {
      case 0: {
        static const BigInt kHuge = BigInt(1) << 80;
        switch (rng_() % 4) {
          case 0: return int_lit(-BigInt(static_cast<long long>(rng_() % 1000)));
          case 1: return int_lit(kHuge + BigInt(static_cast<unsigned long long>(rng_())));
          default: return int_lit(BigInt(static_cast<long long>(rng_() % 1000)));
        }
      }
      case 1: return var(name());
      case 2: return new_(expr(depth - 1));
      case 3: return free_(expr(depth - 1));
      case 4: return read(expr(depth - 1));
      case 5: return write(expr(depth - 1), expr(depth - 1));
      case 6: return mut_borrow(expr(depth - 1));
      case 7: return shr_borrow(expr(depth - 1));
      case 8: return let(name(), expr(depth - 1), expr(depth - 1));
      default: return seq(expr(depth - 1), expr(depth - 1));
    }
  }

 private:
  std::string name() {
    static constexpr const char* kNames[] = {"x", "y", "z", "in_", "letter", "_t", "mutable", "v1"};
    return kNames[rng_() % 8];
  }

  std::mt19937_64 rng_;
};

}  // namespace

ExprPtr gen_program(const GenConfig& cfg) {
  cfg.validate();
  return Generator(cfg).program();
}

ExprPtr gen_any_expr(std::uint64_t seed, int max_depth) { return AnyGenerator(seed).expr(max_depth); }

}  // namespace lpa
