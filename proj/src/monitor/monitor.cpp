#include <algorithm>

#include "lpa/monitor.hpp"

namespace lpa {

std::string RuntimeValue::str() const {
  if (is_pointer()) return "&" + as_pointer().tag.str();
  return as_int().str();
}

std::string_view runtime_error_name(RuntimeErrorKind k) {
  switch (k) {
    case RuntimeErrorKind::AliasViolation: return "AliasViolation";
    case RuntimeErrorKind::UseAfterEnd: return "UseAfterEnd";
    case RuntimeErrorKind::DoubleFree: return "DoubleFree";
    case RuntimeErrorKind::UnboundRef: return "UnboundRef";
  }
  return "?";
}

std::optional<std::string> conservation_violation(const ConcreteState& s) {
  std::map<CellId, std::optional<Fraction>> sums;
  for (const auto& [cell, value] : s.heap) sums[cell];
  for (const auto& [tag, cap] : s.caps) {
    auto it = sums.find(cap.cell);
    if (it == sums.end()) return "capability " + tag.str() + " on a dead cell";
    try {
      it->second = it->second ? frac_add(*it->second, cap.frac) : cap.frac;
    } catch (const FractionOverflow&) {
      return "cell " + std::to_string(cap.cell.value) + " is over-owned";
    }
  }
  for (const auto& [cell, sum] : sums) {
    if (!sum || !sum->is_one()) {
      return "cell " + std::to_string(cell.value) + " owned to " + (sum ? sum->str() : "0") +
             ", not 1";
    }
  }
  return std::nullopt;
}

namespace {

struct Fault {
  RuntimeError error;
};

class Machine {
 public:
  Machine(MonitorMode mode, bool traced) : checked_(mode == MonitorMode::Checked), traced_(traced) {}

  RuntimeValue statement(const Expr& e, const std::string& hint) {
    if (const auto* l = e.as<ast::Let>()) {
      RuntimeValue bound = statement(*l->bound, l->name);
      return bind(l->name, std::move(bound), [&] { return statement(*l->body, hint); });
    }
    if (const auto* s = e.as<ast::Seq>()) {
      statement(*s->first, {});
      return statement(*s->second, hint);
    }
    SourceSpan outer = stmt_;
    stmt_ = e.span;
    RuntimeValue v = eval(e, hint);
    if (traced_) snapshots_.push_back({Snapshot::Kind::Statement, e.span, st_, std::nullopt});
    stmt_ = outer;
    return v;
  }

  ConcreteState& state() { return st_; }
  std::vector<Snapshot>& snapshots() { return snapshots_; }

 private:
  template <typename Body>
  RuntimeValue bind(const std::string& name, RuntimeValue value, Body&& body) {
    auto it = st_.env.find(name);
    std::optional<RuntimeValue> saved;
    if (it != st_.env.end()) saved = it->second;
    st_.env.insert_or_assign(name, std::move(value));
    RuntimeValue out = body();
    if (saved) {
      st_.env.insert_or_assign(name, std::move(*saved));
    } else {
      st_.env.erase(name);
    }
    return out;
  }

  static RuntimeValue zero() { return RuntimeValue{BigInt(0)}; }

  RefId mint(const std::string& hint) {
    return RefId{hint.empty() ? "_" : hint, st_.next_tag++};
  }

  [[noreturn]] void fault(RuntimeErrorKind kind, const Expr& at, std::string message) {
    throw Fault{RuntimeError{kind, at.span, std::move(message)}};
  }

  RuntimeValue eval(const Expr& e, const std::string& hint) {
    if (const auto* n = e.as<ast::IntLit>()) return RuntimeValue{n->value};
    if (const auto* n = e.as<ast::Var>()) return st_.env.at(n->name);
    if (const auto* n = e.as<ast::Let>()) {
      RuntimeValue bound = eval(*n->bound, n->name);
      return bind(n->name, std::move(bound), [&] { return eval(*n->body, hint); });
    }
    if (const auto* n = e.as<ast::Seq>()) {
      eval(*n->first, {});
      return eval(*n->second, hint);
    }
    if (const auto* n = e.as<ast::New>()) {
      RuntimeValue init = eval(*n->init, {});
      CellId cell{st_.next_cell++};
      st_.heap.emplace(cell, std::move(init));
      RefId tag = mint(hint);
      if (checked_) st_.caps.insert_or_assign(tag, Capability{cell, Fraction::one()});
      return RuntimeValue{Pointer{tag, cell}};
    }
    if (const auto* n = e.as<ast::Read>()) {
      Pointer p = pointer(e, *n->target);
      require_live(e, p);
      demand(e, p, std::nullopt);
      touch(p.tag);
      return st_.heap.at(p.cell);
    }
    if (const auto* n = e.as<ast::Write>()) {
      Pointer p = pointer(e, *n->target);
      RuntimeValue v = eval(*n->value, {});
      require_live(e, p);
      demand(e, p, Fraction::one());
      st_.heap.insert_or_assign(p.cell, std::move(v));
      touch(p.tag);
      return zero();
    }
    if (const auto* n = e.as<ast::Free>()) {
      Pointer p = pointer(e, *n->target);
      if (!st_.heap.contains(p.cell)) {
        fault(RuntimeErrorKind::DoubleFree, e, "cell of " + p.tag.str() + " was already freed");
      }
      demand(e, p, Fraction::one());
      st_.heap.erase(p.cell);
      std::erase_if(st_.caps, [&](const auto& kv) { return kv.second.cell == p.cell; });
      touch(p.tag);
      return zero();
    }
    if (const auto* n = e.as<ast::MutBorrow>()) {
      Pointer p = pointer(e, *n->target);
      require_live(e, p);
      demand(e, p, Fraction::one());
      RefId tag = mint(hint);
      if (checked_) {
        st_.caps.erase(p.tag);
        st_.caps.insert_or_assign(tag, Capability{p.cell, Fraction::one()});
        st_.pending.push_back({tag, p.tag, Fraction::one()});
      }
      touch(p.tag);
      return RuntimeValue{Pointer{tag, p.cell}};
    }
    if (const auto* n = e.as<ast::ShrBorrow>()) {
      Pointer p = pointer(e, *n->target);
      require_live(e, p);
      demand(e, p, std::nullopt);
      RefId tag = mint(hint);
      if (checked_) {
        Capability& lender = st_.caps.at(p.tag);
        lender.frac = frac_half(lender.frac);
        st_.caps.insert_or_assign(tag, Capability{p.cell, lender.frac});
        st_.pending.push_back({tag, p.tag, lender.frac});
      }
      touch(p.tag);
      return RuntimeValue{Pointer{tag, p.cell}};
    }
    throw std::logic_error("unhandled expression node");
  }

  Pointer pointer(const Expr& op, const Expr& target) {
    RuntimeValue v = eval(target, {});
    if (!v.is_pointer()) fault(RuntimeErrorKind::UnboundRef, op, v.str() + " is not a pointer");
    return v.as_pointer();
  }

  void require_live(const Expr& op, const Pointer& p) {
    if (!st_.heap.contains(p.cell)) {
      fault(RuntimeErrorKind::UseAfterEnd, op, "cell of " + p.tag.str() + " was freed");
    }
  }

  void touch(const RefId& tag) { st_.last_access[tag] = ++st_.clock; }

  bool holds(const RefId& tag, const std::optional<Fraction>& need) const {
    auto it = st_.caps.find(tag);
    if (it == st_.caps.end()) return false;
    return !need || it->second.frac >= *need;
  }

  void demand(const Expr& op, const Pointer& p, const std::optional<Fraction>& need) {
    if (!checked_ || reclaim(p.tag, need)) return;
    auto it = st_.caps.find(p.tag);
    std::string have = it == st_.caps.end() ? "no capability" : "capability " + it->second.frac.str();
    fault(RuntimeErrorKind::AliasViolation, op,
          p.tag.str() + " has " + have + " but needs " + (need ? need->str() : "a share"));
  }

  std::vector<PendingEnd> children(const RefId& lender) const {
    std::vector<PendingEnd> out;
    std::copy_if(st_.pending.begin(), st_.pending.end(), std::back_inserter(out),
                 [&](const PendingEnd& pe) { return pe.lender == lender; });
    // Never-accessed borrowers first, newest first; then least recently accessed.
    std::stable_sort(out.begin(), out.end(), [&](const PendingEnd& a, const PendingEnd& b) {
      auto ia = st_.last_access.find(a.borrower);
      auto ib = st_.last_access.find(b.borrower);
      bool ua = ia != st_.last_access.end();
      bool ub = ib != st_.last_access.end();
      if (ua != ub) return !ua;
      if (ua && ia->second != ib->second) return ia->second < ib->second;
      return a.borrower.generation > b.borrower.generation;
    });
    return out;
  }

  // Ends borrows of `lender` until it holds `need`. Leaves the state as it
  // was for every borrow that could not be ended.
  bool reclaim(const RefId& lender, const std::optional<Fraction>& need) {
    if (holds(lender, need)) return true;
    for (const PendingEnd& child : children(lender)) {
      ConcreteState saved = st_;
      std::size_t snaps = snapshots_.size();
      if (end_borrow(child)) {
        if (holds(lender, need)) return true;
        continue;
      }
      st_ = std::move(saved);
      snapshots_.resize(snaps);
    }
    return false;
  }

  bool end_borrow(const PendingEnd& pe) {
    if (!holds(pe.borrower, pe.frac) && !reclaim(pe.borrower, pe.frac)) return false;
    Capability& from = st_.caps.at(pe.borrower);
    CellId cell = from.cell;
    if (std::optional<Fraction> rest = frac_sub(from.frac, pe.frac)) {
      from.frac = *rest;
    } else {
      st_.caps.erase(pe.borrower);
    }
    auto to = st_.caps.find(pe.lender);
    if (to == st_.caps.end()) {
      st_.caps.insert_or_assign(pe.lender, Capability{cell, pe.frac});
    } else {
      to->second.frac = frac_add(to->second.frac, pe.frac);
    }
    std::erase_if(st_.pending, [&](const PendingEnd& x) { return x.borrower == pe.borrower; });
    if (traced_) snapshots_.push_back({Snapshot::Kind::Shift, stmt_, st_, pe});
    return true;
  }

  bool checked_;
  bool traced_;
  ConcreteState st_;
  std::vector<Snapshot> snapshots_;
  SourceSpan stmt_;
};

RunResult execute(const Expr& program, MonitorMode mode, bool traced) {
  check_scopes(program);
  Machine m(mode, traced);
  RunResult out;
  try {
    out.value = m.statement(program, {});
  } catch (Fault& f) {
    out.error = std::move(f.error);
  }
  out.final_state = std::move(m.state());
  out.snapshots = std::move(m.snapshots());
  return out;
}

}  // namespace

RunResult run(const Expr& program, MonitorMode mode) { return execute(program, mode, false); }

RunResult run_traced(const Expr& program, MonitorMode mode) {
  return execute(program, mode, true);
}

}  // namespace lpa
