#include "lpa/verifier.hpp"

namespace lpa {

std::string_view reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::WriteWithoutFullPermission: return "WriteWithoutFullPermission";
    case RejectReason::ReadWithoutPermission: return "ReadWithoutPermission";
    case RejectReason::FreeWithoutFullPermission: return "FreeWithoutFullPermission";
    case RejectReason::BorrowTargetNotReference: return "BorrowTargetNotReference";
    case RejectReason::UseAfterEnd: return "UseAfterEnd";
  }
  return "?";
}

const std::vector<TraceEntry>& trace_of(const Verdict& v) {
  if (const auto* a = std::get_if<Accepted>(&v)) return a->trace;
  return std::get<Rejected>(v).trace;
}

std::vector<Shift> shifts_of(const std::vector<TraceEntry>& trace) {
  std::vector<Shift> out;
  for (const TraceEntry& e : trace) {
    out.insert(out.end(), e.shifts_applied.begin(), e.shifts_applied.end());
  }
  return out;
}

namespace {

struct RejectSignal {
  Rejection rejection;
};

class Executor {
 public:
  explicit Executor(SymState s) : state_(std::move(s)) {}

  SymValue statement(const Expr& e, const std::string& hint) {
    if (const auto* l = e.as<ast::Let>()) {
      SymValue bound = statement(*l->bound, l->name);
      return with_binding(l->name, std::move(bound), [&] { return statement(*l->body, hint); });
    }
    if (const auto* s = e.as<ast::Seq>()) {
      statement(*s->first, {});
      return statement(*s->second, hint);
    }
    SourceSpan outer = current_;
    current_ = e.span;
    SymValue v = eval(e, hint);
    trace_.push_back({TraceEntry::Kind::Statement, e.span, state_, {}, std::nullopt, std::nullopt});
    current_ = outer;
    return v;
  }

  SymState& state() { return state_; }
  std::vector<TraceEntry>& trace() { return trace_; }

 private:
  template <typename Body>
  SymValue with_binding(const std::string& name, SymValue value, Body&& body) {
    std::optional<SymValue> shadowed;
    if (auto it = state_.env.find(name); it != state_.env.end()) shadowed = it->second;
    state_.env.insert_or_assign(name, std::move(value));
    SymValue result = body();
    if (shadowed) {
      state_.env.insert_or_assign(name, std::move(*shadowed));
    } else {
      state_.env.erase(name);
    }
    return result;
  }

  static std::string ref_name(const std::string& hint) { return hint.empty() ? "_" : hint; }

  SymValue eval(const Expr& e, const std::string& hint) {
    if (const auto* n = e.as<ast::IntLit>()) return SymValue::integer(n->value);
    if (const auto* n = e.as<ast::Var>()) return state_.env.at(n->name);
    if (const auto* n = e.as<ast::Let>()) {
      SymValue bound = eval(*n->bound, n->name);
      return with_binding(n->name, std::move(bound), [&] { return eval(*n->body, hint); });
    }
    if (const auto* n = e.as<ast::Seq>()) {
      eval(*n->first, {});
      return eval(*n->second, hint);
    }
    if (const auto* n = e.as<ast::New>()) {
      SymValue init = eval(*n->init, {});
      return SymValue::ref(allocate(state_, std::move(init), ref_name(hint)));
    }
    if (const auto* n = e.as<ast::Read>()) {
      RefId p = target(e, *n->target);
      recover(e, p, std::nullopt, "read", [](bool) { return RejectReason::ReadWithoutPermission; });
      state_.touch(p);
      return state_.points_to(p)->value;
    }
    if (const auto* n = e.as<ast::Write>()) {
      RefId p = target(e, *n->target);
      SymValue v = eval(*n->value, {});
      recover(e, p, Fraction::one(), "write",
              [](bool) { return RejectReason::WriteWithoutFullPermission; });
      state_.points_to(p)->value = std::move(v);
      state_.touch(p);
      return SymValue::integer(0);
    }
    if (const auto* n = e.as<ast::Free>()) {
      RefId p = target(e, *n->target);
      recover(e, p, Fraction::one(), "free",
              [](bool) { return RejectReason::FreeWithoutFullPermission; });
      freed_.insert_or_assign(state_.lineage.at(p), e.span);
      deallocate(state_, p);
      return SymValue::integer(0);
    }
    if (const auto* n = e.as<ast::MutBorrow>()) {
      RefId p = target(e, *n->target);
      recover(e, p, Fraction::one(), "mutable borrow", [](bool holds_some) {
        return holds_some ? RejectReason::WriteWithoutFullPermission : RejectReason::UseAfterEnd;
      });
      return SymValue::ref(mutable_borrow(state_, p, ref_name(hint)));
    }
    if (const auto* n = e.as<ast::ShrBorrow>()) {
      RefId p = target(e, *n->target);
      recover(e, p, std::nullopt, "shared borrow", [](bool) { return RejectReason::UseAfterEnd; });
      return SymValue::ref(shared_borrow(state_, p, ref_name(hint)));
    }
    throw std::logic_error("unhandled expression node");
  }

  RefId target(const Expr& op, const Expr& target_expr) {
    SymValue v = eval(target_expr, {});
    if (!v.is_ref()) {
      Rejection r;
      r.at = op.span;
      r.reason = RejectReason::BorrowTargetNotReference;
      r.construct = pretty(op);
      r.missing = "a reference (target evaluates to " + v.str() + ")";
      throw RejectSignal{std::move(r)};
    }
    return v.as_ref();
  }

  // Ensures `p` holds `need`, ending borrows rooted at `p` if it does not.
  template <typename ReasonFn>
  void recover(const Expr& op, const RefId& p, const Demand& need, const char* operation,
               ReasonFn reason) {
    std::optional<Fraction> held = state_.fraction_of(p);
    if (held && (!need || *held >= *need)) return;
    try {
      Saturation sat = saturate_end_traced(state_, p, need);
      for (SaturationStep& step : sat.steps) {
        ended_.insert_or_assign(step.shift.borrower, EndedBy{current_, operation, p});
        trace_.push_back({TraceEntry::Kind::Shift, current_, std::move(step.after), {step.shift}, p,
                          need});
      }
      state_ = std::move(sat.state);
    } catch (const ShiftError&) {
      Rejection r;
      r.at = op.span;
      r.reason = reason(held.has_value());
      r.construct = pretty(op);
      r.missing = p.str() + " |->_" + (need ? need->str() : std::string("q")) + " _" +
                  (need ? "" : " with q > 0") + " (holds " +
                  (held ? held->str() : std::string("nothing")) + ")";
      r.ref = p;
      if (auto it = ended_.find(p); it != ended_.end()) r.ended_by = it->second;
      if (auto it = freed_.find(state_.lineage.at(p)); it != freed_.end()) {
        r.missing += "; its cell was freed at " + it->second.str();
      }
      for (const Chunk& c : state_.chunks) {
        if (const auto* end = std::get_if<RefEnd>(&c); end && end->lender == p) {
          r.attempted.push_back({end->borrower, end->lender, end->frac});
        }
      }
      throw RejectSignal{std::move(r)};
    }
  }

  SymState state_;
  std::vector<TraceEntry> trace_;
  std::map<RefId, EndedBy> ended_;
  std::map<CellId, SourceSpan> freed_;
  SourceSpan current_;
};

}  // namespace

ExecResult sym_exec(const Expr& e, SymState s) {
  Executor ex(std::move(s));
  ExecResult out;
  try {
    out.value = ex.statement(e, {});
  } catch (RejectSignal& sig) {
    out.rejection = std::move(sig.rejection);
  }
  out.state = std::move(ex.state());
  out.trace = std::move(ex.trace());
  return out;
}

Verdict verify(const Expr& program) {
  check_scopes(program);
  ExecResult r = sym_exec(program, SymState{});
  if (r.rejection) return Rejected{std::move(*r.rejection), std::move(r.trace)};
  return Accepted{std::move(r.trace), sorted_chunks(r.state), std::move(*r.value)};
}

}  // namespace lpa
