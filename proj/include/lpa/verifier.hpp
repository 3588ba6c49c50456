// Forward symbolic execution over the resource logic.
//
// Each heap operation checks its precondition chunk directly. Only when that
// lookup fails are reference-ending shifts applied to recover the missing
// fraction, so the recorded shifts sit at the statements that forced them.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lpa/logic.hpp"
#include "lpa/syntax.hpp"

namespace lpa {

enum class RejectReason {
  WriteWithoutFullPermission,
  ReadWithoutPermission,
  FreeWithoutFullPermission,
  BorrowTargetNotReference,
  UseAfterEnd,
};

std::string_view reject_reason_name(RejectReason r);

/// A state snapshot in the proof outline. Statement entries follow each
/// statement; shift entries follow each reference ending and carry exactly
/// that one shift.
struct TraceEntry {
  enum class Kind { Statement, Shift };

  Kind kind = Kind::Statement;
  SourceSpan after_span;
  SymState state;
  std::vector<Shift> shifts_applied;
  /// For shift entries: the lookup whose failure forced the shift.
  std::optional<RefId> trigger_ref;
  Demand trigger_need;
};

/// Records the statement that ended a borrow, for diagnostics.
struct EndedBy {
  SourceSpan at;
  std::string operation;  // "write", "read", "free", "mutable borrow", "shared borrow"
  RefId through;
};

struct Rejection {
  SourceSpan at;
  RejectReason reason;
  std::string construct;  // the rejected expression, pretty-printed
  std::string missing;    // the resource that could not be found
  std::optional<RefId> ref;
  std::optional<EndedBy> ended_by;
  std::vector<Shift> attempted;
};

struct Accepted {
  std::vector<TraceEntry> trace;
  std::vector<Chunk> leak_warnings;
  SymValue result;
};

struct Rejected {
  Rejection rejection;
  std::vector<TraceEntry> trace;
};

using Verdict = std::variant<Accepted, Rejected>;

inline bool accepted(const Verdict& v) { return std::holds_alternative<Accepted>(v); }
const std::vector<TraceEntry>& trace_of(const Verdict& v);

/// All shifts recorded in a trace, in execution order.
std::vector<Shift> shifts_of(const std::vector<TraceEntry>& trace);

struct ExecResult {
  std::optional<SymValue> value;  // empty when rejected
  SymState state;
  std::vector<TraceEntry> trace;
  std::optional<Rejection> rejection;
};

/// Executes `e` from `s`. The expression must be closed relative to `s.env`.
ExecResult sym_exec(const Expr& e, SymState s);

/// Runs from the empty state. Chunks left at the end are leak warnings.
/// Throws ScopeError if the program has free variables.
Verdict verify(const Expr& program);

/// Human-readable report.
std::string explain(const Verdict& verdict);

}  // namespace lpa
