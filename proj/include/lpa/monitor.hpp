// Concrete interpreter with a ghost capability table.
//
// Every reference carries its own capability: the fraction of its cell it
// may use. Borrowing moves or halves capability; ending a borrow gives it
// back. Writes and frees need the whole cell, reads need any part of it.
// When a reference lacks what it needs, borrows taken from it are ended
// first, innermost first.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lpa/fraction.hpp"
#include "lpa/logic.hpp"
#include "lpa/syntax.hpp"

namespace lpa {

/// A pointer: the cell it addresses plus the identity of the reference.
struct Pointer {
  RefId tag;
  CellId cell;
  friend bool operator==(const Pointer&, const Pointer&) = default;
};

struct RuntimeValue {
  std::variant<BigInt, Pointer> v;

  bool is_pointer() const { return std::holds_alternative<Pointer>(v); }
  const Pointer& as_pointer() const { return std::get<Pointer>(v); }
  const BigInt& as_int() const { return std::get<BigInt>(v); }
  std::string str() const;

  friend bool operator==(const RuntimeValue&, const RuntimeValue&) = default;
};

struct Capability {
  CellId cell;
  Fraction frac;
};

struct PendingEnd {
  RefId borrower;
  RefId lender;
  Fraction frac;
};

struct ConcreteState {
  std::map<CellId, RuntimeValue> heap;
  std::map<RefId, Capability> caps;
  std::vector<PendingEnd> pending;  // in creation order
  std::map<std::string, RuntimeValue> env;
  std::map<RefId, std::uint64_t> last_access;
  std::uint64_t next_tag = 0;
  std::uint64_t next_cell = 0;
  std::uint64_t clock = 0;
};

/// Per live cell, capabilities over it must sum to exactly 1.
std::optional<std::string> conservation_violation(const ConcreteState& s);

enum class RuntimeErrorKind { AliasViolation, UseAfterEnd, DoubleFree, UnboundRef };

std::string_view runtime_error_name(RuntimeErrorKind k);

struct RuntimeError {
  RuntimeErrorKind kind;
  SourceSpan span;
  std::string message;
};

struct Snapshot {
  enum class Kind { Statement, Shift };
  Kind kind = Kind::Statement;
  SourceSpan after_span;
  ConcreteState state;
  std::optional<PendingEnd> ended;
};

struct RunResult {
  std::optional<RuntimeValue> value;
  std::optional<RuntimeError> error;
  std::vector<Snapshot> snapshots;
  ConcreteState final_state;

  bool ok() const { return !error.has_value(); }
};

enum class MonitorMode {
  Checked,    // enforce capabilities
  Unchecked,  // plain interpreter; only dead cells and non-pointers fault
};

/// Throws ScopeError if the program has free variables.
RunResult run(const Expr& program, MonitorMode mode = MonitorMode::Checked);

/// As run, also recording a snapshot after each statement and each forced end.
RunResult run_traced(const Expr& program, MonitorMode mode = MonitorMode::Checked);

}  // namespace lpa
