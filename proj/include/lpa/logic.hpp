// Separation-logic resources for the aliasing discipline.
//
// A symbolic state is a multiset of chunks:
//
//   PointsTo(r, q, v)   reference r holds fraction q of its cell, which stores v
//   RefEnd(b, l, q)     b was borrowed from l; ending b hands q back to l
//
// The only view shift is reference ending:
//
//   PointsTo(b, q, v) * RefEnd(b, l, q)  ==>  PointsTo(l, q, v)
//
// Shifts compose transitively and leave untouched chunks alone.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lpa/fraction.hpp"

namespace lpa {

/// Identity of one reference. Every `new` and every borrow mints a fresh one,
/// so two references to the same cell are always distinct.
struct RefId {
  std::string name;
  std::uint64_t generation = 0;

  /// "name#generation"
  std::string str() const;

  friend bool operator==(const RefId&, const RefId&) = default;
  friend auto operator<=>(const RefId& a, const RefId& b) {
    if (auto c = a.generation <=> b.generation; c != 0) return c;
    return a.name <=> b.name;
  }
};

/// Underlying memory cell shared by a reference and everything borrowed from it.
struct CellId {
  std::uint64_t value = 0;
  friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct SymValue {
  std::variant<BigInt, RefId> v;

  static SymValue integer(BigInt n) { return {std::move(n)}; }
  static SymValue ref(RefId r) { return {std::move(r)}; }

  bool is_ref() const { return std::holds_alternative<RefId>(v); }
  const RefId& as_ref() const { return std::get<RefId>(v); }
  const BigInt& as_int() const { return std::get<BigInt>(v); }
  std::string str() const;

  friend bool operator==(const SymValue&, const SymValue&) = default;
};

struct PointsTo {
  RefId ref;
  Fraction frac;
  SymValue value;
  friend bool operator==(const PointsTo&, const PointsTo&) = default;
};

struct RefEnd {
  RefId borrower;
  RefId lender;
  Fraction frac;
  friend bool operator==(const RefEnd&, const RefEnd&) = default;
};

using Chunk = std::variant<PointsTo, RefEnd>;

std::string to_string(const Chunk& c);

/// One application of reference ending.
struct Shift {
  RefId borrower;
  RefId lender;
  Fraction frac;
  friend bool operator==(const Shift&, const Shift&) = default;
};

/// The symbolic heap together with the bookkeeping the verifier needs to
/// mint references and order borrow endings.
struct SymState {
  std::vector<Chunk> chunks;
  std::map<std::string, SymValue> env;
  std::map<RefId, CellId> lineage;
  std::set<CellId> live_cells;
  // Logical time of the last access through each reference. Siblings that
  // were used earlier are ended earlier.
  std::map<RefId, std::uint64_t> last_use;
  std::uint64_t next_generation = 0;
  std::uint64_t next_cell = 0;
  std::uint64_t clock = 0;

  const PointsTo* points_to(const RefId& r) const;
  PointsTo* points_to(const RefId& r);
  const RefEnd* ref_end(const RefId& borrower) const;

  /// Fraction held by `r`, or nullopt if it holds none.
  std::optional<Fraction> fraction_of(const RefId& r) const;

  RefId fresh_ref(std::string name);
  CellId fresh_cell();
  void touch(const RefId& r);

  std::size_t ref_end_count() const;
};

/// Compares chunks as multisets; ignores env and bookkeeping.
bool same_chunks(const SymState& a, const SymState& b);

/// Chunks sorted by (kind, reference) for stable display and comparison.
std::vector<Chunk> sorted_chunks(const SymState& s);

// ---------------------------------------------------------------------------
// Errors

/// Two chunks for the same reference disagree on the stored value. The
/// rules never produce this, so it signals a bug rather than a rejection.
class ValueMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ShiftError : public std::runtime_error {
 public:
  enum class Kind { MissingRefEnd, InsufficientFraction, Unrecoverable };

  ShiftError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A rule's precondition chunk is missing from the state.
class MissingResource : public std::runtime_error {
 public:
  MissingResource(RefId ref, std::optional<Fraction> needed, std::optional<Fraction> held);

  const RefId& ref() const { return ref_; }
  /// nullopt means "any positive fraction".
  const std::optional<Fraction>& needed() const { return needed_; }
  const std::optional<Fraction>& held() const { return held_; }

 private:
  RefId ref_;
  std::optional<Fraction> needed_;
  std::optional<Fraction> held_;
};

// ---------------------------------------------------------------------------
// Operations

/// Combines PointsTo chunks that share a reference. Chunk order is kept,
/// each merged chunk staying at its first occurrence.
SymState state_merge_pointsto(SymState s);

/// Ends `borrower`: consumes its RefEnd and q of its fraction and gives q to
/// the lender.
SymState apply_reference_end(SymState s, const RefId& borrower);

/// How much a saturation must recover for the lender; nullopt is "any
/// positive amount".
using Demand = std::optional<Fraction>;

struct SaturationStep {
  Shift shift;
  SymState after;
};

struct Saturation {
  SymState state;
  std::vector<SaturationStep> steps;
};

/// Ends borrows rooted at `lender` until it holds `needed`. Deeper borrows
/// end before the borrows they were taken from. Among siblings, borrowers
/// never used since creation go first (newest first), then the rest in
/// order of last use. Throws ShiftError(Unrecoverable) on failure.
Saturation saturate_end_traced(SymState s, const RefId& lender, const Demand& needed);

SymState saturate_end(SymState s, const RefId& lender, const Fraction& needed);

/// True iff `goal` can be carved out of `s`, splitting fractions on the
/// same reference as needed; leftovers are dropped.
bool entails(const SymState& s, std::span<const Chunk> goal);

// Borrow and allocation rules. Each throws MissingResource when its
// precondition chunk is absent and returns the fresh reference.

/// Requires PointsTo(lender, 1, v); yields PointsTo(r, 1, v) * RefEnd(r, lender, 1).
RefId mutable_borrow(SymState& s, const RefId& lender, std::string name);

/// Requires PointsTo(lender, q, v); yields
/// PointsTo(lender, q/2, v) * PointsTo(r, q/2, v) * RefEnd(r, lender, q/2).
RefId shared_borrow(SymState& s, const RefId& lender, std::string name);

/// Fresh cell and reference holding the whole of it.
RefId allocate(SymState& s, SymValue init, std::string name);

/// Requires PointsTo(r, 1, _) and retires r's cell.
void deallocate(SymState& s, const RefId& r);

/// Per live cell, the PointsTo fractions must sum to exactly 1, and no
/// chunk may refer to a retired cell's PointsTo. Returns a description of
/// the first violation.
std::optional<std::string> conservation_violation(const SymState& s);

}  // namespace lpa
