// Random program generation and verifier-vs-monitor differential testing.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpa/syntax.hpp"

namespace lpa {

enum class NodeKind { IntLit, New, Free, Read, Write, MutBorrow, ShrBorrow, Let, Seq };

struct GenConfig {
  std::uint64_t seed = 0;
  int max_depth = 8;
  int max_allocs = 3;
  std::map<NodeKind, unsigned> weights = default_weights();

  static std::map<NodeKind, unsigned> default_weights();

  /// Throws std::invalid_argument unless Let and New have positive weight
  /// and the limits are non-negative.
  void validate() const;
};

/// Well-scoped program whose dereference and borrow targets are variables
/// bound to references. Deterministic in the config.
ExprPtr gen_program(const GenConfig& cfg);

/// Arbitrary tree of the given depth with no scoping or typing discipline,
/// for syntax round-trip testing.
ExprPtr gen_any_expr(std::uint64_t seed, int max_depth);

/// Seed for the index-th program of a run; independent streams per index.
std::uint64_t program_seed(std::uint64_t base, std::uint64_t index);

bool contains_borrow(const Expr& e);

struct SoundnessViolation {
  std::string program;
  std::string verdict;
  std::string monitor;
  std::string shrunk;
};

struct TraceMismatch {
  std::string program;
  std::string detail;
};

struct DiffReport {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<SoundnessViolation> soundness_violations;
  std::vector<TraceMismatch> trace_mismatches;

  /// Associative merge; order of the lists is preserved.
  DiffReport& operator+=(const DiffReport& other);
};

/// Verifies and runs a single program and classifies the pair of results.
DiffReport check_program(const ExprPtr& program);

/// Generates and checks `n` programs, using `threads` workers (0 picks the
/// hardware concurrency). The report does not depend on the thread count.
DiffReport differential(const GenConfig& cfg, std::size_t n, unsigned threads = 0);

/// Checks source texts as given (corpus replay).
DiffReport differential_corpus(const std::vector<std::string>& sources);

/// Greedily removes Seq arms and inlines Lets while `still_failing` holds
/// and the program stays closed.
ExprPtr shrink(const ExprPtr& program, const std::function<bool(const Expr&)>& still_failing);

/// Replaces free occurrences of `name` in `body` with `value`.
ExprPtr substitute(const ExprPtr& body, const std::string& name, const ExprPtr& value);

nlohmann::json to_json(const DiffReport& report);

}  // namespace lpa
