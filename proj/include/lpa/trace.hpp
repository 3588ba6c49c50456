// JSON trace documents shared by the verifier and the monitor.
//
//   { "version": "1", "program": "...", "outcome": "...",
//     "entries": [ { "after_line": 3, "kind": "statement" | "shift",
//                    "chunks": [ {"kind": "pointsto", "ref": "x#0", "frac": "1/2", "value": 42},
//                                {"kind": "refend", "borrower": "y#1", "lender": "x#0", "frac": "1/2"} ],
//                    "shifts": [ {"borrower": "y#1", "lender": "x#0", "frac": "1/2"} ] } ] }
//
// Chunks are sorted by (kind, reference name), so output is byte-stable.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lpa/monitor.hpp"
#include "lpa/verifier.hpp"

namespace lpa {

struct ChunkRecord {
  std::string kind;  // "pointsto" | "refend"
  std::string ref;   // ref for pointsto, borrower for refend
  std::string lender;
  std::string frac;
  nlohmann::json value;  // pointsto only: integer, or "&name#gen" for a pointer

  friend bool operator==(const ChunkRecord&, const ChunkRecord&) = default;
};

struct ShiftRecord {
  std::string borrower;
  std::string lender;
  std::string frac;
  friend bool operator==(const ShiftRecord&, const ShiftRecord&) = default;
};

struct TraceRecord {
  std::size_t after_line = 0;
  std::string kind;  // "statement" | "shift"
  std::vector<ChunkRecord> chunks;
  std::vector<ShiftRecord> shifts;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct TraceDocument {
  std::string program;
  std::string outcome;
  std::vector<TraceRecord> entries;
};

std::vector<ChunkRecord> chunk_records(const SymState& s);
std::vector<ChunkRecord> chunk_records(const ConcreteState& s);

/// outcome: "accepted" or "rejected".
TraceDocument trace_document(std::string_view program, const Verdict& verdict);

/// outcome: "ok" or "error".
TraceDocument trace_document(std::string_view program, const RunResult& run);

nlohmann::json to_json(const TraceDocument& doc);
std::string dump(const TraceDocument& doc);

}  // namespace lpa
