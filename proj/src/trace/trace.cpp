#include "lpa/trace.hpp"

#include <algorithm>
#include <limits>

namespace lpa {

namespace {

nlohmann::json int_json(const BigInt& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(n);
  }
  return n.str();
}

void sort_records(std::vector<ChunkRecord>& out) {
  std::sort(out.begin(), out.end(), [](const ChunkRecord& a, const ChunkRecord& b) {
    return std::tie(a.kind, a.ref, a.lender, a.frac) < std::tie(b.kind, b.ref, b.lender, b.frac);
  });
}

ShiftRecord shift_record(const RefId& borrower, const RefId& lender, const Fraction& frac) {
  return {borrower.str(), lender.str(), frac.str()};
}

}  // namespace

std::vector<ChunkRecord> chunk_records(const SymState& s) {
  std::vector<ChunkRecord> out;
  for (const Chunk& c : s.chunks) {
    if (const auto* p = std::get_if<PointsTo>(&c)) {
      nlohmann::json value = p->value.is_ref() ? nlohmann::json(p->value.str())
                                               : int_json(p->value.as_int());
      out.push_back({"pointsto", p->ref.str(), "", p->frac.str(), std::move(value)});
    } else {
      const auto& e = std::get<RefEnd>(c);
      out.push_back({"refend", e.borrower.str(), e.lender.str(), e.frac.str(), nullptr});
    }
  }
  sort_records(out);
  return out;
}

std::vector<ChunkRecord> chunk_records(const ConcreteState& s) {
  std::vector<ChunkRecord> out;
  for (const auto& [tag, cap] : s.caps) {
    const RuntimeValue& v = s.heap.at(cap.cell);
    nlohmann::json value = v.is_pointer() ? nlohmann::json(v.str()) : int_json(v.as_int());
    out.push_back({"pointsto", tag.str(), "", cap.frac.str(), std::move(value)});
  }
  for (const PendingEnd& pe : s.pending) {
    out.push_back({"refend", pe.borrower.str(), pe.lender.str(), pe.frac.str(), nullptr});
  }
  sort_records(out);
  return out;
}

TraceDocument trace_document(std::string_view program, const Verdict& verdict) {
  TraceDocument doc{std::string(program), accepted(verdict) ? "accepted" : "rejected", {}};
  for (const TraceEntry& e : trace_of(verdict)) {
    TraceRecord rec;
    rec.after_line = e.after_span.line;
    rec.kind = e.kind == TraceEntry::Kind::Shift ? "shift" : "statement";
    rec.chunks = chunk_records(e.state);
    for (const Shift& s : e.shifts_applied) {
      rec.shifts.push_back(shift_record(s.borrower, s.lender, s.frac));
    }
    doc.entries.push_back(std::move(rec));
  }
  return doc;
}

TraceDocument trace_document(std::string_view program, const RunResult& run) {
  TraceDocument doc{std::string(program), run.ok() ? "ok" : "error", {}};
  for (const Snapshot& s : run.snapshots) {
    TraceRecord rec;
    rec.after_line = s.after_span.line;
    rec.kind = s.kind == Snapshot::Kind::Shift ? "shift" : "statement";
    rec.chunks = chunk_records(s.state);
    if (s.ended) rec.shifts.push_back(shift_record(s.ended->borrower, s.ended->lender, s.ended->frac));
    doc.entries.push_back(std::move(rec));
  }
  return doc;
}

nlohmann::json to_json(const TraceDocument& doc) {
  nlohmann::json entries = nlohmann::json::array();
  for (const TraceRecord& r : doc.entries) {
    nlohmann::json chunks = nlohmann::json::array();
    for (const ChunkRecord& c : r.chunks) {
      if (c.kind == "pointsto") {
        chunks.push_back({{"kind", c.kind}, {"ref", c.ref}, {"frac", c.frac}, {"value", c.value}});
      } else {
        chunks.push_back(
            {{"kind", c.kind}, {"borrower", c.ref}, {"lender", c.lender}, {"frac", c.frac}});
      }
    }
    nlohmann::json shifts = nlohmann::json::array();
    for (const ShiftRecord& s : r.shifts) {
      shifts.push_back({{"borrower", s.borrower}, {"lender", s.lender}, {"frac", s.frac}});
    }
    entries.push_back({{"after_line", r.after_line},
                       {"kind", r.kind},
                       {"chunks", std::move(chunks)},
                       {"shifts", std::move(shifts)}});
  }
  return {{"version", "1"},
          {"program", doc.program},
          {"outcome", doc.outcome},
          {"entries", std::move(entries)}};
}

std::string dump(const TraceDocument& doc) { return to_json(doc).dump(2) + "\n"; }

}  // namespace lpa
