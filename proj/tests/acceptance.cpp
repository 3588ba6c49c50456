// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lpa/fuzz.hpp"
#include "lpa/monitor.hpp"
#include "lpa/trace.hpp"
#include "lpa/verifier.hpp"

using namespace lpa;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string sample(const std::string& name) {
  std::ifstream in(std::string(LPA_SOURCE_DIR) + "/samples/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << "s";
  return o.str();
}

std::vector<std::string> render(const SymState& s) {
  std::vector<std::string> out;
  for (const Chunk& c : s.chunks) {
    if (const auto* p = std::get_if<PointsTo>(&c)) {
      out.push_back(p->ref.name + "|->" + p->frac.str() + " " + p->value.str());
    } else {
      const auto& e = std::get<RefEnd>(c);
      out.push_back("refend(" + e.borrower.name + "," + e.lender.name + "," + e.frac.str() + ")");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string joined(const std::vector<std::string>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out + "}";
}

std::optional<Fraction> frac_by_name(const SymState& s, const std::string& name) {
  for (const Chunk& c : s.chunks) {
    if (const auto* p = std::get_if<PointsTo>(&c); p && p->ref.name == name) return p->frac;
  }
  return std::nullopt;
}

std::string text_at(const std::string& text, const SourceSpan& span) {
  return text.substr(span.offset, span.length);
}

// 1
Outcome rejection_reproduction() {
  Outcome o;
  auto t0 = Clock::now();
  std::string text = sample("listing1.lpa");
  ExprPtr p = parse(text);
  Verdict v = verify(*p);
  RunResult r = run(*p);
  double took = seconds_since(t0);

  const auto* rej = std::get_if<Rejected>(&v);
  o.require(rej != nullptr, "verifier accepted");
  if (!rej) return o;
  const Rejection& why = rej->rejection;
  o.require(text_at(text, why.at) == "*y := 5", "rejected at `" + text_at(text, why.at) + "`");
  o.require(why.reason == RejectReason::WriteWithoutFullPermission,
            "reason " + std::string(reject_reason_name(why.reason)));
  o.require(!r.ok(), "monitor ran clean");
  if (!r.ok()) {
    o.require(r.error->kind == RuntimeErrorKind::AliasViolation,
              "monitor fault " + std::string(runtime_error_name(r.error->kind)));
    o.require(r.error->span == why.at, "monitor faulted at " + r.error->span.str());
  }
  o.require(took < 1.0, "took " + fmt_seconds(took));
  if (o.pass) o.detail = "rejected at " + why.at.str() + " `*y := 5`, monitor agrees, " + fmt_seconds(took);
  return o;
}

// 2
Outcome mutable_golden_trace() {
  Outcome o;
  Verdict v = verify(*parse(sample("mut_ref.lpa")));
  o.require(accepted(v), "not accepted");
  if (!o.pass) return o;
  using R = std::vector<std::string>;
  std::vector<R> expected = {
      {"x|->1/1 42"},
      {"refend(y,x,1/1)", "y|->1/1 42"},
      {"refend(y,x,1/1)", "y|->1/1 43"},
      {"x|->1/1 43"},
      {"x|->1/1 44"},
      {},
  };
  const auto& trace = trace_of(v);
  o.require(trace.size() == expected.size(), "trace has " + std::to_string(trace.size()) + " states");
  for (std::size_t k = 0; o.pass && k < expected.size(); ++k) {
    R got = render(trace[k].state);
    o.require(got == expected[k], "state " + std::to_string(k + 1) + " is " + joined(got));
  }
  o.require(trace[3].kind == TraceEntry::Kind::Shift, "x |-> 43 is not a shift state");
  if (o.pass) o.detail = "6 states match exactly";
  return o;
}

// 3
Outcome shared_fraction_trace() {
  Outcome o;
  Verdict v = verify(*parse(sample("shared_ref.lpa")));
  o.require(accepted(v), "not accepted");
  if (!o.pass) return o;
  std::vector<Fraction> xs;
  for (const TraceEntry& e : trace_of(v)) {
    auto x = frac_by_name(e.state, "x");
    if (!x) break;
    if (xs.empty() || xs.back() != *x) xs.push_back(*x);
    for (const Chunk& c : e.state.chunks) {
      const auto* end = std::get_if<RefEnd>(&c);
      if (!end) continue;
      const std::string& b = end->borrower.name;
      Fraction want = b == "y" ? Fraction(1, 2) : Fraction(1, 4);
      o.require(frac_by_name(e.state, b) == want, b + " holds the wrong fraction while live");
      o.require(end->frac == want, "refend for " + b + " records " + end->frac.str());
    }
  }
  std::vector<Fraction> expected = {Fraction::one(), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4),
                                    Fraction::one()};
  std::string seq;
  for (const Fraction& f : xs) seq += (seq.empty() ? "" : ", ") + f.str();
  o.require(xs == expected, "x sequence " + seq);
  if (o.pass) o.detail = "x: " + seq + "; y 1/2, z 1/4 while live";
  return o;
}

// 4
Outcome round_trips() {
  Outcome o;
  std::size_t failures = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    ExprPtr e = gen_any_expr(seed, static_cast<int>(seed % 9));
    try {
      if (!same_tree(*parse(pretty(*e)), *e)) ++failures;
    } catch (const ParseError&) {
      ++failures;
    }
  }
  o.require(failures == 0, std::to_string(failures) + " of 10000 ASTs failed to round-trip");

  int mutable_refused = 0;
  for (Fraction q : {Fraction::one(), Fraction(1, 2), Fraction(1, 4), Fraction(3, 8)}) {
    SymState s;
    RefId p = allocate(s, SymValue::integer(42), "p");
    if (!q.is_one()) {
      s.chunks.clear();
      RefId rest{"rest", s.next_generation++};
      s.lineage[rest] = s.lineage.at(p);
      s.chunks.push_back(PointsTo{p, q, SymValue::integer(42)});
      s.chunks.push_back(PointsTo{rest, *frac_sub(Fraction::one(), q), SymValue::integer(42)});
    }
    const SymState before = s;

    SymState shr = before;
    RefId r = shared_borrow(shr, p, "r");
    o.require(shr.fraction_of(r) == frac_half(q), "shared borrow at " + q.str() + " took the wrong fraction");
    o.require(same_chunks(apply_reference_end(shr, r), before), "shared end at " + q.str() + " differs");

    SymState mut = before;
    try {
      RefId m = mutable_borrow(mut, p, "m");
      o.require(q.is_one(), "mutable borrow succeeded with only " + q.str());
      o.require(same_chunks(apply_reference_end(mut, m), before), "mutable end at " + q.str() + " differs");
    } catch (const MissingResource&) {
      o.require(!q.is_one(), "mutable borrow refused at 1/1");
      o.require(same_chunks(mut, before), "refused mutable borrow changed the state");
      ++mutable_refused;
    }
  }
  if (o.pass) {
    o.detail = "10000 ASTs; lender restored for q in {1, 1/2, 1/4, 3/8} (mutable needs 1/1, refused " +
               std::to_string(mutable_refused) + "x with state unchanged)";
  }
  return o;
}

// 5
Outcome conservation() {
  Outcome o;
  GenConfig cfg;
  std::size_t steps = 0, violations = 0;
  std::string first;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    cfg.seed = program_seed(0, i);
    RunResult r = run_traced(*gen_program(cfg));
    for (const Snapshot& s : r.snapshots) {
      ++steps;
      if (auto bad = conservation_violation(s.state)) {
        if (violations++ == 0) first = *bad;
      }
    }
  }
  o.require(violations == 0, std::to_string(violations) + " violations, first: " + first);
  if (o.pass) o.detail = "1000 programs, " + std::to_string(steps) + " monitored steps, 0 violations";
  return o;
}

// 6
Outcome differential_soundness() {
  Outcome o;
  GenConfig cfg;
  auto t0 = Clock::now();
  DiffReport r = differential(cfg, 1000);
  double took = seconds_since(t0);
  o.require(r.total == 1000, "ran " + std::to_string(r.total) + " programs");
  o.require(r.soundness_violations.empty(),
            std::to_string(r.soundness_violations.size()) + " soundness violations");
  o.require(took < 60.0, "took " + fmt_seconds(took));
  if (o.pass) {
    o.detail = "1000 programs (" + std::to_string(r.accepted) + " accepted, " + std::to_string(r.rejected) +
               " rejected), 0 violations, " + fmt_seconds(took);
  }
  return o;
}

// 7
ExprPtr framed(const ExprPtr& p) {
  ExprPtr body = seq(p, read(var("__frame_ro")));
  return let("__frame", new_(int_lit(7)), let("__frame_ro", shr_borrow(var("__frame")), body));
}

Outcome frame_and_determinism() {
  Outcome o;
  GenConfig cfg;
  int compared = 0;
  for (std::uint64_t i = 0; i < 500 && o.pass; ++i) {
    cfg.seed = program_seed(77, i);
    std::string text = pretty(*gen_program(cfg));
    ExprPtr p = parse(text);
    Verdict alone = verify(*p);
    Verdict with = verify(*framed(p));
    std::string tag = "program `" + text + "`: ";

    o.require(accepted(alone) == accepted(with), tag + "verdict changed under frame");
    if (!o.pass) break;
    if (!accepted(alone)) {
      const Rejection& a = std::get<Rejected>(alone).rejection;
      const Rejection& b = std::get<Rejected>(with).rejection;
      o.require(a.reason == b.reason && a.at == b.at, tag + "rejection moved under frame");
    }
    // The frame takes generations 0 and 1.
    std::vector<Shift> expect = shifts_of(trace_of(alone));
    for (Shift& s : expect) {
      s.borrower.generation += 2;
      s.lender.generation += 2;
    }
    o.require(shifts_of(trace_of(with)) == expect, tag + "shifts differ under frame");

    std::string d1 = dump(trace_document(text, alone));
    std::string d2 = dump(trace_document(text, verify(*parse(text))));
    std::string d3 = dump(trace_document(text, run_traced(*p)));
    std::string d4 = dump(trace_document(text, run_traced(*parse(text))));
    o.require(d1 == d2, tag + "verifier trace not byte-identical across runs");
    o.require(d3 == d4, tag + "monitor trace not byte-identical across runs");
    ++compared;
  }
  if (o.pass) o.detail = std::to_string(compared) + " programs: same verdicts and shifts under frame, dumps stable";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {"rejection reproduction", rejection_reproduction},
      {"mutable-borrow golden trace", mutable_golden_trace},
      {"shared-borrow fraction trace", shared_fraction_trace},
      {"round-trip properties", round_trips},
      {"conservation", conservation},
      {"differential soundness", differential_soundness},
      {"frame and determinism", frame_and_determinism},
  };
  int failed = 0;
  int n = 0;
  for (const Criterion& c : criteria) {
    ++n;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << n << ": " << c.name << " - " << o.detail << "\n";
    failed += !o.pass;
  }
  std::cout << (n - failed) << "/" << n << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
