#include <thread>

#include "lpa/fuzz.hpp"
#include "lpa/monitor.hpp"
#include "lpa/trace.hpp"
#include "lpa/verifier.hpp"

namespace lpa {

DiffReport& DiffReport::operator+=(const DiffReport& other) {
  total += other.total;
  accepted += other.accepted;
  rejected += other.rejected;
  soundness_violations.insert(soundness_violations.end(), other.soundness_violations.begin(),
                              other.soundness_violations.end());
  trace_mismatches.insert(trace_mismatches.end(), other.trace_mismatches.begin(),
                          other.trace_mismatches.end());
  return *this;
}

namespace {

std::string describe(const RunResult& r) {
  if (r.ok()) return "ok, value " + r.value->str();
  return std::string(runtime_error_name(r.error->kind)) + " at " + r.error->span.str() + ": " +
         r.error->message;
}

bool unsound(const Expr& e) {
  try {
    return accepted(verify(e)) && !run(e).ok();
  } catch (const ScopeError&) {
    return false;
  }
}

}  // namespace

DiffReport check_program(const ExprPtr& program) {
  DiffReport report;
  report.total = 1;
  std::string text = pretty(*program);
  Verdict verdict = verify(*program);
  RunResult monitored = run_traced(*program);

  if (accepted(verdict)) {
    ++report.accepted;
    if (!monitored.ok()) {
      ExprPtr small = shrink(program, unsound);
      report.soundness_violations.push_back(
          {text, explain(verdict), describe(monitored), pretty(*small)});
      return report;
    }
    auto sym = trace_document(text, verdict).entries;
    auto con = trace_document(text, monitored).entries;
    if (sym != con) {
      std::size_t i = 0;
      while (i < sym.size() && i < con.size() && sym[i] == con[i]) ++i;
      report.trace_mismatches.push_back(
          {text, "traces diverge at entry " + std::to_string(i) + " of " +
                     std::to_string(std::max(sym.size(), con.size()))});
    }
    if (auto v = conservation_violation(monitored.final_state)) {
      report.trace_mismatches.push_back({text, "conservation: " + *v});
    }
    return report;
  }

  ++report.rejected;
  const Rejection& rej = std::get<Rejected>(verdict).rejection;
  if (monitored.ok()) {
    report.trace_mismatches.push_back(
        {text, "verifier rejected at " + rej.at.str() + " but the monitor ran clean"});
  } else if (!(monitored.error->span == rej.at)) {
    report.trace_mismatches.push_back({text, "verifier rejected at " + rej.at.str() +
                                                 ", monitor faulted at " +
                                                 monitored.error->span.str()});
  }
  return report;
}

DiffReport differential(const GenConfig& cfg, std::size_t n, unsigned threads) {
  cfg.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  std::vector<DiffReport> per_program(n);
  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < n; i += threads) {
      GenConfig one = cfg;
      one.seed = program_seed(cfg.seed, i);
      // Round-trip through the printer so reported programs reproduce exactly.
      per_program[i] = check_program(parse(pretty(*gen_program(one))));
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
  work(0);
  pool.clear();

  DiffReport total;
  for (const DiffReport& r : per_program) total += r;
  return total;
}

DiffReport differential_corpus(const std::vector<std::string>& sources) {
  DiffReport total;
  for (const std::string& src : sources) total += check_program(parse(src));
  return total;
}

nlohmann::json to_json(const DiffReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.soundness_violations) {
    violations.push_back({{"program", v.program},
                          {"verdict", v.verdict},
                          {"monitor", v.monitor},
                          {"shrunk", v.shrunk}});
  }
  nlohmann::json mismatches = nlohmann::json::array();
  for (const auto& m : report.trace_mismatches) {
    mismatches.push_back({{"program", m.program}, {"detail", m.detail}});
  }
  return {{"total", report.total},
          {"accepted", report.accepted},
          {"rejected", report.rejected},
          {"soundness_violations", std::move(violations)},
          {"trace_mismatches", std::move(mismatches)}};
}

}  // namespace lpa
