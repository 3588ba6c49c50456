// lpa: verify, run and fuzz aliasing mini-language programs.
//
// Exit codes:
//   verify  0 accepted, 1 rejected, 2 parse/scope error, 3 I/O error
//   run     0 normal termination, 1 runtime error, 2 parse/scope error, 3 I/O error
//   fuzz    0 no soundness violations, 1 violations found, 3 I/O error

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lpa/fuzz.hpp"
#include "lpa/monitor.hpp"
#include "lpa/syntax.hpp"
#include "lpa/trace.hpp"
#include "lpa/verifier.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitIo = 3;
constexpr int kExitSyntax = 2;

struct IoError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError{"cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError{"cannot write " + path.string()};
}

// Parses and scope-checks; prints the diagnostic and returns null on failure.
lpa::ExprPtr load(const std::string& path, const std::string& text) {
  try {
    lpa::ExprPtr e = lpa::parse(text);
    lpa::check_scopes(*e);
    return e;
  } catch (const lpa::ParseError& err) {
    std::cerr << path << ":" << err.what() << "\n";
  } catch (const lpa::ScopeError& err) {
    std::cerr << path << ":" << err.what() << "\n";
  }
  return nullptr;
}

void print_trace(const std::vector<lpa::TraceEntry>& trace) {
  for (const lpa::TraceEntry& e : trace) {
    std::cout << "  " << (e.kind == lpa::TraceEntry::Kind::Shift ? "vs " : "   ") << "line "
              << e.after_span.line << ": {";
    auto chunks = lpa::sorted_chunks(e.state);
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      std::cout << (i ? " * " : " ") << lpa::to_string(chunks[i]);
    }
    std::cout << (chunks.empty() ? "}" : " }") << "\n";
  }
}

int cmd_verify(const std::string& path, const std::string& emit, bool trace, bool quiet) {
  std::string text = read_file(path);
  lpa::ExprPtr program = load(path, text);
  if (!program) return kExitSyntax;
  lpa::Verdict verdict = lpa::verify(*program);
  if (!emit.empty()) write_file(emit, lpa::dump(lpa::trace_document(text, verdict)));
  if (trace) print_trace(lpa::trace_of(verdict));
  if (!quiet) std::cout << path << ": " << lpa::explain(verdict) << "\n";
  return lpa::accepted(verdict) ? 0 : 1;
}

int cmd_run(const std::string& path, bool monitor, const std::string& emit) {
  std::string text = read_file(path);
  lpa::ExprPtr program = load(path, text);
  if (!program) return kExitSyntax;
  auto mode = monitor ? lpa::MonitorMode::Checked : lpa::MonitorMode::Unchecked;
  lpa::RunResult result = lpa::run_traced(*program, mode);
  if (!emit.empty()) write_file(emit, lpa::dump(lpa::trace_document(text, result)));
  if (result.ok()) {
    std::cout << result.value->str() << "\n";
    return 0;
  }
  const lpa::RuntimeError& err = *result.error;
  std::string snippet = text.substr(err.span.offset, err.span.length);
  std::cerr << path << ":" << err.span.str() << ": " << lpa::runtime_error_name(err.kind) << " at `"
            << snippet << "`: " << err.message << "\n";
  return 1;
}

int cmd_fuzz(std::size_t count, std::uint64_t seed, int max_depth, unsigned threads,
             const std::string& out_dir, const std::string& corpus_dir) {
  lpa::DiffReport report;
  if (!corpus_dir.empty()) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(corpus_dir, ec)) {
      if (entry.path().extension() == ".lpa") files.push_back(entry.path());
    }
    if (ec) throw IoError{"cannot list " + corpus_dir};
    std::sort(files.begin(), files.end());
    std::vector<std::string> sources;
    for (const fs::path& f : files) sources.push_back(read_file(f.string()));
    report = lpa::differential_corpus(sources);
  } else {
    lpa::GenConfig cfg;
    cfg.seed = seed;
    cfg.max_depth = max_depth;
    report = lpa::differential(cfg, count, threads);
  }

  std::string json = lpa::to_json(report).dump(2) + "\n";
  if (out_dir.empty()) {
    std::cout << json;
  } else {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError{"cannot create " + out_dir};
    write_file(fs::path(out_dir) / "report.json", json);
    for (std::size_t i = 0; i < report.soundness_violations.size(); ++i) {
      fs::path p = fs::path(out_dir) / ("counterexample_" + std::to_string(i) + ".lpa");
      write_file(p, report.soundness_violations[i].shrunk + "\n");
      std::cerr << "counterexample: " << p.string() << "\n";
    }
  }
  std::cerr << "total " << report.total << ", accepted " << report.accepted << ", rejected "
            << report.rejected << ", soundness violations " << report.soundness_violations.size()
            << ", trace mismatches " << report.trace_mismatches.size() << "\n";
  return report.soundness_violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointer-aliasing verifier and runtime monitor"};
  app.require_subcommand(1);

  std::string path;
  std::string emit;
  bool trace = false;
  bool quiet = false;
  auto* verify = app.add_subcommand("verify", "Check a program against the aliasing logic");
  verify->add_option("path", path, "Source file (.lpa)")->required();
  verify->add_option("--emit-states", emit, "Write the proof trace as JSON");
  verify->add_flag("--trace", trace, "Print the symbolic state after each step");
  verify->add_flag("--quiet", quiet, "Print nothing; exit code only");

  bool monitor = false;
  auto* run = app.add_subcommand("run", "Execute a program");
  run->add_option("path", path, "Source file (.lpa)")->required();
  run->add_flag("--monitor", monitor, "Enforce capabilities while running");
  run->add_option("--emit-states", emit, "Write the state snapshots as JSON");

  std::size_t count = 1000;
  std::uint64_t seed = 0;
  int max_depth = lpa::GenConfig{}.max_depth;
  unsigned threads = 0;
  std::string out_dir;
  std::string corpus;
  auto* fuzz = app.add_subcommand("fuzz", "Differential test of verifier against monitor");
  fuzz->add_option("--count", count, "Number of generated programs")->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", seed, "Base seed");
  fuzz->add_option("--max-depth", max_depth, "Generator depth bound")->check(CLI::NonNegativeNumber);
  fuzz->add_option("--threads", threads, "Worker threads (0 = all cores)");
  fuzz->add_option("--out", out_dir, "Directory for report.json and counterexamples");
  fuzz->add_option("--corpus", corpus, "Replay the .lpa files in this directory instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return cmd_verify(path, emit, trace, quiet);
    if (*run) return cmd_run(path, monitor, emit);
    return cmd_fuzz(count, seed, max_depth, threads, out_dir, corpus);
  } catch (const IoError& err) {
    std::cerr << "error: " << err.message << "\n";
    return kExitIo;
  }
}
