#include <doctest.h>

#include <fstream>
#include <sstream>

#include "lpa/fuzz.hpp"
#include "lpa/monitor.hpp"

using namespace lpa;

namespace {

std::string sample(const std::string& name) {
  std::ifstream in(std::string(LPA_SOURCE_DIR) + "/samples/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<Fraction> cap_of(const ConcreteState& s, const std::string& name) {
  for (const auto& [tag, cap] : s.caps) {
    if (tag.name == name) return cap.frac;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("run: aliasing violation faults at the last write") {
  std::string text = sample("listing1.lpa");
  RunResult r = run(*parse(text));
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == RuntimeErrorKind::AliasViolation);
  CHECK(text.substr(r.error->span.offset, r.error->span.length) == "*y := 5");
}

TEST_CASE("run: the same program runs without checks") {
  RunResult r = run(*parse(sample("listing1.lpa")), MonitorMode::Unchecked);
  CHECK(r.ok());
  CHECK(r.final_state.heap.begin()->second == RuntimeValue{BigInt(5)});
}

TEST_CASE("run: shared reference listing") {
  RunResult r = run_traced(*parse(sample("shared_ref.lpa")));
  REQUIRE(r.ok());
  CHECK(r.final_state.heap.empty());
  // The write stored 43 just before the free.
  const Snapshot& before_free = r.snapshots[r.snapshots.size() - 2];
  REQUIRE(before_free.state.heap.size() == 1);
  CHECK(before_free.state.heap.begin()->second == RuntimeValue{BigInt(43)});
}

TEST_CASE("run: final value") {
  RunResult r = run(*parse("let x := new(7) in *x"));
  REQUIRE(r.ok());
  CHECK(*r.value == RuntimeValue{BigInt(7)});
  CHECK(*run(*parse("let x := new(7) in free(x)")).value == RuntimeValue{BigInt(0)});
}

TEST_CASE("run_traced: mutable listing capabilities") {
  RunResult r = run_traced(*parse(sample("mut_ref.lpa")));
  REQUIRE(r.ok());
  std::vector<std::optional<Fraction>> x;
  for (const Snapshot& s : r.snapshots) x.push_back(cap_of(s.state, "x"));
  REQUIRE(x.size() == 6);
  CHECK(x[0] == Fraction::one());
  CHECK_FALSE(x[1].has_value());  // lent out
  CHECK_FALSE(x[2].has_value());
  CHECK(x[3] == Fraction::one());  // forced end
  CHECK(x[4] == Fraction::one());
  CHECK_FALSE(x[5].has_value());  // freed
}

TEST_CASE("run_traced: program without effects") {
  RunResult r = run_traced(*parse("42"));
  REQUIRE(r.ok());
  REQUIRE(r.snapshots.size() == 1);
  CHECK(r.snapshots[0].state.heap.empty());
}

TEST_CASE("run: error kinds") {
  auto kind = [](const char* text) {
    RunResult r = run(*parse(text));
    REQUIRE_FALSE(r.ok());
    return r.error->kind;
  };
  CHECK(kind("let x := new(1) in free(x); free(x)") == RuntimeErrorKind::DoubleFree);
  CHECK(kind("let x := new(1) in free(x); *x") == RuntimeErrorKind::UseAfterEnd);
  CHECK(kind("let x := 5 in *x := 1") == RuntimeErrorKind::UnboundRef);
  CHECK(kind("let x := new(1) in let y := &*x in *y := 2") == RuntimeErrorKind::AliasViolation);
  CHECK(kind("let x := new(1) in let y := &mut *x in *x; *y") == RuntimeErrorKind::AliasViolation);
  // Unchecked mode still catches memory errors.
  CHECK(run(*parse("let x := new(1) in free(x); *x"), MonitorMode::Unchecked).error->kind ==
        RuntimeErrorKind::UseAfterEnd);
}

TEST_CASE("run: conservation after every snapshot of generated programs") {
  GenConfig cfg;
  std::size_t snapshots = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    cfg.seed = program_seed(17, i);
    RunResult r = run_traced(*gen_program(cfg));
    for (const Snapshot& s : r.snapshots) {
      ++snapshots;
      auto bad = conservation_violation(s.state);
      CHECK_MESSAGE(!bad, *bad);
    }
  }
  CHECK(snapshots > 1000);
}

TEST_CASE("run: deterministic") {
  GenConfig cfg;
  for (std::uint64_t i = 0; i < 50; ++i) {
    cfg.seed = program_seed(4, i);
    ExprPtr p = gen_program(cfg);
    RunResult a = run_traced(*p);
    RunResult b = run_traced(*p);
    CHECK(a.ok() == b.ok());
    CHECK(a.snapshots.size() == b.snapshots.size());
    if (a.ok()) CHECK(*a.value == *b.value);
  }
}
