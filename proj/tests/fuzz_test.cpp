#include <doctest.h>

#include <fstream>
#include <sstream>

#include "lpa/fuzz.hpp"
#include "lpa/verifier.hpp"

using namespace lpa;

namespace {

std::string sample(const std::string& name) {
  std::ifstream in(std::string(LPA_SOURCE_DIR) + "/samples/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool report_equal(const DiffReport& a, const DiffReport& b) {
  return to_json(a) == to_json(b);
}

}  // namespace

TEST_CASE("gen: depth zero is a literal") {
  GenConfig cfg;
  cfg.max_depth = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfg.seed = s;
    CHECK(gen_program(cfg)->is<ast::IntLit>());
  }
}

TEST_CASE("gen: programs are closed and reproducible") {
  GenConfig cfg;
  for (std::uint64_t s = 0; s < 500; ++s) {
    cfg.seed = s;
    ExprPtr a = gen_program(cfg);
    CHECK(is_closed(*a));
    CHECK(same_tree(*a, *gen_program(cfg)));
    CHECK(same_tree(*parse(pretty(*a)), *a));
  }
}

TEST_CASE("gen: a healthy share of programs borrow") {
  GenConfig cfg;
  int borrowing = 0;
  for (std::uint64_t s = 1; s <= 1000; ++s) {
    cfg.seed = s;
    borrowing += contains_borrow(*gen_program(cfg));
  }
  CHECK(borrowing >= 300);
  CHECK(borrowing >= 550);  // regression bound for the default weights
}

TEST_CASE("gen: config validation") {
  GenConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.weights[NodeKind::Let] = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GenConfig{};
  cfg.weights[NodeKind::New] = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GenConfig{};
  cfg.max_depth = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("differential: no disagreements on 1000 programs") {
  GenConfig cfg;
  cfg.seed = 7;
  DiffReport r = differential(cfg, 1000);
  CHECK(r.total == 1000);
  CHECK(r.accepted + r.rejected == 1000);
  CHECK(r.accepted > 0);
  CHECK(r.rejected > 0);
  CHECK(r.soundness_violations.empty());
  CHECK(r.trace_mismatches.empty());
}

TEST_CASE("differential: report does not depend on thread count") {
  GenConfig cfg;
  cfg.seed = 99;
  DiffReport one = differential(cfg, 200, 1);
  CHECK(report_equal(one, differential(cfg, 200, 3)));
  CHECK(report_equal(one, differential(cfg, 200, 8)));
}

TEST_CASE("differential: single program") {
  GenConfig cfg;
  cfg.max_depth = 0;
  DiffReport r = differential(cfg, 1, 1);
  CHECK(r.total == 1);
  CHECK(r.accepted == 1);
}

TEST_CASE("differential: corpus replay") {
  DiffReport r = differential_corpus({sample("listing1.lpa"), sample("mut_ref.lpa"), sample("shared_ref.lpa")});
  CHECK(r.total == 3);
  CHECK(r.accepted == 2);
  CHECK(r.rejected == 1);
  CHECK(r.soundness_violations.empty());
  CHECK(r.trace_mismatches.empty());
}

TEST_CASE("differential: report merge is associative") {
  GenConfig cfg;
  DiffReport a = differential(cfg, 30, 1);
  cfg.seed = 1;
  DiffReport b = differential(cfg, 30, 1);
  cfg.seed = 2;
  DiffReport c = differential(cfg, 30, 1);
  DiffReport left = a;
  left += b;
  left += c;
  DiffReport bc = b;
  bc += c;
  DiffReport right = a;
  right += bc;
  CHECK(report_equal(left, right));
  CHECK(left.total == 90);
}

TEST_CASE("shrink: greedy reduction under a synthetic predicate") {
  ExprPtr p = parse("let a := new(1) in let b := 5 in (*a; free(a)); b; 9");
  auto has_free = [](const Expr& e) { return pretty(e).find("free") != std::string::npos; };
  ExprPtr s = shrink(p, has_free);
  CHECK(has_free(*s));
  CHECK(is_closed(*s));
  CHECK(tree_size(*s) < tree_size(*p));
  CHECK(pretty(*s) == "free(new(1))");
}

TEST_CASE("shrink: result keeps failing and never grows") {
  GenConfig cfg;
  for (std::uint64_t i = 0; i < 100; ++i) {
    cfg.seed = program_seed(5, i);
    ExprPtr p = gen_program(cfg);
    auto rejected = [](const Expr& e) { return !accepted(verify(e)); };
    if (!rejected(*p)) continue;
    ExprPtr s = shrink(p, rejected);
    CHECK(rejected(*s));
    CHECK(is_closed(*s));
    CHECK(tree_size(*s) <= tree_size(*p));
  }
}

TEST_CASE("substitute respects shadowing") {
  ExprPtr body = parse("x; let x := 2 in x; x");
  ExprPtr out = substitute(body, "x", int_lit(7));
  CHECK(pretty(*out) == "7; let x := 2 in x; x");
  ExprPtr bound = parse("let y := x in x");
  CHECK(pretty(*substitute(bound, "x", int_lit(1))) == "let y := 1 in 1");
}
