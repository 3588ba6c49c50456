#include <algorithm>

#include "lpa/logic.hpp"

namespace lpa {

SymState apply_reference_end(SymState s, const RefId& borrower) {
  auto end_it = std::find_if(s.chunks.begin(), s.chunks.end(), [&](const Chunk& c) {
    const auto* e = std::get_if<RefEnd>(&c);
    return e && e->borrower == borrower;
  });
  if (end_it == s.chunks.end()) {
    throw ShiftError(ShiftError::Kind::MissingRefEnd, "no refend resource for " + borrower.str());
  }
  RefEnd end = std::get<RefEnd>(*end_it);

  PointsTo* held = s.points_to(borrower);
  if (held == nullptr || held->frac < end.frac) {
    throw ShiftError(ShiftError::Kind::InsufficientFraction,
                     borrower.str() + " holds " + (held ? held->frac.str() : "nothing") +
                         " but ending it returns " + end.frac.str());
  }
  SymValue value = held->value;
  if (std::optional<Fraction> rest = frac_sub(held->frac, end.frac)) {
    held->frac = *rest;
  } else {
    std::erase_if(s.chunks, [&](const Chunk& c) {
      const auto* p = std::get_if<PointsTo>(&c);
      return p && p->ref == borrower;
    });
  }
  std::erase_if(s.chunks, [&](const Chunk& c) {
    const auto* e = std::get_if<RefEnd>(&c);
    return e && e->borrower == borrower;
  });
  s.chunks.push_back(PointsTo{end.lender, end.frac, std::move(value)});
  return state_merge_pointsto(std::move(s));
}

namespace {

bool satisfied(const SymState& s, const RefId& lender, const Demand& needed) {
  std::optional<Fraction> held = s.fraction_of(lender);
  if (!held) return false;
  return !needed || *held >= *needed;
}

std::vector<RefEnd> end_order(const SymState& s, const RefId& lender) {
  std::vector<RefEnd> out;
  for (const Chunk& c : s.chunks) {
    if (const auto* e = std::get_if<RefEnd>(&c); e && e->lender == lender) out.push_back(*e);
  }
  auto key = [&](const RefEnd& e) {
    auto it = s.last_use.find(e.borrower);
    return it == s.last_use.end() ? std::optional<std::uint64_t>{} : std::optional(it->second);
  };
  std::stable_sort(out.begin(), out.end(), [&](const RefEnd& a, const RefEnd& b) {
    auto ka = key(a);
    auto kb = key(b);
    if (ka != kb) return !ka || (kb && *ka < *kb);
    return a.borrower.generation > b.borrower.generation;
  });
  return out;
}

// Ends one borrower, first recovering whatever its own borrowers hold.
void end_one(Saturation& sat, const RefEnd& end) {
  if (!satisfied(sat.state, end.borrower, end.frac)) {
    Saturation inner = saturate_end_traced(sat.state, end.borrower, end.frac);
    sat.state = std::move(inner.state);
    for (auto& step : inner.steps) sat.steps.push_back(std::move(step));
  }
  sat.state = apply_reference_end(std::move(sat.state), end.borrower);
  sat.steps.push_back({Shift{end.borrower, end.lender, end.frac}, sat.state});
}

}  // namespace

Saturation saturate_end_traced(SymState s, const RefId& lender, const Demand& needed) {
  Saturation sat{std::move(s), {}};
  if (satisfied(sat.state, lender, needed)) return sat;
  for (const RefEnd& end : end_order(sat.state, lender)) {
    Saturation trial = sat;
    try {
      end_one(trial, end);
    } catch (const ShiftError&) {
      continue;
    }
    sat = std::move(trial);
    if (satisfied(sat.state, lender, needed)) return sat;
  }
  std::optional<Fraction> held = sat.state.fraction_of(lender);
  throw ShiftError(ShiftError::Kind::Unrecoverable,
                   "cannot recover " + (needed ? needed->str() : std::string("any fraction")) +
                       " for " + lender.str() + " (holds " +
                       (held ? held->str() : std::string("nothing")) + ")");
}

SymState saturate_end(SymState s, const RefId& lender, const Fraction& needed) {
  return saturate_end_traced(std::move(s), lender, needed).state;
}

}  // namespace lpa
