#include <algorithm>
#include <sstream>

#include "lpa/logic.hpp"

namespace lpa {

std::string RefId::str() const { return name + "#" + std::to_string(generation); }

std::string SymValue::str() const {
  if (is_ref()) return "&" + as_ref().str();
  return as_int().str();
}

std::string to_string(const Chunk& c) {
  if (const auto* p = std::get_if<PointsTo>(&c)) {
    return p->ref.str() + " |->_" + p->frac.str() + " " + p->value.str();
  }
  const auto& r = std::get<RefEnd>(c);
  return "refend(" + r.borrower.str() + ", " + r.lender.str() + ", " + r.frac.str() + ")";
}

MissingResource::MissingResource(RefId ref, std::optional<Fraction> needed,
                                 std::optional<Fraction> held)
    : std::runtime_error("missing " + ref.str() + " |->_" + (needed ? needed->str() : "q") +
                         " (holds " + (held ? held->str() : "nothing") + ")"),
      ref_(std::move(ref)),
      needed_(std::move(needed)),
      held_(std::move(held)) {}

const PointsTo* SymState::points_to(const RefId& r) const {
  for (const Chunk& c : chunks) {
    if (const auto* p = std::get_if<PointsTo>(&c); p && p->ref == r) return p;
  }
  return nullptr;
}

PointsTo* SymState::points_to(const RefId& r) {
  for (Chunk& c : chunks) {
    if (auto* p = std::get_if<PointsTo>(&c); p && p->ref == r) return p;
  }
  return nullptr;
}

const RefEnd* SymState::ref_end(const RefId& borrower) const {
  for (const Chunk& c : chunks) {
    if (const auto* e = std::get_if<RefEnd>(&c); e && e->borrower == borrower) return e;
  }
  return nullptr;
}

std::optional<Fraction> SymState::fraction_of(const RefId& r) const {
  if (const PointsTo* p = points_to(r)) return p->frac;
  return std::nullopt;
}

RefId SymState::fresh_ref(std::string name) {
  return RefId{std::move(name), next_generation++};
}

CellId SymState::fresh_cell() {
  CellId c{next_cell++};
  live_cells.insert(c);
  return c;
}

void SymState::touch(const RefId& r) { last_use[r] = ++clock; }

std::size_t SymState::ref_end_count() const {
  return static_cast<std::size_t>(std::count_if(chunks.begin(), chunks.end(), [](const Chunk& c) {
    return std::holds_alternative<RefEnd>(c);
  }));
}

namespace {

bool chunk_less(const Chunk& a, const Chunk& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (const auto* p = std::get_if<PointsTo>(&a)) {
    const auto& q = std::get<PointsTo>(b);
    if (p->ref != q.ref) return p->ref < q.ref;
    if (p->frac != q.frac) return p->frac < q.frac;
    return p->value.str() < q.value.str();
  }
  const auto& x = std::get<RefEnd>(a);
  const auto& y = std::get<RefEnd>(b);
  if (x.borrower != y.borrower) return x.borrower < y.borrower;
  if (x.lender != y.lender) return x.lender < y.lender;
  return x.frac < y.frac;
}

}  // namespace

std::vector<Chunk> sorted_chunks(const SymState& s) {
  std::vector<Chunk> out = s.chunks;
  std::sort(out.begin(), out.end(), chunk_less);
  return out;
}

bool same_chunks(const SymState& a, const SymState& b) {
  return sorted_chunks(a) == sorted_chunks(b);
}

SymState state_merge_pointsto(SymState s) {
  std::vector<Chunk> merged;
  merged.reserve(s.chunks.size());
  for (Chunk& c : s.chunks) {
    auto* p = std::get_if<PointsTo>(&c);
    if (p == nullptr) {
      merged.push_back(std::move(c));
      continue;
    }
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Chunk& m) {
      const auto* q = std::get_if<PointsTo>(&m);
      return q && q->ref == p->ref;
    });
    if (it == merged.end()) {
      merged.push_back(std::move(c));
      continue;
    }
    auto& into = std::get<PointsTo>(*it);
    if (!(into.value == p->value)) {
      throw ValueMismatch("chunks for " + p->ref.str() + " disagree: " + into.value.str() +
                          " vs " + p->value.str());
    }
    into.frac = frac_add(into.frac, p->frac);
  }
  s.chunks = std::move(merged);
  return s;
}

bool entails(const SymState& s, std::span<const Chunk> goal) {
  std::map<RefId, Fraction> wanted;
  std::vector<const RefEnd*> ends;
  for (const Chunk& g : goal) {
    if (const auto* p = std::get_if<PointsTo>(&g)) {
      const PointsTo* have = s.points_to(p->ref);
      if (have == nullptr || !(have->value == p->value)) return false;
      auto [it, fresh] = wanted.try_emplace(p->ref, p->frac);
      if (!fresh) {
        try {
          it->second = frac_add(it->second, p->frac);
        } catch (const FractionOverflow&) {
          return false;
        }
      }
    } else {
      ends.push_back(&std::get<RefEnd>(g));
    }
  }
  for (const auto& [ref, frac] : wanted) {
    if (*s.fraction_of(ref) < frac) return false;
  }
  std::vector<bool> used(s.chunks.size(), false);
  for (const RefEnd* e : ends) {
    bool found = false;
    for (std::size_t i = 0; i < s.chunks.size() && !found; ++i) {
      const auto* have = std::get_if<RefEnd>(&s.chunks[i]);
      if (!used[i] && have && *have == *e) used[i] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

RefId allocate(SymState& s, SymValue init, std::string name) {
  RefId r = s.fresh_ref(std::move(name));
  s.lineage[r] = s.fresh_cell();
  s.chunks.push_back(PointsTo{r, Fraction::one(), std::move(init)});
  return r;
}

void deallocate(SymState& s, const RefId& r) {
  const PointsTo* p = s.points_to(r);
  if (p == nullptr || !p->frac.is_one()) {
    throw MissingResource(r, Fraction::one(), p ? std::optional(p->frac) : std::nullopt);
  }
  std::erase_if(s.chunks, [&](const Chunk& c) {
    const auto* q = std::get_if<PointsTo>(&c);
    return q && q->ref == r;
  });
  s.live_cells.erase(s.lineage.at(r));
  s.touch(r);
}

RefId mutable_borrow(SymState& s, const RefId& lender, std::string name) {
  PointsTo* p = s.points_to(lender);
  if (p == nullptr || !p->frac.is_one()) {
    throw MissingResource(lender, Fraction::one(), p ? std::optional(p->frac) : std::nullopt);
  }
  SymValue v = p->value;
  std::erase_if(s.chunks, [&](const Chunk& c) {
    const auto* q = std::get_if<PointsTo>(&c);
    return q && q->ref == lender;
  });
  RefId r = s.fresh_ref(std::move(name));
  s.lineage[r] = s.lineage.at(lender);
  s.chunks.push_back(PointsTo{r, Fraction::one(), std::move(v)});
  s.chunks.push_back(RefEnd{r, lender, Fraction::one()});
  s.touch(lender);
  return r;
}

RefId shared_borrow(SymState& s, const RefId& lender, std::string name) {
  PointsTo* p = s.points_to(lender);
  if (p == nullptr) throw MissingResource(lender, std::nullopt, std::nullopt);
  Fraction half = frac_half(p->frac);
  p->frac = half;
  SymValue v = p->value;
  RefId r = s.fresh_ref(std::move(name));
  s.lineage[r] = s.lineage.at(lender);
  s.chunks.push_back(PointsTo{r, half, std::move(v)});
  s.chunks.push_back(RefEnd{r, lender, half});
  s.touch(lender);
  return r;
}

std::optional<std::string> conservation_violation(const SymState& s) {
  std::map<CellId, std::vector<const PointsTo*>> by_cell;
  for (const Chunk& c : s.chunks) {
    const auto* p = std::get_if<PointsTo>(&c);
    if (p == nullptr) continue;
    auto it = s.lineage.find(p->ref);
    if (it == s.lineage.end()) return "no lineage for " + p->ref.str();
    if (!s.live_cells.contains(it->second)) {
      return to_string(c) + " refers to retired cell " + std::to_string(it->second.value);
    }
    by_cell[it->second].push_back(p);
  }
  for (CellId cell : s.live_cells) {
    auto it = by_cell.find(cell);
    if (it == by_cell.end()) return "cell " + std::to_string(cell.value) + " has no owner";
    const std::vector<const PointsTo*>& owners = it->second;
    std::optional<Fraction> sum;
    try {
      for (const PointsTo* p : owners) {
        if (!(p->value == owners.front()->value)) {
          return "cell " + std::to_string(cell.value) + " seen with two values";
        }
        sum = sum ? frac_add(*sum, p->frac) : p->frac;
      }
    } catch (const FractionOverflow&) {
      return "cell " + std::to_string(cell.value) + " is over-owned";
    }
    if (!sum->is_one()) {
      return "cell " + std::to_string(cell.value) + " owned to " + sum->str() + ", not 1";
    }
  }
  return std::nullopt;
}

}  // namespace lpa
