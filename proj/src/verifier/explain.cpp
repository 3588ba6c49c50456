#include <sstream>

#include "lpa/verifier.hpp"

namespace lpa {

std::string explain(const Verdict& verdict) {
  std::ostringstream out;
  if (const auto* a = std::get_if<Accepted>(&verdict)) {
    if (a->leak_warnings.empty()) {
      out << "verified; final state empty";
      return out.str();
    }
    std::size_t n = a->leak_warnings.size();
    out << "verified; " << n << " leaked resource" << (n == 1 ? "" : "s");
    for (const Chunk& c : a->leak_warnings) out << "\n  leaked: " << to_string(c);
    return out.str();
  }

  const Rejection& r = std::get<Rejected>(verdict).rejection;
  out << "rejected at " << r.at.str() << ": `" << r.construct << "`: " << reject_reason_name(r.reason);
  out << "\n  missing: " << r.missing;
  if (r.ended_by) {
    out << "\n  " << r.ref->name << "'s borrow was ended by the " << r.ended_by->operation
        << " through " << r.ended_by->through.name << " at " << r.ended_by->at.str();
  }
  out << "\n  shifts attempted: ";
  if (r.attempted.empty()) {
    out << "none available";
  } else {
    for (std::size_t i = 0; i < r.attempted.size(); ++i) {
      const Shift& s = r.attempted[i];
      out << (i ? ", " : "") << "end " << s.borrower.str() << " -> " << s.lender.str() << " ("
          << s.frac.str() << ")";
    }
  }
  return out.str();
}

}  // namespace lpa
