#pragma once

#include <string>
#include <vector>

#include "warrantscore/types.hpp"

namespace warrantscore {

// One invariant violation. Violations are data, not failures: validation
// never throws, callers decide what to do with the list.
struct Violation {
    std::string code;
    std::string message;
    int claim_index = -1; // -1 when review-level

    bool operator==(const Violation&) const = default;
};

// Review-internal invariants: non-empty id/text, positive annotator scores,
// claim indices in order, non-empty claim/evidence texts, span bounds, and
// text[claim_span) == claim_text.
std::vector<Violation> validate_review(const Review& review);

// Adds cross checks against a warrant sidecar: alignment by claim_index and
// the evidence-absent-but-warrant-present rule.
std::vector<Violation> validate_review(const Review& review,
                                       const std::vector<WarrantRecord>& warrants);

inline bool is_valid(const std::vector<Violation>& vs) { return vs.empty(); }

} // namespace warrantscore
