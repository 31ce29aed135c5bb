#include "warrantscore/validate.hpp"

#include "warrantscore/utf8.hpp"

namespace warrantscore {

namespace {

void check_span(const std::optional<Span>& span, std::size_t text_len,
                const std::string& what, int claim_index,
                std::vector<Violation>& out) {
    if (!span) return;
    if (span->start >= span->end) {
        out.push_back({"span_order", what + " span start >= end", claim_index});
        return;
    }
    if (span->end > text_len) {
        out.push_back({"span_bounds", what + " span out of bounds", claim_index});
    }
}

} // namespace

std::vector<Violation> validate_review(const Review& review) {
    std::vector<Violation> out;
    if (review.id.empty()) out.push_back({"empty_id", "review id is empty", -1});
    if (review.text.empty()) out.push_back({"empty_text", "review text is empty", -1});

    for (const auto& [aspect, scores] : review.human_scores) {
        for (int s : scores) {
            if (s <= 0) {
                out.push_back({"nonpositive_score",
                               "aspect '" + aspect + "' has a non-positive annotator score", -1});
                break;
            }
        }
    }

    const std::size_t text_len = utf8::length(review.text);
    for (std::size_t i = 0; i < review.claims.size(); ++i) {
        const ClaimUnit& claim = review.claims[i];
        const int idx = static_cast<int>(i);
        if (claim.index != idx) {
            out.push_back({"claim_index", "claim index does not match position", idx});
        }
        if (claim.claim_text.empty()) {
            out.push_back({"empty_claim", "claim text is empty", idx});
        }
        check_span(claim.claim_span, text_len, "claim", idx, out);
        if (claim.claim_span && claim.claim_span->start < claim.claim_span->end &&
            claim.claim_span->end <= text_len) {
            const std::string sliced =
                utf8::substr(review.text, claim.claim_span->start,
                             claim.claim_span->end - claim.claim_span->start);
            if (sliced != claim.claim_text) {
                out.push_back({"span_text_mismatch",
                               "text[claim_span) does not equal claim_text", idx});
            }
        }
        if (claim.evidence) {
            if (claim.evidence->evidence_text.empty()) {
                out.push_back({"empty_evidence", "evidence text is empty", idx});
            }
            check_span(claim.evidence->evidence_span, text_len, "evidence", idx, out);
        }
    }
    return out;
}

std::vector<Violation> validate_review(const Review& review,
                                       const std::vector<WarrantRecord>& warrants) {
    std::vector<Violation> out = validate_review(review);

    if (warrants.size() != review.claims.size()) {
        out.push_back({"warrant_alignment", "warrant/claim mismatch", -1});
        return out;
    }
    for (std::size_t i = 0; i < warrants.size(); ++i) {
        const WarrantRecord& rec = warrants[i];
        const int idx = static_cast<int>(i);
        if (rec.claim_index != idx ||
            (!rec.review_id.empty() && rec.review_id != review.id)) {
            out.push_back({"warrant_alignment", "warrant/claim mismatch", idx});
            continue;
        }
        if (!review.claims[i].evidence && rec.warrant_text) {
            out.push_back({"warrant_without_evidence",
                           "warrant present for a claim without evidence", idx});
        }
        if (rec.attempts.size() > 3) {
            out.push_back({"attempt_overflow", "more than 3 acceptability attempts", idx});
        }
    }
    return out;
}

} // namespace warrantscore
