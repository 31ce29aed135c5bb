#include "warrantscore/metrics.hpp"

#include "warrantscore/errors.hpp"
#include "warrantscore/text_stats.hpp"

namespace warrantscore::metrics {

int support_score(const ClaimUnit& claim) { return claim.evidence ? 1 : 0; }

RateResult supported_claims(const Review& review) {
    if (review.claims.empty()) return {0.0, true};
    double sum = 0.0;
    for (const ClaimUnit& claim : review.claims) sum += support_score(claim);
    return {sum / static_cast<double>(review.claims.size()), false};
}

RateResult substan_score(const Review& review) {
    RateResult rate = supported_claims(review);
    rate.value *= static_cast<double>(text::word_count(review.text));
    return rate;
}

namespace {

void check_alignment(const Review& review, const std::vector<WarrantRecord>& warrants) {
    if (warrants.size() != review.claims.size()) throw DataError("warrant/claim mismatch");
    for (std::size_t i = 0; i < warrants.size(); ++i) {
        if (warrants[i].claim_index != static_cast<int>(i) ||
            (!warrants[i].review_id.empty() && warrants[i].review_id != review.id)) {
            throw DataError("warrant/claim mismatch");
        }
    }
}

} // namespace

RateResult warrant_rate(const Review& review, const std::vector<WarrantRecord>& warrants) {
    check_alignment(review, warrants);
    if (review.claims.empty()) return {0.0, true};
    double sum = 0.0;
    for (std::size_t i = 0; i < review.claims.size(); ++i) {
        sum += warrants[i].value_V * support_score(review.claims[i]);
    }
    return {sum / static_cast<double>(review.claims.size()), false};
}

RateResult warrant_score(const Review& review, const std::vector<WarrantRecord>& warrants) {
    RateResult rate = warrant_rate(review, warrants);
    rate.value *= static_cast<double>(text::word_count(review.text));
    return rate;
}

RateResult coherence_rate(const Review& review,
                          const std::vector<std::optional<double>>& similarities) {
    if (similarities.size() != review.claims.size()) {
        throw DataError("similarity/claim mismatch");
    }
    if (review.claims.empty()) return {0.0, true};
    double sum = 0.0;
    for (std::size_t i = 0; i < review.claims.size(); ++i) {
        if (!review.claims[i].evidence) continue;
        if (!similarities[i]) {
            throw DataError("missing similarity for evidenced claim " + std::to_string(i) +
                            " of review " + review.id);
        }
        sum += *similarities[i];
    }
    return {sum / static_cast<double>(review.claims.size()), false};
}

RateResult coherence_score(const Review& review,
                           const std::vector<std::optional<double>>& similarities) {
    RateResult rate = coherence_rate(review, similarities);
    rate.value *= static_cast<double>(text::word_count(review.text));
    return rate;
}

MetricReport compute_report(const Review& review, const std::vector<WarrantRecord>& warrants,
                            const std::vector<std::optional<double>>* similarities) {
    MetricReport report;
    report.review_id = review.id;
    report.review_len = text::word_count(review.text);
    report.fre = text::flesch_reading_ease(review.text);
    report.ttr = text::type_token_ratio(review.text);

    const RateResult supported = supported_claims(review);
    report.supported_claims = supported.value;
    report.substan_score = substan_score(review).value;
    report.flags.no_claims = supported.no_claims;

    report.warrant_rate = warrant_rate(review, warrants).value;
    report.warrant_score = warrant_score(review, warrants).value;
    for (const WarrantRecord& rec : warrants) {
        if (rec.fallback == Fallback::judge_parse_failure) ++report.flags.judge_fallbacks;
    }

    if (similarities) {
        report.coherence_rate = coherence_rate(review, *similarities).value;
        report.coherence_score = coherence_score(review, *similarities).value;
    } else {
        report.flags.no_embeddings = true;
    }
    return report;
}

} // namespace warrantscore::metrics
