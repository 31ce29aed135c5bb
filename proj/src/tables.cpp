#include "warrantscore/tables.hpp"

#include <unordered_map>

#include "warrantscore/errors.hpp"

namespace warrantscore::stats {

const std::vector<std::string>& metric_order() {
    static const std::vector<std::string> order = {
        "review_len",     "fre",           "ttr",
        "supported_claims", "coherence_rate", "warrant_rate",
        "substan_score",  "coherence_score", "warrant_score",
    };
    return order;
}

double metric_value(const MetricReport& report, const std::string& metric) {
    if (metric == "review_len") return static_cast<double>(report.review_len);
    if (metric == "fre") return report.fre;
    if (metric == "ttr") return report.ttr;
    if (metric == "supported_claims") return report.supported_claims;
    if (metric == "coherence_rate") return report.coherence_rate;
    if (metric == "warrant_rate") return report.warrant_rate;
    if (metric == "substan_score") return report.substan_score;
    if (metric == "coherence_score") return report.coherence_score;
    if (metric == "warrant_score") return report.warrant_score;
    throw DataError("unknown metric: " + metric);
}

namespace {

std::unordered_map<std::string, const MetricReport*> index_reports(
    const std::vector<MetricReport>& reports) {
    std::unordered_map<std::string, const MetricReport*> by_id;
    for (const MetricReport& report : reports) by_id[report.review_id] = &report;
    return by_id;
}

} // namespace

std::vector<CorrelationCell> correlation_table(const std::vector<MetricReport>& reports,
                                               const std::vector<Review>& reviews,
                                               const std::string& aspect) {
    const auto by_id = index_reports(reports);

    std::vector<const MetricReport*> matched;
    std::vector<double> human;
    std::string missing;
    for (const Review& review : reviews) {
        const auto rep = by_id.find(review.id);
        if (rep == by_id.end()) continue; // review not scored; skip
        const auto scores = review.human_scores.find(aspect);
        if (scores == review.human_scores.end() || scores->second.empty()) {
            missing += missing.empty() ? review.id : ", " + review.id;
            continue;
        }
        matched.push_back(rep->second);
        human.push_back(static_cast<double>(aggregate_max(scores->second)));
    }
    if (!missing.empty()) {
        throw DataError("reviews missing aspect '" + aspect + "': " + missing);
    }
    if (matched.empty()) throw DataError("no reviews matched any metric report");

    std::vector<CorrelationCell> table;
    for (const std::string& metric : metric_order()) {
        CorrelationCell cell;
        cell.metric = metric;
        std::vector<double> column;
        column.reserve(matched.size());
        for (const MetricReport* report : matched) {
            column.push_back(metric_value(*report, metric));
        }
        try {
            cell.rho = spearman(column, human);
        } catch (const DataError& e) {
            cell.note = e.what(); // undefined cell, table survives
        }
        table.push_back(std::move(cell));
    }
    return table;
}

std::vector<GroupComparison> sufficiency_comparison(const std::vector<MetricReport>& reports,
                                                    const std::vector<Review>& reviews) {
    const auto by_id = index_reports(reports);

    std::vector<const MetricReport*> sufficient;
    std::vector<const MetricReport*> deficient;
    std::string unlabeled;
    for (const Review& review : reviews) {
        const auto rep = by_id.find(review.id);
        if (rep == by_id.end()) continue;
        if (!review.sufficiency) {
            unlabeled += unlabeled.empty() ? review.id : ", " + review.id;
            continue;
        }
        (*review.sufficiency == Sufficiency::sufficient ? sufficient : deficient)
            .push_back(rep->second);
    }
    if (!unlabeled.empty()) throw DataError("reviews missing sufficiency labels: " + unlabeled);
    if (sufficient.size() < 2 || deficient.size() < 2) {
        throw DataError("each sufficiency group needs at least 2 scored reviews");
    }

    std::vector<GroupComparison> table;
    for (const std::string& metric : metric_order()) {
        GroupComparison row;
        row.metric = metric;
        row.group_a = "sufficient";
        row.group_b = "deficient";
        row.kind = "independent_one_sided";
        std::vector<double> a;
        std::vector<double> b;
        for (const MetricReport* r : sufficient) a.push_back(metric_value(*r, metric));
        for (const MetricReport* r : deficient) b.push_back(metric_value(*r, metric));
        row.n_a = static_cast<long>(a.size());
        row.n_b = static_cast<long>(b.size());
        double sum_a = 0.0;
        double sum_b = 0.0;
        for (double x : a) sum_a += x;
        for (double x : b) sum_b += x;
        row.mean_a = sum_a / static_cast<double>(a.size());
        row.mean_b = sum_b / static_cast<double>(b.size());
        try {
            const TTestResult test = t_test_independent_one_sided(a, b);
            row.t = test.t;
            row.p = test.p;
            row.d = cohens_d(a, b, EffectKind::independent);
        } catch (const DataError& e) {
            row.note = e.what();
        }
        table.push_back(std::move(row));
    }
    return table;
}

std::vector<GroupComparison> paired_comparison(
    const std::vector<MetricReport>& original_reports,
    const std::vector<MetricReport>& elongated_reports,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    const auto original_by_id = index_reports(original_reports);
    const auto elongated_by_id = index_reports(elongated_reports);

    std::vector<const MetricReport*> original;
    std::vector<const MetricReport*> elongated;
    std::string unpaired;
    for (const auto& [orig_id, elong_id] : pairs) {
        const auto o = original_by_id.find(orig_id);
        const auto e = elongated_by_id.find(elong_id);
        if (o == original_by_id.end() || e == elongated_by_id.end()) {
            const std::string& missing = o == original_by_id.end() ? orig_id : elong_id;
            unpaired += unpaired.empty() ? missing : ", " + missing;
            continue;
        }
        original.push_back(o->second);
        elongated.push_back(e->second);
    }
    if (!unpaired.empty()) throw DataError("unpaired reviews: " + unpaired);
    if (original.size() < 2) throw DataError("need at least 2 pairs");

    std::vector<GroupComparison> table;
    for (const std::string& metric : metric_order()) {
        GroupComparison row;
        row.metric = metric;
        row.group_a = "original";
        row.group_b = "elongated";
        row.kind = "paired_two_sided";
        std::vector<double> a;
        std::vector<double> b;
        for (const MetricReport* r : original) a.push_back(metric_value(*r, metric));
        for (const MetricReport* r : elongated) b.push_back(metric_value(*r, metric));
        row.n_a = static_cast<long>(a.size());
        row.n_b = static_cast<long>(b.size());
        double sum_a = 0.0;
        double sum_b = 0.0;
        for (double x : a) sum_a += x;
        for (double x : b) sum_b += x;
        row.mean_a = sum_a / static_cast<double>(a.size());
        row.mean_b = sum_b / static_cast<double>(b.size());
        try {
            const TTestResult test = t_test_paired(a, b);
            row.t = test.t;
            row.p = test.p;
            row.d = cohens_d(a, b, EffectKind::paired); // original - elongated
        } catch (const DataError& e) {
            row.note = e.what();
        }
        table.push_back(std::move(row));
    }
    return table;
}

} // namespace warrantscore::stats
