#include "warrantscore/corpus.hpp"

#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "warrantscore/errors.hpp"
#include "warrantscore/json_codec.hpp"
#include "warrantscore/prompts.hpp"
#include "warrantscore/validate.hpp"

namespace warrantscore::corpus {

LoadResult load_corpus(const std::filesystem::path& path, std::string_view format) {
    if (format != "jsonl") throw DataError("unknown corpus format: " + std::string(format));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read corpus: " + path.string());

    LoadResult result;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    long line_no = 0;
    long non_empty = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++non_empty;
        Review review;
        try {
            review = parse_review(line);
        } catch (const DataError& e) {
            result.diagnostics.push_back({line_no, e.what()});
            continue;
        }
        const auto violations = validate_review(review);
        if (!violations.empty()) {
            result.diagnostics.push_back({line_no, violations.front().message});
            continue;
        }
        if (!seen_ids.insert(review.id).second) {
            throw DataError("duplicate review id: " + review.id);
        }
        result.reviews.push_back(std::move(review));
    }
    if (non_empty == 0) throw DataError("empty corpus: " + path.string());
    if (static_cast<long>(result.diagnostics.size()) * 2 > non_empty) {
        throw DataError("corrupt corpus: " + std::to_string(result.diagnostics.size()) + " of " +
                        std::to_string(non_empty) + " lines invalid");
    }
    return result;
}

DedupResult dedup_reviews(const std::vector<Review>& reviews) {
    DedupResult result;
    std::unordered_map<std::string, std::size_t> first_by_text;
    for (const Review& review : reviews) {
        const auto it = first_by_text.find(review.text);
        if (it == first_by_text.end()) {
            first_by_text.emplace(review.text, result.reviews.size());
            result.reviews.push_back(review);
            continue;
        }
        Review& kept = result.reviews[it->second];
        for (const auto& [aspect, scores] : review.human_scores) {
            auto& merged = kept.human_scores[aspect];
            merged.insert(merged.end(), scores.begin(), scores.end());
        }
        if (review.sufficiency != kept.sufficiency) {
            result.diagnostics.push_back("conflicting sufficiency labels while merging '" +
                                         review.id + "' into '" + kept.id + "'");
        }
    }
    return result;
}

Review build_elongated(const Review& review, gateway::Gateway& gw,
                       const gateway::BackendProfile& summarizer) {
    if (review.variant != Variant::original) {
        throw DataError("review " + review.id + " is already elongated");
    }
    const std::string prompt =
        pipeline::render(pipeline::default_summary_prompt(), {{"review", review.text}});
    std::string summary;
    try {
        summary = gw.chat_complete(summarizer, prompt);
    } catch (const Error& e) {
        throw DataError("elongation failed for review " + review.id + ": " + e.what());
    }
    if (summary.empty()) {
        throw DataError("elongation failed for review " + review.id + ": empty summary");
    }

    Review elongated = review;
    elongated.id = review.id + std::string(kElongatedIdSuffix);
    elongated.variant = Variant::elongated;
    elongated.text = review.text + std::string(kElongationSeparator) + summary;
    return elongated;
}

} // namespace warrantscore::corpus
