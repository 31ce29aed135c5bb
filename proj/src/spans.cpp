#include "warrantscore/spans.hpp"

#include <map>
#include <set>

#include "warrantscore/errors.hpp"
#include "warrantscore/text_stats.hpp"
#include "warrantscore/utf8.hpp"

namespace warrantscore::spans {

BioTag bio_tag_from_string(const std::string& s) {
    if (s == "B") return BioTag::B;
    if (s == "I") return BioTag::I;
    if (s == "O") return BioTag::O;
    throw DataError("unknown BIO tag: " + s);
}

std::string to_string(BioTag tag) {
    switch (tag) {
        case BioTag::B: return "B";
        case BioTag::I: return "I";
        case BioTag::O: return "O";
    }
    return "O";
}

DecodedSpans decode_bio(const BioTagSequence& seq) {
    if (seq.tokens.size() != seq.tags.size() || seq.tokens.size() != seq.offsets.size()) {
        throw DataError("tokens, tags and offsets must have equal lengths");
    }
    for (std::size_t i = 0; i + 1 < seq.offsets.size(); ++i) {
        if (seq.offsets[i] >= seq.offsets[i + 1]) {
            throw DataError("token offsets must be strictly increasing");
        }
    }
    if (seq.text_length && !seq.offsets.empty()) {
        const std::size_t last = seq.offsets.size() - 1;
        if (seq.offsets[last] + utf8::length(seq.tokens[last]) > *seq.text_length) {
            throw DataError("token offsets out of bounds");
        }
    }

    DecodedSpans result;
    std::optional<std::size_t> run_start; // index of the B token of the live run
    std::size_t run_end = 0;              // index of the last token in the run
    const auto close_run = [&]() {
        if (!run_start) return;
        result.spans.push_back({seq.offsets[*run_start],
                                seq.offsets[run_end] + utf8::length(seq.tokens[run_end])});
        run_start.reset();
    };
    for (std::size_t i = 0; i < seq.tags.size(); ++i) {
        switch (seq.tags[i]) {
            case BioTag::B:
                close_run();
                run_start = i;
                run_end = i;
                break;
            case BioTag::I:
                if (run_start) {
                    run_end = i;
                } else {
                    ++result.dropped_orphans; // I with no preceding B starts nothing
                }
                break;
            case BioTag::O:
                close_run();
                break;
        }
    }
    close_run();
    return result;
}

Span trim_span(std::string_view text, Span span) {
    const std::u32string cps = utf8::decode(text);
    std::size_t start = span.start;
    std::size_t end = std::min(span.end, cps.size());
    const auto trimmable = [&](std::size_t i) {
        return utf8::is_space(cps[i]) || utf8::is_punct(cps[i]);
    };
    while (start < end && trimmable(start)) ++start;
    while (end > start && trimmable(end - 1)) --end;
    return {start, end};
}

SpanPrf span_prf(const std::vector<Span>& predicted, const std::vector<Span>& gold) {
    const std::set<Span> pred_set(predicted.begin(), predicted.end());
    const std::set<Span> gold_set(gold.begin(), gold.end());
    if (pred_set.empty() && gold_set.empty()) return {1.0, 1.0, 1.0};

    std::size_t hits = 0;
    for (const Span& span : pred_set) hits += gold_set.count(span);

    SpanPrf result;
    result.precision =
        pred_set.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(pred_set.size());
    result.recall =
        gold_set.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(gold_set.size());
    if (result.precision + result.recall > 0.0) {
        result.f1 = 2.0 * result.precision * result.recall / (result.precision + result.recall);
    }
    return result;
}

namespace {

// Normalized token multiset: lowercase, edge punctuation stripped, empty
// normalizations dropped (whitespace collapse falls out of word splitting).
std::vector<std::string> qa_tokens(std::string_view s) {
    std::vector<std::string> out;
    for (const std::string& word : text::words(s)) {
        std::string token = text::normalize_token(word);
        if (!token.empty()) out.push_back(std::move(token));
    }
    return out;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const std::string& token : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

} // namespace

QaScore qa_em_f1(std::string_view predicted, std::string_view gold) {
    const std::vector<std::string> pred_tokens = qa_tokens(predicted);
    const std::vector<std::string> gold_tokens = qa_tokens(gold);

    QaScore result;
    result.em = join(pred_tokens) == join(gold_tokens) ? 1.0 : 0.0;

    if (pred_tokens.empty() && gold_tokens.empty()) {
        result.token_f1 = 1.0;
        return result;
    }
    if (pred_tokens.empty() || gold_tokens.empty()) return result;

    std::map<std::string, long> gold_counts;
    for (const std::string& token : gold_tokens) ++gold_counts[token];
    long overlap = 0;
    for (const std::string& token : pred_tokens) {
        const auto it = gold_counts.find(token);
        if (it != gold_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return result;
    const double precision = static_cast<double>(overlap) / static_cast<double>(pred_tokens.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(gold_tokens.size());
    result.token_f1 = 2.0 * precision * recall / (precision + recall);
    return result;
}

} // namespace warrantscore::spans
