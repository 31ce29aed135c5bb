#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

// Canonical data model shared by every module. All types are plain values:
// construct, then treat as immutable; safe to copy across threads.
namespace warrantscore {

// Half-open interval [start, end) over Unicode scalar values, not bytes.
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const Span&) const = default;
    bool operator<(const Span& o) const {
        return start != o.start ? start < o.start : end < o.end;
    }
};

enum class Variant { original, elongated };
enum class Sufficiency { sufficient, deficient };

enum class Fallback {
    none,
    empty_evidence,     // claim has no evidence: V = 0
    empty_warrant,      // evidence present, no acceptable warrant: V = 1
    judge_parse_failure // judge reply unusable after retries: v = 1
};

std::string to_string(Variant v);
std::string to_string(Sufficiency s);
std::string to_string(Fallback f);
Variant variant_from_string(const std::string& s);
Sufficiency sufficiency_from_string(const std::string& s);
Fallback fallback_from_string(const std::string& s);

struct EvidenceUnit {
    std::string evidence_text;
    std::optional<Span> evidence_span;

    bool operator==(const EvidenceUnit&) const = default;
};

struct ClaimUnit {
    int index = 0; // 0-based position within the review's claim list
    std::string claim_text;
    std::optional<Span> claim_span;
    std::optional<EvidenceUnit> evidence;

    bool operator==(const ClaimUnit&) const = default;
};

struct Review {
    std::string id;
    std::string text;
    std::string source;
    Variant variant = Variant::original;
    std::optional<Sufficiency> sufficiency;
    // aspect name -> individual annotator scores (positive integers)
    std::map<std::string, std::vector<int>> human_scores;
    std::vector<ClaimUnit> claims;
    // Unknown input fields, preserved verbatim on round-trip.
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct WarrantAttempt {
    std::string warrant;
    bool accepted = false;

    bool operator==(const WarrantAttempt&) const = default;
};

struct Provenance {
    std::string generator_model;
    std::string judge_model;
    std::string prompt_hash;
    std::string timestamp;

    bool operator==(const Provenance&) const = default;
};

struct WarrantRecord {
    std::string review_id;
    int claim_index = 0;
    std::optional<std::string> warrant_text;
    std::vector<WarrantAttempt> attempts; // at most 3 entries
    std::optional<int> likert_v;          // in {1,2,3,4} when present
    double value_V = 0.0;                 // in [0,1]
    Provenance provenance;
    Fallback fallback = Fallback::none;

    bool operator==(const WarrantRecord&) const = default;
};

struct MetricFlags {
    bool no_claims = false;
    int judge_fallbacks = 0;
    bool no_embeddings = false;

    bool operator==(const MetricFlags&) const = default;
};

struct MetricReport {
    std::string review_id;
    long review_len = 0;
    double fre = 0.0;
    double ttr = 0.0;
    double supported_claims = 0.0;
    double substan_score = 0.0;
    double coherence_rate = 0.0;
    double coherence_score = 0.0;
    double warrant_rate = 0.0;
    double warrant_score = 0.0;
    MetricFlags flags;
};

} // namespace warrantscore
