#include "warrantscore/json_codec.hpp"

#include <set>

#include "warrantscore/errors.hpp"

namespace warrantscore {

using nlohmann::ordered_json;

namespace {

ordered_json span_to_json(const Span& span) {
    return ordered_json::array({span.start, span.end});
}

Span span_from_json(const ordered_json& j, const char* field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
        !j[1].is_number_unsigned()) {
        throw DataError(std::string(field) + " must be a [start, end] pair");
    }
    return Span{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

std::string require_string(const ordered_json& j, const char* field) {
    const auto it = j.find(field);
    if (it == j.end() || !it->is_string()) {
        throw DataError(std::string("missing or non-string field: ") + field);
    }
    return it->get<std::string>();
}

ordered_json parse_line(std::string_view line, const char* what) {
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw DataError(std::string("malformed ") + what + " JSON line");
    }
    return j;
}

} // namespace

ordered_json review_to_json(const Review& review) {
    ordered_json j = ordered_json::object();
    j["id"] = review.id;
    j["text"] = review.text;
    j["source"] = review.source;
    j["variant"] = to_string(review.variant);
    if (review.sufficiency) j["sufficiency"] = to_string(*review.sufficiency);
    ordered_json scores = ordered_json::object();
    for (const auto& [aspect, list] : review.human_scores) scores[aspect] = list;
    j["human_scores"] = std::move(scores);
    ordered_json claims = ordered_json::array();
    for (const ClaimUnit& claim : review.claims) {
        ordered_json c = ordered_json::object();
        c["index"] = claim.index;
        c["claim_text"] = claim.claim_text;
        if (claim.claim_span) c["claim_span"] = span_to_json(*claim.claim_span);
        if (claim.evidence) {
            ordered_json e = ordered_json::object();
            e["evidence_text"] = claim.evidence->evidence_text;
            if (claim.evidence->evidence_span) {
                e["evidence_span"] = span_to_json(*claim.evidence->evidence_span);
            }
            c["evidence"] = std::move(e);
        }
        claims.push_back(std::move(c));
    }
    j["claims"] = std::move(claims);
    for (const auto& [key, value] : review.extra.items()) j[key] = value;
    return j;
}

Review review_from_json(const ordered_json& j) {
    static const std::set<std::string> known = {"id",          "text",   "source",
                                                "variant",     "sufficiency",
                                                "human_scores", "claims"};
    Review review;
    review.id = require_string(j, "id");
    review.text = require_string(j, "text");
    if (auto it = j.find("source"); it != j.end() && it->is_string()) {
        review.source = it->get<std::string>();
    }
    if (auto it = j.find("variant"); it != j.end() && it->is_string()) {
        review.variant = variant_from_string(it->get<std::string>());
    }
    if (auto it = j.find("sufficiency"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw DataError("sufficiency must be a string");
        review.sufficiency = sufficiency_from_string(it->get<std::string>());
    }
    if (auto it = j.find("human_scores"); it != j.end()) {
        if (!it->is_object()) throw DataError("human_scores must be an object");
        for (const auto& [aspect, list] : it->items()) {
            if (!list.is_array()) throw DataError("human_scores values must be arrays");
            std::vector<int> scores;
            for (const auto& v : list) {
                if (!v.is_number_integer()) {
                    throw DataError("annotator scores must be integers");
                }
                scores.push_back(v.get<int>());
            }
            review.human_scores[aspect] = std::move(scores);
        }
    }
    if (auto it = j.find("claims"); it != j.end()) {
        if (!it->is_array()) throw DataError("claims must be an array");
        for (const auto& c : *it) {
            if (!c.is_object()) throw DataError("claim must be an object");
            ClaimUnit claim;
            if (auto ci = c.find("index"); ci != c.end() && ci->is_number_integer()) {
                claim.index = ci->get<int>();
            } else {
                claim.index = static_cast<int>(review.claims.size());
            }
            claim.claim_text = require_string(c, "claim_text");
            if (auto cs = c.find("claim_span"); cs != c.end() && !cs->is_null()) {
                claim.claim_span = span_from_json(*cs, "claim_span");
            }
            if (auto ev = c.find("evidence"); ev != c.end() && !ev->is_null()) {
                if (!ev->is_object()) throw DataError("evidence must be an object");
                EvidenceUnit unit;
                unit.evidence_text = require_string(*ev, "evidence_text");
                if (auto es = ev->find("evidence_span"); es != ev->end() && !es->is_null()) {
                    unit.evidence_span = span_from_json(*es, "evidence_span");
                }
                claim.evidence = std::move(unit);
            }
            review.claims.push_back(std::move(claim));
        }
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) review.extra[key] = value;
    }
    return review;
}

std::string serialize_review(const Review& review) { return review_to_json(review).dump(); }

Review parse_review(std::string_view line) {
    return review_from_json(parse_line(line, "review"));
}

ordered_json warrant_record_to_json(const WarrantRecord& record) {
    ordered_json j = ordered_json::object();
    j["review_id"] = record.review_id;
    j["claim_index"] = record.claim_index;
    if (record.warrant_text) j["warrant_text"] = *record.warrant_text;
    ordered_json attempts = ordered_json::array();
    for (const WarrantAttempt& a : record.attempts) {
        attempts.push_back({{"warrant", a.warrant}, {"accepted", a.accepted}});
    }
    j["attempts"] = std::move(attempts);
    if (record.likert_v) j["likert_v"] = *record.likert_v;
    j["value_V"] = record.value_V;
    j["provenance"] = {{"generator_model", record.provenance.generator_model},
                       {"judge_model", record.provenance.judge_model},
                       {"prompt_hash", record.provenance.prompt_hash},
                       {"timestamp", record.provenance.timestamp}};
    j["fallback"] = to_string(record.fallback);
    return j;
}

WarrantRecord warrant_record_from_json(const ordered_json& j) {
    WarrantRecord record;
    record.review_id = require_string(j, "review_id");
    if (auto it = j.find("claim_index"); it != j.end() && it->is_number_integer()) {
        record.claim_index = it->get<int>();
    } else {
        throw DataError("missing claim_index");
    }
    if (auto it = j.find("warrant_text"); it != j.end() && it->is_string()) {
        record.warrant_text = it->get<std::string>();
    }
    if (auto it = j.find("attempts"); it != j.end() && it->is_array()) {
        for (const auto& a : *it) {
            record.attempts.push_back(
                {require_string(a, "warrant"), a.value("accepted", false)});
        }
    }
    if (auto it = j.find("likert_v"); it != j.end() && it->is_number_integer()) {
        record.likert_v = it->get<int>();
    }
    if (auto it = j.find("value_V"); it != j.end() && it->is_number()) {
        record.value_V = it->get<double>();
    } else {
        throw DataError("missing value_V");
    }
    if (auto it = j.find("provenance"); it != j.end() && it->is_object()) {
        record.provenance.generator_model = it->value("generator_model", "");
        record.provenance.judge_model = it->value("judge_model", "");
        record.provenance.prompt_hash = it->value("prompt_hash", "");
        record.provenance.timestamp = it->value("timestamp", "");
    }
    record.fallback = fallback_from_string(j.value("fallback", "none"));
    return record;
}

std::string serialize_warrant_record(const WarrantRecord& record) {
    return warrant_record_to_json(record).dump();
}

WarrantRecord parse_warrant_record(std::string_view line) {
    return warrant_record_from_json(parse_line(line, "warrant record"));
}

ordered_json metric_report_to_json(const MetricReport& report) {
    ordered_json j = ordered_json::object();
    j["review_id"] = report.review_id;
    j["review_len"] = report.review_len;
    j["fre"] = report.fre;
    j["ttr"] = report.ttr;
    j["supported_claims"] = report.supported_claims;
    j["substan_score"] = report.substan_score;
    j["coherence_rate"] = report.coherence_rate;
    j["coherence_score"] = report.coherence_score;
    j["warrant_rate"] = report.warrant_rate;
    j["warrant_score"] = report.warrant_score;
    j["flags"] = {{"no_claims", report.flags.no_claims},
                  {"judge_fallbacks", report.flags.judge_fallbacks},
                  {"no_embeddings", report.flags.no_embeddings}};
    return j;
}

MetricReport metric_report_from_json(const ordered_json& j) {
    MetricReport report;
    report.review_id = require_string(j, "review_id");
    report.review_len = j.value("review_len", 0L);
    report.fre = j.value("fre", 0.0);
    report.ttr = j.value("ttr", 0.0);
    report.supported_claims = j.value("supported_claims", 0.0);
    report.substan_score = j.value("substan_score", 0.0);
    report.coherence_rate = j.value("coherence_rate", 0.0);
    report.coherence_score = j.value("coherence_score", 0.0);
    report.warrant_rate = j.value("warrant_rate", 0.0);
    report.warrant_score = j.value("warrant_score", 0.0);
    if (auto it = j.find("flags"); it != j.end() && it->is_object()) {
        report.flags.no_claims = it->value("no_claims", false);
        report.flags.judge_fallbacks = it->value("judge_fallbacks", 0);
        report.flags.no_embeddings = it->value("no_embeddings", false);
    }
    return report;
}

std::string serialize_metric_report(const MetricReport& report) {
    return metric_report_to_json(report).dump();
}

MetricReport parse_metric_report(std::string_view line) {
    return metric_report_from_json(parse_line(line, "metric report"));
}

} // namespace warrantscore
