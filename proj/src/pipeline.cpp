#include "warrantscore/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <thread>

#include "warrantscore/errors.hpp"

namespace warrantscore::pipeline {

namespace {

constexpr const char* kEpochTimestamp = "1970-01-01T00:00:00Z";

std::map<std::string, std::string> pair_vars(const ClaimUnit& claim,
                                             const EvidenceUnit& evidence) {
    return {{"claim", claim.claim_text}, {"evidence", evidence.evidence_text}};
}

} // namespace

std::string PipelineConfig::timestamp() const {
    return clock ? clock() : kEpochTimestamp;
}

std::string generate_warrant(const ClaimUnit& claim, const EvidenceUnit& evidence,
                             const std::vector<std::string>& prior_attempts,
                             gateway::Gateway& gw, const gateway::BackendProfile& profile,
                             const PromptTemplates& templates) {
    auto vars = pair_vars(claim, evidence);
    vars["prior_attempts"] = render_prior_attempts(prior_attempts);
    const std::string prompt = render(templates.generation, vars);
    std::string warrant = gw.chat_complete(profile, prompt);
    if (warrant.empty()) throw ProtocolError("generator returned an empty warrant");
    return warrant;
}

bool check_acceptability(const ClaimUnit& claim, const EvidenceUnit& evidence,
                         const std::string& warrant, gateway::Gateway& gw,
                         const gateway::BackendProfile& profile,
                         const PromptTemplates& templates) {
    auto vars = pair_vars(claim, evidence);
    vars["warrant"] = warrant;
    const std::string prompt = render(templates.acceptability, vars);
    try {
        return gateway::classify_binary(gw, profile, prompt);
    } catch (const ProtocolError&) {
        return false; // unparseable verdict counts as not acceptable
    }
}

AcceptedWarrant produce_accepted_warrant(const ClaimUnit& claim, const EvidenceUnit& evidence,
                                         gateway::Gateway& gw, const RoleProfiles& profiles,
                                         const PipelineConfig& cfg) {
    AcceptedWarrant result;
    std::vector<std::string> rejected;
    for (int attempt = 0; attempt < cfg.max_acceptability_attempts; ++attempt) {
        const std::string warrant = generate_warrant(claim, evidence, rejected, gw,
                                                     profiles.generator, cfg.templates);
        const bool accepted =
            check_acceptability(claim, evidence, warrant, gw, profiles.acceptability,
                                cfg.templates);
        result.attempts.push_back({warrant, accepted});
        if (accepted) {
            result.warrant = warrant;
            return result;
        }
        rejected.push_back(warrant);
    }
    return result; // warrant stays absent: w = empty after the final rejection
}

namespace {

// Whitespace-tolerant parse of a single integer in [kJudgeMin, kJudgeMax].
std::optional<int> parse_judge_reply(const std::string& reply) {
    std::size_t begin = 0;
    std::size_t end = reply.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(reply[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(reply[end - 1]))) --end;
    if (end - begin != 1) return std::nullopt;
    const char c = reply[begin];
    if (c < '0' + kJudgeMin || c > '0' + kJudgeMax) return std::nullopt;
    return c - '0';
}

} // namespace

JudgeOutcome judge_warrant(const ClaimUnit& claim, const EvidenceUnit& evidence,
                           const std::string& warrant, gateway::Gateway& gw,
                           const gateway::BackendProfile& profile, const PipelineConfig& cfg) {
    auto vars = pair_vars(claim, evidence);
    vars["warrant"] = warrant;
    const std::string prompt = render(cfg.templates.judge, vars);
    for (int attempt = 0; attempt < std::max(1, cfg.judge_parse_retries); ++attempt) {
        const std::string reply = gw.chat_complete(profile, prompt, 2);
        if (const auto v = parse_judge_reply(reply)) return {*v, false};
    }
    return {kJudgeMin, true}; // never reward an unevaluable warrant
}

ValueAssignment assign_value(const ClaimUnit& claim, const std::optional<std::string>& warrant,
                             std::optional<int> v) {
    if (!claim.evidence) return {0.0, Fallback::empty_evidence};
    if (!warrant) return {1.0, Fallback::empty_warrant};
    if (!v || *v < kJudgeMin || *v > kJudgeMax) {
        throw DataError("judge value outside {1..4}");
    }
    return {static_cast<double>(*v) * kValueStep, Fallback::none};
}

namespace {

WarrantRecord process_claim(const Review& review, const ClaimUnit& claim,
                            gateway::Gateway& gw, const RoleProfiles& profiles,
                            const PipelineConfig& cfg) {
    WarrantRecord record;
    record.review_id = review.id;
    record.claim_index = claim.index;
    record.provenance = {profiles.generator.model, profiles.judge.model,
                         cfg.templates.combined_hash(), cfg.timestamp()};

    if (!claim.evidence) {
        const ValueAssignment assigned = assign_value(claim, std::nullopt, std::nullopt);
        record.value_V = assigned.value;
        record.fallback = assigned.fallback;
        return record;
    }

    AcceptedWarrant accepted =
        produce_accepted_warrant(claim, *claim.evidence, gw, profiles, cfg);
    record.attempts = std::move(accepted.attempts);
    record.warrant_text = accepted.warrant;

    if (!record.warrant_text) {
        const ValueAssignment assigned = assign_value(claim, std::nullopt, std::nullopt);
        record.value_V = assigned.value;
        record.fallback = assigned.fallback;
        return record;
    }

    const JudgeOutcome judged =
        judge_warrant(claim, *claim.evidence, *record.warrant_text, gw, profiles.judge, cfg);
    record.likert_v = judged.v;
    const ValueAssignment assigned = assign_value(claim, record.warrant_text, judged.v);
    record.value_V = assigned.value;
    record.fallback = judged.parse_failure ? Fallback::judge_parse_failure : assigned.fallback;
    return record;
}

} // namespace

PipelineResult run_pipeline(const Review& review, gateway::Gateway& gw,
                            const RoleProfiles& profiles, const PipelineConfig& cfg,
                            WarrantCache* cache) {
    PipelineResult result;
    const std::string prompt_hash = cfg.templates.combined_hash();
    for (const ClaimUnit& claim : review.claims) {
        const std::string key =
            WarrantCache::key(review.id, claim.index, prompt_hash, profiles.generator.model,
                              profiles.acceptability.model, profiles.judge.model);
        if (cache && cfg.cache_enabled) {
            if (auto hit = cache->get(key)) {
                result.records.push_back(std::move(*hit));
                continue;
            }
        }
        try {
            WarrantRecord record = process_claim(review, claim, gw, profiles, cfg);
            if (cache && cfg.cache_enabled) cache->put(key, record);
            result.records.push_back(std::move(record));
        } catch (const Error& e) {
            result.failures.push_back({claim.index, e.what()});
        }
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const WarrantRecord& a, const WarrantRecord& b) {
                  return a.claim_index < b.claim_index;
              });
    return result;
}

std::vector<PipelineResult> run_pipeline_corpus(const std::vector<Review>& reviews,
                                                gateway::Gateway& gw,
                                                const RoleProfiles& profiles,
                                                const PipelineConfig& cfg, WarrantCache* cache,
                                                int parallelism) {
    std::vector<PipelineResult> results(reviews.size());
    const int workers =
        std::max(1, std::min<int>(parallelism, static_cast<int>(reviews.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < reviews.size(); ++i) {
            results[i] = run_pipeline(reviews[i], gw, profiles, cfg, cache);
        }
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= reviews.size()) return;
                results[i] = run_pipeline(reviews[i], gw, profiles, cfg, cache);
            }
        });
    }
    for (std::thread& t : pool) t.join();
    return results;
}

} // namespace warrantscore::pipeline
