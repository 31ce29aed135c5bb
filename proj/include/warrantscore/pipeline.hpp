#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "warrantscore/gateway.hpp"
#include "warrantscore/prompts.hpp"
#include "warrantscore/types.hpp"
#include "warrantscore/warrant_cache.hpp"

// The warrant pipeline: generate a warrant per (claim, evidence) pair,
// verify acceptability with bounded retries, judge plausibility on a
// four-point scale, derive V(w).
namespace warrantscore::pipeline {

inline constexpr int kJudgeMin = 1;
inline constexpr int kJudgeMax = 4;
inline constexpr double kValueStep = 0.25;

struct PipelineConfig {
    int max_acceptability_attempts = 3;
    int judge_parse_retries = 3;
    bool cache_enabled = true;
    PromptTemplates templates = PromptTemplates::defaults();
    // Timestamp source for provenance. The default is the fixed epoch so
    // mock runs are bit-reproducible; CLI wiring switches to wall clock
    // when a live backend participates.
    std::function<std::string()> clock;

    std::string timestamp() const;
};

struct RoleProfiles {
    gateway::BackendProfile generator;
    gateway::BackendProfile acceptability;
    gateway::BackendProfile judge;
};

// One generation call; rejected prior attempts are folded into the prompt.
std::string generate_warrant(const ClaimUnit& claim, const EvidenceUnit& evidence,
                             const std::vector<std::string>& prior_attempts,
                             gateway::Gateway& gw, const gateway::BackendProfile& profile,
                             const PromptTemplates& templates);

// Binary acceptability check; an unparseable classifier reply counts as
// not acceptable.
bool check_acceptability(const ClaimUnit& claim, const EvidenceUnit& evidence,
                         const std::string& warrant, gateway::Gateway& gw,
                         const gateway::BackendProfile& profile,
                         const PromptTemplates& templates);

struct AcceptedWarrant {
    std::optional<std::string> warrant; // absent after max rejected attempts
    std::vector<WarrantAttempt> attempts;
};

AcceptedWarrant produce_accepted_warrant(const ClaimUnit& claim, const EvidenceUnit& evidence,
                                         gateway::Gateway& gw, const RoleProfiles& profiles,
                                         const PipelineConfig& cfg);

struct JudgeOutcome {
    int v = kJudgeMin;
    bool parse_failure = false;
};

// Parses the judge reply as one integer in {1..4} (whitespace tolerant,
// capped at 2 output tokens); after judge_parse_retries failures returns
// v = 1 with the parse_failure flag.
JudgeOutcome judge_warrant(const ClaimUnit& claim, const EvidenceUnit& evidence,
                           const std::string& warrant, gateway::Gateway& gw,
                           const gateway::BackendProfile& profile, const PipelineConfig& cfg);

struct ValueAssignment {
    double value = 0.0;
    Fallback fallback = Fallback::none;
};

// Total over the three V-assignment rules:
//   evidence absent                  -> (0, empty_evidence)
//   evidence present, warrant absent -> (1, empty_warrant)
//   otherwise                        -> (v * 0.25, none); v must be in {1..4}
ValueAssignment assign_value(const ClaimUnit& claim,
                             const std::optional<std::string>& warrant,
                             std::optional<int> v);

struct PipelineFailure {
    int claim_index = -1;
    std::string message;
};

struct PipelineResult {
    std::vector<WarrantRecord> records; // sorted by claim_index
    std::vector<PipelineFailure> failures;
};

// One WarrantRecord per claim in index order. Cache hits skip gateway calls
// and are returned verbatim; fresh records are persisted before returning,
// so partially failed runs keep their completed work.
PipelineResult run_pipeline(const Review& review, gateway::Gateway& gw,
                            const RoleProfiles& profiles, const PipelineConfig& cfg,
                            WarrantCache* cache);

// Corpus-level runner; reviews are processed with at most `parallelism`
// worker threads and results are ordered by (review position, claim_index)
// regardless of schedule.
std::vector<PipelineResult> run_pipeline_corpus(const std::vector<Review>& reviews,
                                                gateway::Gateway& gw,
                                                const RoleProfiles& profiles,
                                                const PipelineConfig& cfg, WarrantCache* cache,
                                                int parallelism);

} // namespace warrantscore::pipeline
