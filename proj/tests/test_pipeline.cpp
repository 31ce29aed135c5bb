#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "support/scripted_gateway.hpp"
#include "warrantscore/errors.hpp"
#include "warrantscore/hash.hpp"
#include "warrantscore/json_codec.hpp"
#include "warrantscore/mock_backend.hpp"
#include "warrantscore/pipeline.hpp"

using namespace warrantscore;
using namespace warrantscore::pipeline;
using warrantscore::testing::ScriptedGateway;

namespace {

RoleProfiles mock_profiles() {
    RoleProfiles profiles;
    profiles.generator.role = gateway::Role::generator;
    profiles.generator.model = "mock-generator";
    profiles.acceptability.role = gateway::Role::acceptability;
    profiles.acceptability.model = "mock-acceptability";
    profiles.judge.role = gateway::Role::judge;
    profiles.judge.model = "mock-judge";
    return profiles;
}

Review evidenced_review() {
    Review review;
    review.id = "p1";
    review.text = "The ablation is missing. The claims are overbroad given one dataset.";
    ClaimUnit claim;
    claim.index = 0;
    claim.claim_text = "The claims are overbroad";
    claim.evidence = EvidenceUnit{"given one dataset", std::nullopt};
    review.claims = {claim};
    return review;
}

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("warrantscore-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("prompt templates declare their placeholders") {
    PromptTemplates templates = PromptTemplates::defaults();
    CHECK_NOTHROW(templates.validate());
    templates.judge = "no placeholders at all";
    CHECK_THROWS_AS(templates.validate(), ConfigError);
}

TEST_CASE("default templates match the shipped prompt files and manifest") {
    const std::filesystem::path dir = WS_PROMPTS_DIR;
    const PromptTemplates from_disk = PromptTemplates::load_dir(dir);
    const PromptTemplates defaults = PromptTemplates::defaults();
    CHECK(from_disk.generation == defaults.generation);
    CHECK(from_disk.acceptability == defaults.acceptability);
    CHECK(from_disk.judge == defaults.judge);

    std::ifstream manifest_in(dir / "manifest.json");
    REQUIRE(manifest_in.good());
    nlohmann::json manifest;
    manifest_in >> manifest;
    CHECK(manifest.at("generation.txt") == fnv1a64_hex(defaults.generation));
    CHECK(manifest.at("acceptability.txt") == fnv1a64_hex(defaults.acceptability));
    CHECK(manifest.at("judge.txt") == fnv1a64_hex(defaults.judge));
    CHECK(manifest.at("summarize.txt") == fnv1a64_hex(default_summary_prompt()));
}

TEST_CASE("render substitutes only known placeholders") {
    CHECK(render("a {x} and {y}", {{"x", "1"}, {"y", "2"}}) == "a 1 and 2");
    CHECK(render("keep {unknown}", {{"x", "1"}}) == "keep {unknown}");
    CHECK(render("{x}{x}", {{"x", "ab"}}) == "abab");
}

TEST_CASE("accept on first attempt leaves a one-entry log") {
    ScriptedGateway gw;
    gw.enqueue(gateway::Role::generator, "warrant one");
    gw.enqueue(gateway::Role::acceptability, "yes");
    const Review review = evidenced_review();
    const auto result = produce_accepted_warrant(review.claims[0], *review.claims[0].evidence,
                                                 gw, mock_profiles(), PipelineConfig{});
    REQUIRE(result.warrant.has_value());
    CHECK(*result.warrant == "warrant one");
    REQUIRE(result.attempts.size() == 1);
    CHECK(result.attempts[0].accepted);
}

TEST_CASE("three rejections leave the warrant absent with a full log") {
    ScriptedGateway gw;
    for (int i = 1; i <= 3; ++i) {
        gw.enqueue(gateway::Role::generator, "warrant " + std::to_string(i));
        gw.enqueue(gateway::Role::acceptability, "no");
    }
    const Review review = evidenced_review();
    const auto result = produce_accepted_warrant(review.claims[0], *review.claims[0].evidence,
                                                 gw, mock_profiles(), PipelineConfig{});
    CHECK(!result.warrant.has_value());
    REQUIRE(result.attempts.size() == 3);
    for (const WarrantAttempt& attempt : result.attempts) CHECK(!attempt.accepted);
}

TEST_CASE("reject reject accept succeeds with a three-entry log") {
    ScriptedGateway gw;
    gw.enqueue(gateway::Role::generator, "warrant 1");
    gw.enqueue(gateway::Role::generator, "warrant 2");
    gw.enqueue(gateway::Role::generator, "warrant 3");
    gw.enqueue(gateway::Role::acceptability, "no");
    gw.enqueue(gateway::Role::acceptability, "no");
    gw.enqueue(gateway::Role::acceptability, "yes");
    const Review review = evidenced_review();
    const auto result = produce_accepted_warrant(review.claims[0], *review.claims[0].evidence,
                                                 gw, mock_profiles(), PipelineConfig{});
    REQUIRE(result.warrant.has_value());
    CHECK(*result.warrant == "warrant 3");
    REQUIRE(result.attempts.size() == 3);
    CHECK(result.attempts.back().accepted);
}

TEST_CASE("retry prompts carry the rejected warrants") {
    ScriptedGateway gw;
    gw.enqueue(gateway::Role::generator, "first warrant text");
    gw.enqueue(gateway::Role::generator, "second warrant text");
    gw.enqueue(gateway::Role::acceptability, "no");
    gw.enqueue(gateway::Role::acceptability, "yes");
    const Review review = evidenced_review();
    produce_accepted_warrant(review.claims[0], *review.claims[0].evidence, gw,
                             mock_profiles(), PipelineConfig{});
    const auto& prompts = gw.prompts(gateway::Role::generator);
    REQUIRE(prompts.size() == 2);
    CHECK(prompts[0].find("first warrant text") == std::string::npos);
    CHECK(prompts[1].find("first warrant text") != std::string::npos);
    CHECK(prompts[1].find(review.claims[0].claim_text) != std::string::npos);
}

TEST_CASE("garbage acceptability replies count as rejections") {
    ScriptedGateway gw;
    gw.set_default(gateway::Role::generator, "some warrant");
    gw.set_default(gateway::Role::acceptability, "maybe");
    const Review review = evidenced_review();
    const auto result = produce_accepted_warrant(review.claims[0], *review.claims[0].evidence,
                                                 gw, mock_profiles(), PipelineConfig{});
    CHECK(!result.warrant.has_value());
    CHECK(result.attempts.size() == 3);
}

TEST_CASE("judge reply parsing") {
    const Review review = evidenced_review();
    const ClaimUnit& claim = review.claims[0];
    PipelineConfig cfg;

    ScriptedGateway gw;
    gw.enqueue(gateway::Role::judge, "3");
    auto outcome = judge_warrant(claim, *claim.evidence, "w", gw, mock_profiles().judge, cfg);
    CHECK(outcome.v == 3);
    CHECK(!outcome.parse_failure);
    CHECK(gw.last_max_tokens() == 2);

    gw.enqueue(gateway::Role::judge, " 4");
    outcome = judge_warrant(claim, *claim.evidence, "w", gw, mock_profiles().judge, cfg);
    CHECK(outcome.v == 4);

    gw.enqueue(gateway::Role::judge, "x");
    gw.enqueue(gateway::Role::judge, "x");
    gw.enqueue(gateway::Role::judge, "x");
    outcome = judge_warrant(claim, *claim.evidence, "w", gw, mock_profiles().judge, cfg);
    CHECK(outcome.v == 1);
    CHECK(outcome.parse_failure);

    // out-of-scale and multi-token replies are parse failures too
    gw.enqueue(gateway::Role::judge, "5");
    gw.enqueue(gateway::Role::judge, "3 stars");
    gw.enqueue(gateway::Role::judge, "");
    outcome = judge_warrant(claim, *claim.evidence, "w", gw, mock_profiles().judge, cfg);
    CHECK(outcome.v == 1);
    CHECK(outcome.parse_failure);
}

TEST_CASE("pipeline over an empty review is empty") {
    Review review;
    review.id = "empty";
    review.text = "no claims here.";
    gateway::MockGateway gw;
    const auto result = run_pipeline(review, gw, mock_profiles(), PipelineConfig{}, nullptr);
    CHECK(result.records.empty());
    CHECK(result.failures.empty());
    CHECK(gw.calls() == 0);
}

TEST_CASE("pipeline records are deterministic on the mock backend") {
    Review review = evidenced_review();
    ClaimUnit bare;
    bare.index = 1;
    bare.claim_text = "The ablation is missing";
    review.claims.push_back(bare);

    gateway::MockGateway gw;
    const auto a = run_pipeline(review, gw, mock_profiles(), PipelineConfig{}, nullptr);
    const auto b = run_pipeline(review, gw, mock_profiles(), PipelineConfig{}, nullptr);
    REQUIRE(a.records.size() == 2);
    REQUIRE(b.records.size() == 2);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(serialize_warrant_record(a.records[i]) == serialize_warrant_record(b.records[i]));
    }
    CHECK(a.records[1].fallback == Fallback::empty_evidence);
    CHECK(a.records[1].value_V == 0.0);
    CHECK(a.records[0].provenance.generator_model == "mock-generator");
    CHECK(a.records[0].provenance.prompt_hash ==
          PipelineConfig{}.templates.combined_hash());
    CHECK(a.records[0].provenance.timestamp == "1970-01-01T00:00:00Z");
}

TEST_CASE("a warm cache answers without gateway calls") {
    const auto dir = temp_dir("cache");
    WarrantCache cache(dir, true);
    const Review review = evidenced_review();

    gateway::MockGateway gw;
    PipelineConfig cfg;
    const auto cold = run_pipeline(review, gw, mock_profiles(), cfg, &cache);
    REQUIRE(cold.failures.empty());
    const long cold_calls = gw.calls();
    CHECK(cold_calls > 0);

    const auto warm = run_pipeline(review, gw, mock_profiles(), cfg, &cache);
    CHECK(gw.calls() == cold_calls);
    REQUIRE(warm.records.size() == cold.records.size());
    for (std::size_t i = 0; i < warm.records.size(); ++i) {
        CHECK(serialize_warrant_record(warm.records[i]) ==
              serialize_warrant_record(cold.records[i]));
    }

    // different model id -> different key -> misses
    RoleProfiles other = mock_profiles();
    other.judge.model = "mock-judge-v2";
    run_pipeline(review, gw, other, cfg, &cache);
    CHECK(gw.calls() > cold_calls);
    std::filesystem::remove_all(dir);
}

TEST_CASE("a partial run resumes from the cache") {
    const auto dir = temp_dir("resume");
    WarrantCache cache(dir, true);
    Review review = evidenced_review();
    ClaimUnit second;
    second.index = 1;
    second.claim_text = "The comparison is unfair";
    second.evidence = EvidenceUnit{"baselines were not retuned", std::nullopt};
    review.claims.push_back(second);

    Review first_half = review;
    first_half.claims.resize(1);

    gateway::MockGateway gw;
    PipelineConfig cfg;
    run_pipeline(first_half, gw, mock_profiles(), cfg, &cache);
    const long after_first = gw.calls();

    const auto full = run_pipeline(review, gw, mock_profiles(), cfg, &cache);
    REQUIRE(full.records.size() == 2);
    // claim 0 was served from cache; only claim 1 cost gateway calls
    gateway::MockGateway fresh;
    Review second_half = review;
    second_half.claims.erase(second_half.claims.begin());
    second_half.claims[0].index = 0;
    run_pipeline(second_half, fresh, mock_profiles(), cfg, nullptr);
    CHECK(gw.calls() - after_first == fresh.calls());
    std::filesystem::remove_all(dir);
}

TEST_CASE("transport failures surface as per-claim failures") {
    ScriptedGateway gw; // empty queues: every generator call throws
    const Review review = evidenced_review();
    const auto result = run_pipeline(review, gw, mock_profiles(), PipelineConfig{}, nullptr);
    CHECK(result.records.empty());
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].claim_index == 0);
}

TEST_CASE("corpus runner is schedule independent") {
    std::vector<Review> reviews;
    for (int i = 0; i < 8; ++i) {
        Review review = evidenced_review();
        review.id = "corpus-" + std::to_string(i);
        review.claims[0].claim_text += " variant " + std::to_string(i);
        reviews.push_back(review);
    }
    gateway::MockGateway gw;
    const auto serial =
        run_pipeline_corpus(reviews, gw, mock_profiles(), PipelineConfig{}, nullptr, 1);
    const auto parallel =
        run_pipeline_corpus(reviews, gw, mock_profiles(), PipelineConfig{}, nullptr, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        REQUIRE(serial[i].records.size() == parallel[i].records.size());
        for (std::size_t k = 0; k < serial[i].records.size(); ++k) {
            CHECK(serialize_warrant_record(serial[i].records[k]) ==
                  serialize_warrant_record(parallel[i].records[k]));
        }
    }
}
