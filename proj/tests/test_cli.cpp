#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "warrantscore/cli.hpp"
#include "warrantscore/io.hpp"
#include "warrantscore/json_codec.hpp"

using namespace warrantscore;
using nlohmann::ordered_json;

namespace {

struct CliRun {
    int exit_code = 0;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    CliRun result;
    result.exit_code = cli::run(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::filesystem::path fresh_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("warrantscore-cli-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string golden(const std::string& name) {
    return std::string(WS_TEST_DATA) + "/" + name;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("no subcommand is a configuration error") {
    CHECK(run_cli({}).exit_code == cli::kExitConfig);
    CHECK(run_cli({"unknown-cmd"}).exit_code == cli::kExitConfig);
}

TEST_CASE("help exits cleanly") {
    const auto result = run_cli({"--help"});
    CHECK(result.exit_code == cli::kExitOk);
    CHECK(result.out.find("score") != std::string::npos);
}

TEST_CASE("missing corpus file is a data error") {
    const auto dir = fresh_dir("nodata");
    const auto result =
        run_cli({"score", "--corpus", "/nonexistent.jsonl", "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitData);
    std::filesystem::remove_all(dir);
}

TEST_CASE("malformed config file is a configuration error") {
    const auto dir = fresh_dir("badcfg");
    const auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << "{not json";
    const auto result = run_cli({"score", "--config", cfg.string(), "--corpus",
                                 golden("golden_corpus.jsonl"), "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitConfig);
    std::filesystem::remove_all(dir);
}

TEST_CASE("live profile with an unset api key env var fails fast") {
    const auto dir = fresh_dir("nokey");
    const auto cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"backends":{"judge":{"kind":"http",)"
                          R"("endpoint":"http://localhost:9","api_key_env":)"
                          R"("WARRANTSCORE_SURELY_UNSET_KEY"}}})";
    const auto result = run_cli({"warrants", "--config", cfg.string(), "--corpus",
                                 golden("golden_corpus.jsonl"), "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitConfig);
    CHECK(!std::filesystem::exists(dir / "warrants.jsonl")); // no partial output
    std::filesystem::remove_all(dir);
}

TEST_CASE("score on the golden corpus reproduces the golden reports byte for byte") {
    const auto dir = fresh_dir("score");
    const auto result = run_cli({"score", "--corpus", golden("golden_corpus.jsonl"), "--out",
                                 dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    CHECK(slurp(dir / "metrics.jsonl") == slurp(golden("golden_metrics.jsonl")));
    std::filesystem::remove_all(dir);
}

TEST_CASE("warrants on the golden corpus reproduces the golden sidecar byte for byte") {
    const auto dir = fresh_dir("warrants");
    const auto result = run_cli({"warrants", "--corpus", golden("golden_corpus.jsonl"),
                                 "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    CHECK(slurp(dir / "warrants.jsonl") == slurp(golden("golden_warrants.jsonl")));
    std::filesystem::remove_all(dir);
}

TEST_CASE("score accepts a precomputed sidecar and flags claimless reviews") {
    const auto dir = fresh_dir("sidecar");
    REQUIRE(run_cli({"warrants", "--corpus", golden("golden_corpus.jsonl"), "--out",
                     dir.string()})
                .exit_code == cli::kExitOk);
    const auto result = run_cli({"score", "--corpus", golden("golden_corpus.jsonl"),
                                 "--warrants", (dir / "warrants.jsonl").string(), "--out",
                                 dir.string()});
    CHECK(result.exit_code == cli::kExitOk);

    bool saw_no_claims = false;
    for (const MetricReport& report : io::read_metric_reports(dir / "metrics.jsonl")) {
        if (report.review_id == "g04") {
            saw_no_claims = report.flags.no_claims;
            CHECK(report.supported_claims == 0.0);
            CHECK(report.warrant_score == 0.0);
        }
    }
    CHECK(saw_no_claims);
    std::filesystem::remove_all(dir);
}

TEST_CASE("correlate emits a table; a perfect-rank aspect correlates at 1") {
    const auto dir = fresh_dir("correlate");

    // synthetic corpus whose aspect score ranks follow substan_score
    std::string corpus;
    std::string metric_lines;
    for (int i = 0; i < 6; ++i) {
        Review review;
        review.id = "c" + std::to_string(i);
        review.text = "word";
        for (int w = 0; w < i + 4; ++w) review.text += " word";
        review.human_scores["target"] = {i + 1};
        corpus += serialize_review(review) + "\n";

        MetricReport report;
        report.review_id = review.id;
        report.review_len = i + 5;
        report.fre = 60.0;
        report.ttr = 0.5;
        report.supported_claims = 0.5;
        report.substan_score = 0.5 * (i + 5);
        report.warrant_rate = 0.25;
        report.warrant_score = 0.25 * (i + 5);
        report.coherence_rate = 0.1;
        report.coherence_score = 0.1 * (i + 5);
        metric_lines += serialize_metric_report(report) + "\n";
    }
    const auto corpus_path = dir / "corpus.jsonl";
    const auto metrics_path = dir / "metrics.jsonl";
    std::ofstream(corpus_path) << corpus;
    std::ofstream(metrics_path) << metric_lines;

    const auto result = run_cli({"correlate", "--corpus", corpus_path.string(), "--metrics",
                                 metrics_path.string(), "--aspect", "target", "--out",
                                 dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    const auto table = ordered_json::parse(slurp(dir / "correlation.json"));
    bool saw_substan = false;
    for (const auto& row : table.at("table")) {
        if (row.at("metric") == "substan_score") {
            saw_substan = true;
            CHECK(row.at("rho").get<double>() == doctest::Approx(1.0));
        }
        if (row.at("metric") == "fre") {
            CHECK(row.at("rho").is_null()); // constant column -> undefined cell
        }
    }
    CHECK(saw_substan);
    CHECK(table.at("config").contains("prompt_hash"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("correlate requires the aspect on every review") {
    const auto dir = fresh_dir("correlate-missing");
    Review review;
    review.id = "m0";
    review.text = "some words";
    std::ofstream(dir / "corpus.jsonl") << serialize_review(review) + "\n";
    MetricReport report;
    report.review_id = "m0";
    std::ofstream(dir / "metrics.jsonl") << serialize_metric_report(report) + "\n";
    const auto result =
        run_cli({"correlate", "--corpus", (dir / "corpus.jsonl").string(), "--metrics",
                 (dir / "metrics.jsonl").string(), "--aspect", "absent", "--out",
                 dir.string()});
    CHECK(result.exit_code == cli::kExitData);
    std::filesystem::remove_all(dir);
}

TEST_CASE("robustness groups design on the golden corpus") {
    const auto dir = fresh_dir("robust-groups");
    REQUIRE(run_cli({"score", "--corpus", golden("golden_corpus.jsonl"), "--out",
                     dir.string()})
                .exit_code == cli::kExitOk);
    const auto result = run_cli({"robustness", "--design", "groups", "--corpus",
                                 golden("golden_corpus.jsonl"), "--metrics",
                                 (dir / "metrics.jsonl").string(), "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    const auto table = ordered_json::parse(slurp(dir / "robustness.json"));
    CHECK(table.at("design") == "groups");
    CHECK(table.at("table").size() == 9);
    for (const auto& row : table.at("table")) {
        CHECK(row.at("kind") == "independent_one_sided");
        CHECK(row.at("n_a").get<long>() == 5);
        CHECK(row.at("n_b").get<long>() == 5);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("robustness paired design: identical groups give p=1, d=0") {
    const auto dir = fresh_dir("robust-paired");
    std::string metrics_orig;
    std::string metrics_elong;
    std::string manifest;
    for (int i = 0; i < 5; ++i) {
        MetricReport report;
        report.review_id = "p" + std::to_string(i);
        report.review_len = 100 + i;
        report.fre = 50 + i;
        report.ttr = 0.5;
        report.supported_claims = 0.4 + 0.05 * i;
        report.substan_score = report.supported_claims * report.review_len;
        metrics_orig += serialize_metric_report(report) + "\n";
        MetricReport elong = report;
        elong.review_id = report.review_id + "-elongated";
        metrics_elong += serialize_metric_report(elong) + "\n";
        manifest += ordered_json{{"original_id", report.review_id},
                                 {"elongated_id", elong.review_id}}
                        .dump() +
                    "\n";
    }
    std::ofstream(dir / "orig.jsonl") << metrics_orig;
    std::ofstream(dir / "elong.jsonl") << metrics_elong;
    std::ofstream(dir / "pairs.jsonl") << manifest;

    const auto result = run_cli({"robustness", "--design", "paired", "--metrics",
                                 (dir / "orig.jsonl").string(), "--metrics-elongated",
                                 (dir / "elong.jsonl").string(), "--manifest",
                                 (dir / "pairs.jsonl").string(), "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    const auto table = ordered_json::parse(slurp(dir / "robustness.json"));
    for (const auto& row : table.at("table")) {
        CHECK(row.at("kind") == "paired_two_sided");
        CHECK(row.at("p").get<double>() == doctest::Approx(1.0));
        CHECK(row.at("d").get<double>() == doctest::Approx(0.0));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("robustness paired design rejects unpaired ids") {
    const auto dir = fresh_dir("robust-unpaired");
    MetricReport report;
    report.review_id = "p0";
    std::ofstream(dir / "orig.jsonl") << serialize_metric_report(report) + "\n";
    std::ofstream(dir / "elong.jsonl") << serialize_metric_report(report) + "\n";
    std::ofstream(dir / "pairs.jsonl")
        << R"({"original_id":"p0","elongated_id":"p0-elongated"})" << "\n";
    const auto result = run_cli({"robustness", "--design", "paired", "--metrics",
                                 (dir / "orig.jsonl").string(), "--metrics-elongated",
                                 (dir / "elong.jsonl").string(), "--manifest",
                                 (dir / "pairs.jsonl").string(), "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitData);
    CHECK(result.err.find("p0-elongated") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("elongate writes a 1:1 manifest and longer reviews") {
    const auto dir = fresh_dir("elongate");
    const auto result = run_cli({"elongate", "--corpus", golden("golden_corpus.jsonl"),
                                 "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitOk);

    const auto originals = corpus::load_corpus(golden("golden_corpus.jsonl"));
    const auto elongated = corpus::load_corpus(dir / "elongated.jsonl");
    REQUIRE(elongated.reviews.size() == originals.reviews.size());

    std::size_t manifest_lines = 0;
    for (const std::string& line : io::read_lines(dir / "elongation_manifest.jsonl")) {
        if (!line.empty()) ++manifest_lines;
    }
    CHECK(manifest_lines == originals.reviews.size());
    for (std::size_t i = 0; i < originals.reviews.size(); ++i) {
        CHECK(elongated.reviews[i].id == originals.reviews[i].id + "-elongated");
        CHECK(elongated.reviews[i].text.size() > originals.reviews[i].text.size());
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("random baseline refuses to run without a seed") {
    const auto dir = fresh_dir("baseline-noseed");
    const auto result = run_cli({"random-baseline", "--corpus",
                                 golden("golden_corpus.jsonl"), "--aspect", "substantiation",
                                 "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitConfig);
    std::filesystem::remove_all(dir);
}

TEST_CASE("random baseline is reproducible under a fixed seed") {
    const auto dir_a = fresh_dir("baseline-a");
    const auto dir_b = fresh_dir("baseline-b");
    const std::vector<std::string> base = {"random-baseline", "--corpus",
                                           golden("golden_corpus.jsonl"), "--aspect",
                                           "substantiation", "--seed", "42", "--trials",
                                           "200"};
    auto args_a = base;
    args_a.insert(args_a.end(), {"--out", dir_a.string()});
    auto args_b = base;
    args_b.insert(args_b.end(), {"--out", dir_b.string()});
    CHECK(run_cli(args_a).exit_code == cli::kExitOk);
    CHECK(run_cli(args_b).exit_code == cli::kExitOk);
    CHECK(slurp(dir_a / "random_baseline.json") == slurp(dir_b / "random_baseline.json"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("spans decode matches the fixture rules") {
    const auto dir = fresh_dir("spans-decode");
    const auto result = run_cli({"spans", "decode", "--input", golden("bio_fixture.jsonl"),
                                 "--out", dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    const auto lines = io::read_lines(dir / "spans.jsonl");
    REQUIRE(lines.size() == 3);
    const auto l1 = ordered_json::parse(lines[0]);
    CHECK(l1.at("spans") == ordered_json::parse("[[0,13],[20,24]]"));
    CHECK(l1.at("dropped_orphans") == 0);
    const auto l2 = ordered_json::parse(lines[1]);
    CHECK(l2.at("spans").empty());
    const auto l3 = ordered_json::parse(lines[2]);
    CHECK(l3.at("spans") == ordered_json::parse("[[13,23]]"));
    CHECK(l3.at("dropped_orphans") == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("spans eval scores the fixture pair") {
    const auto dir = fresh_dir("spans-eval");
    const auto result = run_cli({"spans", "eval", "--pred", golden("span_eval_pred.jsonl"),
                                 "--gold", golden("span_eval_gold.jsonl"), "--out",
                                 dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    const auto j = ordered_json::parse(slurp(dir / "span_eval.json"));
    // 3 of 4 predictions exact-match 5 gold spans
    CHECK(j.at("span").at("precision").get<double>() == doctest::Approx(3.0 / 4.0));
    CHECK(j.at("span").at("recall").get<double>() == doctest::Approx(3.0 / 5.0));
    // qa: line s1 scores (0, 2/3), line s2 scores (1, 1)
    CHECK(j.at("qa").at("em").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("qa").at("token_f1").get<double>() == doctest::Approx((2.0 / 3.0 + 1.0) / 2));
    std::filesystem::remove_all(dir);
}

TEST_CASE("pred=gold eval is perfect") {
    const auto dir = fresh_dir("spans-perfect");
    const auto result = run_cli({"spans", "eval", "--pred", golden("span_eval_gold.jsonl"),
                                 "--gold", golden("span_eval_gold.jsonl"), "--out",
                                 dir.string()});
    CHECK(result.exit_code == cli::kExitOk);
    const auto j = ordered_json::parse(slurp(dir / "span_eval.json"));
    CHECK(j.at("span").at("f1").get<double>() == doctest::Approx(1.0));
    CHECK(j.at("qa").at("em").get<double>() == doctest::Approx(1.0));
    std::filesystem::remove_all(dir);
}
