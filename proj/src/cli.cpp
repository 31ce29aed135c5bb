#include "warrantscore/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "warrantscore/corpus.hpp"
#include "warrantscore/errors.hpp"
#include "warrantscore/gateway.hpp"
#include "warrantscore/hash.hpp"
#include "warrantscore/http_backend.hpp"
#include "warrantscore/io.hpp"
#include "warrantscore/json_codec.hpp"
#include "warrantscore/metrics.hpp"
#include "warrantscore/mock_backend.hpp"
#include "warrantscore/pipeline.hpp"
#include "warrantscore/random_baseline.hpp"
#include "warrantscore/spans.hpp"
#include "warrantscore/stats.hpp"
#include "warrantscore/tables.hpp"
#include "warrantscore/text_stats.hpp"
#include "warrantscore/validate.hpp"
#include "warrantscore/warrant_cache.hpp"

namespace warrantscore::cli {

using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Run configuration: defaults <- config file <- flags.

struct RunConfig {
    std::filesystem::path corpus;
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed;
    int parallelism = 1;
    std::string aspect;
    std::string mode = "rate";
    std::optional<std::filesystem::path> cache_dir; // default: <out>/cache
    std::optional<std::filesystem::path> prompts_dir;
    std::optional<std::string> audit_log;
    std::map<std::string, gateway::BackendProfile> backends;
    pipeline::PipelineConfig pipeline_cfg;
    metrics::RandomBaselineConfig baseline;

    std::filesystem::path resolved_cache_dir() const {
        return cache_dir ? *cache_dir : out_dir / "cache";
    }
};

const std::vector<std::string>& role_names() {
    static const std::vector<std::string> names = {"generator", "acceptability", "judge",
                                                   "embedder", "summarizer"};
    return names;
}

gateway::BackendProfile default_profile(const std::string& role) {
    gateway::BackendProfile profile;
    profile.kind = "mock";
    profile.role = gateway::role_from_string(role);
    profile.model = "mock-" + role;
    return profile;
}

RunConfig default_config() {
    RunConfig cfg;
    for (const std::string& role : role_names()) cfg.backends[role] = default_profile(role);
    return cfg;
}

gateway::BackendProfile profile_from_json(const std::string& role, const ordered_json& j) {
    gateway::BackendProfile profile = default_profile(role);
    profile.kind = j.value("kind", "mock");
    profile.endpoint = j.value("endpoint", "");
    profile.model = j.value("model", profile.model);
    profile.api_key_env = j.value("api_key_env", "");
    profile.temperature = j.value("temperature", 0.0);
    if (auto it = j.find("max_output_tokens"); it != j.end() && it->is_number_integer()) {
        profile.max_output_tokens = it->get<int>();
    }
    profile.timeout_ms = j.value("timeout_ms", 30000);
    profile.retry.retries = j.value("retries", 2);
    profile.retry.initial_backoff_ms = j.value("initial_backoff_ms", 100);
    profile.retry.backoff_multiplier = j.value("backoff_multiplier", 2.0);
    profile.embedding_dimension = j.value("embedding_dimension", 64);
    profile.positive_label = j.value("positive_label", "yes");
    profile.negative_label = j.value("negative_label", "no");
    return profile;
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const ordered_json j = ordered_json::parse(buf.str(), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("malformed config JSON: " + path.string());
    }
    if (j.contains("corpus")) cfg.corpus = j.at("corpus").get<std::string>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("parallelism")) cfg.parallelism = j.at("parallelism").get<int>();
    if (j.contains("aspect")) cfg.aspect = j.at("aspect").get<std::string>();
    if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
    if (j.contains("cache_dir")) cfg.cache_dir = j.at("cache_dir").get<std::string>();
    if (j.contains("prompts_dir") && !j.at("prompts_dir").is_null()) {
        cfg.prompts_dir = j.at("prompts_dir").get<std::string>();
    }
    if (j.contains("audit_log") && !j.at("audit_log").is_null()) {
        cfg.audit_log = j.at("audit_log").get<std::string>();
    }
    if (auto it = j.find("backends"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("backends must be an object");
        for (const auto& [role, spec] : it->items()) {
            if (std::find(role_names().begin(), role_names().end(), role) ==
                role_names().end()) {
                throw ConfigError("unknown backend role: " + role);
            }
            if (spec.is_null() || (spec.is_object() && spec.value("kind", "mock") == "none")) {
                cfg.backends.erase(role);
                continue;
            }
            cfg.backends[role] = profile_from_json(role, spec);
        }
    }
    if (auto it = j.find("pipeline"); it != j.end() && it->is_object()) {
        cfg.pipeline_cfg.max_acceptability_attempts =
            it->value("max_acceptability_attempts", 3);
        cfg.pipeline_cfg.judge_parse_retries = it->value("judge_parse_retries", 3);
        cfg.pipeline_cfg.cache_enabled = it->value("cache_enabled", true);
        if (cfg.pipeline_cfg.max_acceptability_attempts < 1) {
            throw ConfigError("max_acceptability_attempts must be >= 1");
        }
    }
    if (auto it = j.find("random_baseline"); it != j.end() && it->is_object()) {
        cfg.baseline.trials = it->value("trials", 20000L);
        cfg.baseline.percentile = it->value("percentile", 50.0);
        if (cfg.baseline.trials < 1) throw ConfigError("trials must be >= 1");
    }
}

// Flag values shared by every subcommand; empty means "not given".
struct CommonFlags {
    std::string config;
    std::string corpus;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> parallelism;
    std::string aspect;
    std::string mode;
    std::string prompts;
    std::string cache_dir;
    std::vector<std::string> backend_overrides; // role=kind[:model]
};

void apply_backend_override(RunConfig& cfg, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("backend override must look like role=kind[:model]: " + spec);
    }
    const std::string role = spec.substr(0, eq);
    if (std::find(role_names().begin(), role_names().end(), role) == role_names().end()) {
        throw ConfigError("unknown backend role: " + role);
    }
    std::string rest = spec.substr(eq + 1);
    std::string model;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
        model = rest.substr(colon + 1);
        rest = rest.substr(0, colon);
    }
    if (rest == "none") {
        cfg.backends.erase(role);
        return;
    }
    auto it = cfg.backends.find(role);
    if (it == cfg.backends.end()) it = cfg.backends.emplace(role, default_profile(role)).first;
    it->second.kind = rest;
    if (!model.empty()) it->second.model = model;
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig cfg = default_config();
    if (!flags.config.empty()) apply_config_file(cfg, flags.config);
    if (!flags.corpus.empty()) cfg.corpus = flags.corpus;
    if (!flags.out.empty()) cfg.out_dir = flags.out;
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.parallelism) cfg.parallelism = *flags.parallelism;
    if (!flags.aspect.empty()) cfg.aspect = flags.aspect;
    if (!flags.mode.empty()) cfg.mode = flags.mode;
    if (!flags.prompts.empty()) cfg.prompts_dir = flags.prompts;
    if (!flags.cache_dir.empty()) cfg.cache_dir = flags.cache_dir;
    for (const std::string& spec : flags.backend_overrides) apply_backend_override(cfg, spec);
    if (cfg.parallelism < 1) throw ConfigError("parallelism must be >= 1");

    if (cfg.prompts_dir) {
        cfg.pipeline_cfg.templates = pipeline::PromptTemplates::load_dir(*cfg.prompts_dir);
    }
    cfg.pipeline_cfg.templates.validate();

    // Wall-clock provenance only when a live chat backend participates;
    // all-mock runs stay bit-reproducible.
    bool any_http = false;
    for (const char* role : {"generator", "acceptability", "judge"}) {
        const auto it = cfg.backends.find(role);
        if (it != cfg.backends.end() && it->second.kind == "http") any_http = true;
    }
    if (any_http) cfg.pipeline_cfg.clock = iso_now;

    cfg.baseline.seed = cfg.seed.value_or(0);
    return cfg;
}

const gateway::BackendProfile& require_backend(const RunConfig& cfg, const std::string& role) {
    const auto it = cfg.backends.find(role);
    if (it == cfg.backends.end()) {
        throw ConfigError("command needs a '" + role + "' backend profile");
    }
    gateway::validate_profile(it->second);
    return it->second;
}

// ---------------------------------------------------------------------------
// Gateway dispatch: one mock and one http instance, routed per profile.

class DispatchGateway final : public gateway::Gateway {
public:
    explicit DispatchGateway(std::shared_ptr<gateway::AuditLogger> audit = nullptr)
        : http_(std::move(audit)) {}

    std::string chat_complete(const gateway::BackendProfile& profile, const std::string& prompt,
                              std::optional<int> max_tokens = std::nullopt) override {
        return select(profile).chat_complete(profile, prompt, max_tokens);
    }

    std::vector<gateway::EmbeddingVector> embed(const gateway::BackendProfile& profile,
                                                const std::vector<std::string>& texts) override {
        return select(profile).embed(profile, texts);
    }

    long calls() const { return mock_.calls() + http_calls_.load(); }

private:
    gateway::Gateway& select(const gateway::BackendProfile& profile) {
        if (profile.kind == "mock") return mock_;
        http_calls_.fetch_add(1);
        return http_;
    }

    gateway::MockGateway mock_;
    gateway::HttpGateway http_;
    std::atomic<long> http_calls_{0};
};

std::shared_ptr<gateway::AuditLogger> make_audit(const RunConfig& cfg) {
    if (!cfg.audit_log) return nullptr;
    return std::make_shared<gateway::AuditLogger>(*cfg.audit_log);
}

// ---------------------------------------------------------------------------
// Shared pieces.

struct Diagnostics {
    std::vector<std::string> messages;

    void add(std::string message) { messages.push_back(std::move(message)); }
    bool any() const { return !messages.empty(); }
    void print(std::ostream& err) const {
        for (const std::string& m : messages) err << "warning: " << m << "\n";
    }
};

corpus::LoadResult load_and_report(const RunConfig& cfg, Diagnostics& diags) {
    if (cfg.corpus.empty()) throw ConfigError("no corpus given (use --corpus or the config)");
    corpus::LoadResult loaded = corpus::load_corpus(cfg.corpus);
    for (const corpus::LoadDiagnostic& d : loaded.diagnostics) {
        diags.add(cfg.corpus.string() + ":" + std::to_string(d.line) + ": " + d.message);
    }
    return loaded;
}

std::unordered_map<std::string, std::vector<WarrantRecord>> group_by_review(
    std::vector<WarrantRecord> records) {
    std::unordered_map<std::string, std::vector<WarrantRecord>> grouped;
    for (WarrantRecord& record : records) {
        grouped[record.review_id].push_back(std::move(record));
    }
    for (auto& [id, list] : grouped) {
        std::sort(list.begin(), list.end(), [](const WarrantRecord& a, const WarrantRecord& b) {
            return a.claim_index < b.claim_index;
        });
    }
    return grouped;
}

// Digest of a review's claim/evidence pair texts; keys the similarity cache.
std::string pair_digest(const Review& review) {
    std::string joined;
    for (const ClaimUnit& claim : review.claims) {
        joined += claim.claim_text;
        joined.push_back('\x1f');
        joined += claim.evidence ? claim.evidence->evidence_text : "";
        joined.push_back('\x1e');
    }
    return fnv1a64_hex(joined);
}

std::vector<std::optional<double>> similarities_for(const Review& review,
                                                    gateway::Gateway& gw,
                                                    const gateway::BackendProfile& embedder,
                                                    pipeline::SimilarityCache* cache) {
    std::vector<std::optional<double>> sims(review.claims.size());
    std::vector<std::size_t> evidenced;
    for (std::size_t i = 0; i < review.claims.size(); ++i) {
        if (review.claims[i].evidence) evidenced.push_back(i);
    }
    if (evidenced.empty()) return sims;

    const std::string key = pipeline::SimilarityCache::key(
        review.id, embedder.model, embedder.embedding_dimension, pair_digest(review));
    if (cache) {
        if (auto hit = cache->get(key); hit && hit->size() == sims.size()) return *hit;
    }

    std::vector<std::string> texts;
    texts.reserve(evidenced.size() * 2);
    for (std::size_t i : evidenced) texts.push_back(review.claims[i].claim_text);
    for (std::size_t i : evidenced) texts.push_back(review.claims[i].evidence->evidence_text);
    const auto vectors = gw.embed(embedder, texts);
    for (std::size_t k = 0; k < evidenced.size(); ++k) {
        sims[evidenced[k]] = gateway::cosine_similarity(vectors[k].values,
                                                        vectors[k + evidenced.size()].values);
    }
    if (cache) cache->put(key, sims);
    return sims;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

ordered_json config_snapshot(const RunConfig& cfg) {
    ordered_json backends = ordered_json::object();
    for (const std::string& role : role_names()) {
        const auto it = cfg.backends.find(role);
        if (it != cfg.backends.end()) backends[role] = it->second.model;
    }
    ordered_json snapshot = ordered_json::object();
    if (cfg.seed) {
        snapshot["seed"] = *cfg.seed;
    } else {
        snapshot["seed"] = nullptr;
    }
    snapshot["backends"] = std::move(backends);
    snapshot["prompt_hash"] = cfg.pipeline_cfg.templates.combined_hash();
    return snapshot;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    io::atomic_write_file(path, content);
}

// ---------------------------------------------------------------------------
// score

struct ScoreOutcome {
    std::vector<MetricReport> reports;
    Diagnostics diags;
};

ScoreOutcome compute_scores(const RunConfig& cfg, const std::optional<std::string>& sidecar,
                            DispatchGateway& gw) {
    ScoreOutcome outcome;
    corpus::LoadResult loaded = load_and_report(cfg, outcome.diags);

    std::unordered_map<std::string, std::vector<WarrantRecord>> warrants;
    if (sidecar) {
        warrants = group_by_review(io::read_warrant_sidecar(*sidecar));
    } else {
        pipeline::RoleProfiles profiles{require_backend(cfg, "generator"),
                                        require_backend(cfg, "acceptability"),
                                        require_backend(cfg, "judge")};
        pipeline::WarrantCache cache(cfg.resolved_cache_dir(), cfg.pipeline_cfg.cache_enabled);
        const auto results = pipeline::run_pipeline_corpus(
            loaded.reviews, gw, profiles, cfg.pipeline_cfg, &cache, cfg.parallelism);
        for (std::size_t i = 0; i < results.size(); ++i) {
            for (const pipeline::PipelineFailure& f : results[i].failures) {
                outcome.diags.add("review " + loaded.reviews[i].id + " claim " +
                                  std::to_string(f.claim_index) + ": " + f.message);
            }
            warrants[loaded.reviews[i].id] = results[i].records;
        }
    }

    const bool have_embedder = cfg.backends.contains("embedder");
    std::optional<pipeline::SimilarityCache> sim_cache;
    if (have_embedder) {
        gateway::validate_profile(cfg.backends.at("embedder"));
        sim_cache.emplace(cfg.resolved_cache_dir(), cfg.pipeline_cfg.cache_enabled);
    }

    for (const Review& review : loaded.reviews) {
        try {
            const auto rec = warrants.find(review.id);
            if (rec == warrants.end()) {
                throw DataError("no warrant records for review " + review.id);
            }
            std::optional<std::vector<std::optional<double>>> sims;
            if (have_embedder) {
                sims = similarities_for(review, gw, cfg.backends.at("embedder"),
                                        sim_cache ? &*sim_cache : nullptr);
            }
            outcome.reports.push_back(
                metrics::compute_report(review, rec->second, sims ? &*sims : nullptr));
        } catch (const Error& e) {
            outcome.diags.add("review " + review.id + ": " + e.what());
        }
    }
    return outcome;
}

std::string metrics_summary_text(const std::vector<MetricReport>& reports) {
    std::ostringstream out;
    out << "reviews scored: " << reports.size() << "\n";
    if (reports.empty()) return out.str();
    out << "metric            mean\n";
    for (const std::string& metric : stats::metric_order()) {
        double sum = 0.0;
        for (const MetricReport& r : reports) sum += stats::metric_value(r, metric);
        char line[96];
        std::snprintf(line, sizeof(line), "%-17s %s\n", metric.c_str(),
                      format_double(sum / static_cast<double>(reports.size())).c_str());
        out << line;
    }
    long no_claims = 0;
    long judge_fallbacks = 0;
    long no_embeddings = 0;
    for (const MetricReport& r : reports) {
        no_claims += r.flags.no_claims ? 1 : 0;
        judge_fallbacks += r.flags.judge_fallbacks;
        no_embeddings += r.flags.no_embeddings ? 1 : 0;
    }
    out << "flags: no_claims=" << no_claims << " judge_fallbacks=" << judge_fallbacks
        << " no_embeddings=" << no_embeddings << "\n";
    return out.str();
}

int cmd_score(const RunConfig& cfg, const std::optional<std::string>& sidecar,
              std::ostream& out, std::ostream& err) {
    DispatchGateway gw(make_audit(cfg));
    ScoreOutcome outcome = compute_scores(cfg, sidecar, gw);

    io::write_metric_reports(cfg.out_dir / "metrics.jsonl", outcome.reports);
    const std::string summary = metrics_summary_text(outcome.reports);
    write_text(cfg.out_dir / "metrics.txt", summary);

    outcome.diags.print(err);
    out << summary;
    out << "gateway calls: " << gw.calls() << "\n";
    return outcome.diags.any() ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// warrants

int cmd_warrants(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    DispatchGateway gw(make_audit(cfg));
    Diagnostics diags;
    corpus::LoadResult loaded = load_and_report(cfg, diags);

    pipeline::RoleProfiles profiles{require_backend(cfg, "generator"),
                                    require_backend(cfg, "acceptability"),
                                    require_backend(cfg, "judge")};
    pipeline::WarrantCache cache(cfg.resolved_cache_dir(), cfg.pipeline_cfg.cache_enabled);
    const auto results = pipeline::run_pipeline_corpus(loaded.reviews, gw, profiles,
                                                       cfg.pipeline_cfg, &cache,
                                                       cfg.parallelism);
    std::vector<WarrantRecord> records;
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (const pipeline::PipelineFailure& f : results[i].failures) {
            diags.add("review " + loaded.reviews[i].id + " claim " +
                      std::to_string(f.claim_index) + ": " + f.message);
        }
        records.insert(records.end(), results[i].records.begin(), results[i].records.end());
    }
    io::write_warrant_sidecar(cfg.out_dir / "warrants.jsonl", records);

    diags.print(err);
    out << "warrant records: " << records.size() << "\n";
    out << "gateway calls: " << gw.calls() << "\n";
    return diags.any() ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// correlate

int cmd_correlate(const RunConfig& cfg, const std::string& metrics_path, std::ostream& out,
                  std::ostream& err) {
    if (cfg.aspect.empty()) throw ConfigError("correlate needs --aspect");
    Diagnostics diags;
    corpus::LoadResult loaded = load_and_report(cfg, diags);
    const auto reports = io::read_metric_reports(metrics_path);
    const auto table = stats::correlation_table(reports, loaded.reviews, cfg.aspect);

    ordered_json rows = ordered_json::array();
    std::ostringstream text;
    text << "aspect: " << cfg.aspect << "\n";
    text << "metric            rho\n";
    for (const stats::CorrelationCell& cell : table) {
        ordered_json row = {{"metric", cell.metric}};
        if (cell.rho) {
            row["rho"] = *cell.rho;
        } else {
            row["rho"] = nullptr;
            row["note"] = cell.note;
        }
        rows.push_back(std::move(row));
        char line[96];
        std::snprintf(line, sizeof(line), "%-17s %s\n", cell.metric.c_str(),
                      cell.rho ? format_double(*cell.rho).c_str() : "n/a");
        text << line;
    }
    ordered_json result = {{"aspect", cfg.aspect},
                           {"table", std::move(rows)},
                           {"config", config_snapshot(cfg)}};
    write_text(cfg.out_dir / "correlation.json", result.dump(2) + "\n");
    write_text(cfg.out_dir / "correlation.txt", text.str());

    diags.print(err);
    out << text.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// robustness

std::vector<std::pair<std::string, std::string>> read_manifest(
    const std::filesystem::path& path) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const std::string& line : io::read_lines(path)) {
        if (line.empty()) continue;
        const ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("original_id") ||
            !j.contains("elongated_id")) {
            throw DataError("malformed manifest line in " + path.string());
        }
        pairs.emplace_back(j.at("original_id").get<std::string>(),
                           j.at("elongated_id").get<std::string>());
    }
    if (pairs.empty()) throw DataError("empty manifest: " + path.string());
    return pairs;
}

std::string comparison_text(const std::vector<stats::GroupComparison>& table) {
    std::ostringstream text;
    text << "metric            " << (table.empty() ? "" : table.front().group_a) << "-mean  "
         << (table.empty() ? "" : table.front().group_b) << "-mean  t  p  d\n";
    for (const stats::GroupComparison& row : table) {
        text << row.metric << " " << format_double(row.mean_a) << " "
             << format_double(row.mean_b) << " "
             << (row.t ? format_double(*row.t) : "n/a") << " "
             << (row.p ? format_double(*row.p) : "n/a") << " "
             << (row.d ? format_double(*row.d) : "n/a") << "\n";
    }
    return text.str();
}

ordered_json comparison_json(const std::vector<stats::GroupComparison>& table) {
    ordered_json rows = ordered_json::array();
    for (const stats::GroupComparison& row : table) {
        ordered_json r = {{"metric", row.metric}, {"group_a", row.group_a},
                          {"group_b", row.group_b}, {"n_a", row.n_a},
                          {"n_b", row.n_b},         {"mean_a", row.mean_a},
                          {"mean_b", row.mean_b},   {"kind", row.kind}};
        r["t"] = row.t ? ordered_json(*row.t) : ordered_json(nullptr);
        r["p"] = row.p ? ordered_json(*row.p) : ordered_json(nullptr);
        r["d"] = row.d ? ordered_json(*row.d) : ordered_json(nullptr);
        if (!row.note.empty()) r["note"] = row.note;
        rows.push_back(std::move(r));
    }
    return rows;
}

int cmd_robustness(const RunConfig& cfg, const std::string& design,
                   const std::string& metrics_path, const std::string& metrics_elongated,
                   const std::string& manifest_path, std::ostream& out, std::ostream& err) {
    std::vector<stats::GroupComparison> table;
    if (design == "groups") {
        Diagnostics diags;
        corpus::LoadResult loaded = load_and_report(cfg, diags);
        diags.print(err);
        table = stats::sufficiency_comparison(io::read_metric_reports(metrics_path),
                                              loaded.reviews);
    } else if (design == "paired") {
        if (metrics_elongated.empty() || manifest_path.empty()) {
            throw ConfigError("paired design needs --metrics-elongated and --manifest");
        }
        table = stats::paired_comparison(io::read_metric_reports(metrics_path),
                                         io::read_metric_reports(metrics_elongated),
                                         read_manifest(manifest_path));
    } else {
        throw ConfigError("unknown design: " + design);
    }

    ordered_json result = {{"design", design},
                           {"table", comparison_json(table)},
                           {"config", config_snapshot(cfg)}};
    const std::string text = comparison_text(table);
    write_text(cfg.out_dir / "robustness.json", result.dump(2) + "\n");
    write_text(cfg.out_dir / "robustness.txt", text);
    out << text;
    return kExitOk;
}

// ---------------------------------------------------------------------------
// elongate

int cmd_elongate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    DispatchGateway gw(make_audit(cfg));
    Diagnostics diags;
    corpus::LoadResult loaded = load_and_report(cfg, diags);
    const gateway::BackendProfile& summarizer = require_backend(cfg, "summarizer");

    std::string corpus_lines;
    std::string manifest_lines;
    long built = 0;
    for (const Review& review : loaded.reviews) {
        try {
            const Review elongated = corpus::build_elongated(review, gw, summarizer);
            corpus_lines += serialize_review(elongated);
            corpus_lines.push_back('\n');
            manifest_lines += ordered_json{{"original_id", review.id},
                                           {"elongated_id", elongated.id}}
                                  .dump();
            manifest_lines.push_back('\n');
            ++built;
        } catch (const Error& e) {
            diags.add(e.what());
        }
    }
    write_text(cfg.out_dir / "elongated.jsonl", corpus_lines);
    write_text(cfg.out_dir / "elongation_manifest.jsonl", manifest_lines);

    diags.print(err);
    out << "elongated reviews: " << built << "\n";
    out << "gateway calls: " << gw.calls() << "\n";
    return diags.any() ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------------------
// random-baseline

int cmd_random_baseline(const RunConfig& cfg, std::optional<long> trials_override,
                        std::ostream& out, std::ostream& err) {
    if (!cfg.seed) throw ConfigError("random baseline requires an explicit --seed");
    if (cfg.aspect.empty()) throw ConfigError("random baseline needs --aspect");
    if (cfg.mode != "rate" && cfg.mode != "score") {
        throw ConfigError("mode must be rate or score");
    }
    Diagnostics diags;
    corpus::LoadResult loaded = load_and_report(cfg, diags);

    std::vector<double> human;
    std::string missing;
    for (const Review& review : loaded.reviews) {
        const auto it = review.human_scores.find(cfg.aspect);
        if (it == review.human_scores.end() || it->second.empty()) {
            missing += missing.empty() ? review.id : ", " + review.id;
            continue;
        }
        human.push_back(static_cast<double>(stats::aggregate_max(it->second)));
    }
    if (!missing.empty()) {
        throw DataError("reviews missing aspect '" + cfg.aspect + "': " + missing);
    }

    metrics::RandomBaselineConfig baseline = cfg.baseline;
    baseline.seed = *cfg.seed;
    if (trials_override) baseline.trials = *trials_override;
    const auto mode =
        cfg.mode == "rate" ? metrics::BaselineMode::rate : metrics::BaselineMode::score;
    const auto result =
        metrics::random_baseline_correlation(loaded.reviews, human, baseline, mode);

    ordered_json j = {{"mode", cfg.mode},
                      {"aspect", cfg.aspect},
                      {"trials", result.trials},
                      {"undefined_trials", result.undefined_trials},
                      {"percentile", result.percentile_q},
                      {"percentile_correlation", result.percentile_correlation},
                      {"config", config_snapshot(cfg)}};
    std::ostringstream text;
    text << "random baseline (" << cfg.mode << "), " << result.trials << " trials, p"
         << result.percentile_q << ": " << format_double(result.percentile_correlation)
         << "\n";
    write_text(cfg.out_dir / "random_baseline.json", j.dump(2) + "\n");
    write_text(cfg.out_dir / "random_baseline.txt", text.str());

    diags.print(err);
    out << text.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spans

spans::BioTagSequence bio_from_json(const ordered_json& j) {
    spans::BioTagSequence seq;
    if (!j.is_object() || !j.contains("tokens") || !j.contains("tags") ||
        !j.contains("offsets")) {
        throw DataError("BIO line needs tokens, tags and offsets");
    }
    seq.tokens = j.at("tokens").get<std::vector<std::string>>();
    for (const auto& t : j.at("tags")) {
        seq.tags.push_back(spans::bio_tag_from_string(t.get<std::string>()));
    }
    seq.offsets = j.at("offsets").get<std::vector<std::size_t>>();
    if (auto it = j.find("text_length"); it != j.end() && it->is_number_unsigned()) {
        seq.text_length = it->get<std::size_t>();
    }
    return seq;
}

int cmd_spans_decode(const RunConfig& cfg, const std::string& input, std::ostream& out,
                     std::ostream& err) {
    (void)err;
    std::string output_lines;
    long n = 0;
    for (const std::string& line : io::read_lines(input)) {
        if (line.empty()) continue;
        const ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) throw DataError("malformed BIO line in " + input);
        const spans::DecodedSpans decoded = spans::decode_bio(bio_from_json(j));
        ordered_json row = ordered_json::object();
        if (j.contains("id")) row["id"] = j.at("id");
        ordered_json span_list = ordered_json::array();
        for (const Span& span : decoded.spans) {
            span_list.push_back(ordered_json::array({span.start, span.end}));
        }
        row["spans"] = std::move(span_list);
        row["dropped_orphans"] = decoded.dropped_orphans;
        output_lines += row.dump();
        output_lines.push_back('\n');
        ++n;
    }
    write_text(cfg.out_dir / "spans.jsonl", output_lines);
    out << "decoded sequences: " << n << "\n";
    return kExitOk;
}

struct SpanEvalLine {
    std::vector<Span> spans;
    std::optional<std::string> answer;
};

std::map<std::string, SpanEvalLine> read_span_eval(const std::filesystem::path& path) {
    std::map<std::string, SpanEvalLine> lines;
    long auto_id = 0;
    for (const std::string& line : io::read_lines(path)) {
        if (line.empty()) continue;
        const ordered_json j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw DataError("malformed span eval line in " + path.string());
        }
        const std::string id =
            j.contains("id") ? j.at("id").get<std::string>() : std::to_string(auto_id);
        ++auto_id;
        SpanEvalLine entry;
        if (auto it = j.find("spans"); it != j.end() && it->is_array()) {
            for (const auto& s : *it) {
                entry.spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
            }
        }
        if (auto it = j.find("answer"); it != j.end() && it->is_string()) {
            entry.answer = it->get<std::string>();
        }
        if (!lines.emplace(id, std::move(entry)).second) {
            throw DataError("duplicate id in " + path.string() + ": " + id);
        }
    }
    return lines;
}

int cmd_spans_eval(const RunConfig& cfg, const std::string& pred_path,
                   const std::string& gold_path, std::ostream& out, std::ostream& err) {
    (void)err;
    const auto pred = read_span_eval(pred_path);
    const auto gold = read_span_eval(gold_path);

    std::string unmatched;
    for (const auto& [id, entry] : gold) {
        if (!pred.contains(id)) unmatched += unmatched.empty() ? id : ", " + id;
    }
    if (!unmatched.empty()) throw DataError("ids missing from predictions: " + unmatched);

    // Micro span P/R/F1: per-id exact matches pooled over the dataset.
    long hits = 0;
    long n_pred = 0;
    long n_gold = 0;
    double em_sum = 0.0;
    double f1_sum = 0.0;
    long qa_n = 0;
    for (const auto& [id, gold_entry] : gold) {
        const SpanEvalLine& pred_entry = pred.at(id);
        const std::set<Span> gold_set(gold_entry.spans.begin(), gold_entry.spans.end());
        const std::set<Span> pred_set(pred_entry.spans.begin(), pred_entry.spans.end());
        for (const Span& span : pred_set) hits += gold_set.count(span);
        n_pred += static_cast<long>(pred_set.size());
        n_gold += static_cast<long>(gold_set.size());
        if (gold_entry.answer && pred_entry.answer) {
            const spans::QaScore qa = spans::qa_em_f1(*pred_entry.answer, *gold_entry.answer);
            em_sum += qa.em;
            f1_sum += qa.token_f1;
            ++qa_n;
        }
    }
    spans::SpanPrf prf;
    if (n_pred == 0 && n_gold == 0) {
        prf = {1.0, 1.0, 1.0};
    } else {
        prf.precision = n_pred == 0 ? 0.0 : static_cast<double>(hits) / n_pred;
        prf.recall = n_gold == 0 ? 0.0 : static_cast<double>(hits) / n_gold;
        if (prf.precision + prf.recall > 0.0) {
            prf.f1 = 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall);
        }
    }

    ordered_json j = {{"span", {{"precision", prf.precision},
                                {"recall", prf.recall},
                                {"f1", prf.f1},
                                {"n_pred", n_pred},
                                {"n_gold", n_gold}}}};
    std::ostringstream text;
    text << "span precision " << format_double(prf.precision) << " recall "
         << format_double(prf.recall) << " f1 " << format_double(prf.f1) << "\n";
    if (qa_n > 0) {
        j["qa"] = {{"em", em_sum / qa_n}, {"token_f1", f1_sum / qa_n}, {"n", qa_n}};
        text << "qa em " << format_double(em_sum / qa_n) << " token_f1 "
             << format_double(f1_sum / qa_n) << "\n";
    }
    write_text(cfg.out_dir / "span_eval.json", j.dump(2) + "\n");
    write_text(cfg.out_dir / "span_eval.txt", text.str());
    out << text.str();
    return kExitOk;
}

void add_common(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config, "declarative run config (JSON)");
    sub->add_option("--corpus", flags.corpus, "corpus JSONL path");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "seed for stochastic steps");
    sub->add_option("--parallelism", flags.parallelism, "worker thread bound");
    sub->add_option("--aspect", flags.aspect, "human score aspect name");
    sub->add_option("--mode", flags.mode, "rate or score");
    sub->add_option("--prompts", flags.prompts, "prompt template directory");
    sub->add_option("--cache-dir", flags.cache_dir, "warrant/similarity cache directory");
    sub->add_option("--backend-profile", flags.backend_overrides,
                    "override a backend: role=kind[:model]");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"substantiation metrics for peer-review comments"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string sidecar;
    std::string metrics_path;
    std::string metrics_elongated;
    std::string manifest_path;
    std::string design = "groups";
    std::optional<long> trials;
    std::string spans_input;
    std::string pred_path;
    std::string gold_path;

    CLI::App* score = app.add_subcommand("score", "per-review metric reports");
    add_common(score, flags);
    score->add_option("--warrants", sidecar, "warrant sidecar JSONL (skips the pipeline)");

    CLI::App* warrants = app.add_subcommand("warrants", "run the warrant pipeline");
    add_common(warrants, flags);

    CLI::App* correlate = app.add_subcommand("correlate", "metric/human correlation table");
    add_common(correlate, flags);
    correlate->add_option("--metrics", metrics_path, "metric reports JSONL")->required();

    CLI::App* robustness = app.add_subcommand("robustness", "group comparison tables");
    add_common(robustness, flags);
    robustness->add_option("--design", design, "groups or paired");
    robustness->add_option("--metrics", metrics_path, "metric reports JSONL")->required();
    robustness->add_option("--metrics-elongated", metrics_elongated,
                           "elongated metric reports JSONL (paired design)");
    robustness->add_option("--manifest", manifest_path, "elongation manifest (paired design)");

    CLI::App* elongate = app.add_subcommand("elongate", "build the elongated corpus");
    add_common(elongate, flags);

    CLI::App* baseline = app.add_subcommand("random-baseline", "seeded random judge baseline");
    add_common(baseline, flags);
    baseline->add_option("--trials", trials, "number of trials");

    CLI::App* spans_cmd = app.add_subcommand("spans", "span codec utilities");
    CLI::App* decode = spans_cmd->add_subcommand("decode", "decode BIO tag sequences");
    add_common(decode, flags);
    decode->add_option("--input", spans_input, "BIO sequences JSONL")->required();
    CLI::App* eval = spans_cmd->add_subcommand("eval", "span and QA evaluation");
    add_common(eval, flags);
    eval->add_option("--pred", pred_path, "predicted spans/answers JSONL")->required();
    eval->add_option("--gold", gold_path, "gold spans/answers JSONL")->required();
    spans_cmd->require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const RunConfig cfg = resolve_config(flags);
        if (score->parsed()) {
            return cmd_score(cfg,
                             sidecar.empty() ? std::nullopt
                                             : std::optional<std::string>(sidecar),
                             out, err);
        }
        if (warrants->parsed()) return cmd_warrants(cfg, out, err);
        if (correlate->parsed()) return cmd_correlate(cfg, metrics_path, out, err);
        if (robustness->parsed()) {
            return cmd_robustness(cfg, design, metrics_path, metrics_elongated, manifest_path,
                                  out, err);
        }
        if (elongate->parsed()) return cmd_elongate(cfg, out, err);
        if (baseline->parsed()) return cmd_random_baseline(cfg, trials, out, err);
        if (spans_cmd->parsed()) {
            if (decode->parsed()) return cmd_spans_decode(cfg, spans_input, out, err);
            if (eval->parsed()) return cmd_spans_eval(cfg, pred_path, gold_path, out, err);
        }
        err << "error: no subcommand\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitPartial;
    }
}

} // namespace warrantscore::cli
