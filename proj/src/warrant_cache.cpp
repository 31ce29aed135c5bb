#include "warrantscore/warrant_cache.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "warrantscore/hash.hpp"
#include "warrantscore/json_codec.hpp"

namespace warrantscore::pipeline {

WarrantCache::WarrantCache(std::filesystem::path dir, bool enabled)
    : dir_(std::move(dir)), enabled_(enabled) {
    if (enabled_) std::filesystem::create_directories(dir_ / "warrants");
}

std::string WarrantCache::key(const std::string& review_id, int claim_index,
                              const std::string& prompt_hash,
                              const std::string& generator_model,
                              const std::string& acceptability_model,
                              const std::string& judge_model) {
    std::ostringstream out;
    out << review_id << '\x1f' << claim_index << '\x1f' << prompt_hash << '\x1f'
        << generator_model << '\x1f' << acceptability_model << '\x1f' << judge_model;
    return out.str();
}

std::filesystem::path WarrantCache::entry_path(const std::string& key) const {
    return dir_ / "warrants" / (fnv1a64_hex(key) + ".json");
}

std::optional<WarrantRecord> WarrantCache::get(const std::string& key) const {
    if (!enabled_) return std::nullopt;
    const std::filesystem::path path = entry_path(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_warrant_record(buf.str());
    } catch (...) {
        return std::nullopt; // unreadable entry behaves like a miss
    }
}

void WarrantCache::put(const std::string& key, const WarrantRecord& record) {
    if (!enabled_) return;
    const std::filesystem::path path = entry_path(key);
    // Unique temp name per writer; the final rename is atomic, so concurrent
    // writers of one key serialize to a whole file either way.
    static std::atomic<unsigned> counter{0};
    const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) +
                                      "." + std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << serialize_warrant_record(record) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

SimilarityCache::SimilarityCache(std::filesystem::path dir, bool enabled)
    : dir_(std::move(dir)), enabled_(enabled) {
    if (enabled_) std::filesystem::create_directories(dir_ / "similarities");
}

std::string SimilarityCache::key(const std::string& review_id,
                                 const std::string& embedder_model, int dimension,
                                 const std::string& pair_digest) {
    std::ostringstream out;
    out << review_id << '\x1f' << embedder_model << '\x1f' << dimension << '\x1f'
        << pair_digest;
    return out.str();
}

std::filesystem::path SimilarityCache::entry_path(const std::string& key) const {
    return dir_ / "similarities" / (fnv1a64_hex(key) + ".json");
}

std::optional<std::vector<std::optional<double>>> SimilarityCache::get(
    const std::string& key) const {
    if (!enabled_) return std::nullopt;
    std::ifstream in(entry_path(key), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto j = nlohmann::ordered_json::parse(buf.str(), nullptr, false);
    if (j.is_discarded() || !j.is_array()) return std::nullopt;
    std::vector<std::optional<double>> sims;
    for (const auto& v : j) {
        if (v.is_null()) {
            sims.push_back(std::nullopt);
        } else if (v.is_number()) {
            sims.push_back(v.get<double>());
        } else {
            return std::nullopt;
        }
    }
    return sims;
}

void SimilarityCache::put(const std::string& key,
                          const std::vector<std::optional<double>>& sims) {
    if (!enabled_) return;
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& s : sims) {
        if (s) {
            j.push_back(*s);
        } else {
            j.push_back(nullptr);
        }
    }
    const std::filesystem::path path = entry_path(key);
    static std::atomic<unsigned> sim_counter{0};
    const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) +
                                      "." + std::to_string(sim_counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << j.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

} // namespace warrantscore::pipeline
