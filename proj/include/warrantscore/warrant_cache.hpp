#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "warrantscore/types.hpp"

namespace warrantscore::pipeline {

// File-backed warrant record cache: one JSON file per key under
// <dir>/warrants/<fnv1a-hex>.json, written atomically (temp + rename) so
// concurrent writers of one key serialize on the filesystem and interrupted
// runs resume from whatever completed.
class WarrantCache {
public:
    WarrantCache(std::filesystem::path dir, bool enabled);

    // Composite key: a record is reusable only for the same review, claim,
    // prompts and model assignment.
    static std::string key(const std::string& review_id, int claim_index,
                           const std::string& prompt_hash,
                           const std::string& generator_model,
                           const std::string& acceptability_model,
                           const std::string& judge_model);

    std::optional<WarrantRecord> get(const std::string& key) const;
    void put(const std::string& key, const WarrantRecord& record);

    bool enabled() const { return enabled_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path entry_path(const std::string& key) const;

    std::filesystem::path dir_;
    bool enabled_ = false;
};

// Sibling cache for per-review claim/evidence similarity vectors, stored as
// <dir>/similarities/<fnv1a-hex>.json. Entries are keyed by review id,
// embedder model, dimension and a digest of the pair texts, so any change to
// the pairs or the embedder invalidates them.
class SimilarityCache {
public:
    SimilarityCache(std::filesystem::path dir, bool enabled);

    static std::string key(const std::string& review_id, const std::string& embedder_model,
                           int dimension, const std::string& pair_digest);

    std::optional<std::vector<std::optional<double>>> get(const std::string& key) const;
    void put(const std::string& key, const std::vector<std::optional<double>>& sims);

    bool enabled() const { return enabled_; }

private:
    std::filesystem::path entry_path(const std::string& key) const;

    std::filesystem::path dir_;
    bool enabled_ = false;
};

} // namespace warrantscore::pipeline
