#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace warrantscore::pipeline {

// The three pipeline prompts. Templates are content-addressed: the combined
// hash goes into every WarrantRecord's provenance and into cache keys, so a
// template edit invalidates exactly the records it affects.
struct PromptTemplates {
    std::string generation;    // placeholders: {claim} {evidence} {prior_attempts}
    std::string acceptability; // placeholders: {claim} {evidence} {warrant}
    std::string judge;         // placeholders: {claim} {evidence} {warrant}

    // Throws ConfigError when a declared placeholder is missing.
    void validate() const;

    std::string combined_hash() const;

    static PromptTemplates defaults();

    // Reads generation.txt / acceptability.txt / judge.txt from `dir`.
    static PromptTemplates load_dir(const std::filesystem::path& dir);
};

// Replaces every "{name}" for the provided vars. Unknown placeholders are
// left in place (validate() catches missing declared ones up front).
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& vars);

// Expansion of {prior_attempts}: empty on the first attempt, otherwise a
// short preamble listing the rejected warrants.
std::string render_prior_attempts(const std::vector<std::string>& rejected);

// The elongation summary prompt (placeholder: {review}); lives with the
// pipeline prompts so one directory versions all model-facing text.
std::string default_summary_prompt();

} // namespace warrantscore::pipeline
