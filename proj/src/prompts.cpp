#include "warrantscore/prompts.hpp"

#include <fstream>
#include <sstream>

#include "warrantscore/errors.hpp"
#include "warrantscore/hash.hpp"

namespace warrantscore::pipeline {

namespace {

constexpr const char* kGeneration =
    "A warrant is an unstated, common-sense rule that explains why a piece of evidence\n"
    "supports a claim, of the kind a reviewer accumulates through reviewing and research\n"
    "experience.\n"
    "\n"
    "Claim: {claim}\n"
    "Evidence: {evidence}\n"
    "{prior_attempts}"
    "Write the warrant connecting this evidence to this claim as a single declarative\n"
    "sentence. Reply with the warrant sentence only.\n";

constexpr const char* kAcceptability =
    "Decide whether the following warrant is acceptable as the link between the claim\n"
    "and the evidence. A warrant is acceptable only if it (a) is relevant and fully\n"
    "explains the link between the claim and the evidence, (b) is not trivial, and\n"
    "(c) must hold for the claim to follow from the evidence, even if it conflicts\n"
    "with your own beliefs.\n"
    "\n"
    "Claim: {claim}\n"
    "Evidence: {evidence}\n"
    "Warrant: {warrant}\n"
    "\n"
    "Reply with exactly one word: yes if the warrant is acceptable, no otherwise.\n";

constexpr const char* kJudge =
    "Rate the plausibility of the warrant below as the common-sense rule connecting\n"
    "the evidence to the claim, on a scale from 1 (implausible) to 4 (highly\n"
    "plausible).\n"
    "\n"
    "Claim: {claim}\n"
    "Evidence: {evidence}\n"
    "Warrant: {warrant}\n"
    "\n"
    "Reply with a single integer from 1 to 4.\n";

constexpr const char* kSummary =
    "Condense the following peer review into a short summary that restates its main\n"
    "points without adding new ones.\n"
    "\n"
    "Review:\n"
    "{review}\n"
    "\n"
    "Reply with the summary only.\n";

void require_placeholder(const std::string& tmpl, const char* name, const char* which) {
    if (tmpl.find(name) == std::string::npos) {
        throw ConfigError(std::string(which) + " template is missing placeholder " + name);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read prompt template: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

void PromptTemplates::validate() const {
    require_placeholder(generation, "{claim}", "generation");
    require_placeholder(generation, "{evidence}", "generation");
    require_placeholder(generation, "{prior_attempts}", "generation");
    require_placeholder(acceptability, "{claim}", "acceptability");
    require_placeholder(acceptability, "{evidence}", "acceptability");
    require_placeholder(acceptability, "{warrant}", "acceptability");
    require_placeholder(judge, "{claim}", "judge");
    require_placeholder(judge, "{evidence}", "judge");
    require_placeholder(judge, "{warrant}", "judge");
}

std::string PromptTemplates::combined_hash() const {
    return fnv1a64_hex(generation + '\x1f' + acceptability + '\x1f' + judge);
}

PromptTemplates PromptTemplates::defaults() {
    return {kGeneration, kAcceptability, kJudge};
}

PromptTemplates PromptTemplates::load_dir(const std::filesystem::path& dir) {
    PromptTemplates templates{read_file(dir / "generation.txt"),
                              read_file(dir / "acceptability.txt"),
                              read_file(dir / "judge.txt")};
    templates.validate();
    return templates;
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        const char c = tmpl[i];
        if (c == '{') {
            const std::size_t close = tmpl.find('}', i);
            if (close != std::string_view::npos) {
                const std::string name(tmpl.substr(i + 1, close - i - 1));
                const auto it = vars.find(name);
                if (it != vars.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

std::string render_prior_attempts(const std::vector<std::string>& rejected) {
    if (rejected.empty()) return "";
    std::string out =
        "The following earlier warrants were rejected as not acceptable; write a\n"
        "different warrant:\n";
    for (const std::string& warrant : rejected) {
        out += "- " + warrant + "\n";
    }
    return out;
}

std::string default_summary_prompt() { return kSummary; }

} // namespace warrantscore::pipeline
