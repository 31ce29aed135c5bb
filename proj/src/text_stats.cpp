#include "warrantscore/text_stats.hpp"

#include <unordered_set>

#include "warrantscore/errors.hpp"
#include "warrantscore/utf8.hpp"

namespace warrantscore::text {

std::vector<std::string> words(std::string_view text) {
    std::vector<std::string> out;
    const std::u32string cps = utf8::decode(text);
    std::u32string current;
    for (char32_t cp : cps) {
        if (utf8::is_space(cp)) {
            if (!current.empty()) {
                out.push_back(utf8::encode(current));
                current.clear();
            }
        } else {
            current.push_back(cp);
        }
    }
    if (!current.empty()) out.push_back(utf8::encode(current));
    return out;
}

long word_count(std::string_view text) {
    long n = 0;
    bool in_word = false;
    for (char32_t cp : utf8::decode(text)) {
        if (utf8::is_space(cp)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++n;
        }
    }
    return n;
}

long sentence_count(std::string_view text) {
    if (word_count(text) == 0) throw DataError("empty text");
    long sentences = 0;
    bool has_content = false;
    bool in_terminator_run = false;
    for (char32_t cp : utf8::decode(text)) {
        const bool terminator = cp == U'.' || cp == U'!' || cp == U'?';
        if (terminator) {
            if (has_content && !in_terminator_run) {
                ++sentences;
                has_content = false;
            }
            in_terminator_run = true;
        } else {
            in_terminator_run = false;
            if (!utf8::is_space(cp)) has_content = true;
        }
    }
    if (has_content) ++sentences;
    return sentences > 0 ? sentences : 1;
}

namespace {

bool is_vowel(char32_t cp) {
    switch (cp) {
        case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
            return true;
        default:
            return false;
    }
}

// Word core after stripping non-alphabetic edge characters, lowercased.
std::u32string word_core(std::string_view word) {
    std::u32string cps = utf8::decode(word);
    std::size_t begin = 0;
    std::size_t end = cps.size();
    while (begin < end && !utf8::is_ascii_alpha(cps[begin])) ++begin;
    while (end > begin && !utf8::is_ascii_alpha(cps[end - 1])) --end;
    std::u32string core;
    for (std::size_t i = begin; i < end; ++i) core.push_back(utf8::to_lower_ascii(cps[i]));
    return core;
}

} // namespace

long syllable_count(std::string_view word) {
    const std::u32string core = word_core(word);
    if (core.empty()) return 1;
    long groups = 0;
    bool in_group = false;
    for (char32_t cp : core) {
        if (is_vowel(cp)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }
    // Terminal silent 'e' preceded by a consonant.
    if (core.size() >= 2 && core.back() == U'e' && !is_vowel(core[core.size() - 2])) {
        --groups;
    }
    return groups > 0 ? groups : 1;
}

double flesch_reading_ease(std::string_view text) {
    const TextStats stats = analyze(text);
    if (stats.total_words == 0) throw DataError("empty text");
    const double words_per_sentence =
        static_cast<double>(stats.total_words) / static_cast<double>(stats.total_sentences);
    const double syllables_per_word =
        static_cast<double>(stats.total_syllables) / static_cast<double>(stats.total_words);
    return 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word;
}

std::string normalize_token(std::string_view word) {
    std::u32string cps = utf8::decode(word);
    std::size_t begin = 0;
    std::size_t end = cps.size();
    while (begin < end && utf8::is_punct(cps[begin])) ++begin;
    while (end > begin && utf8::is_punct(cps[end - 1])) --end;
    std::u32string out;
    for (std::size_t i = begin; i < end; ++i) out.push_back(utf8::to_lower_ascii(cps[i]));
    return utf8::encode(out);
}

double type_token_ratio(std::string_view text) {
    const std::vector<std::string> tokens = words(text);
    if (tokens.empty()) throw DataError("empty text");
    std::unordered_set<std::string> types;
    for (const std::string& token : tokens) types.insert(normalize_token(token));
    return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

TextStats analyze(std::string_view text) {
    TextStats stats;
    const std::vector<std::string> tokens = words(text);
    stats.total_words = static_cast<long>(tokens.size());
    if (stats.total_words == 0) return stats;
    stats.total_sentences = sentence_count(text);
    std::unordered_set<std::string> types;
    for (const std::string& token : tokens) {
        stats.total_syllables += syllable_count(token);
        types.insert(normalize_token(token));
    }
    stats.vocabulary_size = static_cast<long>(types.size());
    return stats;
}

} // namespace warrantscore::text
