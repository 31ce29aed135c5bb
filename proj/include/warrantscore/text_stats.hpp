#pragma once

#include <string>
#include <string_view>
#include <vector>

// Surface linguistic baselines: word count, Flesch Reading Ease, type-token
// ratio. Pure functions; a "word" is a maximal run of non-whitespace under
// Unicode whitespace splitting (hyphens do not split).
namespace warrantscore::text {

struct TextStats {
    long total_words = 0;
    long total_sentences = 0;
    long total_syllables = 0;
    long vocabulary_size = 0; // distinct normalized tokens
};

std::vector<std::string> words(std::string_view text);

long word_count(std::string_view text);

// Segments ended by '.', '!' or '?'; terminator runs collapse to one
// boundary, a trailing unterminated segment counts as one sentence.
// Throws DataError on zero-word text.
long sentence_count(std::string_view text);

// Vowel-group heuristic (a,e,i,o,u,y) on the lowercased word with the
// terminal silent-e rule, floored at 1. Edge non-alphabetic characters are
// stripped first; a word with no alphabetic characters counts as 1.
long syllable_count(std::string_view word);

// 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words).
// Throws DataError on zero-word text.
double flesch_reading_ease(std::string_view text);

// Distinct normalized tokens / total tokens, in (0, 1].
// Throws DataError on zero-word text.
double type_token_ratio(std::string_view text);

TextStats analyze(std::string_view text);

// ASCII lowercase + Unicode edge-punctuation strip; the shared notion of a
// "type" for ttr and of a token for QA overlap scoring.
std::string normalize_token(std::string_view word);

} // namespace warrantscore::text
