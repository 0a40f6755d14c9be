#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mda::lexicon {

// Lowercased maximal runs of letters/digits; apostrophes and hyphens are
// kept when they sit between two alphanumeric characters. Pure punctuation
// never enters a token.
std::vector<std::string> tokenize(const std::string& text);

// Punctuation marks in the text (for AllPunc): one mark per ASCII
// punctuation character; a run of non-ASCII bytes counts as one mark.
std::size_t count_punctuation(const std::string& text);

// Split at '.', '!', '?' followed by whitespace or end of text, except when
// the period sits between digits or follows a single-letter uppercase
// initial. Empty sentences are dropped; trailing unterminated text counts
// as a sentence.
std::vector<std::string> split_sentences(const std::string& text);

}  // namespace mda::lexicon
