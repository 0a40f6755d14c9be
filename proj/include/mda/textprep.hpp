#pragma once

#include <string>

#include "mda/errors.hpp"
#include "mda/ingest.hpp"

namespace mda::textprep {

struct CleanFiling {
    ingest::FilingRecord record;
    std::string text;
    double removed_fraction = 0.0;  // bytes removed / bytes in
};

enum class ExtractionRule { kItem7To7a, kItem7ToItem8 };

const char* to_string(ExtractionRule rule);

struct MdaDocument {
    ingest::FilingRecord record;
    std::string text;
    std::size_t word_count = 0;
    ExtractionRule extraction_rule = ExtractionRule::kItem7To7a;
};

// Remove markup tags, encoded binary blocks (uuencode, long base64 runs),
// and submission documents of non-text type (graphics, pdf, zip, xbrl, xls);
// decode entity references; collapse whitespace runs to single spaces within
// lines. Throws EmptyAfterClean when nothing textual survives.
CleanFiling strip_markup(const ingest::RawFiling& raw);

// Extract the MD&A: the longest case-insensitive span from an "item 7"
// anchor to the next "item 7a" (falling back to "item 8" when no 7A anchor
// exists). Spans under `min_words` are rejected as TooShort, or as
// IncorporatedByReference when they contain that phrase.
MdaDocument extract_mda(const CleanFiling& clean, std::size_t min_words = 100);

}  // namespace mda::textprep
