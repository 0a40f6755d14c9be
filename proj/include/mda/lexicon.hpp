#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mda/errors.hpp"
#include "mda/textprep.hpp"
#include "mda/tokenize.hpp"

namespace mda::lexicon {

struct Entry {
    // Lowercase token sequence; the final token may end in '*' (prefix match).
    std::vector<std::string> pattern;
    std::vector<int> category_ids;
};

struct Lexicon {
    std::string name;
    std::vector<std::string> categories;  // index = category id - 1 internally
    std::vector<Entry> entries;

    const std::string& category_name(int id) const { return categories.at(id - 1); }
};

struct FeatureVector {
    std::size_t wc = 0;
    double wps = 0.0;
    double sixltr = 0.0;
    double allpunc = 0.0;
    // Ordered as the lexicons declare their categories.
    std::vector<std::string> category_names;
    std::vector<std::size_t> category_counts;  // tokens matched, per category
    std::vector<double> category_percent;
};

// Parse the lexicon file format: a '%' line, `id<TAB>name` category lines,
// a '%' line, then `pattern<TAB>id[<TAB>id...]` entry lines. Pattern tokens
// are space-separated; a trailing '*' on the last token is a prefix wildcard.
Lexicon parse_lexicon(const std::string& lexicon_text, const std::string& name = "");

std::string serialize_lexicon(const Lexicon& lex);

// The bundled 4-category stress lexicon (debt, distress, restructure, healthy).
const Lexicon& stress_lexicon();

// Per-document linguistic measurements. A token may count toward several
// categories through different entries; within one category each occurrence
// counts once. Multi-token patterns match greedily left-to-right and consume
// their tokens for the matching entry's categories.
FeatureVector featurize(const textprep::MdaDocument& doc,
                        const std::vector<Lexicon>& lexicons);

// Same computation on raw text (featurize delegates here).
FeatureVector featurize_text(const std::string& text,
                             const std::vector<Lexicon>& lexicons);

}  // namespace mda::lexicon
