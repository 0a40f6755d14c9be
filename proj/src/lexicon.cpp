#include "mda/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace mda::lexicon {

namespace {

std::vector<std::string> split_char(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool token_matches(const std::string& pattern, const std::string& token) {
    if (!pattern.empty() && pattern.back() == '*')
        return token.compare(0, pattern.size() - 1, pattern, 0, pattern.size() - 1) == 0;
    return token == pattern;
}

std::size_t letter_count(const std::string& token) {
    return static_cast<std::size_t>(std::count_if(
        token.begin(), token.end(),
        [](unsigned char c) { return std::isalpha(c) != 0; }));
}

}  // namespace

Lexicon parse_lexicon(const std::string& lexicon_text, const std::string& name) {
    std::istringstream in(lexicon_text);
    std::string line;
    std::size_t lineno = 0;
    int section = 0;  // 0 = preamble, 1 = categories, 2 = entries
    Lexicon lex;
    lex.name = name;
    std::map<int, std::string> cats;
    std::set<std::vector<std::string>> seen_patterns;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "%") {
            ++section;
            if (section > 2)
                throw FormatError("line " + std::to_string(lineno) + ": extra '%'");
            continue;
        }
        if (section == 0)
            throw FormatError("line " + std::to_string(lineno) +
                              ": content before first '%'");
        auto fields = split_char(line, '\t');
        if (section == 1) {
            if (fields.size() != 2)
                throw FormatError("line " + std::to_string(lineno) +
                                  ": want id<TAB>name");
            int id = 0;
            try {
                std::size_t used = 0;
                id = std::stoi(fields[0], &used);
                if (used != fields[0].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw FormatError("line " + std::to_string(lineno) +
                                  ": non-numeric category id '" + fields[0] + "'");
            }
            if (id <= 0 || cats.count(id))
                throw FormatError("line " + std::to_string(lineno) +
                                  ": bad or duplicate category id");
            cats[id] = fields[1];
        } else {
            if (fields.size() < 2)
                throw FormatError("line " + std::to_string(lineno) +
                                  ": want pattern<TAB>id[...]");
            Entry entry;
            for (auto& tok : split_char(fields[0], ' ')) {
                if (tok.empty())
                    throw FormatError("line " + std::to_string(lineno) +
                                      ": empty pattern token");
                std::transform(tok.begin(), tok.end(), tok.begin(), [](unsigned char c) {
                    return std::tolower(c);
                });
                entry.pattern.push_back(tok);
            }
            for (std::size_t i = 1; i < fields.size(); ++i) {
                int id = 0;
                try {
                    std::size_t used = 0;
                    id = std::stoi(fields[i], &used);
                    if (used != fields[i].size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw FormatError("line " + std::to_string(lineno) +
                                      ": non-numeric id '" + fields[i] + "'");
                }
                if (!cats.count(id))
                    throw FormatError("line " + std::to_string(lineno) +
                                      ": dangling category id " + std::to_string(id));
                entry.category_ids.push_back(id);
            }
            if (!seen_patterns.insert(entry.pattern).second)
                throw FormatError("line " + std::to_string(lineno) +
                                  ": duplicate pattern '" + fields[0] + "'");
            lex.entries.push_back(std::move(entry));
        }
    }
    if (section < 2) throw FormatError("missing '%' delimiters");

    // Category ids must be 1..n in declaration order for the dense layout.
    int next = 1;
    std::map<int, int> remap;
    for (auto& [id, cname] : cats) {
        remap[id] = next++;
        lex.categories.push_back(cname);
    }
    for (auto& e : lex.entries)
        for (auto& id : e.category_ids) id = remap.at(id);
    return lex;
}

std::string serialize_lexicon(const Lexicon& lex) {
    std::ostringstream out;
    out << "%\n";
    for (std::size_t i = 0; i < lex.categories.size(); ++i)
        out << (i + 1) << '\t' << lex.categories[i] << '\n';
    out << "%\n";
    for (const auto& e : lex.entries) {
        for (std::size_t i = 0; i < e.pattern.size(); ++i)
            out << (i ? " " : "") << e.pattern[i];
        for (int id : e.category_ids) out << '\t' << id;
        out << '\n';
    }
    return out.str();
}

const Lexicon& stress_lexicon() {
    static const Lexicon lex = [] {
        const std::string text =
            "%\n"
            "1\tdebt\n"
            "2\tdistress\n"
            "3\trestructure\n"
            "4\thealthy\n"
            "%\n"
            "agreement*\t1\n"
            "amendment*\t1\n"
            "borrow*\t1\n"
            "claim*\t1\n"
            "collateral*\t1\n"
            "guarantee*\t1\n"
            "secured\t1\n"
            "covenant*\t2\n"
            "default*\t2\n"
            "breach*\t2\n"
            "violat*\t2\n"
            "amend*\t2\n"
            "restrictive\t2\n"
            "waiver*\t2\n"
            "loss*\t2\n"
            "chapter 11\t2\n"
            "chapter 7\t2\n"
            "downgrade*\t2\n"
            "bankrupt*\t2\n"
            "dispos*\t3\n"
            "recapitaliz*\t3\n"
            "restructur*\t3\n"
            "liquidat*\t3\n"
            "alternative*\t3\n"
            "retain*\t4\n"
            "profit*\t4\n"
            "cash\t4\n"
            "dividend*\t4\n"
            "meet\t4\n";
        return parse_lexicon(text, "stress");
    }();
    return lex;
}

FeatureVector featurize_text(const std::string& text,
                             const std::vector<Lexicon>& lexicons) {
    auto tokens = tokenize(text);
    if (tokens.empty()) throw EmptyDocument("no tokens");
    const std::size_t wc = tokens.size();

    FeatureVector fv;
    fv.wc = wc;
    auto sentences = split_sentences(text);
    fv.wps = sentences.empty() ? static_cast<double>(wc)
                               : static_cast<double>(wc) / sentences.size();
    std::size_t six = 0;
    for (const auto& t : tokens)
        if (letter_count(t) >= 6) ++six;
    fv.sixltr = 100.0 * six / wc;
    fv.allpunc = 100.0 * count_punctuation(text) / wc;

    // Flatten categories across lexicons, keeping declaration order.
    struct FlatEntry {
        const Entry* entry;
        std::vector<std::size_t> flat_ids;
    };
    std::vector<FlatEntry> flat;
    std::size_t base = 0;
    for (const auto& lex : lexicons) {
        for (const auto& c : lex.categories) fv.category_names.push_back(c);
        for (const auto& e : lex.entries) {
            FlatEntry fe{&e, {}};
            for (int id : e.category_ids)
                fe.flat_ids.push_back(base + static_cast<std::size_t>(id - 1));
            flat.push_back(std::move(fe));
        }
        base += lex.categories.size();
    }
    const std::size_t ncat = fv.category_names.size();
    fv.category_counts.assign(ncat, 0);

    // consumed[c][i]: token i already counted for category c
    std::vector<std::vector<bool>> consumed(ncat, std::vector<bool>(wc, false));
    // Longer patterns first so multi-word terms win over their word parts.
    std::stable_sort(flat.begin(), flat.end(),
                     [](const FlatEntry& a, const FlatEntry& b) {
                         return a.entry->pattern.size() > b.entry->pattern.size();
                     });

    for (std::size_t i = 0; i < wc; ++i) {
        for (const auto& fe : flat) {
            const auto& pat = fe.entry->pattern;
            if (i + pat.size() > wc) continue;
            bool match = true;
            for (std::size_t j = 0; j < pat.size(); ++j)
                if (!token_matches(pat[j], tokens[i + j])) {
                    match = false;
                    break;
                }
            if (!match) continue;
            for (std::size_t c : fe.flat_ids) {
                for (std::size_t j = 0; j < pat.size(); ++j) {
                    if (!consumed[c][i + j]) {
                        consumed[c][i + j] = true;
                        ++fv.category_counts[c];
                    }
                }
            }
        }
    }
    fv.category_percent.resize(ncat);
    for (std::size_t c = 0; c < ncat; ++c)
        fv.category_percent[c] = 100.0 * fv.category_counts[c] / wc;
    return fv;
}

FeatureVector featurize(const textprep::MdaDocument& doc,
                        const std::vector<Lexicon>& lexicons) {
    if (doc.word_count == 0) throw EmptyDocument(doc.record.path);
    return featurize_text(doc.text, lexicons);
}

}  // namespace mda::lexicon
