#include "mda/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "mda/tokenize.hpp"

namespace mda::textprep {

namespace {

std::string lower(const std::string& s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool line_is(const std::string& line, const char* word) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) return false;
    std::size_t e = line.find_last_not_of(" \t\r");
    return line.compare(b, e - b + 1, word) == 0;
}

// Non-text document sections inside a full EDGAR submission, identified by
// the <TYPE> tag or the <FILENAME> extension of the section.
bool is_binary_document(const std::string& section_lower) {
    auto tag_value = [&](const char* tag) -> std::string {
        auto pos = section_lower.find(tag);
        if (pos == std::string::npos) return {};
        pos += std::string(tag).size();
        auto end = section_lower.find('\n', pos);
        std::string v = section_lower.substr(pos, end - pos);
        if (!v.empty() && v.back() == '\r') v.pop_back();
        return v;
    };
    std::string type = tag_value("<type>");
    for (const char* t : {"graphic", "zip", "pdf", "excel", "xbrl", "ex-101"})
        if (type.rfind(t, 0) == 0) return true;
    std::string fname = tag_value("<filename>");
    for (const char* ext : {".jpg", ".jpeg", ".gif", ".png", ".pdf", ".zip",
                            ".xls", ".xlsx", ".xml", ".xsd"}) {
        if (fname.size() >= std::string(ext).size() &&
            fname.compare(fname.size() - std::string(ext).size(),
                          std::string::npos, ext) == 0)
            return true;
    }
    return false;
}

// Drop <DOCUMENT>...</DOCUMENT> sections whose declared type is binary.
std::string drop_binary_documents(const std::string& body) {
    std::string body_lower = lower(body);
    std::string out;
    out.reserve(body.size());
    std::size_t pos = 0;
    while (true) {
        auto open = body_lower.find("<document>", pos);
        if (open == std::string::npos) {
            out.append(body, pos, std::string::npos);
            break;
        }
        auto close = body_lower.find("</document>", open);
        if (close == std::string::npos) close = body.size();
        else close += std::string("</document>").size();
        out.append(body, pos, open - pos);
        std::string section = body_lower.substr(open, close - open);
        if (!is_binary_document(section)) out.append(body, open, close - open);
        pos = close;
    }
    return out;
}

// uuencoded payloads: "begin 6xx name" ... "end"
std::string drop_uuencoded(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    bool in_block = false;
    while (std::getline(in, line)) {
        if (!in_block && line.rfind("begin ", 0) == 0 && line.size() > 9 &&
            std::isdigit(static_cast<unsigned char>(line[6]))) {
            in_block = true;
            continue;
        }
        if (in_block) {
            if (line_is(line, "end")) in_block = false;
            continue;
        }
        out += line;
        out += '\n';
    }
    return out;
}

bool base64ish_line(const std::string& line) {
    if (line.size() < 60) return false;
    for (char c : line) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/' ||
              c == '='))
            return false;
    }
    return true;
}

// Runs of >= 5 consecutive base64-looking lines are encoded exhibit bodies.
std::string drop_base64_runs(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    std::vector<bool> drop(lines.size(), false);
    std::size_t run_start = 0, run_len = 0;
    auto close_run = [&](std::size_t end) {
        if (run_len >= 5)
            for (std::size_t j = run_start; j < end; ++j) drop[j] = true;
        run_len = 0;
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (base64ish_line(lines[i])) {
            if (run_len == 0) run_start = i;
            ++run_len;
        } else {
            close_run(i);
        }
    }
    close_run(lines.size());
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (!drop[i]) {
            out += lines[i];
            out += '\n';
        }
    return out;
}

std::string strip_tags(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_tag = false;
    for (char c : text) {
        if (c == '<') {
            in_tag = true;
            out += ' ';
        } else if (c == '>') {
            in_tag = false;
        } else if (!in_tag) {
            out += c;
        }
    }
    return out;
}

std::string decode_entities(const std::string& text) {
    static const std::pair<const char*, const char*> named[] = {
        {"&amp;", "&"}, {"&lt;", "<"},   {"&gt;", ">"},
        {"&quot;", "\""}, {"&apos;", "'"}, {"&nbsp;", " "},
    };
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        bool matched = false;
        for (auto [ent, repl] : named) {
            std::size_t len = std::string(ent).size();
            if (text.compare(i, len, ent) == 0) {
                out += repl;
                i += len;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (i + 2 < text.size() && text[i + 1] == '#') {
            std::size_t j = i + 2;
            long code = 0;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                code = code * 10 + (text[j++] - '0');
            if (j < text.size() && text[j] == ';' && j > i + 2) {
                if (code >= 32 && code < 127) out += static_cast<char>(code);
                else out += ' ';
                i = j + 1;
                continue;
            }
        }
        out += text[i++];
    }
    return out;
}

std::string normalize_whitespace(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        std::string norm;
        bool pending_space = false;
        for (char c : line) {
            if (c == ' ' || c == '\t' || c == '\r') {
                pending_space = !norm.empty();
            } else {
                if (pending_space) norm += ' ';
                pending_space = false;
                norm += c;
            }
        }
        if (!norm.empty()) {
            out += norm;
            out += '\n';
        }
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

}  // namespace

const char* to_string(ExtractionRule rule) {
    return rule == ExtractionRule::kItem7To7a ? "ITEM7_TO_7A" : "ITEM7_TO_ITEM8";
}

CleanFiling strip_markup(const ingest::RawFiling& raw) {
    if (raw.body.empty()) throw EmptyAfterClean("empty body");
    std::string text = drop_binary_documents(raw.body);
    text = drop_uuencoded(text);
    text = drop_base64_runs(text);
    text = strip_tags(text);
    text = decode_entities(text);
    text = normalize_whitespace(text);
    if (text.find_first_not_of(" \n") == std::string::npos)
        throw EmptyAfterClean(raw.record.path);
    CleanFiling clean;
    clean.record = raw.record;
    clean.text = std::move(text);
    clean.removed_fraction =
        1.0 - static_cast<double>(clean.text.size()) / raw.body.size();
    clean.removed_fraction = std::clamp(clean.removed_fraction, 0.0, 1.0);
    return clean;
}

namespace {

struct Anchor {
    std::size_t pos;  // offset of the 'i' of "item"
};

bool is_word_boundary(const std::string& s, std::size_t pos) {
    return pos >= s.size() || !std::isalnum(static_cast<unsigned char>(s[pos]));
}

// Scan for "item<ws>*7" anchors; classify each as a section-7 start, a 7A
// anchor, or (with digit 8) an item-8 anchor.
void find_anchors(const std::string& text_lower, std::vector<Anchor>& starts,
                  std::vector<Anchor>& sevena, std::vector<Anchor>& eights) {
    std::size_t pos = 0;
    while ((pos = text_lower.find("item", pos)) != std::string::npos) {
        std::size_t begin = pos;
        if (begin > 0 &&
            std::isalnum(static_cast<unsigned char>(text_lower[begin - 1]))) {
            pos += 4;
            continue;
        }
        std::size_t i = pos + 4;
        while (i < text_lower.size() &&
               std::isspace(static_cast<unsigned char>(text_lower[i])))
            ++i;
        if (i >= text_lower.size() || (text_lower[i] != '7' && text_lower[i] != '8')) {
            pos += 4;
            continue;
        }
        char digit = text_lower[i];
        ++i;
        if (i < text_lower.size() &&
            std::isdigit(static_cast<unsigned char>(text_lower[i]))) {
            pos += 4;  // item 70, item 78, ...
            continue;
        }
        if (digit == '8') {
            if (is_word_boundary(text_lower, i)) eights.push_back({begin});
            pos += 4;
            continue;
        }
        // "7" may be followed by whitespace then "a"
        std::size_t j = i;
        while (j < text_lower.size() &&
               std::isspace(static_cast<unsigned char>(text_lower[j])))
            ++j;
        if (j < text_lower.size() && text_lower[j] == 'a' &&
            is_word_boundary(text_lower, j + 1)) {
            sevena.push_back({begin});
        } else if (i >= text_lower.size() ||
                   !std::isalpha(static_cast<unsigned char>(text_lower[i]))) {
            starts.push_back({begin});
        }
        pos += 4;
    }
}

std::size_t next_after(const std::vector<Anchor>& anchors, std::size_t pos) {
    for (const auto& a : anchors)
        if (a.pos > pos) return a.pos;
    return std::string::npos;
}

}  // namespace

MdaDocument extract_mda(const CleanFiling& clean, std::size_t min_words) {
    const std::string text_lower = lower(clean.text);
    std::vector<Anchor> starts, sevena, eights;
    find_anchors(text_lower, starts, sevena, eights);
    if (starts.empty()) throw SectionNotFound(clean.record.path);

    struct Candidate {
        std::size_t begin, end;
        ExtractionRule rule;
    };
    std::vector<Candidate> candidates;
    for (const auto& s : starts) {
        std::size_t end = next_after(sevena, s.pos);
        if (end != std::string::npos) {
            candidates.push_back({s.pos, end, ExtractionRule::kItem7To7a});
            continue;
        }
        end = next_after(eights, s.pos);
        if (end != std::string::npos)
            candidates.push_back({s.pos, end, ExtractionRule::kItem7ToItem8});
    }
    if (candidates.empty()) throw SectionNotFound(clean.record.path);

    auto best = std::max_element(candidates.begin(), candidates.end(),
                                 [](const Candidate& a, const Candidate& b) {
                                     return a.end - a.begin < b.end - b.begin;
                                 });
    std::string span = clean.text.substr(best->begin, best->end - best->begin);
    std::size_t words = lexicon::tokenize(span).size();
    if (words < min_words) {
        if (text_lower.substr(best->begin, best->end - best->begin)
                .find("incorporated by reference") != std::string::npos)
            throw IncorporatedByReference(clean.record.path);
        throw TooShort(std::to_string(words) + " words in " + clean.record.path);
    }
    MdaDocument doc;
    doc.record = clean.record;
    doc.text = std::move(span);
    doc.word_count = words;
    doc.extraction_rule = best->rule;
    return doc;
}

}  // namespace mda::textprep
