#include "mda/tokenize.hpp"

#include <cctype>

namespace mda::lexicon {

namespace {

inline bool is_alnum(unsigned char c) { return std::isalnum(c) != 0; }
inline bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        unsigned char c = text[i];
        if (!is_alnum(c)) {
            ++i;
            continue;
        }
        std::string tok;
        while (i < n) {
            c = text[i];
            if (is_alnum(c)) {
                tok.push_back(static_cast<char>(std::tolower(c)));
                ++i;
            } else if ((c == '\'' || c == '-') && i + 1 < n &&
                       is_alnum(static_cast<unsigned char>(text[i + 1]))) {
                tok.push_back(static_cast<char>(c));
                ++i;
            } else {
                break;
            }
        }
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

std::size_t count_punctuation(const std::string& text) {
    std::size_t marks = 0;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        unsigned char c = text[i];
        if (c >= 0x80) {
            // one mark per run of non-ASCII bytes (em dashes, curly quotes)
            ++marks;
            while (i < n && static_cast<unsigned char>(text[i]) >= 0x80) ++i;
            continue;
        }
        if (!is_alnum(c) && !is_space(c)) {
            bool internal = (c == '\'' || c == '-') && i > 0 && i + 1 < n &&
                            is_alnum(static_cast<unsigned char>(text[i - 1])) &&
                            is_alnum(static_cast<unsigned char>(text[i + 1]));
            if (!internal) ++marks;
        }
        ++i;
    }
    return marks;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    const std::size_t n = text.size();
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        std::size_t b = start;
        while (b < end && is_space(static_cast<unsigned char>(text[b]))) ++b;
        std::size_t e = end;
        while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
        if (e > b) sentences.push_back(text.substr(b, e - b));
    };
    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;
        bool at_boundary =
            i + 1 == n || is_space(static_cast<unsigned char>(text[i + 1]));
        if (!at_boundary) continue;
        if (c == '.') {
            // initial guard: single uppercase letter before the period;
            // decimals ("5.2") never reach here because the next char is a digit
            if (i > 0 && std::isupper(static_cast<unsigned char>(text[i - 1])) &&
                (i == 1 || !std::isalpha(static_cast<unsigned char>(text[i - 2]))))
                continue;
        }
        flush(i + 1);
        start = i + 1;
    }
    flush(n);
    return sentences;
}

}  // namespace mda::lexicon
