#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "vbs/error.hpp"
#include "vbs/text.hpp"

namespace vbs {

enum class TokenKind { word, number, punctuation, symbol };

inline std::string_view to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::word: return "word";
    case TokenKind::number: return "number";
    case TokenKind::punctuation: return "punctuation";
    case TokenKind::symbol: return "symbol";
    }
    return "word";
}

inline TokenKind parse_token_kind(std::string_view s) {
    if (s == "word") return TokenKind::word;
    if (s == "number") return TokenKind::number;
    if (s == "punctuation") return TokenKind::punctuation;
    if (s == "symbol") return TokenKind::symbol;
    throw DataError("unknown token kind '" + std::string(s) + "'");
}

struct Token {
    std::string surface;
    TokenKind kind = TokenKind::word;
    bool is_stopword = false; // only ever set on word tokens

    bool operator==(const Token&) const = default;
};

/// Case-folded function words excluded from content-word views.
class StopwordSet {
public:
    StopwordSet() = default;
    StopwordSet(std::initializer_list<std::string_view> words) {
        for (auto w : words) add(w);
    }
    explicit StopwordSet(const std::vector<std::string>& words) {
        for (const auto& w : words) add(w);
    }

    void add(std::string_view word) { words_.insert(text::fold_case(word)); }
    bool contains(std::string_view word) const { return words_.count(text::fold_case(word)) != 0; }
    std::size_t size() const { return words_.size(); }

    static const StopwordSet& english() {
        static const StopwordSet set{
            "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
            "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
            "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few",
            "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "him",
            "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "may", "me",
            "might", "more", "most", "must", "my", "no", "nor", "not", "now", "of", "off", "on", "once",
            "only", "or", "other", "our", "ours", "out", "over", "own", "same", "shall", "she", "should",
            "so", "some", "such", "than", "that", "the", "their", "theirs", "them", "then", "there",
            "these", "they", "this", "those", "through", "to", "too", "under", "until", "up", "upon",
            "very", "was", "we", "were", "what", "when", "where", "which", "while", "who", "whom", "why",
            "will", "with", "would", "you", "your", "yours"};
        return set;
    }

    /// One word per line; blank lines and `#` comments ignored.
    static StopwordSet load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open stopword file " + path.string());
        StopwordSet set;
        std::string line;
        while (std::getline(in, line)) {
            const auto w = text::trim(line);
            if (w.empty() || w.front() == '#') continue;
            set.add(w);
        }
        return set;
    }

private:
    std::unordered_set<std::string> words_;
};

namespace detail {

enum class CharClass { space, word, connector, punctuation, symbol };

inline bool is_ascii_alnum(char32_t cp) {
    return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

inline CharClass classify_char(char32_t cp) {
    if (text::is_space(cp)) return CharClass::space;
    if (is_ascii_alnum(cp)) return CharClass::word;
    switch (cp) {
    case U'-': case U'_': case U'\'': case U'.':
        return CharClass::connector;
    case U',': case U';': case U':': case U'!': case U'?': case U'"':
    case U'(': case U')': case U'[': case U']': case U'{': case U'}':
    // CJK punctuation
    case 0x3001: case 0x3002: case 0xFF0C: case 0xFF0E: case 0x300C: case 0x300D:
    case 0x300E: case 0x300F: case 0xFF08: case 0xFF09: case 0x30FB: case 0xFF01: case 0xFF1F:
    case 0x2018: case 0x2019: case 0x201C: case 0x201D:
        return CharClass::punctuation;
    default:
        break;
    }
    if (cp < 0x80) return CharClass::symbol;
    return CharClass::word;
}

inline bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

} // namespace detail

/// Splits text into word, number, punctuation and symbol tokens. Words are
/// runs of letters/digits (and non-ASCII scalars) joined by internal
/// `-`, `_`, `'` or `.`; a word made only of digits and internal `.`/`,`
/// separators is a number.
inline std::vector<Token> tokenize(std::string_view input, const StopwordSet& stopwords = StopwordSet::english()) {
    using detail::CharClass;
    const auto cps = text::decode(input);
    std::vector<Token> tokens;
    const std::size_t n = cps.size();
    std::size_t i = 0;
    while (i < n) {
        const auto cls = detail::classify_char(cps[i]);
        if (cls == CharClass::space) {
            ++i;
            continue;
        }
        if (cls == CharClass::word) {
            std::size_t j = i + 1;
            bool numeric = detail::is_digit(cps[i]);
            while (j < n) {
                const auto c = detail::classify_char(cps[j]);
                if (c == CharClass::word) {
                    numeric = numeric && detail::is_digit(cps[j]);
                    ++j;
                } else if ((c == CharClass::connector || cps[j] == U',') && j + 1 < n &&
                           detail::classify_char(cps[j + 1]) == CharClass::word) {
                    // '.' and ',' only join digits (3.5, 10,000); other connectors join anything.
                    const bool digit_sep = cps[j] == U'.' || cps[j] == U',';
                    if (digit_sep && !(detail::is_digit(cps[j - 1]) && detail::is_digit(cps[j + 1]))) {
                        if (cps[j] == U',' ||
                            !(detail::is_ascii_alnum(cps[j - 1]) && detail::is_ascii_alnum(cps[j + 1])))
                            break;
                        numeric = false;
                    } else if (!digit_sep) {
                        numeric = false;
                    }
                    ++j;
                } else {
                    break;
                }
            }
            Token t;
            for (std::size_t k = i; k < j; ++k) text::append_utf8(t.surface, cps[k]);
            t.kind = numeric ? TokenKind::number : TokenKind::word;
            t.is_stopword = t.kind == TokenKind::word && stopwords.contains(t.surface);
            tokens.push_back(std::move(t));
            i = j;
            continue;
        }
        Token t;
        text::append_utf8(t.surface, cps[i]);
        t.kind = (cls == CharClass::punctuation || cps[i] == U'.' || cps[i] == U'\'') ? TokenKind::punctuation
                                                                                     : TokenKind::symbol;
        tokens.push_back(std::move(t));
        ++i;
    }
    return tokens;
}

} // namespace vbs
