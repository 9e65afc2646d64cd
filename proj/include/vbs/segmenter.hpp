#pragma once

// Rule-based simple-sentence identification. Paragraphs are cut at
// sentence delimiters, sentences at clause connectives, and clauses that
// open with a verb get the nearest preceding subject prepended in
// parentheses.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "vbs/corpus.hpp"
#include "vbs/error.hpp"
#include "vbs/text.hpp"
#include "vbs/tokenizer.hpp"

namespace vbs {

struct SegmenterConfig {
    std::vector<std::string> sentence_delimiters{".", "!", "?"};
    /// When set, a delimiter ends a sentence only before whitespace, closing
    /// quotes/brackets, or end of text (keeps "3.5" and "W3C.org" intact).
    bool delimiter_requires_space = true;
    std::vector<std::string> clause_splitters{", and", ", but", "; ", ", which"};
    std::string subjectless_heuristics = "verb-initial";
    std::vector<std::string> verb_like_words = default_verb_like_words();
    /// Connective remnants that also mark a clause as subjectless.
    std::vector<std::string> connective_words{"and", "but", "which", "or"};
    /// Single-word subjects that are never propagated.
    std::vector<std::string> pronouns{"it", "this", "that", "they", "these", "those", "which", "he", "she", "we"};
    StopwordSet stopwords = StopwordSet::english();
    std::size_t max_subject_tokens = 6;
    bool enabled = true;

    void validate() const {
        if (sentence_delimiters.empty()) throw ConfigError("segmenter: sentence_delimiters must not be empty");
        for (const auto& d : sentence_delimiters)
            if (d.empty()) throw ConfigError("segmenter: empty sentence delimiter");
        for (const auto& s : clause_splitters)
            if (s.empty()) throw ConfigError("segmenter: empty clause splitter");
        if (subjectless_heuristics != "verb-initial" && subjectless_heuristics != "none")
            throw ConfigError("segmenter: unknown subjectless_heuristics '" + subjectless_heuristics + "'");
    }

    static std::vector<std::string> default_verb_like_words() {
        return {"is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "does", "do",
                "did", "can", "could", "will", "would", "shall", "should", "may", "might", "must", "uses",
                "used", "use", "provides", "provide", "provided", "allows", "allow", "enables", "enable",
                "supports", "support", "includes", "include", "contains", "contain", "consists", "consist",
                "stands", "refers", "refer", "means", "defines", "define", "describes", "describe", "makes",
                "make", "becomes", "became", "runs", "run", "works", "work", "lets", "gives", "give",
                "represents", "represent", "requires", "require", "stores", "store", "sends", "send",
                "receives", "receive", "converts", "convert", "performs", "perform", "handles", "handle",
                "remains", "remain", "appears", "appear", "offers", "offer", "helps", "help"};
    }

    nlohmann::ordered_json echo() const {
        nlohmann::ordered_json j;
        j["sentence_delimiters"] = sentence_delimiters;
        j["delimiter_requires_space"] = delimiter_requires_space;
        j["clause_splitters"] = clause_splitters;
        j["subjectless_heuristics"] = subjectless_heuristics;
        j["max_subject_tokens"] = max_subject_tokens;
        j["enabled"] = enabled;
        j["verb_like_words"] = verb_like_words.size();
        j["stopwords"] = stopwords.size();
        return j;
    }
};

/// Reads a JSON segmenter rule file. Missing keys keep their English
/// defaults; `stopwords_file` is resolved relative to the rule file.
inline SegmenterConfig parse_segmenter_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
    if (!j.is_object()) throw ConfigError("segmenter rules: top level must be an object");
    static const std::set<std::string> known{"sentence_delimiters", "delimiter_requires_space", "clause_splitters",
                                             "subjectless_heuristics", "verb_like_words", "connective_words",
                                             "pronouns", "stopwords_file", "max_subject_tokens", "enabled",
                                             "language", "comment"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("segmenter rules: unknown key '" + key + "'");

    SegmenterConfig cfg;
    const auto strings = [&](const char* key, std::vector<std::string>& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_array()) throw ConfigError(std::string("segmenter rules: '") + key + "' must be an array");
        out.clear();
        for (const auto& v : j[key]) {
            if (!v.is_string()) throw ConfigError(std::string("segmenter rules: '") + key + "' must hold strings");
            out.push_back(v.get<std::string>());
        }
    };
    try {
        strings("sentence_delimiters", cfg.sentence_delimiters);
        strings("clause_splitters", cfg.clause_splitters);
        strings("verb_like_words", cfg.verb_like_words);
        strings("connective_words", cfg.connective_words);
        strings("pronouns", cfg.pronouns);
        if (j.contains("delimiter_requires_space")) cfg.delimiter_requires_space = j["delimiter_requires_space"].get<bool>();
        if (j.contains("subjectless_heuristics")) cfg.subjectless_heuristics = j["subjectless_heuristics"].get<std::string>();
        if (j.contains("max_subject_tokens")) cfg.max_subject_tokens = j["max_subject_tokens"].get<std::size_t>();
        if (j.contains("enabled")) cfg.enabled = j["enabled"].get<bool>();
        if (j.contains("stopwords_file")) {
            auto path = std::filesystem::path(j["stopwords_file"].get<std::string>());
            if (path.is_relative()) path = base_dir / path;
            cfg.stopwords = StopwordSet::load(path);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("segmenter rules: ") + e.what());
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline SegmenterConfig load_segmenter_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open segmenter rule file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_segmenter_config(j, path.parent_path());
}

struct SimpleSentence {
    std::string id;
    std::string text;
    std::vector<Token> tokens;
    std::string paragraph_id;
    int paragraph_rank = 1;
    std::size_t position = 0;
    bool subject_complemented = false;
    std::string complement_subject;
    /// Counted-character span of the clause inside its paragraph (complement excluded).
    std::size_t source_begin = 0;
    std::size_t source_end = 0;

    bool operator==(const SimpleSentence&) const = default;
};

/// Source order: paragraph rank, then position, then id. Every tie-break
/// in the pipeline reduces to this.
inline bool source_order_less(const SimpleSentence& a, const SimpleSentence& b) {
    if (a.paragraph_rank != b.paragraph_rank) return a.paragraph_rank < b.paragraph_rank;
    if (a.position != b.position) return a.position < b.position;
    return a.id < b.id;
}

/// One clause of a source sentence. `text` excludes any complement.
struct Clause {
    std::string text;
    std::size_t byte_begin = 0; // source substring in the paragraph
    std::size_t byte_end = 0;
};

namespace detail {

inline bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

inline bool starts_with_at(std::string_view s, std::size_t pos, std::string_view needle, bool fold) {
    if (pos + needle.size() > s.size()) return false;
    const auto part = s.substr(pos, needle.size());
    return fold ? text::iequals(part, needle) : part == needle;
}

struct Piece {
    std::size_t begin;
    std::size_t end;
    std::string terminal; // delimiter closing the piece, empty if none
};

inline std::vector<Piece> split_sentences(std::string_view para, const SegmenterConfig& cfg) {
    std::vector<Piece> out;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < para.size()) {
        std::string_view matched;
        for (const auto& d : cfg.sentence_delimiters)
            if (d.size() > matched.size() && starts_with_at(para, i, d, false)) matched = d;
        if (matched.empty()) {
            ++i;
            continue;
        }
        std::size_t after = i + matched.size();
        // Repeated delimiters ("?!", "...") stay with the sentence.
        for (bool more = true; more;) {
            more = false;
            for (const auto& d : cfg.sentence_delimiters)
                if (starts_with_at(para, after, d, false)) {
                    after += d.size();
                    more = true;
                    break;
                }
        }
        std::size_t close = after;
        while (close < para.size() && is_closer(para[close])) ++close;
        const bool boundary = !cfg.delimiter_requires_space || close == para.size() ||
                              text::is_space(text::decode_at(para, close).scalar);
        if (!boundary) {
            i = after;
            continue;
        }
        out.push_back({start, close, std::string(matched)});
        start = i = close;
    }
    if (start < para.size()) out.push_back({start, para.size(), {}});
    return out;
}

// ", and" must not fire inside ", android".
inline bool splits_word(std::string_view para, std::size_t after, std::string_view splitter) {
    if (after >= para.size()) return false;
    const auto last = static_cast<unsigned char>(splitter.back());
    const auto next = static_cast<unsigned char>(para[after]);
    return std::isalnum(last) && (std::isalnum(next) || next >= 0x80);
}

inline std::vector<Piece> split_clauses(std::string_view para, const Piece& sentence, const SegmenterConfig& cfg) {
    if (!cfg.enabled || cfg.clause_splitters.empty()) return {sentence};
    std::vector<Piece> out;
    std::size_t start = sentence.begin;
    std::size_t i = sentence.begin;
    while (i < sentence.end) {
        std::string_view matched;
        for (const auto& s : cfg.clause_splitters)
            if (s.size() > matched.size() && i + s.size() <= sentence.end && starts_with_at(para, i, s, true) &&
                !splits_word(para, i + s.size(), s))
                matched = s;
        if (matched.empty()) {
            ++i;
            continue;
        }
        out.push_back({start, i, {}});
        start = i = i + matched.size();
    }
    out.push_back({start, sentence.end, sentence.terminal});
    return out;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

} // namespace detail

/// Subject detected at the head of a clause: the tokens before its first
/// verb-like word, or nothing.
inline std::optional<std::string> detect_subject(std::string_view clause, const SegmenterConfig& cfg) {
    const auto tokens = tokenize(clause, cfg.stopwords);
    std::vector<std::string> words;
    bool found_verb = false;
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::punctuation) continue;
        found_verb = t.kind == TokenKind::word &&
                     std::any_of(cfg.verb_like_words.begin(), cfg.verb_like_words.end(),
                                 [&](const std::string& v) { return text::iequals(v, t.surface); });
        if (found_verb) break;
        words.push_back(t.surface);
        if (words.size() > cfg.max_subject_tokens) return std::nullopt;
    }
    if (words.empty() || !found_verb) return std::nullopt;
    if (words.size() == 1 && std::any_of(cfg.pronouns.begin(), cfg.pronouns.end(),
                                         [&](const std::string& p) { return text::iequals(p, words[0]); }))
        return std::nullopt;
    std::string subject;
    for (const auto& w : words) {
        if (!subject.empty()) subject += ' ';
        subject += w;
    }
    return subject;
}

/// True when the clause's first word is verb-like or a connective remnant.
inline bool is_subjectless(std::string_view clause, const SegmenterConfig& cfg) {
    if (cfg.subjectless_heuristics == "none") return false;
    for (const auto& t : tokenize(clause, cfg.stopwords)) {
        if (t.kind == TokenKind::punctuation) continue;
        if (t.kind != TokenKind::word) return false;
        const auto in = [&](const std::vector<std::string>& list) {
            return std::any_of(list.begin(), list.end(), [&](const std::string& w) { return text::iequals(w, t.surface); });
        };
        return in(cfg.verb_like_words) || in(cfg.connective_words);
    }
    return false;
}

/// Complements subjectless clauses after the first with the nearest
/// preceding detected subject, falling back to the term surface. Only
/// text, tokens and the complement fields are filled in.
inline std::vector<SimpleSentence> complement_subject(std::span<const Clause> clauses, const Term& term,
                                                      const SegmenterConfig& cfg = {}) {
    std::vector<SimpleSentence> out;
    std::optional<std::string> last_subject;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        SimpleSentence s;
        s.text = clauses[i].text;
        if (i > 0 && is_subjectless(clauses[i].text, cfg)) {
            s.subject_complemented = true;
            s.complement_subject = last_subject.value_or(term.surface);
            s.text = "(" + s.complement_subject + ") " + clauses[i].text;
        }
        if (auto subj = detect_subject(clauses[i].text, cfg)) last_subject = std::move(subj);
        s.tokens = tokenize(s.text, cfg.stopwords);
        out.push_back(std::move(s));
    }
    return out;
}

/// Splits a paragraph into simple sentences. Ids are `<paragraph id>:<position>`.
inline std::vector<SimpleSentence> segment(const Paragraph& paragraph, const SegmenterConfig& cfg, const Term& term) {
    const std::string_view para = paragraph.text;
    const text::CountedIndex counted(para);
    std::vector<SimpleSentence> out;
    for (const auto& sentence : detail::split_sentences(para, cfg)) {
        std::vector<Clause> clauses;
        for (const auto& piece : detail::split_clauses(para, sentence, cfg)) {
            const auto range = text::trimmed_range(para.substr(piece.begin, piece.end - piece.begin));
            if (range.begin == range.end) continue;
            Clause c;
            c.byte_begin = piece.begin + range.begin;
            c.byte_end = piece.begin + range.end;
            c.text = std::string(para.substr(c.byte_begin, c.byte_end - c.byte_begin));
            clauses.push_back(std::move(c));
        }
        // Inner clauses inherit the sentence's terminal delimiter.
        if (!sentence.terminal.empty())
            for (std::size_t i = 0; i + 1 < clauses.size(); ++i)
                if (!detail::ends_with(clauses[i].text, sentence.terminal)) clauses[i].text += sentence.terminal;

        auto simple = complement_subject(clauses, term, cfg);
        for (std::size_t i = 0; i < simple.size(); ++i) {
            auto& s = simple[i];
            const bool has_word = std::any_of(s.tokens.begin(), s.tokens.end(), [](const Token& t) {
                return t.kind == TokenKind::word;
            });
            if (!has_word) continue;
            s.paragraph_id = paragraph.id;
            s.paragraph_rank = paragraph.rank;
            s.position = out.size();
            s.id = paragraph.id + ":" + std::to_string(s.position);
            s.source_begin = counted.offset_at(clauses[i].byte_begin);
            s.source_end = counted.offset_at(clauses[i].byte_end);
            out.push_back(std::move(s));
        }
    }
    return out;
}

/// Segments every paragraph of the corpus in rank order.
inline std::vector<SimpleSentence> segment_corpus(const TermCorpus& corpus, const SegmenterConfig& cfg) {
    std::vector<SimpleSentence> out;
    for (const auto& p : corpus.paragraphs) {
        auto part = segment(p, cfg, corpus.term);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

/// Content-word views of a sentence: case-folded non-stopword word tokens.
struct ContentWords {
    std::vector<std::string> tokens; // multiset, sentence order
    std::set<std::string> types;
};

inline ContentWords content_words(const SimpleSentence& sentence) {
    ContentWords cw;
    for (const auto& t : sentence.tokens) {
        if (t.kind != TokenKind::word || t.is_stopword) continue;
        cw.tokens.push_back(text::fold_case(t.surface));
        cw.types.insert(cw.tokens.back());
    }
    return cw;
}

} // namespace vbs
