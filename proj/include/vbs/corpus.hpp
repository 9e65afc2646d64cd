#pragma once

// Ranked paragraph sets for a single term.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "vbs/error.hpp"
#include "vbs/text.hpp"

namespace vbs {

struct Term {
    std::string surface;
    std::vector<std::string> aliases;

    /// Surface followed by aliases; the forms `{TERM}` matches.
    std::vector<std::string> forms() const {
        std::vector<std::string> out{surface};
        out.insert(out.end(), aliases.begin(), aliases.end());
        return out;
    }

    bool operator==(const Term&) const = default;
};

/// Trims the surface and checks the alias invariants.
inline Term make_term(std::string_view surface, std::vector<std::string> aliases = {}) {
    Term term{std::string(text::trim(surface)), {}};
    if (term.surface.empty()) throw ValidationError("term surface is empty");
    std::set<std::string> seen;
    for (auto& alias : aliases) {
        std::string a(text::trim(alias));
        if (a.empty()) throw ValidationError("empty alias for term '" + term.surface + "'");
        if (a == term.surface) throw ValidationError("alias repeats the term surface '" + a + "'");
        if (!seen.insert(a).second) throw ValidationError("duplicate alias '" + a + "'");
        term.aliases.push_back(std::move(a));
    }
    return term;
}

struct Paragraph {
    std::string id;
    int rank = 0; // 1 = best
    std::string text;
    std::string source_title;
    std::string source_url;

    bool operator==(const Paragraph&) const = default;
};

struct TermCorpus {
    Term term;
    std::vector<Paragraph> paragraphs; // ascending rank

    bool operator==(const TermCorpus&) const = default;
};

enum class CorpusFormat { jsonl };

using text::char_count;

/// Checks rank contiguity, id uniqueness and non-empty text, then sorts by rank.
inline void validate_corpus(TermCorpus& corpus) {
    std::set<std::string> ids;
    std::map<int, std::size_t> ranks;
    for (const auto& p : corpus.paragraphs) {
        if (p.rank < 1) throw ValidationError("paragraph '" + p.id + "' has non-positive rank " + std::to_string(p.rank));
        if (char_count(p.text) == 0) throw ValidationError("paragraph '" + p.id + "' has empty text");
        if (!ids.insert(p.id).second) throw ValidationError("duplicate paragraph id '" + p.id + "'");
        if (++ranks[p.rank] > 1) throw ValidationError("duplicate rank " + std::to_string(p.rank));
    }
    int expected = 1;
    for (const auto& [rank, count] : ranks) {
        if (rank != expected)
            throw ValidationError("ranks are not contiguous: missing rank " + std::to_string(expected));
        ++expected;
    }
    std::sort(corpus.paragraphs.begin(), corpus.paragraphs.end(),
              [](const Paragraph& a, const Paragraph& b) { return a.rank < b.rank; });
}

namespace detail {

inline std::string optional_string(const nlohmann::json& rec, const char* key, const std::string& fallback,
                                   const std::string& source, std::size_t line) {
    if (!rec.contains(key) || rec[key].is_null()) return fallback;
    if (!rec[key].is_string()) throw ParseError(source, line, std::string("field '") + key + "' must be a string");
    return rec[key].get<std::string>();
}

} // namespace detail

/// Parses the JSONL corpus format: one term header record, then one record
/// per paragraph.
inline TermCorpus parse_corpus(std::istream& in, const std::string& source = "<corpus>") {
    TermCorpus corpus;
    bool have_term = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        if (!text::is_valid_utf8(line)) throw ParseError(source, lineno, "invalid UTF-8");
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source, lineno, std::string("malformed JSON: ") + e.what());
        }
        if (!rec.is_object()) throw ParseError(source, lineno, "record is not an object");

        if (rec.contains("term")) {
            if (have_term) throw ParseError(source, lineno, "second term header record");
            if (!corpus.paragraphs.empty()) throw ParseError(source, lineno, "term header must precede paragraphs");
            if (!rec["term"].is_string()) throw ParseError(source, lineno, "field 'term' must be a string");
            std::vector<std::string> aliases;
            if (rec.contains("aliases")) {
                if (!rec["aliases"].is_array()) throw ParseError(source, lineno, "field 'aliases' must be an array");
                for (const auto& a : rec["aliases"]) {
                    if (!a.is_string()) throw ParseError(source, lineno, "aliases must be strings");
                    aliases.push_back(a.get<std::string>());
                }
            }
            corpus.term = make_term(rec["term"].get<std::string>(), std::move(aliases));
            have_term = true;
            continue;
        }

        if (!have_term) throw ParseError(source, lineno, "paragraph record before the term header");
        if (!rec.contains("rank") || !rec["rank"].is_number_integer())
            throw ParseError(source, lineno, "missing integer field 'rank'");
        if (!rec.contains("text") || !rec["text"].is_string())
            throw ParseError(source, lineno, "missing string field 'text'");

        Paragraph p;
        p.rank = rec["rank"].get<int>();
        p.text = rec["text"].get<std::string>();
        p.id = detail::optional_string(rec, "id", "p" + std::to_string(p.rank), source, lineno);
        p.source_title = detail::optional_string(rec, "source_title", "", source, lineno);
        p.source_url = detail::optional_string(rec, "source_url", "", source, lineno);
        corpus.paragraphs.push_back(std::move(p));
    }
    if (!have_term) throw ValidationError(source + ": missing term header record");
    validate_corpus(corpus);
    return corpus;
}

inline TermCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format = CorpusFormat::jsonl) {
    (void)format; // jsonl is the only format
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file " + path.string());
    return parse_corpus(in, path.string());
}

inline std::string serialize_corpus(const TermCorpus& corpus) {
    std::ostringstream out;
    nlohmann::ordered_json header;
    header["term"] = corpus.term.surface;
    header["aliases"] = corpus.term.aliases;
    out << header.dump() << '\n';
    for (const auto& p : corpus.paragraphs) {
        nlohmann::ordered_json rec;
        rec["id"] = p.id;
        rec["rank"] = p.rank;
        rec["text"] = p.text;
        rec["source_title"] = p.source_title;
        rec["source_url"] = p.source_url;
        out << rec.dump() << '\n';
    }
    return out.str();
}

/// Restricts the corpus to ranks 1..min(k, K).
inline TermCorpus take_top(const TermCorpus& corpus, std::size_t k) {
    if (k == 0) throw ConfigError("take_top: k must be at least 1");
    TermCorpus out{corpus.term, {}};
    const auto n = std::min(k, corpus.paragraphs.size());
    out.paragraphs.assign(corpus.paragraphs.begin(), corpus.paragraphs.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

/// Total counted characters of the corpus; the compression-ratio denominator.
inline std::size_t source_chars(const TermCorpus& corpus) {
    std::size_t total = 0;
    for (const auto& p : corpus.paragraphs) total += char_count(p.text);
    return total;
}

} // namespace vbs
