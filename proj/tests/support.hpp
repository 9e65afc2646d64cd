#pragma once

#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vbs/vbs.hpp"

namespace vbs::testing {

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(VBS_DEFAULT_DATA_DIR) / name;
}

inline const PatternSet& default_patterns() {
    static const PatternSet set = load_patterns(data_path("patterns_en.jsonl"));
    return set;
}

inline PipelineConfig default_pipeline() {
    PipelineConfig cfg;
    cfg.patterns = default_patterns();
    cfg.patterns_source = "patterns_en.jsonl";
    cfg.segmenter_source = "builtin:en";
    return cfg;
}

inline SimpleSentence make_sentence(const std::string& id, const std::string& text, int rank = 1,
                                    std::size_t position = 0) {
    SimpleSentence s;
    s.id = id;
    s.text = text;
    s.tokens = tokenize(text);
    s.paragraph_id = "p" + std::to_string(rank);
    s.paragraph_rank = rank;
    s.position = position;
    s.source_end = char_count(text);
    return s;
}

inline TermCorpus corpus_from_lines(const std::string& jsonl) {
    std::istringstream in(jsonl);
    return parse_corpus(in, "<test>");
}

/// A random paragraph corpus built from the bundled vocabulary of the
/// synthetic generator, for property tests.
inline TermCorpus random_corpus(std::mt19937_64& rng, std::size_t paragraphs) {
    static const std::vector<std::string> sentences{
        "XML is a markup language.",
        "XML is an abbreviation for Extensible Markup Language.",
        "XML was developed by the W3C in 1998.",
        "For example, XML is found in office documents.",
        "XML is used to exchange data between programs.",
        "XML is also called a metalanguage.",
        "This book gives an introduction to XML.",
        "Products from Acme support XML.",
        "The main advantage of XML is portable data.",
        "A drawback of XML is verbose files.",
        "XML consists of elements and attributes.",
        "XML allows users to describe structured records.",
        "Tags are enclosed in angle brackets.",
        "Readers often mention the lively debates online.",
        "Click here to read more.",
        "Many parsers read the format quickly, and validate schemas.",
        "Schemas constrain documents; they are written by designers.",
        "The parser reports errors, which helps authors.",
    };
    std::ostringstream out;
    out << R"({"term": "XML", "aliases": ["Extensible Markup Language"]})" << '\n';
    for (std::size_t r = 1; r <= paragraphs; ++r) {
        std::string text;
        const std::size_t n = 1 + rng() % 4;
        for (std::size_t i = 0; i < n; ++i) {
            if (!text.empty()) text += ' ';
            text += sentences[rng() % sentences.size()];
        }
        nlohmann::json rec{{"id", "p" + std::to_string(r)}, {"rank", r}, {"text", text},
                           {"source_title", "page " + std::to_string(r)}, {"source_url", ""}};
        out << rec.dump() << '\n';
    }
    return corpus_from_lines(out.str());
}

} // namespace vbs::testing
