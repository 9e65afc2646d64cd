#pragma once

// Synthetic evaluation benchmark: ranked paragraph sets with planted
// viewpoint sentences scattered across ranks, and machine-generated gold
// annotations from two simulated annotators.

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vbs/corpus.hpp"
#include "vbs/evaluation.hpp"
#include "vbs/segmenter.hpp"
#include "vbs/viewpoint.hpp"

namespace vbs::synthetic {

struct Options {
    std::size_t terms = 15;
    std::size_t paragraphs = 50;
    std::uint64_t seed = 2004;
    std::size_t min_sentences = 3; // per paragraph
    std::size_t max_sentences = 5;
};

inline const std::vector<std::string>& default_terms() {
    static const std::vector<std::string> terms{
        "10BASE-T",   "ASCII",         "SQL",         "XML",           "accumulator",
        "assembler",  "binary number", "crossing cable", "data warehouse", "macro virus",
        "main memory unit", "parallel processing", "resolution", "search time", "thesaurus"};
    return terms;
}

namespace detail {

struct Template {
    std::string_view text;
    std::string_view label; // gold label for annotator A
};

// Slots: {T} term, {A} adjective, {N} plural noun, {S} singular noun,
// {C} capitalized word, {V} verb, {Y} year, {F} filler noun, {G} filler adjective.
inline const std::vector<std::vector<std::string_view>>& viewpoint_templates() {
    static const std::vector<std::vector<std::string_view>> t{
        // definition
        {"{T} is a {A} {S}.", "{T} is defined as a {A} {S} for {N}.", "{T} refers to a {A} {S}."},
        // abbreviation
        {"{T} is an abbreviation for {C} {C} {C}.", "{T} stands for {C} {C}.", "{T} is short for {C} {C} {C}."},
        // exemplification
        {"For example, {T} is found in {A} {N}.", "Typical cases of {T} appear in {A} {N}.",
         "{T} shows up in many places, for instance in {A} {N}."},
        // purpose
        {"{T} is used to {V} {N}.", "The purpose of {T} is to {V} {N}.", "{T} is designed to {V} {A} {N}."},
        // synonym
        {"{T} is also called {C} {S}.", "{T} is also known as {C} {S}.", "Some people refer to {T} as the {C} {S}."},
        // reference
        {"This book gives an introduction to {T} and {A} {N}.", "A detailed tutorial on {T} covers {A} {N}.",
         "See the manual about {T} for details on {N}."},
        // product
        {"Products from {C} support {T}.", "The {C} product line implements {T}.",
         "Vendors sell {T} software for {A} {N}."},
        // advantage
        {"The main advantage of {T} is {A} {N}.", "{T} is advantageous for {A} {N}.",
         "A key benefit of {T} is {A} {N}."},
        // drawback
        {"A drawback of {T} is {A} {N}.", "The main disadvantage of {T} is its cost for {N}.",
         "{T} has a weakness with {A} {N}."},
        // history
        {"{T} was developed by {C} in {Y}.", "{T} was introduced in {Y}.", "{T} was first proposed by {C} engineers."},
        // component
        {"{T} consists of {N} and {N}.", "{T} is composed of several {A} {N}.",
         "The main components of {T} are {N} and {N}."},
        // function
        {"{T} allows users to {V} {N}.", "{T} enables {A} {N}.", "The function of {T} is to {V} {N}."},
    };
    return t;
}

inline const std::vector<Template>& filler_templates() {
    static const std::vector<Template> t{
        {"Readers often mention the {G} {F} of {T} online.", "viewpoint_13"},
        {"The {G} {F} was discussed at a meeting last week.", "viewpoint_14"},
        {"Click here to read more about {F}.", "non_description"},
        {"Opinions about the {G} {F} differ widely among experts.", "viewpoint_15"},
        {"Several {F} surround {T} in daily practice.", "viewpoint_16"},
        {"A {G} {F} appeared on the forum yesterday.", "viewpoint_17"},
        {"Some users prefer {G} {F} over {G} {F}.", "viewpoint_18"},
        {"The {F} around {T} keeps changing.", "viewpoint_19"},
        {"In everyday speech the word can mean a {G} crowd.", "other_sense"},
        {"Teachers tell {G} {F} about {T} to students.", "viewpoint_20"},
        {"Posted by an anonymous visitor.", "non_description"},
        {"Many {G} {F} gather around the topic.", "viewpoint_21"},
    };
    return t;
}

inline const std::vector<std::string_view> kAdjectives{
    "portable", "flexible", "simple", "compact", "structured", "reliable", "fast", "digital",
    "textual", "modular", "generic", "numeric", "secure", "scalable", "dynamic", "persistent"};
inline const std::vector<std::string_view> kPlural{
    "records", "files", "signals", "messages", "tables", "queries", "circuits", "programs", "documents",
    "packets", "devices", "reports", "values", "instructions", "pages", "images", "streams", "registers"};
inline const std::vector<std::string_view> kSingular{
    "format", "language", "system", "device", "method", "notation", "technique", "mechanism", "structure",
    "protocol", "model", "interface"};
inline const std::vector<std::string_view> kCapitalized{
    "Extended", "Binary", "Logical", "Access", "Control", "Transfer", "Markup", "Query", "Acme",
    "Globex", "Initech", "Hooli", "Vandelay", "Tyrell", "Cyberdyne", "Memory", "Protocol", "Code"};
inline const std::vector<std::string_view> kVerbs{
    "store", "exchange", "describe", "encode", "transfer", "organize", "process", "compress", "validate", "index"};
inline const std::vector<std::string_view> kFillerNouns{
    "debates", "opinions", "anecdotes", "rumors", "stories", "comments", "reviews", "posts", "threads",
    "conversations", "jokes", "memories", "photos", "events", "workshops", "meetups"};
inline const std::vector<std::string_view> kFillerAdjectives{
    "lively", "casual", "curious", "vague", "friendly", "noisy", "quiet", "recent", "popular", "strange",
    "funny", "busy"};

class Filler {
public:
    explicit Filler(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    std::string fill(std::string_view tmpl, const std::string& term) {
        std::string out;
        for (std::size_t i = 0; i < tmpl.size(); ++i) {
            if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
                out += slot(tmpl[i + 1], term);
                i += 2;
            } else {
                out.push_back(tmpl[i]);
            }
        }
        return out;
    }

private:
    std::string slot(char kind, const std::string& term) {
        const auto pick = [&](const std::vector<std::string_view>& words) { return std::string(words[below(words.size())]); };
        switch (kind) {
        case 'T': return term;
        case 'A': return pick(kAdjectives);
        case 'N': return pick(kPlural);
        case 'S': return pick(kSingular);
        case 'C': return pick(kCapitalized);
        case 'V': return pick(kVerbs);
        case 'Y': return std::to_string(1965 + below(40));
        case 'F': return pick(kFillerNouns);
        case 'G': return pick(kFillerAdjectives);
        default: throw std::logic_error("unknown template slot");
        }
    }

    std::mt19937_64 rng_;
};

} // namespace detail

/// Generates one corpus per term with gold from annotators "A" (the planted
/// labels) and "B" (a deterministic perturbation of A).
inline std::vector<TermInput> generate(const Options& options = {},
                                       const SegmenterConfig& segmenter = SegmenterConfig{}) {
    const auto& terms = default_terms();
    std::vector<TermInput> out;
    detail::Filler rng(options.seed);
    for (std::size_t t = 0; t < options.terms; ++t) {
        const std::string term = t < terms.size() ? terms[t] : "term" + std::to_string(t + 1);

        struct Planted {
            std::string text;
            std::string label;
        };
        std::vector<std::vector<Planted>> paragraphs(options.paragraphs);
        for (std::size_t v = 0; v < kTargetViewpoints.size(); ++v) {
            const auto& tmpls = detail::viewpoint_templates()[v];
            const std::size_t copies = 1 + rng.below(3);
            for (std::size_t c = 0; c < copies; ++c) {
                auto& para = paragraphs[rng.below(options.paragraphs)];
                const auto pos = rng.below(para.size() + 1);
                para.insert(para.begin() + static_cast<std::ptrdiff_t>(pos),
                            Planted{rng.fill(tmpls[rng.below(tmpls.size())], term),
                                    std::string(to_string(kTargetViewpoints[v]))});
            }
        }
        const auto span = options.max_sentences - options.min_sentences + 1;
        for (auto& para : paragraphs) {
            const std::size_t target = options.min_sentences + rng.below(span);
            while (para.size() < target) {
                const auto& f = detail::filler_templates()[rng.below(detail::filler_templates().size())];
                const auto pos = rng.below(para.size() + 1);
                para.insert(para.begin() + static_cast<std::ptrdiff_t>(pos),
                            Planted{rng.fill(f.text, term), std::string(f.label)});
            }
        }

        TermInput input;
        input.corpus.term = make_term(term);
        AnnotationSet a{"A", term, "", {}};
        AnnotationSet b{"B", term, "", {}};
        std::vector<SimpleSentence> all;
        for (std::size_t r = 0; r < paragraphs.size(); ++r) {
            Paragraph p;
            p.rank = static_cast<int>(r + 1);
            p.id = "p" + std::to_string(r + 1);
            p.source_title = term + " page " + std::to_string(r + 1);
            p.source_url = "https://example.org/" + std::to_string(t + 1) + "/" + std::to_string(r + 1);
            for (const auto& s : paragraphs[r]) {
                if (!p.text.empty()) p.text += ' ';
                p.text += s.text;
            }
            const auto sentences = segment(p, segmenter, input.corpus.term);
            if (sentences.size() != paragraphs[r].size())
                throw std::logic_error("synthetic paragraph did not segment into its planted sentences: " + p.text);
            for (std::size_t i = 0; i < sentences.size(); ++i) {
                const auto& planted = paragraphs[r][i];
                a.annotations[sentences[i].id] = {sentences[i].id, {planted.label}};
                auto labels = std::set<std::string>{planted.label};
                const auto h = text::fnv1a(sentences[i].id + term);
                if (planted.label == "viewpoint_13") {
                    labels = {"misc_category"};
                } else if (Taxonomy::standard().is_targeted(planted.label) && h % 6 == 0) {
                    labels.insert("viewpoint_" + std::to_string(22 + h % 7));
                }
                b.annotations[sentences[i].id] = {sentences[i].id, labels};
            }
            all.insert(all.end(), sentences.begin(), sentences.end());
            input.corpus.paragraphs.push_back(std::move(p));
        }
        a.segmentation_hash = b.segmentation_hash = segmentation_hash(all);
        input.gold = {std::move(a), std::move(b)};
        out.push_back(std::move(input));
    }
    return out;
}

} // namespace vbs::synthetic
