#pragma once

// The end-to-end pipeline: top-k slice, segmentation, classification,
// per-group selection, miscellaneous sampling and presentation. Also the
// lead baseline used for comparison.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "vbs/classifier.hpp"
#include "vbs/corpus.hpp"
#include "vbs/error.hpp"
#include "vbs/patterns.hpp"
#include "vbs/segmenter.hpp"
#include "vbs/selector.hpp"
#include "vbs/text.hpp"
#include "vbs/viewpoint.hpp"

namespace vbs {

struct PipelineConfig {
    std::size_t top_k = 50;
    SelectionConfig selection;
    SegmenterConfig segmenter;
    PatternSet patterns;
    std::string patterns_source;  // echoed only
    std::string segmenter_source; // echoed only
    std::uint64_t seed = 0;       // recorded, unused

    void validate() const {
        if (top_k < 1) throw ConfigError("top must be at least 1");
        selection.validate();
        segmenter.validate();
    }

    nlohmann::ordered_json echo() const {
        nlohmann::ordered_json j;
        j["top"] = top_k;
        j["reps"] = selection.reps_per_group;
        j["misc_count"] = selection.misc_count;
        j["weights"] = {selection.weights.w, selection.weights.r, selection.weights.c};
        j["allow_any_weights"] = selection.allow_any_weights;
        nlohmann::ordered_json p;
        p["source"] = patterns_source;
        p["version"] = patterns.version();
        p["count"] = patterns.size();
        j["patterns"] = std::move(p);
        auto seg = segmenter.echo();
        seg["source"] = segmenter_source;
        j["segmenter"] = std::move(seg);
        j["seed"] = seed;
        return j;
    }
};

struct SourceRef {
    std::string paragraph_id;
    std::string title;
    std::string url;

    bool operator==(const SourceRef&) const = default;
};

struct SummaryEntry {
    Viewpoint viewpoint = Viewpoint::miscellaneous;
    SimpleSentence sentence;
    Stage stage = Stage::pattern;
    double score = 0;
    ScoreFactors factors;
    SourceRef source;
    std::optional<std::size_t> duplicate_of; // index of an earlier entry with identical text
};

struct Summary {
    std::string method = "vbs"; // "vbs" or "lead"
    Term term;
    std::vector<SummaryEntry> entries;
    nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();
    std::size_t total_chars = 0;
};

inline bool operator==(const ScoreFactors& a, const ScoreFactors& b) {
    return a.w == b.w && a.r == b.r && a.c == b.c && a.w_norm == b.w_norm && a.r_norm == b.r_norm &&
           a.c_norm == b.c_norm;
}

inline bool operator==(const SummaryEntry& a, const SummaryEntry& b) {
    return a.viewpoint == b.viewpoint && a.sentence == b.sentence && a.stage == b.stage && a.score == b.score &&
           a.factors == b.factors && a.source == b.source && a.duplicate_of == b.duplicate_of;
}

inline bool operator==(const Summary& a, const Summary& b) {
    return a.method == b.method && a.term == b.term && a.entries == b.entries && a.config_echo == b.config_echo &&
           a.total_chars == b.total_chars;
}

/// Every intermediate product of one summarize run.
struct PipelineTrace {
    TermCorpus top;
    std::vector<SimpleSentence> sentences;
    ViewpointGroups groups;
    std::map<Viewpoint, std::vector<ScoredSentence>> scored;
    Summary summary;
};

inline PipelineTrace summarize_traced(const TermCorpus& corpus, const PipelineConfig& config) {
    config.validate();
    if (corpus.paragraphs.empty()) throw DataError("cannot summarize '" + corpus.term.surface + "': no paragraphs");

    PipelineTrace trace;
    trace.top = take_top(corpus, config.top_k);
    trace.sentences = segment_corpus(trace.top, config.segmenter);
    if (trace.sentences.empty())
        throw DataError("cannot summarize '" + corpus.term.surface + "': no sentences after segmentation");
    trace.groups = classify(trace.sentences, config.patterns, corpus.term);

    std::map<std::string, const Paragraph*> paragraphs;
    for (const auto& p : trace.top.paragraphs) paragraphs[p.id] = &p;
    const auto make_entry = [&](Viewpoint v, const ScoredSentence& s) {
        SummaryEntry e;
        e.viewpoint = v;
        e.sentence = s.sentence;
        e.stage = trace.groups.stage_of.at(s.sentence.id);
        e.score = s.score;
        e.factors = s.factors;
        const auto* p = paragraphs.at(s.sentence.paragraph_id);
        e.source = {p->id, p->source_title, p->source_url};
        return e;
    };

    const auto& sel = config.selection;
    std::vector<SummaryEntry> entries;
    std::vector<SimpleSentence> selected;
    for (const auto& [v, members] : trace.groups.groups) {
        if (v == Viewpoint::miscellaneous) continue;
        auto scored = score_group(members, sel.weights);
        for (const auto& rep : select_representatives(scored, sel.reps_per_group)) {
            entries.push_back(make_entry(v, rep));
            selected.push_back(rep.sentence);
        }
        trace.scored[v] = std::move(scored);
    }

    const auto& misc = trace.groups.group(Viewpoint::miscellaneous);
    if (!misc.empty()) {
        // Miscellaneous entries carry a within-group score for ordering only;
        // the pick itself is by dissimilarity.
        auto scored = score_group(misc, sel.weights);
        std::map<std::string, const ScoredSentence*> by_id;
        for (const auto& s : scored) by_id[s.sentence.id] = &s;
        for (const auto& s : select_miscellaneous(misc, selected, sel.misc_count))
            entries.push_back(make_entry(Viewpoint::miscellaneous, *by_id.at(s.id)));
        trace.scored[Viewpoint::miscellaneous] = std::move(scored);
    }

    std::stable_sort(entries.begin(), entries.end(), [](const SummaryEntry& a, const SummaryEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.viewpoint < b.viewpoint;
    });
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (entries[j].sentence.text == entries[i].sentence.text && !entries[j].duplicate_of) {
                entries[i].duplicate_of = j;
                break;
            }

    auto& summary = trace.summary;
    summary.method = "vbs";
    summary.term = corpus.term;
    summary.entries = std::move(entries);
    summary.config_echo = config.echo();
    for (const auto& e : summary.entries) summary.total_chars += char_count(e.sentence.text);
    return trace;
}

inline Summary summarize(const TermCorpus& corpus, const PipelineConfig& config) {
    return summarize_traced(corpus, config).summary;
}

/// Counted scalars of each paragraph in rank order, as one stream. Lines
/// are trimmed; the newline separating lines and paragraphs is not part of
/// the stream.
struct LeadStream {
    std::vector<char32_t> scalars;
    std::vector<std::size_t> breaks; // stream offsets where a line or paragraph ends
};

inline LeadStream lead_stream(const TermCorpus& corpus) {
    LeadStream out;
    for (const auto& p : corpus.paragraphs) {
        std::string_view t = p.text;
        std::size_t start = 0;
        while (start <= t.size()) {
            const auto nl = t.find('\n', start);
            const auto line = text::trim(t.substr(start, nl == std::string_view::npos ? t.npos : nl - start));
            if (!line.empty()) {
                const auto cps = text::decode(line);
                out.scalars.insert(out.scalars.end(), cps.begin(), cps.end());
                out.breaks.push_back(out.scalars.size());
            }
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
    }
    return out;
}

/// First `n_chars` counted characters of the rank-ordered source. Line and
/// paragraph boundaries are rendered as newlines, which do not count.
inline Summary lead_baseline(const TermCorpus& corpus, std::size_t n_chars) {
    if (n_chars < 1) throw ConfigError("lead: character budget must be at least 1");
    const auto stream = lead_stream(corpus);
    const std::size_t take = std::min(n_chars, stream.scalars.size());

    std::string text;
    std::size_t next_break = 0;
    for (std::size_t i = 0; i < take; ++i) {
        while (next_break < stream.breaks.size() && stream.breaks[next_break] <= i) {
            if (stream.breaks[next_break] == i && i > 0) text.push_back('\n');
            ++next_break;
        }
        text::append_utf8(text, stream.scalars[i]);
    }

    Summary summary;
    summary.method = "lead";
    summary.term = corpus.term;
    summary.total_chars = take;
    summary.config_echo["chars"] = n_chars;
    if (take > 0) {
        const auto& first = corpus.paragraphs.front();
        SummaryEntry e;
        e.viewpoint = Viewpoint::miscellaneous;
        e.stage = Stage::fallback;
        e.sentence.id = "lead";
        e.sentence.text = std::move(text);
        e.sentence.paragraph_id = first.id;
        e.sentence.paragraph_rank = first.rank;
        e.sentence.source_end = take; // stream coordinates
        e.source = {first.id, first.source_title, first.source_url};
        summary.entries.push_back(std::move(e));
    }
    return summary;
}

enum class RenderFormat { text, json };

namespace detail {

inline nlohmann::ordered_json sentence_to_json(const SimpleSentence& s) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["text"] = s.text;
    j["paragraph_id"] = s.paragraph_id;
    j["paragraph_rank"] = s.paragraph_rank;
    j["position"] = s.position;
    j["subject_complemented"] = s.subject_complemented;
    j["complement_subject"] = s.complement_subject;
    j["source_begin"] = s.source_begin;
    j["source_end"] = s.source_end;
    auto tokens = nlohmann::ordered_json::array();
    for (const auto& t : s.tokens) tokens.push_back({t.surface, to_string(t.kind), t.is_stopword});
    j["tokens"] = std::move(tokens);
    return j;
}

inline SimpleSentence sentence_from_json(const nlohmann::json& j) {
    SimpleSentence s;
    s.id = j.at("id").get<std::string>();
    s.text = j.at("text").get<std::string>();
    s.paragraph_id = j.at("paragraph_id").get<std::string>();
    s.paragraph_rank = j.at("paragraph_rank").get<int>();
    s.position = j.at("position").get<std::size_t>();
    s.subject_complemented = j.at("subject_complemented").get<bool>();
    s.complement_subject = j.at("complement_subject").get<std::string>();
    s.source_begin = j.at("source_begin").get<std::size_t>();
    s.source_end = j.at("source_end").get<std::size_t>();
    for (const auto& t : j.at("tokens"))
        s.tokens.push_back({t.at(0).get<std::string>(), parse_token_kind(t.at(1).get<std::string>()), t.at(2).get<bool>()});
    return s;
}

} // namespace detail

inline nlohmann::ordered_json summary_to_json(const Summary& summary) {
    nlohmann::ordered_json j;
    j["method"] = summary.method;
    j["term"] = {{"surface", summary.term.surface}, {"aliases", summary.term.aliases}};
    j["total_chars"] = summary.total_chars;
    j["config"] = summary.config_echo;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : summary.entries) {
        nlohmann::ordered_json je;
        je["viewpoint"] = to_string(e.viewpoint);
        je["score"] = e.score;
        je["stage"] = to_string(e.stage);
        je["factors"] = {{"w", e.factors.w},           {"r", e.factors.r},           {"c", e.factors.c},
                         {"w_norm", e.factors.w_norm}, {"r_norm", e.factors.r_norm}, {"c_norm", e.factors.c_norm}};
        je["sentence"] = detail::sentence_to_json(e.sentence);
        je["source"] = {{"paragraph_id", e.source.paragraph_id}, {"title", e.source.title}, {"url", e.source.url}};
        je["duplicate_of"] = e.duplicate_of ? nlohmann::ordered_json(*e.duplicate_of) : nlohmann::ordered_json();
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline Summary summary_from_json(std::string_view json_text) {
    try {
        const auto j = nlohmann::json::parse(json_text);
        Summary s;
        s.method = j.at("method").get<std::string>();
        s.term.surface = j.at("term").at("surface").get<std::string>();
        s.term.aliases = j.at("term").at("aliases").get<std::vector<std::string>>();
        s.total_chars = j.at("total_chars").get<std::size_t>();
        s.config_echo = nlohmann::ordered_json::parse(json_text).at("config");
        for (const auto& je : j.at("entries")) {
            SummaryEntry e;
            const auto name = je.at("viewpoint").get<std::string>();
            const auto vp = parse_viewpoint(name);
            if (!vp) throw DataError("unknown viewpoint '" + name + "'");
            e.viewpoint = *vp;
            e.score = je.at("score").get<double>();
            e.stage = parse_stage(je.at("stage").get<std::string>());
            const auto& f = je.at("factors");
            e.factors = {f.at("w").get<double>(),      f.at("r").get<double>(),      f.at("c").get<double>(),
                         f.at("w_norm").get<double>(), f.at("r_norm").get<double>(), f.at("c_norm").get<double>()};
            e.sentence = detail::sentence_from_json(je.at("sentence"));
            const auto& src = je.at("source");
            e.source = {src.at("paragraph_id").get<std::string>(), src.at("title").get<std::string>(),
                        src.at("url").get<std::string>()};
            if (!je.at("duplicate_of").is_null()) e.duplicate_of = je.at("duplicate_of").get<std::size_t>();
            s.entries.push_back(std::move(e));
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("summary json: ") + e.what());
    }
}

/// `text`: one `[viewpoint] sentence  (source)` line per entry; `json`:
/// lossless, including scores, stages and the configuration echo.
inline std::string render(const Summary& summary, RenderFormat format) {
    if (format == RenderFormat::json) return summary_to_json(summary).dump(2) + "\n";
    std::string out;
    for (const auto& e : summary.entries) {
        const auto& src = !e.source.title.empty() ? e.source.title
                          : !e.source.url.empty() ? e.source.url
                                                  : e.source.paragraph_id;
        const std::string label = summary.method == "lead" ? "lead" : std::string(to_string(e.viewpoint));
        out += "[" + label + "] " + e.sentence.text + "  (" + src + ")\n";
    }
    return out;
}

} // namespace vbs
