#pragma once

// Intrinsic evaluation: compression ratio, viewpoint-type coverage against
// gold annotations, and the VBS-vs-lead experiment table.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "vbs/corpus.hpp"
#include "vbs/error.hpp"
#include "vbs/segmenter.hpp"
#include "vbs/summarizer.hpp"
#include "vbs/viewpoint.hpp"

namespace vbs {

/// Annotation label scheme: targeted viewpoints, the full viewpoint list
/// (targeted first) and the non-viewpoint categories.
struct Taxonomy {
    std::vector<std::string> targeted;
    std::vector<std::string> viewpoints;
    std::vector<std::string> categories;

    bool is_targeted(const std::string& l) const { return std::count(targeted.begin(), targeted.end(), l) != 0; }
    bool is_viewpoint(const std::string& l) const { return std::count(viewpoints.begin(), viewpoints.end(), l) != 0; }
    bool is_category(const std::string& l) const { return std::count(categories.begin(), categories.end(), l) != 0; }
    bool is_known(const std::string& l) const { return is_viewpoint(l) || is_category(l); }

    /// The 12 targeted viewpoints, 16 placeholder viewpoints and the three
    /// non-viewpoint categories.
    static const Taxonomy& standard() {
        static const Taxonomy t = [] {
            Taxonomy x;
            for (auto v : kTargetViewpoints) x.targeted.emplace_back(to_string(v));
            x.viewpoints = x.targeted;
            for (int i = 13; i <= 28; ++i) x.viewpoints.push_back("viewpoint_" + std::to_string(i));
            x.categories = {"non_description", "other_sense", "misc_category"};
            return x;
        }();
        return t;
    }

    static Taxonomy load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open taxonomy file " + path.string());
        try {
            const auto j = nlohmann::json::parse(in);
            Taxonomy t;
            t.targeted = j.at("targeted").get<std::vector<std::string>>();
            t.viewpoints = t.targeted;
            for (const auto& v : j.at("additional").get<std::vector<std::string>>()) t.viewpoints.push_back(v);
            t.categories = j.at("categories").get<std::vector<std::string>>();
            return t;
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
    }
};

struct Annotation {
    std::string sentence_id;
    std::set<std::string> labels;
};

struct AnnotationSet {
    std::string annotator_id;
    std::string term;
    std::string segmentation_hash;
    std::map<std::string, Annotation> annotations;
};

/// Hash of the segmenter output (ids and texts) that annotations refer to.
inline std::string segmentation_hash(std::span<const SimpleSentence> sentences) {
    std::uint64_t h = text::fnv1a("");
    for (const auto& s : sentences) {
        h = text::fnv1a(s.id, h);
        h = text::fnv1a("\t", h);
        h = text::fnv1a(s.text, h);
        h = text::fnv1a("\n", h);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Annotation JSONL: a header `{"annotator", "term", "segmentation_hash"}`
/// followed by `{"sentence_id", "labels"}` records.
inline AnnotationSet parse_annotations(std::istream& in, const std::string& source,
                                       const Taxonomy& taxonomy = Taxonomy::standard()) {
    AnnotationSet set;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source, lineno, std::string("malformed JSON: ") + e.what());
        }
        if (!rec.is_object()) throw ParseError(source, lineno, "record is not an object");
        if (rec.contains("annotator")) {
            if (have_header) throw ParseError(source, lineno, "second header record");
            if (!rec["annotator"].is_string() || !rec.contains("term") || !rec["term"].is_string())
                throw ParseError(source, lineno, "header needs string fields 'annotator' and 'term'");
            set.annotator_id = rec["annotator"].get<std::string>();
            set.term = rec["term"].get<std::string>();
            if (rec.contains("segmentation_hash") && rec["segmentation_hash"].is_string())
                set.segmentation_hash = rec["segmentation_hash"].get<std::string>();
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError(source, lineno, "annotation before the header record");
        if (!rec.contains("sentence_id") || !rec["sentence_id"].is_string() || !rec.contains("labels") ||
            !rec["labels"].is_array())
            throw ParseError(source, lineno, "record needs 'sentence_id' and 'labels'");
        Annotation a;
        a.sentence_id = rec["sentence_id"].get<std::string>();
        bool has_viewpoint = false;
        bool has_category = false;
        for (const auto& l : rec["labels"]) {
            if (!l.is_string()) throw ParseError(source, lineno, "labels must be strings");
            const auto label = l.get<std::string>();
            if (!taxonomy.is_known(label)) throw ParseError(source, lineno, "unknown label '" + label + "'");
            (taxonomy.is_category(label) ? has_category : has_viewpoint) = true;
            a.labels.insert(label);
        }
        if (a.labels.empty()) throw ParseError(source, lineno, "empty label set for " + a.sentence_id);
        if (has_category && (has_viewpoint || a.labels.size() > 1))
            throw ParseError(source, lineno, "non-viewpoint category mixed with other labels for " + a.sentence_id);
        if (!set.annotations.emplace(a.sentence_id, a).second)
            throw ParseError(source, lineno, "duplicate sentence id " + a.sentence_id);
    }
    if (!have_header) throw ValidationError(source + ": missing annotation header");
    return set;
}

inline AnnotationSet load_annotations(const std::filesystem::path& path, const Taxonomy& taxonomy = Taxonomy::standard()) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open annotation file " + path.string());
    return parse_annotations(in, path.string(), taxonomy);
}

inline std::string serialize_annotations(const AnnotationSet& set) {
    std::ostringstream out;
    nlohmann::ordered_json header;
    header["annotator"] = set.annotator_id;
    header["term"] = set.term;
    header["segmentation_hash"] = set.segmentation_hash;
    out << header.dump() << '\n';
    for (const auto& [id, a] : set.annotations) {
        nlohmann::ordered_json rec;
        rec["sentence_id"] = id;
        rec["labels"] = a.labels;
        out << rec.dump() << '\n';
    }
    return out.str();
}

inline double compression_ratio(std::size_t summary_chars, std::size_t source_chars) {
    if (source_chars == 0) throw DataError("compression ratio: source has zero characters");
    return static_cast<double>(summary_chars) / static_cast<double>(source_chars);
}

enum class ViewpointScope { twelve, twenty_eight };

struct CoverageCount {
    std::size_t numerator = 0;
    std::size_t denominator = 0;

    double ratio() const { return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// Distinct in-scope viewpoint types over the summary's sentences versus
/// over every annotated source sentence.
inline CoverageCount coverage_counts(const std::set<std::string>& summary_ids, const AnnotationSet& gold,
                                     ViewpointScope scope, const Taxonomy& taxonomy = Taxonomy::standard()) {
    const auto in_scope = [&](const std::string& l) {
        return scope == ViewpointScope::twelve ? taxonomy.is_targeted(l) : taxonomy.is_viewpoint(l);
    };
    std::set<std::string> source_types;
    for (const auto& [id, a] : gold.annotations)
        for (const auto& l : a.labels)
            if (in_scope(l)) source_types.insert(l);
    std::set<std::string> summary_types;
    for (const auto& id : summary_ids) {
        const auto it = gold.annotations.find(id);
        if (it == gold.annotations.end())
            throw DataError("coverage: sentence '" + id + "' has no gold annotation (annotator " + gold.annotator_id +
                            ", term " + gold.term + ")");
        for (const auto& l : it->second.labels)
            if (in_scope(l)) summary_types.insert(l);
    }
    return {summary_types.size(), source_types.size()};
}

inline double coverage(const std::set<std::string>& summary_ids, const AnnotationSet& gold, ViewpointScope scope,
                       const Taxonomy& taxonomy = Taxonomy::standard()) {
    const auto c = coverage_counts(summary_ids, gold, scope, taxonomy);
    if (c.denominator == 0)
        throw DataError("coverage: no in-scope viewpoints annotated for term " + gold.term);
    return c.ratio();
}

struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end > begin ? end - begin : 0; }
    bool operator==(const CharSpan&) const = default;
};

/// Sentence spans in the rank-ordered counted-character stream that the
/// lead baseline cuts.
inline std::map<std::string, CharSpan> sentence_spans(const TermCorpus& corpus, std::span<const SimpleSentence> sentences) {
    std::map<std::string, std::size_t> base;
    std::size_t offset = 0;
    for (const auto& p : corpus.paragraphs) {
        base[p.id] = offset;
        offset += char_count(p.text);
    }
    std::map<std::string, CharSpan> spans;
    for (const auto& s : sentences) {
        const auto it = base.find(s.paragraph_id);
        if (it == base.end()) throw DataError("span bookkeeping: unknown paragraph " + s.paragraph_id);
        spans[s.id] = {it->second + s.source_begin, it->second + s.source_end};
    }
    return spans;
}

/// Sentences with at least `threshold` of their span inside the lead span.
inline std::set<std::string> lead_sentence_ids(CharSpan lead, const std::map<std::string, CharSpan>& spans,
                                               double threshold = 0.5) {
    std::set<std::string> ids;
    for (const auto& [id, span] : spans) {
        if (span.end < span.begin) throw DataError("span bookkeeping: inverted span for " + id);
        if (span.length() == 0) continue;
        const auto lo = std::max(lead.begin, span.begin);
        const auto hi = std::min(lead.end, span.end);
        const double inside = hi > lo ? static_cast<double>(hi - lo) : 0.0;
        if (inside >= threshold * static_cast<double>(span.length())) ids.insert(id);
    }
    return ids;
}

inline CoverageCount coverage_for_lead_counts(CharSpan lead, const AnnotationSet& gold,
                                              const std::map<std::string, CharSpan>& spans, ViewpointScope scope,
                                              double threshold = 0.5, const Taxonomy& taxonomy = Taxonomy::standard()) {
    for (const auto& [id, _] : gold.annotations)
        if (!spans.count(id)) throw DataError("span bookkeeping: annotated sentence '" + id + "' has no span");
    return coverage_counts(lead_sentence_ids(lead, spans, threshold), gold, scope, taxonomy);
}

inline double coverage_for_lead(CharSpan lead, const AnnotationSet& gold, const std::map<std::string, CharSpan>& spans,
                                ViewpointScope scope, double threshold = 0.5,
                                const Taxonomy& taxonomy = Taxonomy::standard()) {
    const auto c = coverage_for_lead_counts(lead, gold, spans, scope, threshold, taxonomy);
    if (c.denominator == 0) throw DataError("coverage: no in-scope viewpoints annotated for term " + gold.term);
    return c.ratio();
}

struct TermInput {
    TermCorpus corpus;
    std::vector<AnnotationSet> gold;
};

struct ExperimentConfig {
    PipelineConfig pipeline;
    std::vector<std::size_t> reps{1, 2, 3};
    double lead_threshold = 0.5;
    bool parallel = true;
    Taxonomy taxonomy = Taxonomy::standard();
};

/// Coverage values are percentages.
struct AnnotatorCoverage {
    std::string annotator;
    double cov12_vbs = 0;
    double cov12_lead = 0;
    double cov28_vbs = 0;
    double cov28_lead = 0;
};

struct TermResult {
    std::string term;
    std::size_t reps = 0;
    std::size_t chars = 0;
    std::size_t source_chars = 0;
    double compression_pct = 0;
    std::vector<AnnotatorCoverage> annotators;
    /// Targeted viewpoints present in the source / covered by VBS, per annotator.
    std::map<std::string, std::set<std::string>> present;
    std::map<std::string, std::set<std::string>> covered;
};

struct ReportRow {
    std::size_t reps = 0;
    double chars = 0;
    double compression_pct = 0;
    std::vector<AnnotatorCoverage> annotators; // averaged over terms
};

struct EvalReport {
    std::vector<ReportRow> rows;
    std::vector<TermResult> terms; // ordered by (reps, term)
    nlohmann::ordered_json config_echo;

    std::vector<std::string> annotators() const {
        std::set<std::string> names;
        for (const auto& row : rows)
            for (const auto& a : row.annotators) names.insert(a.annotator);
        return {names.begin(), names.end()};
    }

    std::string to_tsv() const {
        std::ostringstream out;
        out << std::fixed << std::setprecision(2);
        out << "reps\tchars\tcompression_pct";
        for (const auto& a : annotators())
            out << '\t' << a << "_12_vbs\t" << a << "_12_lead\t" << a << "_28_vbs\t" << a << "_28_lead";
        out << '\n';
        for (const auto& row : rows) {
            out << row.reps << '\t' << row.chars << '\t' << row.compression_pct;
            for (const auto& a : row.annotators)
                out << '\t' << a.cov12_vbs << '\t' << a.cov12_lead << '\t' << a.cov28_vbs << '\t' << a.cov28_lead;
            out << '\n';
        }
        return out.str();
    }

    std::string to_table() const {
        std::ostringstream out;
        out << std::fixed << std::setprecision(2);
        out << std::left << std::setw(6) << "#Reps" << std::setw(9) << "#Chars" << std::setw(13) << "Compression";
        for (const auto& a : annotators()) out << "| " << std::setw(31) << ("Coverage by " + a + " (%)");
        out << '\n' << std::setw(6) << "" << std::setw(9) << "" << std::setw(13) << "ratio (%)";
        for (std::size_t i = 0; i < annotators().size(); ++i)
            out << "| " << std::setw(7) << "12:VBS" << std::setw(8) << "12:Lead" << std::setw(7) << "28:VBS"
                << std::setw(9) << "28:Lead";
        out << '\n';
        for (const auto& row : rows) {
            out << std::setw(6) << row.reps << std::setw(9) << row.chars << std::setw(13) << row.compression_pct;
            for (const auto& a : row.annotators)
                out << "| " << std::setw(7) << a.cov12_vbs << std::setw(8) << a.cov12_lead << std::setw(7)
                    << a.cov28_vbs << std::setw(9) << a.cov28_lead;
            out << '\n';
        }
        out << '\n' << per_viewpoint_table();
        return out.str();
    }

    /// Per targeted viewpoint: percentage of (term, annotator) pairs whose
    /// source shows the viewpoint and whose VBS summary covers it.
    std::string per_viewpoint_table() const {
        std::ostringstream out;
        out << std::fixed << std::setprecision(1);
        out << std::left << std::setw(18) << "viewpoint";
        for (const auto& row : rows) out << std::setw(10) << ("reps=" + std::to_string(row.reps));
        out << '\n';
        for (auto v : kTargetViewpoints) {
            const std::string name(to_string(v));
            out << std::setw(18) << name;
            for (const auto& row : rows) {
                std::size_t present = 0;
                std::size_t covered = 0;
                for (const auto& t : terms) {
                    if (t.reps != row.reps) continue;
                    for (const auto& [annotator, types] : t.present) {
                        if (!types.count(name)) continue;
                        ++present;
                        covered += t.covered.at(annotator).count(name);
                    }
                }
                out << std::setw(10)
                    << (present == 0 ? std::string("-")
                                     : std::to_string(static_cast<int>(100.0 * covered / present + 0.5)) + "%");
            }
            out << '\n';
        }
        return out.str();
    }
};

namespace detail {

inline TermResult evaluate_term(const TermInput& input, std::size_t reps, const ExperimentConfig& cfg) {
    if (input.gold.empty()) throw DataError("missing gold annotations for term '" + input.corpus.term.surface + "'");
    auto pipeline = cfg.pipeline;
    pipeline.selection.reps_per_group = reps;
    const auto trace = summarize_traced(input.corpus, pipeline);
    const auto& summary = trace.summary;

    TermResult r;
    r.term = input.corpus.term.surface;
    r.reps = reps;
    r.chars = summary.total_chars;
    r.source_chars = source_chars(trace.top);
    r.compression_pct = 100.0 * compression_ratio(r.chars, r.source_chars);

    // Standardized budget: the lead cut is exactly as long as the VBS summary.
    const auto lead = lead_baseline(trace.top, std::max<std::size_t>(r.chars, 1));
    const CharSpan lead_span{0, lead.total_chars};
    const auto spans = sentence_spans(trace.top, trace.sentences);
    const auto hash = segmentation_hash(trace.sentences);

    std::set<std::string> vbs_ids;
    for (const auto& e : summary.entries) vbs_ids.insert(e.sentence.id);

    for (const auto& gold : input.gold) {
        if (!gold.segmentation_hash.empty() && gold.segmentation_hash != hash)
            throw DataError("gold for term '" + r.term + "' (annotator " + gold.annotator_id +
                            ") was made against a different segmentation");
        const auto pct = [](const CoverageCount& c, const std::string& term) {
            if (c.denominator == 0) throw DataError("coverage: no in-scope viewpoints annotated for term " + term);
            return 100.0 * c.ratio();
        };
        AnnotatorCoverage a;
        a.annotator = gold.annotator_id;
        a.cov12_vbs = pct(coverage_counts(vbs_ids, gold, ViewpointScope::twelve, cfg.taxonomy), r.term);
        a.cov28_vbs = pct(coverage_counts(vbs_ids, gold, ViewpointScope::twenty_eight, cfg.taxonomy), r.term);
        a.cov12_lead = pct(coverage_for_lead_counts(lead_span, gold, spans, ViewpointScope::twelve,
                                                    cfg.lead_threshold, cfg.taxonomy), r.term);
        a.cov28_lead = pct(coverage_for_lead_counts(lead_span, gold, spans, ViewpointScope::twenty_eight,
                                                    cfg.lead_threshold, cfg.taxonomy), r.term);
        r.annotators.push_back(a);

        auto& present = r.present[gold.annotator_id];
        auto& covered = r.covered[gold.annotator_id];
        for (const auto& [id, ann] : gold.annotations)
            for (const auto& l : ann.labels)
                if (cfg.taxonomy.is_targeted(l)) {
                    present.insert(l);
                    if (vbs_ids.count(id)) covered.insert(l);
                }
    }
    std::sort(r.annotators.begin(), r.annotators.end(),
              [](const AnnotatorCoverage& x, const AnnotatorCoverage& y) { return x.annotator < y.annotator; });
    return r;
}

} // namespace detail

/// Runs VBS and the lead baseline on every term for every reps value and
/// averages per annotator. Terms are evaluated concurrently when
/// `cfg.parallel`; results are ordered by term name.
inline EvalReport run_experiment(std::span<const TermInput> inputs, const ExperimentConfig& cfg) {
    cfg.pipeline.validate();
    if (cfg.reps.empty()) throw ConfigError("eval: no reps values");
    for (const auto& in : inputs)
        if (in.gold.empty()) throw DataError("missing gold annotations for term '" + in.corpus.term.surface + "'");

    std::vector<std::size_t> order(inputs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return inputs[a].corpus.term.surface < inputs[b].corpus.term.surface;
    });

    EvalReport report;
    report.config_echo = cfg.pipeline.echo();
    report.config_echo["lead_threshold"] = cfg.lead_threshold;
    for (const auto reps : cfg.reps) {
        std::vector<TermResult> results;
        if (cfg.parallel) {
            std::vector<std::future<TermResult>> futures;
            for (const auto i : order)
                futures.push_back(std::async(std::launch::async, [&, i, reps] {
                    return detail::evaluate_term(inputs[i], reps, cfg);
                }));
            for (auto& f : futures) results.push_back(f.get());
        } else {
            for (const auto i : order) results.push_back(detail::evaluate_term(inputs[i], reps, cfg));
        }

        ReportRow row;
        row.reps = reps;
        std::map<std::string, std::pair<AnnotatorCoverage, std::size_t>> sums;
        for (const auto& r : results) {
            row.chars += static_cast<double>(r.chars);
            row.compression_pct += r.compression_pct;
            for (const auto& a : r.annotators) {
                auto& [acc, n] = sums[a.annotator];
                acc.annotator = a.annotator;
                acc.cov12_vbs += a.cov12_vbs;
                acc.cov12_lead += a.cov12_lead;
                acc.cov28_vbs += a.cov28_vbs;
                acc.cov28_lead += a.cov28_lead;
                ++n;
            }
        }
        if (!results.empty()) {
            row.chars /= static_cast<double>(results.size());
            row.compression_pct /= static_cast<double>(results.size());
        }
        for (auto& [name, entry] : sums) {
            auto& [acc, n] = entry;
            const double d = static_cast<double>(n);
            acc.cov12_vbs /= d;
            acc.cov12_lead /= d;
            acc.cov28_vbs /= d;
            acc.cov28_lead /= d;
            row.annotators.push_back(acc);
        }
        report.rows.push_back(std::move(row));
        report.terms.insert(report.terms.end(), results.begin(), results.end());
    }
    return report;
}

struct SaturationResult {
    std::string term;
    std::string annotator;
    std::size_t paragraphs = 0; // smallest k whose top-k paragraphs show every viewpoint type
    std::size_t total_paragraphs = 0;
};

/// Smallest prefix of ranked paragraphs that already shows every viewpoint
/// type annotated in the whole top-k set.
inline std::vector<SaturationResult> viewpoint_saturation(std::span<const TermInput> inputs, const PipelineConfig& cfg,
                                                          const Taxonomy& taxonomy = Taxonomy::standard()) {
    std::vector<SaturationResult> out;
    for (const auto& in : inputs) {
        const auto top = take_top(in.corpus, cfg.top_k);
        const auto sentences = segment_corpus(top, cfg.segmenter);
        for (const auto& gold : in.gold) {
            std::map<int, std::set<std::string>> by_rank;
            std::set<std::string> all;
            for (const auto& s : sentences) {
                const auto it = gold.annotations.find(s.id);
                if (it == gold.annotations.end()) continue;
                for (const auto& l : it->second.labels)
                    if (taxonomy.is_viewpoint(l)) {
                        by_rank[s.paragraph_rank].insert(l);
                        all.insert(l);
                    }
            }
            SaturationResult r{in.corpus.term.surface, gold.annotator_id, 0, top.paragraphs.size()};
            std::set<std::string> seen;
            for (const auto& p : top.paragraphs) {
                if (seen.size() == all.size()) break;
                seen.insert(by_rank[p.rank].begin(), by_rank[p.rank].end());
                r.paragraphs = static_cast<std::size_t>(p.rank);
            }
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(), [](const SaturationResult& a, const SaturationResult& b) {
        return std::tie(a.term, a.annotator) < std::tie(b.term, b.annotator);
    });
    return out;
}

} // namespace vbs
