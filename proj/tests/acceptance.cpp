// Acceptance gate: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "checks.hpp"

using namespace vbs;
using namespace vbs::testing;

namespace {

// Pinned tolerances and limits.
constexpr double kCompressionPct = 3.537;
constexpr double kCompressionTolPct = 0.01;
constexpr double kInstantSeconds = 0.1;
constexpr std::size_t kRequiredWins = 13;
constexpr double kSyntheticSeconds = 10.0;
constexpr double kSummarizeSeconds = 1.0;
constexpr double kEvalSeconds = 10.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::string detail;
};

Outcome metric_arithmetic() {
    const auto t0 = Clock::now();
    Outcome o;
    std::ostringstream d;
    const double pct = 100.0 * compression_ratio(397, 11224);
    d << "397/11224 = " << pct << "%";
    if (std::abs(pct - kCompressionPct) > kCompressionTolPct) o.ok = false;

    // standardized budget: a VBS summary of X chars yields a lead cut of exactly X
    std::size_t checked = 0;
    auto cfg = default_pipeline();
    std::vector<TermCorpus> corpora{load_corpus(data_path("xml_corpus.jsonl"))};
    for (auto& in : synthetic::generate({15, 50})) corpora.push_back(std::move(in.corpus));
    for (const auto& corpus : corpora)
        for (std::size_t reps : {1u, 2u, 3u}) {
            cfg.selection.reps_per_group = reps;
            const auto x = summarize(corpus, cfg).total_chars;
            const auto lead = lead_baseline(corpus, x);
            std::size_t emitted = 0;
            for (auto cp : text::decode(lead.entries.at(0).sentence.text)) emitted += cp != U'\n';
            if (lead.total_chars != x || emitted != x) {
                o.ok = false;
                d << "; lead != " << x << " for " << corpus.term.surface;
            }
            ++checked;
        }
    const double secs = seconds_since(t0);
    d << "; lead budget exact on " << checked << " summaries";
    // the arithmetic alone must be instantaneous
    const auto t1 = Clock::now();
    for (int i = 0; i < 1000; ++i) (void)compression_ratio(397 + i, 11224);
    const double arith = seconds_since(t1);
    if (arith > kInstantSeconds) o.ok = false;
    d << "; arithmetic " << arith << " s (all checks " << secs << " s)";
    o.detail = d.str();
    return o;
}

Outcome worked_example() {
    Outcome o;
    const auto corpus = load_corpus(data_path("worked_example.jsonl"));
    const auto sentences = segment_corpus(corpus, {});
    const auto g = classify(sentences, default_patterns(), corpus.term);
    const std::vector<std::tuple<std::string, Viewpoint, Stage>> want{
        {"a:0", Viewpoint::definition, Stage::pattern},   {"b:0", Viewpoint::abbreviation, Stage::pattern},
        {"c:0", Viewpoint::history, Stage::pattern},      {"d:0", Viewpoint::abbreviation, Stage::pattern},
        {"e:0", Viewpoint::history, Stage::similarity}};
    std::ostringstream d;
    if (sentences.size() != want.size()) o.ok = false;
    for (const auto& [id, v, stage] : want) {
        std::vector<Viewpoint> in;
        for (const auto& [gv, members] : g.groups)
            for (const auto& s : members)
                if (s.id == id) in.push_back(gv);
        const auto it = g.stage_of.find(id);
        const bool good = in == std::vector<Viewpoint>{v} && it != g.stage_of.end() && it->second == stage;
        if (!good) o.ok = false;
        d << id.substr(0, 1) << "->" << (in.size() == 1 ? to_string(in[0]) : "?") << "/"
          << (it != g.stage_of.end() ? to_string(it->second) : "?") << " ";
    }
    // (e) is closest to (c)
    const auto words = [&](const char* id) {
        for (const auto& s : sentences)
            if (s.id == id) return content_words(s).types;
        return WordSet{};
    };
    double best = -1;
    std::string best_id;
    for (const auto* peer : {"a:0", "b:0", "c:0", "d:0"}) {
        const double x = dice(words("e:0"), words(peer)).value();
        if (x > best) {
            best = x;
            best_id = peer;
        }
    }
    if (best_id != "c:0") o.ok = false;
    d << "(e nearest " << best_id << ", dice " << best << ")";
    o.detail = d.str();
    return o;
}

Outcome xml_structure() {
    Outcome o;
    auto cfg = default_pipeline();
    cfg.selection.reps_per_group = 1;
    cfg.selection.misc_count = 1;
    const auto summary = summarize(load_corpus(data_path("xml_corpus.jsonl")), cfg);
    std::multiset<Viewpoint> got;
    for (const auto& e : summary.entries) got.insert(e.viewpoint);
    const std::multiset<Viewpoint> want{Viewpoint::definition, Viewpoint::abbreviation, Viewpoint::purpose,
                                        Viewpoint::advantage,  Viewpoint::history,      Viewpoint::reference,
                                        Viewpoint::miscellaneous};
    o.ok = got == want;
    std::ostringstream d;
    d << summary.entries.size() << " entries:";
    for (auto v : got) d << ' ' << to_string(v);
    o.detail = d.str();
    return o;
}

Outcome synthetic_benchmark() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto inputs = synthetic::generate({15, 50});
    ExperimentConfig cfg;
    cfg.pipeline = default_pipeline();
    cfg.reps = {1, 2, 3};
    const auto report = run_experiment(inputs, cfg);
    const double secs = seconds_since(t0);
    std::ostringstream d;
    for (std::size_t reps : {1u, 2u, 3u}) {
        // a term counts when VBS beats lead for every annotator
        std::size_t wins = 0;
        for (const auto& t : report.terms) {
            if (t.reps != reps) continue;
            bool all = true;
            for (const auto& a : t.annotators) all = all && a.cov12_vbs > a.cov12_lead;
            wins += all;
        }
        d << "reps=" << reps << ": " << wins << "/" << inputs.size() << "; ";
        if (reps >= 2 && wins < kRequiredWins) o.ok = false;
    }
    if (secs >= kSyntheticSeconds) o.ok = false;
    d << secs << " s";
    o.detail = d.str();
    return o;
}

Outcome run_checks(const std::vector<std::pair<std::string, std::function<CheckResult()>>>& checks) {
    Outcome o;
    std::ostringstream d;
    for (const auto& [name, fn] : checks) {
        const auto r = fn();
        d << name << (r.ok ? " ok" : " FAILED (" + r.detail + ")") << "; ";
        o.ok = o.ok && r.ok;
    }
    o.detail = d.str();
    return o;
}

Outcome oracle_suites() {
    return run_checks({{"dice x1000", [] { return check_dice_oracle(11, 1000); }},
                       {"classify x200", [] { return check_classify_oracle(23, 200); }},
                       {"greedy misc", [] { return check_misc_oracle(37, 500); }},
                       {"coverage", [] { return check_coverage_oracle(41); }}});
}

Outcome invariant_suites() {
    return run_checks({{"score range", [] { return check_score_range(); }},
                       {"argmax scaling", [] { return check_argmax_scaling(); }},
                       {"permutation", [] { return check_permutation_determinism(); }},
                       {"entry bound", [] { return check_entry_bound(); }},
                       {"lead length", [] { return check_lead_length(); }},
                       {"byte-identical", [] { return check_byte_identical(); }}});
}

Outcome performance() {
    Outcome o;
    std::ostringstream d;
    // the synthetic term whose corpus is closest to 11k characters
    const auto inputs = synthetic::generate({15, 50});
    const TermCorpus* corpus = &inputs.front().corpus;
    for (const auto& in : inputs)
        if (std::llabs(static_cast<long long>(source_chars(in.corpus)) - 11000) <
            std::llabs(static_cast<long long>(source_chars(*corpus)) - 11000))
            corpus = &in.corpus;
    const auto cfg = default_pipeline();
    auto t0 = Clock::now();
    const auto summary = summarize(*corpus, cfg);
    const double one = seconds_since(t0);
    d << "summarize " << corpus->paragraphs.size() << " paragraphs/" << source_chars(*corpus) << " chars: " << one
      << " s; ";
    if (one >= kSummarizeSeconds || summary.entries.empty()) o.ok = false;

    t0 = Clock::now();
    ExperimentConfig ec;
    ec.pipeline = cfg;
    const auto fresh = synthetic::generate({15, 50});
    (void)run_experiment(fresh, ec);
    const double eval = seconds_since(t0);
    d << "15-term eval: " << eval << " s";
    if (eval >= kEvalSeconds) o.ok = false;
    o.detail = d.str();
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"metric-arithmetic", metric_arithmetic}, {"worked-example", worked_example},
        {"xml-structure", xml_structure},         {"synthetic-vbs-beats-lead", synthetic_benchmark},
        {"oracle-suites", oracle_suites},         {"invariant-suites", invariant_suites},
        {"performance", performance}};
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += !o.ok;
    }
    return failed == 0 ? 0 : 1;
}
