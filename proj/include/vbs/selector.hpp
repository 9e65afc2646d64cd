#pragma once

// Representative selection. Regular groups are ranked by a weighted
// average of three min-max normalized factors: common-word frequency (W),
// paragraph rank (R) and length (C). The miscellaneous group is sampled
// greedily by maximum dissimilarity to what is already selected.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vbs/classifier.hpp"
#include "vbs/error.hpp"
#include "vbs/segmenter.hpp"
#include "vbs/text.hpp"

namespace vbs {

struct ScoreWeights {
    double w = 0.5;
    double r = 0.3;
    double c = 0.2;

    /// Non-negative, summing to 1; strictly w > r > c unless `allow_any`.
    void validate(bool allow_any = false) const {
        if (w < 0 || r < 0 || c < 0) throw ConfigError("weights must be non-negative");
        if (std::abs(w + r + c - 1.0) > 1e-9) throw ConfigError("weights must sum to 1");
        if (!allow_any && !(w > r && r > c))
            throw ConfigError("weights must satisfy w > r > c (pass --allow-any-weights to override)");
    }

    /// Parses "w,r,c".
    static ScoreWeights parse(const std::string& s) {
        ScoreWeights out;
        std::istringstream in(s);
        double* slots[] = {&out.w, &out.r, &out.c};
        std::string part;
        std::size_t i = 0;
        while (std::getline(in, part, ',')) {
            if (i == 3) throw ConfigError("weights: expected three comma-separated values");
            try {
                std::size_t used = 0;
                *slots[i] = std::stod(part, &used);
                if (text::trim(part.substr(used)).size() != 0) throw std::invalid_argument(part);
            } catch (const std::exception&) {
                throw ConfigError("weights: cannot parse '" + part + "'");
            }
            ++i;
        }
        if (i != 3) throw ConfigError("weights: expected three comma-separated values");
        return out;
    }

    bool operator==(const ScoreWeights&) const = default;
};

struct SelectionConfig {
    std::size_t reps_per_group = 1;
    std::size_t misc_count = 5;
    ScoreWeights weights;
    bool allow_any_weights = false;

    void validate() const {
        if (reps_per_group < 1) throw ConfigError("reps per group must be at least 1");
        weights.validate(allow_any_weights);
    }
};

struct ScoreFactors {
    double w = 0; // mean group frequency of the sentence's content words
    double r = 0; // paragraph rank
    double c = 0; // counted characters
    double w_norm = 0;
    double r_norm = 0;
    double c_norm = 0;
};

struct ScoredSentence {
    SimpleSentence sentence;
    ScoreFactors factors;
    double score = 0;
};

using WordFrequencies = std::map<std::string, std::size_t>;

/// Content-word token counts over the whole group.
inline WordFrequencies group_word_frequencies(std::span<const SimpleSentence> group) {
    WordFrequencies freqs;
    for (const auto& s : group)
        for (const auto& w : content_words(s).tokens) ++freqs[w];
    return freqs;
}

inline ScoreFactors raw_factors(const SimpleSentence& sentence, const WordFrequencies& freqs) {
    ScoreFactors f;
    const auto words = content_words(sentence).tokens;
    if (!words.empty()) {
        double sum = 0;
        for (const auto& w : words) {
            const auto it = freqs.find(w);
            sum += it == freqs.end() ? 0.0 : static_cast<double>(it->second);
        }
        f.w = sum / static_cast<double>(words.size());
    }
    f.r = static_cast<double>(sentence.paragraph_rank);
    f.c = static_cast<double>(text::char_count(sentence.text));
    return f;
}

/// Min-max normalizes each factor within the group (a constant factor maps
/// to 0.5) and combines them. Rank and length are descending: rank 1 and
/// the shortest sentence normalize to 1.
inline std::vector<ScoredSentence> normalize_and_score(std::vector<ScoredSentence> group, const ScoreWeights& weights) {
    if (group.empty()) return group;
    const auto range = [&](auto field) {
        double lo = group.front().factors.*field;
        double hi = lo;
        for (const auto& g : group) {
            lo = std::min(lo, g.factors.*field);
            hi = std::max(hi, g.factors.*field);
        }
        return std::pair{lo, hi};
    };
    const auto [w_lo, w_hi] = range(&ScoreFactors::w);
    const auto [r_lo, r_hi] = range(&ScoreFactors::r);
    const auto [c_lo, c_hi] = range(&ScoreFactors::c);
    const auto ascending = [](double x, double lo, double hi) { return hi == lo ? 0.5 : (x - lo) / (hi - lo); };
    const auto descending = [](double x, double lo, double hi) { return hi == lo ? 0.5 : (hi - x) / (hi - lo); };

    for (auto& g : group) {
        auto& f = g.factors;
        f.w_norm = ascending(f.w, w_lo, w_hi);
        f.r_norm = descending(f.r, r_lo, r_hi);
        f.c_norm = descending(f.c, c_lo, c_hi);
        const double score = weights.w * f.w_norm + weights.r * f.r_norm + weights.c * f.c_norm;
        assert(score >= -1e-12 && score <= 1.0 + 1e-12);
        g.score = std::clamp(score, 0.0, 1.0);
    }
    return group;
}

/// Raw factors against the group's own frequencies, then normalized scores.
inline std::vector<ScoredSentence> score_group(std::span<const SimpleSentence> group, const ScoreWeights& weights) {
    const auto freqs = group_word_frequencies(group);
    std::vector<ScoredSentence> scored;
    scored.reserve(group.size());
    for (const auto& s : group) scored.push_back({s, raw_factors(s, freqs), 0.0});
    return normalize_and_score(std::move(scored), weights);
}

/// Top-n by descending score; ties in source order.
inline std::vector<ScoredSentence> select_representatives(std::span<const ScoredSentence> group, std::size_t n) {
    std::vector<ScoredSentence> sorted(group.begin(), group.end());
    std::sort(sorted.begin(), sorted.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
        if (a.score != b.score) return a.score > b.score;
        return source_order_less(a.sentence, b.sentence);
    });
    if (sorted.size() > n) sorted.resize(n);
    return sorted;
}

/// Greedy max-dissimilarity sampling: each step picks the candidate whose
/// highest Dice similarity to anything already selected is lowest.
inline std::vector<SimpleSentence> select_miscellaneous(std::span<const SimpleSentence> misc,
                                                        std::span<const SimpleSentence> already_selected,
                                                        std::size_t n) {
    std::vector<std::size_t> candidates(misc.size());
    std::vector<WordSet> candidate_words;
    for (std::size_t i = 0; i < misc.size(); ++i) {
        candidates[i] = i;
        candidate_words.push_back(content_words(misc[i]).types);
    }
    // Highest similarity of each candidate to the selected set so far.
    std::vector<double> max_sim(misc.size(), 0.0);
    const auto absorb = [&](const WordSet& chosen) {
        for (std::size_t i = 0; i < misc.size(); ++i)
            max_sim[i] = std::max(max_sim[i], dice(candidate_words[i], chosen).value());
    };
    for (const auto& s : already_selected) absorb(content_words(s).types);

    std::vector<SimpleSentence> picked;
    while (picked.size() < n && !candidates.empty()) {
        const auto best = std::min_element(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            if (max_sim[a] != max_sim[b]) return max_sim[a] < max_sim[b];
            return source_order_less(misc[a], misc[b]);
        });
        const std::size_t idx = *best;
        candidates.erase(best);
        picked.push_back(misc[idx]);
        absorb(candidate_words[idx]);
    }
    return picked;
}

} // namespace vbs
