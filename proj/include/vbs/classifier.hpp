#pragma once

// Two-stage viewpoint grouping: patterns first, then nearest pattern-classified
// peer by Dice similarity, then the miscellaneous group.

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "vbs/corpus.hpp"
#include "vbs/patterns.hpp"
#include "vbs/segmenter.hpp"
#include "vbs/viewpoint.hpp"

namespace vbs {

using WordSet = std::set<std::string>;

class DiceScore {
public:
    explicit DiceScore(double value) : value_(value) { assert(value >= 0.0 && value <= 1.0); }
    double value() const { return value_; }
    auto operator<=>(const DiceScore&) const = default;

private:
    double value_;
};

/// 2|a∩b| / (|a|+|b|), zero when both sets are empty.
inline DiceScore dice(const WordSet& a, const WordSet& b) {
    if (a.empty() && b.empty()) return DiceScore(0.0);
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    return DiceScore(2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size()));
}

enum class Stage { pattern, similarity, fallback };

inline std::string_view to_string(Stage s) {
    switch (s) {
    case Stage::pattern: return "pattern";
    case Stage::similarity: return "similarity";
    case Stage::fallback: return "fallback";
    }
    return "pattern";
}

inline Stage parse_stage(std::string_view s) {
    if (s == "pattern") return Stage::pattern;
    if (s == "similarity") return Stage::similarity;
    if (s == "fallback") return Stage::fallback;
    throw DataError("unknown stage '" + std::string(s) + "'");
}

struct ViewpointGroups {
    /// Only non-empty groups are present; members keep input order.
    std::map<Viewpoint, std::vector<SimpleSentence>> groups;
    std::map<std::string, Stage> stage_of;

    const std::vector<SimpleSentence>& group(Viewpoint v) const {
        static const std::vector<SimpleSentence> empty;
        const auto it = groups.find(v);
        return it == groups.end() ? empty : it->second;
    }

    std::vector<Viewpoint> regular_viewpoints() const {
        std::vector<Viewpoint> out;
        for (const auto& [v, members] : groups)
            if (v != Viewpoint::miscellaneous && !members.empty()) out.push_back(v);
        return out;
    }
};

struct Assignment {
    std::string sentence_id;
    std::optional<Viewpoint> viewpoint;

    bool operator==(const Assignment&) const = default;
};

/// For each unclassified sentence, the viewpoint of its most Dice-similar
/// classified peer. Ties go to the peer first in source order, then to the
/// viewpoint first in canonical order. No assignment when the best score
/// is zero or there are no peers.
inline std::vector<Assignment> similarity_assign(std::span<const SimpleSentence> unclassified,
                                                 std::span<const std::pair<SimpleSentence, Viewpoint>> classified) {
    std::vector<WordSet> peer_words;
    peer_words.reserve(classified.size());
    for (const auto& [s, v] : classified) peer_words.push_back(content_words(s).types);

    const auto better_peer = [&](std::size_t i, std::size_t j) {
        // true when classified[i] beats classified[j] at equal similarity
        const auto& a = classified[i];
        const auto& b = classified[j];
        if (source_order_less(a.first, b.first)) return true;
        if (source_order_less(b.first, a.first)) return false;
        return a.second < b.second;
    };

    std::vector<Assignment> out;
    out.reserve(unclassified.size());
    for (const auto& s : unclassified) {
        const auto words = content_words(s).types;
        std::optional<std::size_t> best;
        double best_score = 0.0;
        for (std::size_t i = 0; i < classified.size(); ++i) {
            const double score = dice(words, peer_words[i]).value();
            if (score <= 0.0) continue;
            if (!best || score > best_score || (score == best_score && better_peer(i, *best))) {
                best = i;
                best_score = score;
            }
        }
        out.push_back({s.id, best ? std::optional<Viewpoint>(classified[*best].second) : std::nullopt});
    }
    return out;
}

/// Groups sentences by viewpoint. Pattern matches may place a sentence in
/// several groups; similarity and fallback place it in exactly one.
inline ViewpointGroups classify(std::span<const SimpleSentence> sentences, const PatternSet& set, const Term& term) {
    const TermMatcher matcher(term);
    ViewpointGroups result;
    std::vector<std::pair<SimpleSentence, Viewpoint>> classified;
    std::vector<SimpleSentence> remaining;

    for (const auto& s : sentences) {
        const auto matched = set.match(s.tokens, matcher);
        if (matched.empty()) {
            remaining.push_back(s);
            continue;
        }
        result.stage_of[s.id] = Stage::pattern;
        for (auto v : matched) {
            result.groups[v].push_back(s);
            classified.emplace_back(s, v);
        }
    }

    const auto assignments = similarity_assign(remaining, classified);
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        const auto& a = assignments[i];
        if (a.viewpoint) {
            result.groups[*a.viewpoint].push_back(remaining[i]);
            result.stage_of[a.sentence_id] = Stage::similarity;
        } else {
            result.groups[Viewpoint::miscellaneous].push_back(remaining[i]);
            result.stage_of[a.sentence_id] = Stage::fallback;
        }
    }
    return result;
}

/// Inspection dump for `--dump-groups`.
inline nlohmann::ordered_json groups_to_json(const ViewpointGroups& groups, const Term& term) {
    nlohmann::ordered_json j;
    j["term"] = term.surface;
    nlohmann::ordered_json g = nlohmann::ordered_json::object();
    for (const auto& [v, members] : groups.groups) {
        auto& arr = g[std::string(to_string(v))];
        arr = nlohmann::ordered_json::array();
        for (const auto& s : members) {
            nlohmann::ordered_json m;
            m["id"] = s.id;
            m["text"] = s.text;
            m["paragraph_rank"] = s.paragraph_rank;
            m["stage"] = to_string(groups.stage_of.at(s.id));
            arr.push_back(std::move(m));
        }
    }
    j["groups"] = std::move(g);
    return j;
}

} // namespace vbs
