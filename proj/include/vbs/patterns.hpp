#pragma once

// Token-level viewpoint patterns.
//
// Pattern DSL, whitespace separated:
//   word        literal, case-insensitive (tokenized like sentence text)
//   {TERM}      the target term surface or any alias
//   {NUM}       a number token
//   {WORD}      a content word (word token that is not a stopword)
//   {WORD*}     zero or more content words
//   {ANY}       any one token
//   {ANY*}      zero or more tokens
//   (a b|c)     alternation of sequences; an empty branch makes the group optional
//   ^ $         anchor at sentence start / end
//
// Punctuation tokens are invisible to matching. Without `^` a pattern may
// match anywhere in the sentence.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "vbs/corpus.hpp"
#include "vbs/error.hpp"
#include "vbs/segmenter.hpp"
#include "vbs/text.hpp"
#include "vbs/tokenizer.hpp"
#include "vbs/viewpoint.hpp"

namespace vbs {

struct PatternSpec {
    std::string id;
    Viewpoint viewpoint = Viewpoint::definition;
    std::string expr;
};

namespace detail {

struct PatternNode {
    enum class Kind { literal, term, number, word, word_star, any, any_star, group };
    Kind kind = Kind::literal;
    std::string literal; // folded
    std::vector<std::vector<PatternNode>> alternatives;
};

using NodeSeq = std::vector<PatternNode>;

class PatternParser {
public:
    PatternParser(const PatternSpec& spec) : spec_(spec), src_(spec.expr) {}

    void parse(NodeSeq& root, bool& anchored_start, bool& anchored_end) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == '^') {
            anchored_start = true;
            ++pos_;
        }
        root = parse_sequence(0);
        if (pos_ < src_.size() && src_[pos_] == '$') {
            anchored_end = true;
            ++pos_;
            skip_space();
        }
        if (pos_ < src_.size()) {
            if (src_[pos_] == ')') fail(pos_, "unbalanced ')'");
            if (src_[pos_] == '|') fail(pos_, "'|' outside a group");
            fail(pos_, std::string("unexpected '") + src_[pos_] + "'");
        }
        if (root.empty()) fail(0, "empty pattern");
    }

private:
    [[noreturn]] void fail(std::size_t at, const std::string& why) const { throw PatternError(spec_.id, at, why); }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    static bool is_special(char c) {
        return c == '(' || c == ')' || c == '|' || c == '{' || c == '}' || c == '^' || c == '$' ||
               std::isspace(static_cast<unsigned char>(c));
    }

    NodeSeq parse_sequence(int depth) {
        NodeSeq seq;
        for (;;) {
            skip_space();
            if (pos_ >= src_.size()) return seq;
            const char c = src_[pos_];
            if (c == ')' || c == '|') {
                if (depth == 0 && c == ')') fail(pos_, "unbalanced ')'");
                return seq;
            }
            if (c == '$') return seq;
            if (c == '^') fail(pos_, "'^' is only allowed at the start of a pattern");
            if (c == '}') fail(pos_, "unbalanced '}'");
            if (c == '(') {
                const std::size_t open = pos_++;
                PatternNode group;
                group.kind = PatternNode::Kind::group;
                for (;;) {
                    group.alternatives.push_back(parse_sequence(depth + 1));
                    if (pos_ >= src_.size()) fail(open, "unbalanced '('");
                    if (src_[pos_] == '|') {
                        ++pos_;
                        continue;
                    }
                    if (src_[pos_] == ')') {
                        ++pos_;
                        break;
                    }
                    fail(pos_, "'$' is only allowed at the end of a pattern");
                }
                seq.push_back(std::move(group));
                continue;
            }
            if (c == '{') {
                const std::size_t open = pos_;
                const auto close = src_.find('}', pos_);
                if (close == std::string_view::npos) fail(open, "unbalanced '{'");
                const auto name = src_.substr(pos_ + 1, close - pos_ - 1);
                PatternNode node;
                if (name == "TERM") node.kind = PatternNode::Kind::term;
                else if (name == "NUM") node.kind = PatternNode::Kind::number;
                else if (name == "WORD") node.kind = PatternNode::Kind::word;
                else if (name == "WORD*") node.kind = PatternNode::Kind::word_star;
                else if (name == "ANY") node.kind = PatternNode::Kind::any;
                else if (name == "ANY*") node.kind = PatternNode::Kind::any_star;
                else fail(open, "unknown atom {" + std::string(name) + "}");
                seq.push_back(std::move(node));
                pos_ = close + 1;
                continue;
            }
            const std::size_t start = pos_;
            while (pos_ < src_.size() && !is_special(src_[pos_])) ++pos_;
            const auto word = src_.substr(start, pos_ - start);
            bool any = false;
            for (const auto& t : tokenize(word, StopwordSet{})) {
                if (t.kind == TokenKind::punctuation) continue;
                PatternNode node;
                node.kind = PatternNode::Kind::literal;
                node.literal = text::fold_case(t.surface);
                seq.push_back(std::move(node));
                any = true;
            }
            if (!any) fail(start, "literal '" + std::string(word) + "' has no matchable token");
        }
    }

    const PatternSpec& spec_;
    std::string_view src_;
    std::size_t pos_ = 0;
};

struct MatchToken {
    std::string folded;
    TokenKind kind;
    bool stopword;
};

} // namespace detail

/// Folded token sequences of the term surface and aliases.
class TermMatcher {
public:
    explicit TermMatcher(const Term& term) {
        for (const auto& form : term.forms()) {
            std::vector<std::string> seq;
            for (const auto& t : tokenize(form, StopwordSet{}))
                if (t.kind != TokenKind::punctuation) seq.push_back(text::fold_case(t.surface));
            if (!seq.empty()) forms_.push_back(std::move(seq));
        }
    }

    const std::vector<std::vector<std::string>>& forms() const { return forms_; }

private:
    std::vector<std::vector<std::string>> forms_;
};

class CompiledPattern {
public:
    explicit CompiledPattern(PatternSpec spec) : spec_(std::move(spec)) {
        if (spec_.viewpoint == Viewpoint::miscellaneous)
            throw PatternError(spec_.id, 0, "miscellaneous cannot be a pattern target");
        detail::PatternParser(spec_).parse(root_, anchored_start_, anchored_end_);
    }

    const PatternSpec& spec() const { return spec_; }
    const std::string& id() const { return spec_.id; }
    Viewpoint viewpoint() const { return spec_.viewpoint; }

    bool matches(std::span<const Token> tokens, const TermMatcher& term) const {
        std::vector<detail::MatchToken> seq;
        seq.reserve(tokens.size());
        for (const auto& t : tokens)
            if (t.kind != TokenKind::punctuation) seq.push_back({text::fold_case(t.surface), t.kind, t.is_stopword});
        return matches_prepared(seq, term);
    }

    bool matches(const SimpleSentence& sentence, const Term& term) const {
        return matches(sentence.tokens, TermMatcher(term));
    }

    bool matches_prepared(std::span<const detail::MatchToken> seq, const TermMatcher& term) const {
        const Runner run{seq, term};
        const std::size_t last_start = anchored_start_ ? 0 : seq.size();
        for (std::size_t start = 0; start <= last_start; ++start) {
            if (run.sequence(root_, 0, start, [&](std::size_t end) { return !anchored_end_ || end == seq.size(); }))
                return true;
        }
        return false;
    }

private:
    using Continuation = std::function<bool(std::size_t)>;

    // Backtracking matcher; `k` receives each position where the rest of
    // the sequence can end.
    struct Runner {
        std::span<const detail::MatchToken> seq;
        const TermMatcher& term;

        bool sequence(const detail::NodeSeq& nodes, std::size_t ni, std::size_t pos, const Continuation& k) const {
            using Kind = detail::PatternNode::Kind;
            if (ni == nodes.size()) return k(pos);
            const auto& node = nodes[ni];
            const auto next = [&](std::size_t p) { return sequence(nodes, ni + 1, p, k); };
            const auto content = [&](std::size_t p) {
                return seq[p].kind == TokenKind::word && !seq[p].stopword;
            };
            switch (node.kind) {
            case Kind::literal:
                return pos < seq.size() && seq[pos].folded == node.literal && next(pos + 1);
            case Kind::number:
                return pos < seq.size() && seq[pos].kind == TokenKind::number && next(pos + 1);
            case Kind::word:
                return pos < seq.size() && content(pos) && next(pos + 1);
            case Kind::any:
                return pos < seq.size() && next(pos + 1);
            case Kind::any_star:
                for (std::size_t p = pos; p <= seq.size(); ++p)
                    if (next(p)) return true;
                return false;
            case Kind::word_star:
                for (std::size_t p = pos;; ++p) {
                    if (next(p)) return true;
                    if (p >= seq.size() || !content(p)) return false;
                }
            case Kind::term:
                for (const auto& form : term.forms()) {
                    if (pos + form.size() > seq.size()) continue;
                    bool ok = true;
                    for (std::size_t i = 0; i < form.size() && ok; ++i) ok = seq[pos + i].folded == form[i];
                    if (ok && next(pos + form.size())) return true;
                }
                return false;
            case Kind::group:
                for (const auto& alt : node.alternatives) {
                    const Continuation after = [&](std::size_t p) { return next(p); };
                    if (sequence(alt, 0, pos, after)) return true;
                }
                return false;
            }
            return false;
        }
    };

    PatternSpec spec_;
    detail::NodeSeq root_;
    bool anchored_start_ = false;
    bool anchored_end_ = false;
};

inline CompiledPattern compile_pattern(const PatternSpec& spec) { return CompiledPattern(spec); }

class PatternSet {
public:
    PatternSet() = default;

    /// Rejects duplicate ids.
    void add(CompiledPattern pattern) {
        if (!ids_.insert(pattern.id()).second) throw DataError("duplicate pattern id '" + pattern.id() + "'");
        patterns_.push_back(std::move(pattern));
    }

    const std::vector<CompiledPattern>& patterns() const { return patterns_; }
    std::size_t size() const { return patterns_.size(); }
    const std::string& version() const { return version_; }
    void set_version(std::string v) { version_ = std::move(v); }

    std::map<Viewpoint, std::size_t> per_viewpoint_counts() const {
        std::map<Viewpoint, std::size_t> counts;
        for (auto v : kTargetViewpoints) counts[v] = 0;
        for (const auto& p : patterns_) ++counts[p.viewpoint()];
        return counts;
    }

    /// Distinct viewpoints with at least one matching pattern.
    std::set<Viewpoint> match(std::span<const Token> tokens, const TermMatcher& term) const {
        std::vector<detail::MatchToken> seq;
        for (const auto& t : tokens)
            if (t.kind != TokenKind::punctuation) seq.push_back({text::fold_case(t.surface), t.kind, t.is_stopword});
        std::set<Viewpoint> out;
        for (const auto& p : patterns_)
            if (!out.count(p.viewpoint()) && p.matches_prepared(seq, term)) out.insert(p.viewpoint());
        return out;
    }

private:
    std::vector<CompiledPattern> patterns_;
    std::set<std::string> ids_;
    std::string version_;
};

/// Pattern file: JSON lines `{"id", "viewpoint", "expr"}`, optionally led by
/// a `{"version": ...}` record. Blank lines and lines starting with `#` are skipped.
inline PatternSet parse_patterns(std::istream& in, const std::string& source = "<patterns>") {
    PatternSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = text::trim(line);
        if (body.empty() || body.front() == '#') continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(source, lineno, std::string("malformed JSON: ") + e.what());
        }
        if (!rec.is_object()) throw ParseError(source, lineno, "record is not an object");
        if (rec.contains("version") && !rec.contains("expr")) {
            if (!rec["version"].is_string()) throw ParseError(source, lineno, "'version' must be a string");
            set.set_version(rec["version"].get<std::string>());
            continue;
        }
        for (const char* key : {"id", "viewpoint", "expr"})
            if (!rec.contains(key) || !rec[key].is_string())
                throw ParseError(source, lineno, std::string("missing string field '") + key + "'");
        PatternSpec spec;
        spec.id = rec["id"].get<std::string>();
        spec.expr = rec["expr"].get<std::string>();
        const auto name = rec["viewpoint"].get<std::string>();
        const auto vp = parse_viewpoint(name);
        if (!vp) throw ParseError(source, lineno, "unknown viewpoint '" + name + "' in pattern '" + spec.id + "'");
        spec.viewpoint = *vp;
        set.add(compile_pattern(spec));
    }
    return set;
}

inline PatternSet load_patterns(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pattern file " + path.string());
    return parse_patterns(in, path.string());
}

inline std::set<Viewpoint> match_viewpoints(const SimpleSentence& sentence, const PatternSet& set, const Term& term) {
    return set.match(sentence.tokens, TermMatcher(term));
}

} // namespace vbs
