#include <gtest/gtest.h>

#include "checks.hpp"

using namespace vbs;
using vbs::testing::make_sentence;

namespace {

ScoredSentence raw(const std::string& id, double w, double r, double c) {
    ScoredSentence s;
    s.sentence = make_sentence(id, id, static_cast<int>(r));
    s.factors.w = w;
    s.factors.r = r;
    s.factors.c = c;
    return s;
}

std::vector<std::string> ids(const std::vector<ScoredSentence>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.sentence.id);
    return out;
}

} // namespace

TEST(Frequencies, Counting) {
    const std::vector<SimpleSentence> two{make_sentence("a", "markup tags"), make_sentence("b", "the markup")};
    EXPECT_EQ(group_word_frequencies(two).at("markup"), 2u);
    EXPECT_TRUE(group_word_frequencies({}).empty());
    const std::vector<SimpleSentence> one{make_sentence("a", "XML XML parser")};
    const auto f = group_word_frequencies(one);
    EXPECT_EQ(f.at("xml"), 2u);
    EXPECT_EQ(f.at("parser"), 1u);
}

TEST(RawFactors, Examples) {
    const WordFrequencies freqs{{"alpha", 3}, {"beta", 1}};
    const auto s = make_sentence("s", "alpha beta", 1);
    const auto f = raw_factors(s, freqs);
    EXPECT_DOUBLE_EQ(f.w, 2.0);
    EXPECT_DOUBLE_EQ(f.r, 1.0);
    const std::string text(42, 'x');
    EXPECT_DOUBLE_EQ(raw_factors(make_sentence("t", text), freqs).c, 42.0);
    EXPECT_DOUBLE_EQ(raw_factors(make_sentence("u", "the of"), freqs).w, 0.0);
}

TEST(Normalize, WeightedDifference) {
    const ScoreWeights w;
    const auto out = normalize_and_score({raw("hi", 4, 1, 10), raw("lo", 2, 1, 10)}, w);
    EXPECT_NEAR(out[0].score - out[1].score, w.w * 1.0, 1e-12);
    EXPECT_GT(out[0].score, out[1].score);
}

TEST(Normalize, SingletonScoresHalf) {
    const auto out = normalize_and_score({raw("only", 3, 2, 9)}, ScoreWeights{});
    EXPECT_DOUBLE_EQ(out[0].score, 0.5);
}

TEST(Normalize, RankPolarity) {
    const ScoreWeights w;
    const auto out = normalize_and_score({raw("r1", 2, 1, 10), raw("r10", 2, 10, 10)}, w);
    EXPECT_NEAR(out[0].score - out[1].score, w.r, 1e-12);
}

TEST(Normalize, LengthPolarity) {
    const auto out = normalize_and_score({raw("short", 2, 1, 5), raw("long", 2, 1, 50)}, ScoreWeights{});
    EXPECT_DOUBLE_EQ(out[0].factors.c_norm, 1.0);
    EXPECT_DOUBLE_EQ(out[1].factors.c_norm, 0.0);
}

TEST(Normalize, EqualRankAndLengthOrdersByW) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        std::vector<ScoredSentence> g;
        for (int i = 0; i < 6; ++i) g.push_back(raw("s" + std::to_string(i), static_cast<double>(rng() % 20), 2, 30));
        const auto out = normalize_and_score(g, ScoreWeights{});
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = 0; j < out.size(); ++j)
                if (out[i].factors.w < out[j].factors.w) {
                    EXPECT_LT(out[i].score, out[j].score);
                }
    }
}

TEST(Weights, Validation) {
    EXPECT_NO_THROW(ScoreWeights{}.validate());
    EXPECT_THROW((ScoreWeights{0.2, 0.3, 0.5}.validate()), ConfigError);
    EXPECT_NO_THROW((ScoreWeights{0.2, 0.3, 0.5}.validate(true)));
    EXPECT_THROW((ScoreWeights{0.5, 0.3, 0.3}.validate(true)), ConfigError);
    EXPECT_THROW((ScoreWeights{1.2, 0.0, -0.2}.validate(true)), ConfigError);
    EXPECT_EQ(ScoreWeights::parse("0.6,0.3,0.1"), (ScoreWeights{0.6, 0.3, 0.1}));
    EXPECT_THROW(ScoreWeights::parse("0.6,0.4"), ConfigError);
    EXPECT_THROW(ScoreWeights::parse("a,b,c"), ConfigError);
    EXPECT_THROW(ScoreWeights::parse("0.5,0.3,0.2,0"), ConfigError);
}

TEST(SelectRepresentatives, TopAndClamp) {
    std::vector<ScoredSentence> five;
    for (int i = 0; i < 5; ++i) {
        five.push_back(raw("s" + std::to_string(i), 1, 1, 1));
        five.back().score = 0.1 * i;
    }
    EXPECT_EQ(ids(select_representatives(five, 1)), (std::vector<std::string>{"s4"}));
    const std::vector<ScoredSentence> two(five.begin(), five.begin() + 2);
    EXPECT_EQ(select_representatives(two, 3).size(), 2u);
}

TEST(SelectRepresentatives, TieGoesToLowerRank) {
    auto a = raw("a", 1, 3, 1);
    auto b = raw("b", 1, 2, 1);
    a.score = b.score = 0.4;
    const std::vector<ScoredSentence> pair{a, b};
    EXPECT_EQ(ids(select_representatives(pair, 1)), (std::vector<std::string>{"b"}));
}

TEST(SelectMiscellaneous, PicksMostDissimilar) {
    const std::vector<SimpleSentence> selected{make_sentence("x", "XML markup")};
    const std::vector<SimpleSentence> misc{make_sentence("m1", "XML is markup", 1),
                                           make_sentence("m2", "tags use angle brackets", 2)};
    const auto got = select_miscellaneous(misc, selected, 1);
    ASSERT_EQ(got.size(), 1u);
    EXPECT_EQ(got[0].id, "m2");
}

TEST(SelectMiscellaneous, ZeroAndClamp) {
    const std::vector<SimpleSentence> misc{make_sentence("m1", "alpha beta", 1), make_sentence("m2", "alpha", 2),
                                           make_sentence("m3", "gamma", 3)};
    EXPECT_TRUE(select_miscellaneous(misc, {}, 0).empty());
    const auto all = select_miscellaneous(misc, {}, 10);
    ASSERT_EQ(all.size(), 3u);
    // m1 first (source order), then m3 (dice 0 to m1), then m2
    EXPECT_EQ(all[0].id, "m1");
    EXPECT_EQ(all[1].id, "m3");
    EXPECT_EQ(all[2].id, "m2");
}

TEST(SelectMiscellaneous, MatchesBruteForceGreedy) {
    const auto r = vbs::testing::check_misc_oracle();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Invariants, ScoreRange) {
    const auto r = vbs::testing::check_score_range();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Invariants, ArgmaxScaleInvariant) {
    const auto r = vbs::testing::check_argmax_scaling();
    EXPECT_TRUE(r.ok) << r.detail;
}
