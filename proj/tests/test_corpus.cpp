#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace vbs;
using vbs::testing::corpus_from_lines;
using vbs::testing::data_path;

namespace {

const char* kHeader = R"({"term": "XML", "aliases": []})";

std::string three_paragraphs(const std::string& r1, const std::string& r2, const std::string& r3) {
    std::ostringstream out;
    out << kHeader << '\n'
        << R"({"id": "a", "rank": )" << r1 << R"(, "text": "First."})" << '\n'
        << R"({"id": "b", "rank": )" << r2 << R"(, "text": "Second."})" << '\n'
        << R"({"id": "c", "rank": )" << r3 << R"(, "text": "Third."})" << '\n';
    return out.str();
}

std::string error_of(const std::string& jsonl) {
    try {
        corpus_from_lines(jsonl);
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(CharCount, Basics) {
    EXPECT_EQ(char_count(""), 0u);
    EXPECT_EQ(char_count("XML"), 3u);
    EXPECT_EQ(char_count("日本語の文字列"), 7u); // 7 scalars, 21 bytes
    EXPECT_EQ(std::string("日本語の文字列").size(), 21u);
}

TEST(CharCount, TrimsEachLineAndSkipsNewlines) {
    EXPECT_EQ(char_count("  ab  \n\tcd\n"), 4u);
    EXPECT_EQ(char_count("a b"), 3u);
    EXPECT_EQ(char_count("　全角　"), 2u);
}

TEST(CharCount, AdditiveOverTrimmedLines) {
    std::mt19937_64 rng(3);
    const std::vector<std::string> parts{"alpha", " beta ", "ガンマ", "  ", "d e", "\t x"};
    for (int t = 0; t < 200; ++t) {
        std::vector<std::string> lines;
        std::string joined;
        std::size_t sum = 0;
        for (std::size_t k = 1 + rng() % 5; k > 0; --k) {
            const auto& line = parts[rng() % parts.size()];
            sum += char_count(line);
            if (!joined.empty()) joined += '\n';
            joined += line;
        }
        EXPECT_EQ(char_count(joined), sum);
    }
}

TEST(Text, InvalidUtf8IsDetected) {
    EXPECT_TRUE(text::is_valid_utf8("ok \xe2\x82\xac"));
    EXPECT_FALSE(text::is_valid_utf8("bad \xff"));
    EXPECT_FALSE(text::is_valid_utf8("\xe2\x82"));
    EXPECT_TRUE(text::is_valid_utf8("\xef\xbf\xbd")); // a literal U+FFFD
}

TEST(Tokenizer, SimpleSentence) {
    const auto tokens = tokenize("XML is a markup language.");
    ASSERT_EQ(tokens.size(), 6u);
    const std::vector<std::string> surfaces{"XML", "is", "a", "markup", "language", "."};
    for (std::size_t i = 0; i < tokens.size(); ++i) EXPECT_EQ(tokens[i].surface, surfaces[i]);
    EXPECT_FALSE(tokens[0].is_stopword);
    EXPECT_TRUE(tokens[1].is_stopword);
    EXPECT_TRUE(tokens[2].is_stopword);
    EXPECT_FALSE(tokens[3].is_stopword);
    EXPECT_EQ(tokens[5].kind, TokenKind::punctuation);
}

TEST(Tokenizer, EmptyAndKinds) {
    EXPECT_TRUE(tokenize("").empty());
    const auto tokens = tokenize("W3C, 1998");
    ASSERT_EQ(tokens.size(), 3u);
    EXPECT_EQ(tokens[0].kind, TokenKind::word);
    EXPECT_EQ(tokens[1].kind, TokenKind::punctuation);
    EXPECT_EQ(tokens[2].kind, TokenKind::number);
}

TEST(Tokenizer, JoinersAndNumbers) {
    const auto t = tokenize("10BASE-T runs at 10.5 Mbit/s, e.g. on 1,000 nodes");
    EXPECT_EQ(t[0].surface, "10BASE-T");
    EXPECT_EQ(t[0].kind, TokenKind::word);
    EXPECT_EQ(t[3].surface, "10.5");
    EXPECT_EQ(t[3].kind, TokenKind::number);
    bool saw_thousand = false;
    for (const auto& tok : t) saw_thousand |= tok.surface == "1,000" && tok.kind == TokenKind::number;
    EXPECT_TRUE(saw_thousand);
}

TEST(Tokenizer, ConcatenationOfSurfacesIsTheInputMinusSpace) {
    const std::string in = "The parser (v2.1) reads <tags>; it's fast!";
    std::string joined;
    for (const auto& t : tokenize(in)) joined += t.surface;
    std::string squeezed;
    for (char c : in)
        if (c != ' ') squeezed.push_back(c);
    EXPECT_EQ(joined, squeezed);
}

TEST(Corpus, LoadsInRankOrder) {
    const auto c = corpus_from_lines(three_paragraphs("3", "1", "2"));
    EXPECT_EQ(c.term.surface, "XML");
    ASSERT_EQ(c.paragraphs.size(), 3u);
    EXPECT_EQ(c.paragraphs[0].id, "b");
    EXPECT_EQ(c.paragraphs[1].id, "c");
    EXPECT_EQ(c.paragraphs[2].id, "a");
}

TEST(Corpus, DuplicateRankNamed) {
    const auto err = error_of(three_paragraphs("1", "1", "2"));
    EXPECT_NE(err.find("duplicate rank 1"), std::string::npos) << err;
}

TEST(Corpus, NonContiguousRanks) {
    std::string jsonl = std::string(kHeader) + "\n" + R"({"rank": 1, "text": "One."})" + "\n" +
                        R"({"rank": 3, "text": "Three."})" + "\n";
    EXPECT_NE(error_of(jsonl).find("not contiguous"), std::string::npos);
}

TEST(Corpus, RejectsBadRecords) {
    EXPECT_THROW(corpus_from_lines(R"({"rank": 1, "text": "x"})"), ParseError);
    EXPECT_THROW(corpus_from_lines(std::string(kHeader) + "\n{not json"), ParseError);
    EXPECT_THROW(corpus_from_lines(std::string(kHeader) + "\n" + R"({"rank": 1, "text": "   "})"), ValidationError);
    EXPECT_THROW(corpus_from_lines(std::string(kHeader) + "\n" + R"({"rank": 0, "text": "x"})"), ValidationError);
    EXPECT_THROW(corpus_from_lines(std::string(kHeader) + "\n" + R"({"rank": 1})"), ParseError);
    EXPECT_THROW(corpus_from_lines(std::string(kHeader) + "\n" + R"({"rank": 1, "text": "ÿ"})" + "\n" + kHeader),
                 ParseError);
    EXPECT_THROW(corpus_from_lines(std::string(kHeader) + "\n{\"rank\": 1, \"text\": \"a\xff\"}"), ParseError);
    EXPECT_THROW(corpus_from_lines(R"({"term": "XML", "aliases": ["XML"]})"), ValidationError);
    EXPECT_THROW(corpus_from_lines(""), ValidationError);
}

TEST(Corpus, ParseErrorCarriesLine) {
    try {
        corpus_from_lines(std::string(kHeader) + "\n\n{oops}");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Corpus, TakeTop) {
    std::ostringstream out;
    out << kHeader << '\n';
    for (int r = 1; r <= 50; ++r) out << R"({"rank": )" << r << R"(, "text": "Paragraph )" << r << R"(."})" << '\n';
    const auto c = corpus_from_lines(out.str());
    EXPECT_EQ(take_top(c, 50).paragraphs, c.paragraphs);
    const auto ten = take_top(c, 10);
    ASSERT_EQ(ten.paragraphs.size(), 10u);
    for (int r = 1; r <= 10; ++r) EXPECT_EQ(ten.paragraphs[r - 1].rank, r);
    EXPECT_THROW(take_top(c, 0), ConfigError);

    const auto small = corpus_from_lines(three_paragraphs("1", "2", "3"));
    EXPECT_EQ(take_top(small, 10).paragraphs.size(), 3u);

    for (std::size_t k1 = 1; k1 <= 55; k1 += 3)
        for (std::size_t k2 = k1; k2 <= 55; k2 += 7) {
            const auto a = take_top(c, k1).paragraphs;
            const auto b = take_top(c, k2).paragraphs;
            ASSERT_LE(a.size(), b.size());
            EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
        }
}

TEST(Corpus, RoundTripIsFixedPoint) {
    for (const auto* name : {"xml_corpus.jsonl", "worked_example.jsonl"}) {
        const auto c1 = load_corpus(data_path(name));
        const auto s1 = serialize_corpus(c1);
        const auto c2 = corpus_from_lines(s1);
        EXPECT_EQ(c1.term, c2.term);
        EXPECT_EQ(c1.paragraphs, c2.paragraphs);
        EXPECT_EQ(serialize_corpus(c2), s1);
    }
}

TEST(Corpus, MissingFileIsDataError) {
    EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl"), DataError);
}

TEST(Corpus, BundledXmlCorpusSize) {
    const auto c = load_corpus(data_path("xml_corpus.jsonl"));
    EXPECT_EQ(c.paragraphs.size(), 11u);
    EXPECT_GT(source_chars(c), 0u);
}
