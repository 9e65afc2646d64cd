#include <gtest/gtest.h>

#include "checks.hpp"

using namespace vbs;
using vbs::testing::corpus_from_lines;
using vbs::testing::data_path;
using vbs::testing::default_pipeline;

namespace {

std::set<Viewpoint> viewpoints_of(const Summary& s) {
    std::set<Viewpoint> out;
    for (const auto& e : s.entries) out.insert(e.viewpoint);
    return out;
}

} // namespace

TEST(Summarize, XmlCorpusSevenEntries) {
    auto cfg = default_pipeline();
    cfg.selection.misc_count = 1;
    const auto summary = summarize(load_corpus(data_path("xml_corpus.jsonl")), cfg);
    EXPECT_EQ(summary.entries.size(), 7u);
    EXPECT_EQ(viewpoints_of(summary),
              (std::set<Viewpoint>{Viewpoint::definition, Viewpoint::abbreviation, Viewpoint::purpose,
                                   Viewpoint::advantage, Viewpoint::history, Viewpoint::reference,
                                   Viewpoint::miscellaneous}));
}

TEST(Summarize, SingleGroupCorpus) {
    const auto corpus = corpus_from_lines(R"({"term": "XML"})"
                                          "\n"
                                          R"({"rank": 1, "text": "XML is a markup language. XML is a data format."})"
                                          "\n"
                                          R"({"rank": 2, "text": "XML is a text format."})");
    auto cfg = default_pipeline();
    cfg.selection.misc_count = 0;
    const auto summary = summarize(corpus, cfg);
    ASSERT_EQ(summary.entries.size(), 1u);
    EXPECT_EQ(summary.entries[0].viewpoint, Viewpoint::definition);
}

TEST(Summarize, EmptyCorpusIsError) {
    TermCorpus empty{make_term("XML"), {}};
    EXPECT_THROW(summarize(empty, default_pipeline()), DataError);
}

TEST(Summarize, BadConfigIsConfigError) {
    auto cfg = default_pipeline();
    cfg.selection.weights = {0.1, 0.2, 0.7};
    EXPECT_THROW(summarize(load_corpus(data_path("xml_corpus.jsonl")), cfg), ConfigError);
    cfg.selection.allow_any_weights = true;
    EXPECT_NO_THROW(summarize(load_corpus(data_path("xml_corpus.jsonl")), cfg));
    cfg.top_k = 0;
    EXPECT_THROW(summarize(load_corpus(data_path("xml_corpus.jsonl")), cfg), ConfigError);
}

TEST(Summarize, EntriesOrderedByScore) {
    const auto summary = summarize(load_corpus(data_path("xml_corpus.jsonl")), default_pipeline());
    for (std::size_t i = 1; i < summary.entries.size(); ++i)
        EXPECT_GE(summary.entries[i - 1].score, summary.entries[i].score);
}

TEST(Summarize, EntriesComeFromTopParagraphs) {
    std::mt19937_64 rng(12);
    auto cfg = default_pipeline();
    for (int t = 0; t < 20; ++t) {
        const auto corpus = vbs::testing::random_corpus(rng, 4 + rng() % 10);
        cfg.top_k = 1 + rng() % 8;
        const auto trace = summarize_traced(corpus, cfg);
        for (const auto& e : trace.summary.entries) {
            std::string body = e.sentence.text;
            if (e.sentence.subject_complemented) body = body.substr(e.sentence.complement_subject.size() + 3);
            // drop an inherited terminal delimiter
            const auto core = body.substr(0, body.size() - 1);
            bool found = false;
            for (const auto& p : trace.top.paragraphs) found |= p.text.find(core) != std::string::npos;
            EXPECT_TRUE(found) << e.sentence.text;
            EXPECT_LE(e.sentence.paragraph_rank, static_cast<int>(cfg.top_k));
        }
    }
}

TEST(Summarize, DuplicateTextsFlagged) {
    const auto corpus = corpus_from_lines(R"({"term": "XML"})"
                                          "\n"
                                          R"({"rank": 1, "text": "XML is an abbreviation for Extensible Markup Language, and is designed to store data."})");
    auto cfg = default_pipeline();
    const auto summary = summarize(corpus, cfg);
    for (std::size_t i = 0; i < summary.entries.size(); ++i)
        if (summary.entries[i].duplicate_of) {
            EXPECT_LT(*summary.entries[i].duplicate_of, i);
            EXPECT_EQ(summary.entries[*summary.entries[i].duplicate_of].sentence.text, summary.entries[i].sentence.text);
        }
    // a sentence in two pattern groups is selected twice
    const auto two = corpus_from_lines(R"({"term": "XML"})"
                                       "\n"
                                       R"({"rank": 1, "text": "XML stands for a format used to store data."})");
    const auto s2 = summarize(two, cfg);
    ASSERT_EQ(s2.entries.size(), 2u);
    EXPECT_FALSE(s2.entries[0].duplicate_of.has_value());
    EXPECT_EQ(s2.entries[1].duplicate_of, 0u);
}

TEST(Summarize, TotalCharsIsSumOfEntries) {
    const auto summary = summarize(load_corpus(data_path("xml_corpus.jsonl")), default_pipeline());
    std::size_t sum = 0;
    for (const auto& e : summary.entries) sum += char_count(e.sentence.text);
    EXPECT_EQ(summary.total_chars, sum);
}

TEST(Lead, BudgetAndClamp) {
    const auto corpus = load_corpus(data_path("xml_corpus.jsonl"));
    const auto total = source_chars(corpus);
    EXPECT_EQ(lead_baseline(corpus, 100).total_chars, 100u);
    const auto all = lead_baseline(corpus, total + 1000);
    EXPECT_EQ(all.total_chars, total);
    const auto one = lead_baseline(corpus, 1);
    EXPECT_EQ(one.entries.at(0).sentence.text, "X");
    EXPECT_THROW(lead_baseline(corpus, 0), ConfigError);
}

TEST(Lead, SixHundredSixteenFromElevenThousand) {
    // an 11,224-character corpus cut at 616
    std::string jsonl = "{\"term\": \"XML\"}\n";
    std::size_t made = 0;
    for (int r = 1; made < 11224; ++r) {
        std::string text = "XML paragraph " + std::to_string(r) + " ";
        while (char_count(text) < 200) text += "data ";
        text = std::string(text::trim(text));
        if (made + char_count(text) > 11224) text = text.substr(0, 11224 - made);
        text = std::string(text::trim(text));
        made += char_count(text);
        jsonl += nlohmann::json{{"rank", r}, {"text", text}}.dump() + "\n";
    }
    const auto corpus = corpus_from_lines(jsonl);
    ASSERT_EQ(source_chars(corpus), 11224u);
    const auto lead = lead_baseline(corpus, 616);
    EXPECT_EQ(lead.total_chars, 616u);
}

TEST(Lead, LengthIsExact) {
    const auto r = vbs::testing::check_lead_length();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Render, TextLines) {
    auto cfg = default_pipeline();
    cfg.selection.misc_count = 0;
    const auto corpus = corpus_from_lines(R"({"term": "XML"})"
                                          "\n"
                                          R"({"rank": 1, "text": "XML is a markup language.", "source_title": "Glossary"})");
    const auto out = render(summarize(corpus, cfg), RenderFormat::text);
    EXPECT_EQ(out, "[definition] XML is a markup language.  (Glossary)\n");
}

TEST(Render, JsonRoundTrip) {
    auto cfg = default_pipeline();
    const auto summary = summarize(load_corpus(data_path("xml_corpus.jsonl")), cfg);
    const auto json = render(summary, RenderFormat::json);
    const auto back = summary_from_json(json);
    EXPECT_TRUE(back == summary);
    EXPECT_EQ(render(back, RenderFormat::json), json);
    EXPECT_NE(json.find("\"config\""), std::string::npos);
    EXPECT_THROW(summary_from_json("{}"), DataError);
}

TEST(Render, HigherScoreFirst) {
    Summary s;
    s.term = make_term("XML");
    for (double score : {0.7, 0.9}) {
        SummaryEntry e;
        e.viewpoint = Viewpoint::definition;
        e.score = score;
        e.sentence.text = "score " + std::to_string(score);
        s.entries.push_back(e);
    }
    // summarize() sorts entries; render keeps that order
    std::stable_sort(s.entries.begin(), s.entries.end(),
                     [](const SummaryEntry& a, const SummaryEntry& b) { return a.score > b.score; });
    const auto out = render(s, RenderFormat::text);
    EXPECT_LT(out.find("0.9"), out.find("0.7"));
}

TEST(Invariants, EntryCountBound) {
    const auto r = vbs::testing::check_entry_bound();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Invariants, PermutationDeterminism) {
    const auto r = vbs::testing::check_permutation_determinism();
    EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Invariants, ByteIdenticalReruns) {
    const auto r = vbs::testing::check_byte_identical();
    EXPECT_TRUE(r.ok) << r.detail;
}
