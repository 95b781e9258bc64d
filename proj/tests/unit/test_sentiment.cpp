#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "reviewscope/config.hpp"
#include "reviewscope/error.hpp"
#include "reviewscope/sentiment.hpp"
#include "temp_dir.hpp"

using namespace reviewscope;
using SC = SentimentClass;

namespace {

// Scores sentences by looking up a fixed value per sentence text.
class FixedScorer final : public SentimentScorer {
 public:
  explicit FixedScorer(std::map<std::string, double> by_text) : by_text_(std::move(by_text)) {}
  std::vector<SentimentScore> score(std::span<const Sentence> sentences) const override {
    std::vector<SentimentScore> out;
    for (const auto& s : sentences) out.emplace_back(by_text_.at(s.text));
    return out;
  }

 private:
  std::map<std::string, double> by_text_;
};

std::vector<Sentence> three_sentences() {
  return {make_sentence("r1", 0, "awful"), make_sentence("r1", 1, "fine"), make_sentence("r2", 0, "superb")};
}

}  // namespace

TEST(SentimentScore, RangeChecked) {
  EXPECT_NO_THROW(SentimentScore(1.0));
  EXPECT_NO_THROW(SentimentScore(5.0));
  EXPECT_THROW(SentimentScore(0.999), ValidationError);
  EXPECT_THROW(SentimentScore(5.001), ValidationError);
  EXPECT_THROW(SentimentScore(std::nan("")), ValidationError);
}

TEST(ClassifySentiment, Thresholds) {
  EXPECT_EQ(classify_sentiment(SentimentScore(1.5)), SC::negative);
  EXPECT_EQ(classify_sentiment(SentimentScore(3.0)), SC::neutral);
  EXPECT_EQ(classify_sentiment(SentimentScore(4.5)), SC::positive);
  EXPECT_EQ(classify_sentiment(SentimentScore(2.0)), SC::neutral);
  EXPECT_EQ(classify_sentiment(SentimentScore(4.0)), SC::neutral);
  EXPECT_EQ(classify_sentiment(SentimentScore(std::nextafter(2.0, 0.0))), SC::negative);
  EXPECT_EQ(classify_sentiment(SentimentScore(std::nextafter(4.0, 5.0))), SC::positive);
  EXPECT_EQ(classify_sentiment(SentimentScore(1.0)), SC::negative);
  EXPECT_EQ(classify_sentiment(SentimentScore(5.0)), SC::positive);
}

TEST(ClassifySentiment, ClassesPartitionTheScale) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1.0, 5.0);
  for (int i = 0; i < 100000; ++i) {
    const double v = u(rng);
    const int memberships = (v < 2.0) + (v >= 2.0 && v <= 4.0) + (v > 4.0);
    ASSERT_EQ(memberships, 1);
    const SC c = classify_sentiment(SentimentScore(v));
    const SC expected = v < 2.0 ? SC::negative : (v > 4.0 ? SC::positive : SC::neutral);
    ASSERT_EQ(c, expected) << v;
  }
}

TEST(ScoreBands, DefaultCutsReproduceThreeClasses) {
  ScoreBands bands({2.0, 4.0}, {"negative", "neutral", "positive"});
  for (double v : {1.0, 1.5, 1.999, 2.0, 3.0, 4.0, 4.001, 5.0}) {
    EXPECT_EQ(bands.label(SentimentScore(v)), to_string(classify_sentiment(SentimentScore(v)))) << v;
  }
}

TEST(ScoreBands, FinerResolution) {
  ScoreBands bands({1.5, 2.5, 3.5, 4.5}, {"1", "2", "3", "4", "5"});
  EXPECT_EQ(bands.label(SentimentScore(1.2)), "1");
  EXPECT_EQ(bands.label(SentimentScore(1.5)), "2");
  EXPECT_EQ(bands.label(SentimentScore(2.5)), "3");
  EXPECT_EQ(bands.label(SentimentScore(3.5)), "4");
  EXPECT_EQ(bands.label(SentimentScore(4.5)), "4");
  EXPECT_EQ(bands.label(SentimentScore(4.6)), "5");
}

TEST(ScoreBands, Validation) {
  EXPECT_THROW(ScoreBands({}, {"a"}), ConfigError);
  EXPECT_THROW(ScoreBands({2, 4}, {"a", "b"}), ConfigError);
  EXPECT_THROW(ScoreBands({4, 2}, {"a", "b", "c"}), ConfigError);
  EXPECT_THROW(ScoreBands({2, 2}, {"a", "b", "c"}), ConfigError);
}

TEST(KeepSet, ParseAndFormat) {
  EXPECT_EQ(parse_keep_set("negative, positive"), (std::set<SC>{SC::negative, SC::positive}));
  EXPECT_TRUE(parse_keep_set("none").empty());
  EXPECT_TRUE(parse_keep_set("").empty());
  EXPECT_EQ(parse_keep_set("neutral,neutral"), (std::set<SC>{SC::neutral}));
  EXPECT_THROW(parse_keep_set("happy"), ConfigError);
  EXPECT_EQ(format_keep_set(all_sentiment_classes()), "negative,neutral,positive");
  EXPECT_EQ(format_keep_set({}), "none");
}

TEST(LexiconScore, Examples) {
  const Lexicon lex{{"great", 1.0}, {"bad", -1.0}};
  EXPECT_DOUBLE_EQ(score_sentence_lexicon(make_sentence("r", 0, "great"), lex).value(), 5.0);
  EXPECT_DOUBLE_EQ(score_sentence_lexicon(make_sentence("r", 0, "nothing here"), lex).value(), 3.0);
  EXPECT_DOUBLE_EQ(score_sentence_lexicon(make_sentence("r", 0, "bad"), lex).value(), 1.0);
}

TEST(LexiconScore, MeanOfHitsOnly) {
  const Lexicon lex{{"good", 0.5}, {"poor", -0.25}};
  // mean(0.5, -0.25, 0.5) = 0.25 -> 3.5; unknown tokens are ignored
  EXPECT_DOUBLE_EQ(score_sentence_lexicon(make_sentence("r", 0, "good x poor y good"), lex).value(), 3.5);
}

TEST(LexiconScore, PermutationInvariant) {
  std::mt19937_64 rng(8);
  const Lexicon lex{{"a", 0.9}, {"b", -0.4}, {"c", 0.1}, {"d", -1.0}};
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "x", "y"};
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> tokens;
    for (std::size_t k = 0; k < 1 + rng() % 8; ++k) tokens.push_back(vocab[rng() % vocab.size()]);
    const double base = score_sentence_lexicon(make_sentence("r", 0, join(tokens, " ")), lex).value();
    std::shuffle(tokens.begin(), tokens.end(), rng);
    EXPECT_NEAR(score_sentence_lexicon(make_sentence("r", 0, join(tokens, " ")), lex).value(), base, 1e-12);
  }
}

TEST(Lexicon, ParseAndErrors) {
  std::istringstream ok("# c\ngreat\t1\n\nbad\t-0.5\r\n");
  EXPECT_EQ(parse_lexicon(ok), (Lexicon{{"great", 1.0}, {"bad", -0.5}}));
  std::istringstream range("great\t1.5\n");
  EXPECT_THROW(parse_lexicon(range), ValidationError);
  std::istringstream fields("great 1\n");
  EXPECT_THROW(parse_lexicon(fields), ValidationError);
  std::istringstream number("great\tlots\n");
  EXPECT_THROW(parse_lexicon(number), ValidationError);
}

TEST(Sidecar, Examples) {
  std::istringstream one("r1\t0\t4.2\n");
  const auto s = parse_sidecar_scores(one);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(s.at(SentenceKey{"r1", 0}).value(), 4.2);

  std::istringstream empty("");
  EXPECT_TRUE(parse_sidecar_scores(empty).empty());

  std::istringstream bad("r1\t0\t9.9\n");
  try {
    parse_sidecar_scores(bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Sidecar, MalformedLinesReportTheirLine) {
  for (const std::string text : {"r1\t0\t3\nr1\t1\n", "r1\t0\t3\nr1\tx\t3\n", "r1\t0\t3\nr1\t0\t4\n",
                                 "r1\t0\t3\nr1\t-1\t3\n"}) {
    std::istringstream in(text);
    try {
      parse_sidecar_scores(in);
      FAIL() << text;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.line(), 2u) << text;
    }
  }
}

TEST(GateSentences, KeepsSelectedClasses) {
  const auto sentences = three_sentences();
  const FixedScorer scorer({{"awful", 1.2}, {"fine", 3.0}, {"superb", 4.9}});
  const auto kept = gate_sentences(sentences, scorer, {SC::negative, SC::positive});
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].sentence, sentences[0]);
  EXPECT_EQ(kept[0].sentiment, SC::negative);
  EXPECT_DOUBLE_EQ(kept[0].score, 1.2);
  EXPECT_EQ(kept[1].sentence, sentences[2]);
  EXPECT_EQ(kept[1].sentiment, SC::positive);

  EXPECT_EQ(gate_sentences(sentences, scorer, all_sentiment_classes()).size(), 3u);
  EXPECT_TRUE(gate_sentences(sentences, scorer, {}).empty());
}

TEST(GateSentences, IdempotentSubset) {
  const auto sentences = three_sentences();
  const FixedScorer scorer({{"awful", 1.2}, {"fine", 3.0}, {"superb", 4.9}});
  const std::set<SC> keep{SC::neutral, SC::positive};
  const auto once = gate_sentences(sentences, scorer, keep);
  std::vector<Sentence> again;
  for (const auto& s : once) again.push_back(s.sentence);
  EXPECT_EQ(gate_sentences(again, scorer, keep), once);
}

TEST(GateSentences, SidecarMissIsNamed) {
  SidecarScores scores{{SentenceKey{"r1", 0}, SentimentScore(2.0)}};
  const SidecarScorer scorer(scores);
  const auto sentences = three_sentences();
  try {
    gate_sentences(sentences, scorer, all_sentiment_classes());
    FAIL();
  } catch (const GatingError& e) {
    EXPECT_NE(std::string(e.what()).find("(r1, 1)"), std::string::npos) << e.what();
  }
}

TEST(ScoredSentences, WriteParseRoundTrip) {
  const auto sentences = three_sentences();
  const FixedScorer scorer({{"awful", 1.25}, {"fine", 3.0}, {"superb", 4.5}});
  const auto kept = gate_sentences(sentences, scorer, all_sentiment_classes());
  std::ostringstream out;
  write_scored_sentences(kept, out);
  EXPECT_EQ(out.str(),
            "r1\t0\t1.250000\tnegative\tawful\nr1\t1\t3.000000\tneutral\tfine\nr2\t0\t4.500000\tpositive\tsuperb\n");
  std::istringstream in(out.str());
  EXPECT_EQ(parse_scored_sentences(in), kept);
}

TEST(ScoredSentences, ParseErrorsCarryLine) {
  for (const std::string text : {"r1\t0\t3\tneutral\tok\nr1\t1\t7\tneutral\tx\n",
                                 "r1\t0\t3\tneutral\tok\nr1\t1\t3\tmeh\tx\n",
                                 "r1\t0\t3\tneutral\tok\nr1\t1\t3\tneutral\n"}) {
    std::istringstream in(text);
    try {
      parse_scored_sentences(in);
      FAIL() << text;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.line(), 2u) << text;
    }
  }
}

TEST(MakeScorer, Bindings) {
  testkit::TempDir dir;
  const auto lex = dir.write("lex.tsv", "good\t1\n");
  const auto side = dir.write("side.tsv", "r\t0\t1.5\n");
  const auto sentence = make_sentence("r", 0, "good");
  EXPECT_DOUBLE_EQ(make_scorer("lexicon:" + lex.string())->score({&sentence, 1})[0].value(), 5.0);
  EXPECT_DOUBLE_EQ(make_scorer("sidecar:" + side.string())->score({&sentence, 1})[0].value(), 1.5);
  EXPECT_NE(make_scorer("remote:http://127.0.0.1:1"), nullptr);
  EXPECT_THROW(make_scorer("oracle:x"), ConfigError);
  EXPECT_THROW(make_scorer("lexicon:"), ConfigError);
  EXPECT_THROW(make_scorer("lexicon:" + (dir / "missing").string()), LoadError);
}
