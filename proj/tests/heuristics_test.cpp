// Copyright 2026 The clickbait-hybrid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "clickbait/error.hpp"
#include "clickbait/heuristics.hpp"

using namespace clickbait;

namespace {

constexpr const char* kCelebrity = "You Won't Believe What This Celebrity Did!";
constexpr const char* kSolar = "Study Finds 23% Increase in Solar Adoption Across Europe";

const HeuristicConfig& cfg() { return HeuristicConfig::defaults(); }

void expect_unit_range(const HeuristicScores& s, const std::string& text) {
  for (const double v : s.bait_signals.as_array()) {
    EXPECT_TRUE(v >= 0.0 && v <= 1.0) << text;
  }
  for (const double v : s.info_signals.as_array()) {
    EXPECT_TRUE(v >= 0.0 && v <= 1.0) << text;
  }
  EXPECT_TRUE(s.baitness >= 0.0 && s.baitness <= 1.0) << text;
  EXPECT_TRUE(s.informativeness >= 0.0 && s.informativeness <= 1.0) << text;
}

}  // namespace

TEST(Heuristics, DefaultConfigIsValid) {
  EXPECT_NO_THROW(cfg().validate());
  EXPECT_FALSE(cfg().bait_phrase_lexicon.empty());
  EXPECT_TRUE(cfg().vague_word_lexicon.count("thing"));
  EXPECT_TRUE(cfg().vague_word_lexicon.count("stuff"));
}

TEST(Heuristics, CelebrityHeadlineSignals) {
  const auto s = bait_signal_vector(kCelebrity, cfg());
  EXPECT_GT(s.punctuation, 0.0);
  EXPECT_GT(s.capitalization, 0.5);
  EXPECT_GT(s.bait_phrase, 0.0);
}

TEST(Heuristics, PlainSentenceHasNoCues) {
  const auto s = bait_signal_vector("the cat sat on the mat", cfg());
  EXPECT_EQ(s.punctuation, 0.0);
  EXPECT_EQ(s.capitalization, 0.0);
  EXPECT_EQ(s.numeric, 0.0);
  EXPECT_EQ(s.bait_phrase, 0.0);
}

TEST(Heuristics, EmptyTextIsAllZero) {
  const auto s = score_headline("", cfg());
  EXPECT_EQ(s.bait_signals, BaitSignals{});
  EXPECT_EQ(s.info_signals, InfoSignals{});
  EXPECT_EQ(s.baitness, 0.0);
  EXPECT_EQ(s.informativeness, 0.0);
}

TEST(Heuristics, SubSignalFormulas) {
  // Three marks saturate punctuation; two lexicon hits saturate bait phrases.
  EXPECT_DOUBLE_EQ(bait_signal_vector("what?!", cfg()).punctuation, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(bait_signal_vector("what?!!!", cfg()).punctuation, 1.0);
  EXPECT_DOUBLE_EQ(bait_signal_vector("Big small", cfg()).capitalization, 0.5);
  EXPECT_DOUBLE_EQ(bait_signal_vector("NASA Launches", cfg()).capitalization, 1.0);
  EXPECT_EQ(bait_signal_vector("top 10 dogs", cfg()).numeric, 1.0);
  EXPECT_DOUBLE_EQ(info_signal_vector("one two three four five", cfg()).length, 0.5);
  EXPECT_EQ(info_signal_vector("a b c d e f g h i j k l", cfg()).length, 1.0);
}

TEST(Heuristics, WeightedMeanExtremes) {
  EXPECT_EQ(baitness("", cfg()), 0.0);
  HeuristicConfig c = cfg();
  c.bait_weights = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(baitness("!!!", c), 1.0);
  const auto a = bait_signal_vector(kCelebrity, cfg()).as_array();
  double expect = 0.0;
  for (std::size_t k = 0; k < 6; ++k) expect += cfg().bait_weights[k] * a[k];
  EXPECT_NEAR(baitness(kCelebrity, cfg()), expect, 1e-12);
}

TEST(Heuristics, InformativenessCombination) {
  const auto s = info_signal_vector(kSolar, cfg());
  const auto w = cfg().info_weights;
  const double expect = std::clamp(w[0] * s.lexical_density + w[1] * s.numeric_content + w[2] * s.length -
                                       w[3] * s.vagueness_penalty,
                                   0.0, 1.0);
  EXPECT_NEAR(informativeness(kSolar, cfg()), expect, 1e-12);
}

TEST(Heuristics, SolarHeadlineSignals) {
  const auto s = info_signal_vector(kSolar, cfg());
  EXPECT_EQ(s.numeric_content, 1.0);
  EXPECT_GT(s.lexical_density, 0.5);
  EXPECT_GE(informativeness(kSolar, cfg()), 0.6);
}

TEST(Heuristics, VaguenessPenalty) {
  EXPECT_GT(info_signal_vector("this thing is stuff", cfg()).vagueness_penalty, 0.0);
}

TEST(Heuristics, TableOrderingAndBands) {
  EXPECT_GT(baitness(kCelebrity, cfg()), baitness(kSolar, cfg()));
  EXPECT_GT(informativeness(kSolar, cfg()), informativeness(kCelebrity, cfg()));
  EXPECT_GE(baitness(kCelebrity, cfg()), 0.6);
  EXPECT_LE(informativeness(kCelebrity, cfg()), 0.4);
  EXPECT_EQ(informativeness("", cfg()), 0.0);
}

TEST(Heuristics, TypographicApostropheMatchesLexicon) {
  EXPECT_GT(bait_signal_vector("You Won’t Believe This", cfg()).bait_phrase, 0.0);
}

TEST(Heuristics, FuzzedInputStaysInRange) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> pieces = {"!", "?", "…", "\"", "“", "WOW", "wow", "42", "3.5%", " ",
                                           "\t", "été", "\xF0\x9F\x98\x80", "you won't believe", "thing",
                                           "amazing", "terrible", "the", "\xff\xfe", "Europe", "-", " "};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int parts = static_cast<int>(rng() % 15);
    for (int p = 0; p < parts; ++p) {
      if (rng() % 4 == 0) {
        text.push_back(static_cast<char>(rng() % 256));
      } else {
        text += pieces[rng() % pieces.size()];
      }
    }
    const auto s = score_headline(text, cfg());
    expect_unit_range(s, text);
    EXPECT_EQ(s, score_headline(text, cfg()));
  }
}

TEST(Heuristics, MonotoneUnderAppending) {
  const std::vector<std::string> texts = {"", "plain words", "Wow!!", "You Won't Believe It?", "things and stuff",
                                          kCelebrity, kSolar};
  for (const auto& t : texts) {
    EXPECT_GE(bait_signal_vector(t + "!", cfg()).punctuation, bait_signal_vector(t, cfg()).punctuation) << t;
    EXPECT_GE(info_signal_vector(t + " thing", cfg()).vagueness_penalty,
              info_signal_vector(t, cfg()).vagueness_penalty)
        << t;
  }
}

TEST(Heuristics, TextPrimitives) {
  EXPECT_EQ(text::word_form("“Won’t!”"), "won't");
  EXPECT_EQ(text::word_form("..."), "");
  EXPECT_EQ(text::count_syllables("cat"), 1);
  EXPECT_EQ(text::count_syllables("table"), 2);
  EXPECT_GE(text::count_syllables("rhythm"), 1);
  EXPECT_EQ(text::split_whitespace("a \t b c").size(), 3u);
}

TEST(Heuristics, BundledFilesMatchCompiledDefaults) {
  const std::filesystem::path dir = CLICKBAIT_DATA_DIR;
  const auto loaded = HeuristicConfig::from_files(dir / "bait_phrases.txt", dir / "vague_words.txt",
                                                  dir / "valence.tsv", dir / "function_words.txt");
  EXPECT_EQ(loaded.bait_phrase_lexicon, cfg().bait_phrase_lexicon);
  EXPECT_EQ(loaded.vague_word_lexicon, cfg().vague_word_lexicon);
  EXPECT_EQ(loaded.sentiment_lexicon, cfg().sentiment_lexicon);
  EXPECT_EQ(loaded.function_words, cfg().function_words);
  EXPECT_GE(cfg().bait_phrase_lexicon.size(), 30u);
  EXPECT_GE(cfg().vague_word_lexicon.size(), 20u);
  EXPECT_GE(cfg().sentiment_lexicon.size(), 150u);
}

TEST(Heuristics, ValidateRejectsBadConfigs) {
  HeuristicConfig c = cfg();
  c.bait_weights[0] += 0.1;
  EXPECT_THROW(c.validate(), PreconditionError);
  c = cfg();
  c.info_weights = {1.2, -0.2, 0.0, 0.0};
  EXPECT_THROW(c.validate(), PreconditionError);
  c = cfg();
  c.sentiment_lexicon["x"] = 2.0;
  EXPECT_THROW(c.validate(), PreconditionError);
  c = cfg();
  c.vague_word_lexicon.clear();
  EXPECT_THROW(c.validate(), PreconditionError);
}

TEST(Heuristics, LexiconParsers) {
  const auto phrases = parse_phrase_list("# comment\nYou Won't Believe\n\n  what happened next  \n");
  EXPECT_EQ(phrases, (std::vector<std::string>{"you won't believe", "what happened next"}));
  const auto valence = parse_valence_list("good\t0.5\n# c\nbad\t-0.75\n");
  EXPECT_DOUBLE_EQ(valence.at("good"), 0.5);
  EXPECT_DOUBLE_EQ(valence.at("bad"), -0.75);
}
