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

#include <map>
#include <random>

#include "clickbait/corpus.hpp"
#include "clickbait/error.hpp"
#include "test_support.hpp"

using namespace clickbait;

namespace {

HeadlineRecord rec(std::string id, std::string text, int label, Source source = Source::kSynthetic) {
  return HeadlineRecord{.id = std::move(id), .text = std::move(text), .label = label, .source = source};
}

LabeledCorpus random_corpus(std::mt19937_64& rng, std::size_t pos, std::size_t neg) {
  std::vector<HeadlineRecord> out;
  std::size_t i = 0;
  for (; i < pos; ++i) out.push_back(rec("r" + std::to_string(i), "headline " + std::to_string(i), 1));
  for (; i < pos + neg; ++i) out.push_back(rec("r" + std::to_string(i), "headline " + std::to_string(i), 0));
  std::shuffle(out.begin(), out.end(), rng);
  return LabeledCorpus(out, rng());
}

}  // namespace

TEST(Corpus, EmptyFileParsesToNothing) {
  EXPECT_TRUE(parse_source_text("", Source::kKaggle1).records.empty());
  EXPECT_TRUE(parse_source_text("", Source::kCc17).records.empty());
  EXPECT_TRUE(parse_source_text("headline,clickbait\n", Source::kKaggle2).records.empty());
}

TEST(Corpus, KaggleRowMapsFields) {
  const auto r = parse_source_text("headline,clickbait\nX,1\n", Source::kKaggle1);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].text, "X");
  EXPECT_EQ(r.records[0].label, 1);
  EXPECT_EQ(r.records[0].source, Source::kKaggle1);
  EXPECT_TRUE(r.errors.empty());
}

TEST(Corpus, KaggleQuotedFieldsAndOrder) {
  const auto r = parse_source_text(
      "headline,clickbait\n\"Hello, \"\"World\"\"\",0\nSecond,1\n", Source::kKaggle2);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].text, "Hello, \"World\"");
  EXPECT_EQ(r.records[1].text, "Second");
}

TEST(Corpus, MissingHeadlineIsSkippedWithLine) {
  const auto r = parse_source_text("headline,clickbait\n,1\nKept,0\n", Source::kKaggle1);
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 2u);
}

TEST(Corpus, Cc17NullTextSkipped) {
  const auto r = parse_source_text(
      "{\"id\":\"a\",\"postText\":null,\"truthMean\":0.9}\n"
      "{\"id\":\"b\",\"postText\":[\"Real title\"],\"truthMean\":0.2}\n"
      "{\"id\":\"c\",\"targetTitle\":\"Fallback\",\"truthMean\":0.5}\n",
      Source::kCc17);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 1u);
  EXPECT_EQ(r.records[0].text, "Real title");
  EXPECT_EQ(r.records[0].label, 0);
  EXPECT_EQ(r.records[1].text, "Fallback");
  EXPECT_EQ(r.records[1].label, 1);
}

TEST(Corpus, UnreadableFileThrows) {
  EXPECT_THROW(parse_source("/nonexistent/file.csv", Source::kKaggle1), Error);
}

TEST(Corpus, ParseFromFile) {
  testing_support::TempDir dir("corpus");
  testing_support::write_file(dir / "k.csv", "headline,clickbait\nA,1\nB,0\n");
  EXPECT_EQ(parse_source(dir / "k.csv", Source::kKaggle1).records.size(), 2u);
}

TEST(Corpus, HarmonizeThreshold) {
  EXPECT_EQ(harmonize_cc17(1.0), 1);
  EXPECT_EQ(harmonize_cc17(0.0), 0);
  EXPECT_EQ(harmonize_cc17(0.5), 1);
  EXPECT_EQ(harmonize_cc17(0.4999), 0);
  EXPECT_THROW(harmonize_cc17(1.5), PreconditionError);
  EXPECT_THROW(harmonize_cc17(-0.1), PreconditionError);
}

TEST(Corpus, NormalizeText) {
  EXPECT_EQ(normalize_text("  Hello   WORLD!\t"), "hello world!");
}

TEST(Corpus, InvariantsEnforced) {
  EXPECT_THROW(LabeledCorpus({rec("a", "  ", 1)}), PreconditionError);
  EXPECT_THROW(LabeledCorpus({rec("a", "x", 2)}), PreconditionError);
  EXPECT_THROW(LabeledCorpus({rec("a", "x", 1), rec("a", "y", 0)}), PreconditionError);
  EXPECT_THROW(LabeledCorpus({rec("a", "Same Text", 1), rec("b", "same  text", 1)}), PreconditionError);
  const LabeledCorpus c({rec("a", "x", 1), rec("b", "y", 0), rec("c", "z", 1)});
  EXPECT_EQ(c.positives(), 2u);
  EXPECT_EQ(c.negatives(), 1u);
}

TEST(Corpus, MergeDisjoint) {
  const LabeledCorpus a({rec("a1", "one", 1), rec("a2", "two", 0), rec("a3", "three", 1)});
  const LabeledCorpus b({rec("b1", "four", 0), rec("b2", "five", 1)});
  const auto m = merge_dedupe({a, b});
  EXPECT_EQ(m.corpus.size(), 5u);
  EXPECT_EQ(m.duplicates, 0u);
  EXPECT_EQ(m.conflicts, 0u);
}

TEST(Corpus, MergeDuplicateKeptOnce) {
  const LabeledCorpus a({rec("a1", "Same", 1)});
  const LabeledCorpus b({rec("b1", "same", 1)});
  const auto m = merge_dedupe({a, b});
  ASSERT_EQ(m.corpus.size(), 1u);
  EXPECT_EQ(m.corpus.records()[0].id, "a1");
  EXPECT_EQ(m.duplicates, 1u);
}

TEST(Corpus, MergeConflictDropped) {
  const LabeledCorpus a({rec("a1", "Same", 1), rec("a2", "other", 0)});
  const LabeledCorpus b({rec("b1", "same", 0)});
  const auto m = merge_dedupe({a, b});
  ASSERT_EQ(m.corpus.size(), 1u);
  EXPECT_EQ(m.corpus.records()[0].id, "a2");
  EXPECT_EQ(m.conflicts, 1u);
}

TEST(Corpus, MergeRawRecordsWithinOnePart) {
  const auto m = merge_dedupe_records({{rec("k1-2", "A", 1), rec("k1-3", "a", 1), rec("k1-4", "B", 0)}});
  EXPECT_EQ(m.corpus.size(), 2u);
  EXPECT_EQ(m.duplicates, 1u);
}

TEST(Corpus, MergeIsIdempotent) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_corpus(rng, 5 + trial, 3 + trial);
    const auto once = merge_dedupe({c}).corpus;
    const auto twice = merge_dedupe({once, once}).corpus;
    EXPECT_EQ(once.records(), twice.records());
  }
}

TEST(Corpus, BalancedSampleCounts) {
  std::mt19937_64 rng(11);
  const auto c = random_corpus(rng, 300, 250);
  const auto s = balanced_sample(c, 200, 1);
  EXPECT_EQ(s.positives(), 200u);
  EXPECT_EQ(s.negatives(), 200u);
  EXPECT_TRUE(balanced_sample(c, 0, 1).empty());
  EXPECT_EQ(balanced_sample(c, 200, 1), s);
  EXPECT_THROW(balanced_sample(c, 251, 1), PreconditionError);
}

TEST(Corpus, BalancedSampleAlwaysEqualClasses) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t pos = 1 + rng() % 40;
    const std::size_t neg = 1 + rng() % 40;
    const auto c = random_corpus(rng, pos, neg);
    const std::size_t n = rng() % (std::min(pos, neg) + 1);
    const auto s = balanced_sample(c, n, rng());
    EXPECT_EQ(s.positives(), n);
    EXPECT_EQ(s.negatives(), n);
  }
}

TEST(Corpus, BalancedSampleAtFullScale) {
  std::vector<HeadlineRecord> records;
  records.reserve(55000);
  for (std::size_t i = 0; i < 55000; ++i) {
    records.push_back(rec(std::to_string(i), "h" + std::to_string(i), i < 30000 ? 1 : 0));
  }
  const auto s = balanced_sample(LabeledCorpus(std::move(records)), 20000, 3);
  EXPECT_EQ(s.positives(), 20000u);
  EXPECT_EQ(s.negatives(), 20000u);
}

TEST(Corpus, SplitArithmetic) {
  std::vector<HeadlineRecord> records;
  for (std::size_t i = 0; i < 40000; ++i) records.push_back(rec(std::to_string(i), "h" + std::to_string(i), int(i % 2)));
  const LabeledCorpus c(std::move(records));
  const auto s = stratified_split(c, 0.8, 5);
  EXPECT_EQ(s.train.size(), 32000u);
  EXPECT_EQ(s.test.size(), 8000u);
  EXPECT_EQ(s.train.positives(), 16000u);
  EXPECT_EQ(s.test.positives(), 4000u);
  for (const auto& r : s.train.records()) EXPECT_EQ(r.split, Split::kTrain);
  for (const auto& r : s.test.records()) EXPECT_EQ(r.split, Split::kTest);
  const auto again = stratified_split(c, 0.8, 5);
  EXPECT_EQ(again.train, s.train);
  EXPECT_EQ(again.test, s.test);
}

TEST(Corpus, SplitRoundingOnTenRecords) {
  std::vector<HeadlineRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back(rec(std::to_string(i), "h" + std::to_string(i), i % 2));
  const auto s = stratified_split(LabeledCorpus(records), 0.999, 1);
  EXPECT_EQ(s.train.size() + s.test.size(), 10u);
  EXPECT_GE(s.train.size(), 9u);
}

TEST(Corpus, SplitRejectsBadInput) {
  const LabeledCorpus c({rec("a", "x", 1), rec("b", "y", 0)});
  EXPECT_THROW(stratified_split(c, 0.0, 1), PreconditionError);
  EXPECT_THROW(stratified_split(c, 1.0, 1), PreconditionError);
  EXPECT_THROW(stratified_split(LabeledCorpus({rec("a", "x", 1)}), 0.5, 1), PreconditionError);
}

TEST(Corpus, SplitPreservesClassRatioAndPartitions) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t pos = 2 + rng() % 60;
    const std::size_t neg = 2 + rng() % 60;
    const auto c = random_corpus(rng, pos, neg);
    const double f = 0.1 + 0.8 * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto s = stratified_split(c, f, rng());
    EXPECT_LE(std::abs(double(s.train.positives()) - f * double(pos)), 1.0);
    EXPECT_LE(std::abs(double(s.train.negatives()) - f * double(neg)), 1.0);
    std::map<std::string, int> seen;
    for (const auto& r : s.train.records()) ++seen[r.id];
    for (const auto& r : s.test.records()) ++seen[r.id];
    EXPECT_EQ(seen.size(), c.size());
    for (const auto& [id, count] : seen) EXPECT_EQ(count, 1) << id;
  }
}

TEST(Corpus, JsonlRoundTrip) {
  testing_support::TempDir dir("jsonl");
  std::vector<HeadlineRecord> records = {rec("a", "Quote \" and \\ slash", 1, Source::kCc17),
                                         rec("b", "Ünïcode “text”", 0, Source::kKaggle2)};
  records[1].split = Split::kTest;
  write_jsonl(dir / "c.jsonl", records);
  EXPECT_EQ(read_jsonl(dir / "c.jsonl"), records);
  EXPECT_THROW(record_from_json("{not json"), FormatError);
}

TEST(Corpus, SourceNames) {
  EXPECT_EQ(source_from_string("k1"), Source::kKaggle1);
  EXPECT_EQ(source_from_string("KAGGLE2"), Source::kKaggle2);
  EXPECT_EQ(source_from_string("cc17"), Source::kCc17);
  EXPECT_THROW(source_from_string("bogus"), PreconditionError);
}
