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

#include <numeric>
#include <random>

#include "clickbait/error.hpp"
#include "clickbait/features.hpp"
#include "test_support.hpp"

using namespace clickbait;

namespace {

std::vector<HeadlineRecord> sample_records() {
  const std::vector<std::string> texts = {"You Won't Believe This!", "Council approves 2024 budget",
                                          "10 Things Only Cat People Know", "Rain expected across the region",
                                          "What Happened Next Shocked Everyone", "Bank raises interest rate by 0.25%"};
  std::vector<HeadlineRecord> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({.id = "r" + std::to_string(i), .text = texts[i], .label = int((i + 1) % 2),
                   .split = i < 4 ? Split::kTrain : Split::kTest});
  }
  return out;
}

RowMatrixF random_reduced(std::size_t n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> dist;
  RowMatrixF m(static_cast<Eigen::Index>(n), d);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = dist(rng);
  }
  return m;
}

}  // namespace

TEST(Features, ZeroInputs) {
  const std::vector<float> e(1000, 0.0f);
  const auto x = assemble(e, HeuristicScores{});
  ASSERT_EQ(x.size(), 1002u);
  for (const float v : x) EXPECT_EQ(v, 0.0f);
  EXPECT_EQ(hybrid_dim(1000, FeatureMode::kAggregate), 1002u);
}

TEST(Features, ConcatenationLayout) {
  const std::vector<float> e = {0.25f, -1.5f, 3.0f};
  HeuristicScores s;
  s.baitness = 0.75;
  s.informativeness = 0.125;
  const auto x = assemble(e, s);
  ASSERT_EQ(x.size(), 5u);
  EXPECT_EQ(x[0], 0.25f);
  EXPECT_EQ(x[1], -1.5f);
  EXPECT_EQ(x[2], 3.0f);
  EXPECT_EQ(x[3], 0.75f);
  EXPECT_EQ(x[4], 0.125f);
}

TEST(Features, ExpandedLayout) {
  const std::vector<float> e(1000, 1.0f);
  const auto s = score_headline("You Won't Believe 10 Things!", HeuristicConfig::defaults());
  const auto x = assemble(e, s, FeatureMode::kExpanded);
  ASSERT_EQ(x.size(), 1010u);
  EXPECT_EQ(hybrid_dim(1000, FeatureMode::kExpanded), 1010u);
  const auto b = s.bait_signals.as_array();
  const auto i = s.info_signals.as_array();
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(x[1000 + k], static_cast<float>(b[k]));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(x[1006 + k], static_cast<float>(i[k]));
}

TEST(Features, RejectsNonFinite) {
  const std::vector<float> e = {1.0f, NAN};
  EXPECT_THROW(assemble(e, HeuristicScores{}), PreconditionError);
}

TEST(Features, BuildMatrixAlignsRows) {
  const auto records = sample_records();
  const auto reduced = random_reduced(records.size(), 4, 1);
  const auto fm = build_feature_matrix(reduced, records, HeuristicConfig::defaults());
  ASSERT_EQ(fm.rows(), records.size());
  EXPECT_EQ(fm.dim(), 6);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto s = score_headline(records[r].text, HeuristicConfig::defaults());
    EXPECT_EQ(fm.labels[r], records[r].label);
    EXPECT_EQ(fm.ids[r], records[r].id);
    EXPECT_EQ(fm.values(Eigen::Index(r), 4), static_cast<float>(s.baitness));
    EXPECT_EQ(fm.values(Eigen::Index(r), 5), static_cast<float>(s.informativeness));
    for (Eigen::Index j = 0; j < 4; ++j) EXPECT_EQ(fm.values(Eigen::Index(r), j), reduced(Eigen::Index(r), j));
  }
  EXPECT_EQ(fm.rows_in(Split::kTest), (std::vector<std::size_t>{4, 5}));
}

TEST(Features, ShuffleThenUnshuffleIsIdentity) {
  const auto records = sample_records();
  const auto reduced = random_reduced(records.size(), 3, 2);
  const auto direct = build_feature_matrix(reduced, records, HeuristicConfig::defaults());
  std::vector<std::size_t> perm(records.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<HeadlineRecord> shuffled;
    RowMatrixF shuffled_reduced(reduced.rows(), reduced.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.push_back(records[perm[i]]);
      shuffled_reduced.row(Eigen::Index(i)) = reduced.row(Eigen::Index(perm[i]));
    }
    const auto fm = build_feature_matrix(shuffled_reduced, shuffled, HeuristicConfig::defaults());
    std::vector<std::size_t> inverse(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
    const auto back = select_rows(fm, inverse);
    EXPECT_EQ(back.values, direct.values);
    EXPECT_EQ(back.labels, direct.labels);
    EXPECT_EQ(back.ids, direct.ids);
  }
}

TEST(Features, SaveLoadBitExact) {
  testing_support::TempDir dir("features");
  const auto records = sample_records();
  const auto fm = build_feature_matrix(random_reduced(records.size(), 5, 4), records, HeuristicConfig::defaults());
  save_features(dir / "f.bin", fm);
  const auto back = load_features(dir / "f.bin");
  EXPECT_EQ(back.values, fm.values);
  EXPECT_EQ(back.labels, fm.labels);
  EXPECT_EQ(back.ids, fm.ids);
  EXPECT_EQ(back.splits, fm.splits);
}

TEST(Features, StandardizeUsesTrainStatistics) {
  const auto records = sample_records();
  auto fm = build_feature_matrix(random_reduced(records.size(), 3, 5), records, HeuristicConfig::defaults());
  const auto tail = fm.values.rightCols(2).eval();
  const auto stats = standardize_embedding_block(fm, 2);
  ASSERT_EQ(stats.mean.size(), 3u);
  const auto train = fm.rows_in(Split::kTrain);
  for (Eigen::Index j = 0; j < 3; ++j) {
    double mu = 0.0;
    for (const auto r : train) mu += fm.values(Eigen::Index(r), j);
    EXPECT_NEAR(mu / double(train.size()), 0.0, 1e-5);
  }
  EXPECT_EQ(fm.values.rightCols(2), tail);
  EXPECT_THROW(standardize_embedding_block(fm, 9), PreconditionError);
}

TEST(Features, ValidateCatchesMisalignment) {
  FeatureMatrix fm;
  fm.values = RowMatrixF::Zero(2, 3);
  fm.labels = {0, 1};
  fm.ids = {"a"};
  fm.splits = {Split::kNone, Split::kNone};
  EXPECT_THROW(fm.validate(), PreconditionError);
}
