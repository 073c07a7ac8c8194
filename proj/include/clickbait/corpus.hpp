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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clickbait {

enum class Source { kKaggle1, kKaggle2, kCc17, kSynthetic };

std::string_view to_string(Source source);
// Accepts both the long names ("KAGGLE1") and the CLI short names ("k1").
Source source_from_string(std::string_view name);

enum class Split { kNone, kTrain, kTest };

std::string_view to_string(Split split);
Split split_from_string(std::string_view name);

struct HeadlineRecord {
  std::string id;
  std::string text;
  int label = 0;  // 1 = clickbait
  Source source = Source::kSynthetic;
  Split split = Split::kNone;

  friend bool operator==(const HeadlineRecord&, const HeadlineRecord&) = default;
};

// Lowercase plus whitespace collapse. Punctuation is left untouched so the
// key never hides a stylistic difference.
std::string normalize_text(std::string_view text);

// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  // Validates record invariants and uniqueness of ids and normalized texts.
  explicit LabeledCorpus(std::vector<HeadlineRecord> records, std::uint64_t seed = 0);

  const std::vector<HeadlineRecord>& records() const { return records_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::size_t positives() const { return positives_; }
  std::size_t negatives() const { return records_.size() - positives_; }
  std::size_t count(int label) const { return label == 1 ? positives() : negatives(); }

  friend bool operator==(const LabeledCorpus&, const LabeledCorpus&) = default;

 private:
  std::vector<HeadlineRecord> records_;
  std::uint64_t seed_ = 0;
  std::size_t positives_ = 0;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<HeadlineRecord> records;
  std::vector<RowError> errors;
};

// Reads one of the three public layouts. Invalid rows are skipped and
// reported with their 1-based line number; an unreadable file throws.
ParseResult parse_source(const std::filesystem::path& path, Source schema);
ParseResult parse_source_text(std::string_view content, Source schema);

// 1 iff truth_mean >= 0.5.
int harmonize_cc17(double truth_mean);

struct MergeResult {
  LabeledCorpus corpus;
  std::size_t duplicates = 0;
  std::size_t conflicts = 0;
};

// First occurrence wins; texts seen with both labels are dropped entirely.
MergeResult merge_dedupe(const std::vector<LabeledCorpus>& corpora);
// Convenience for raw record lists (e.g. fresh from parse_source), which may
// contain duplicates that a LabeledCorpus would reject.
MergeResult merge_dedupe_records(const std::vector<std::vector<HeadlineRecord>>& parts);

LabeledCorpus balanced_sample(const LabeledCorpus& corpus, std::size_t n_per_class,
                              std::uint64_t seed);

struct SplitCorpus {
  LabeledCorpus train;
  LabeledCorpus test;
};

// Per-class counts go to train as round(fraction * count). Records keep
// their corpus order and get their split tag set.
SplitCorpus stratified_split(const LabeledCorpus& corpus, double train_fraction,
                             std::uint64_t seed);

// Concatenates train then test into one tagged corpus.
LabeledCorpus tag_splits(const SplitCorpus& split);

// Canonical JSON-lines format.
std::string record_to_json(const HeadlineRecord& record);
HeadlineRecord record_from_json(std::string_view line);
void write_jsonl(const std::filesystem::path& path, const std::vector<HeadlineRecord>& records);
std::vector<HeadlineRecord> read_jsonl(const std::filesystem::path& path);

}  // namespace clickbait
