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

#include "clickbait/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "clickbait/csv.hpp"
#include "clickbait/error.hpp"
#include "clickbait/rng.hpp"
#include "json.hpp"

namespace clickbait {

using nlohmann::json;

std::string_view to_string(Source source) {
  switch (source) {
    case Source::kKaggle1: return "KAGGLE1";
    case Source::kKaggle2: return "KAGGLE2";
    case Source::kCc17: return "CC17";
    case Source::kSynthetic: return "SYNTHETIC";
  }
  return "SYNTHETIC";
}

Source source_from_string(std::string_view name) {
  if (name == "KAGGLE1" || name == "k1") return Source::kKaggle1;
  if (name == "KAGGLE2" || name == "k2") return Source::kKaggle2;
  if (name == "CC17" || name == "cc17") return Source::kCc17;
  if (name == "SYNTHETIC" || name == "synthetic") return Source::kSynthetic;
  throw PreconditionError("unknown source: " + std::string(name));
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kNone: return "none";
    case Split::kTrain: return "train";
    case Split::kTest: return "test";
  }
  return "none";
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  if (name == "none" || name.empty()) return Split::kNone;
  throw PreconditionError("unknown split: " + std::string(name));
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (const char c : trim(text)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ascii_lower(c));
  }
  return out;
}

LabeledCorpus::LabeledCorpus(std::vector<HeadlineRecord> records, std::uint64_t seed)
    : records_(std::move(records)), seed_(seed) {
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> texts;
  for (const auto& r : records_) {
    if (trim(r.text).empty()) throw PreconditionError("record " + r.id + " has empty text");
    if (r.label != 0 && r.label != 1) {
      throw PreconditionError("record " + r.id + " has non-binary label");
    }
    if (!ids.insert(r.id).second) throw PreconditionError("duplicate record id: " + r.id);
    if (!texts.insert(normalize_text(r.text)).second) {
      throw PreconditionError("duplicate normalized text in record " + r.id);
    }
    positives_ += static_cast<std::size_t>(r.label);
  }
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view id_prefix(Source schema) {
  switch (schema) {
    case Source::kKaggle1: return "k1-";
    case Source::kKaggle2: return "k2-";
    case Source::kCc17: return "cc17-";
    case Source::kSynthetic: return "syn-";
  }
  return "";
}

ParseResult parse_kaggle(std::string_view content, Source schema) {
  ParseResult result;
  const auto rows = parse_csv(content);
  if (rows.empty()) return result;

  const auto& header = rows.front().fields;
  std::size_t text_col = header.size();
  std::size_t label_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = normalize_text(header[c]);
    if (name == "headline" || name == "title") text_col = c;
    if (name == "clickbait" || name == "label") label_col = c;
  }
  if (text_col == header.size() || label_col == header.size()) {
    throw FormatError("CSV header must contain 'headline' and 'clickbait' columns");
  }

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() <= std::max(text_col, label_col)) {
      result.errors.push_back({row.line, "row has too few columns"});
      continue;
    }
    const auto text = trim(row.fields[text_col]);
    if (text.empty()) {
      result.errors.push_back({row.line, "missing headline"});
      continue;
    }
    const auto label = trim(row.fields[label_col]);
    if (label != "0" && label != "1") {
      result.errors.push_back({row.line, "clickbait label must be 0 or 1"});
      continue;
    }
    result.records.push_back(HeadlineRecord{
        .id = std::string(id_prefix(schema)) + std::to_string(row.line),
        .text = std::string(text),
        .label = label == "1" ? 1 : 0,
        .source = schema,
    });
  }
  return result;
}

std::string cc17_text(const json& row) {
  if (auto it = row.find("postText"); it != row.end()) {
    if (it->is_string()) return it->get<std::string>();
    if (it->is_array()) {
      for (const auto& part : *it) {
        if (part.is_string() && !trim(part.get<std::string>()).empty()) {
          return part.get<std::string>();
        }
      }
    }
  }
  if (auto it = row.find("targetTitle"); it != row.end() && it->is_string()) {
    return it->get<std::string>();
  }
  return {};
}

ParseResult parse_cc17(std::string_view content) {
  ParseResult result;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= content.size()) {
    const auto end = std::min(content.find('\n', start), content.size());
    const auto line = trim(content.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty()) {
      if (end == content.size()) break;
      continue;
    }
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      result.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
      continue;
    }
    const auto text = std::string(trim(cc17_text(row)));
    if (text.empty()) {
      result.errors.push_back({line_no, "missing postText/targetTitle"});
      continue;
    }
    const auto mean = row.find("truthMean");
    if (mean == row.end() || !mean->is_number()) {
      result.errors.push_back({line_no, "missing truthMean"});
      continue;
    }
    int label = 0;
    try {
      label = harmonize_cc17(mean->get<double>());
    } catch (const PreconditionError& e) {
      result.errors.push_back({line_no, e.what()});
      continue;
    }
    std::string id = std::to_string(line_no);
    if (auto it = row.find("id"); it != row.end()) {
      id = it->is_string() ? it->get<std::string>() : it->dump();
    }
    result.records.push_back(HeadlineRecord{
        .id = "cc17-" + id, .text = text, .label = label, .source = Source::kCc17});
  }
  return result;
}

}  // namespace

ParseResult parse_source_text(std::string_view content, Source schema) {
  switch (schema) {
    case Source::kKaggle1:
    case Source::kKaggle2:
      return parse_kaggle(content, schema);
    case Source::kCc17:
      return parse_cc17(content);
    case Source::kSynthetic:
      break;
  }
  throw PreconditionError("synthetic records have no source file layout");
}

ParseResult parse_source(const std::filesystem::path& path, Source schema) {
  return parse_source_text(read_file(path), schema);
}

int harmonize_cc17(double truth_mean) {
  if (!(truth_mean >= 0.0 && truth_mean <= 1.0)) {
    throw PreconditionError("truthMean outside [0,1]: " + std::to_string(truth_mean));
  }
  return truth_mean >= 0.5 ? 1 : 0;
}

MergeResult merge_dedupe_records(const std::vector<std::vector<HeadlineRecord>>& parts) {
  // First pass: collect the label set of every normalized text.
  std::unordered_map<std::string, int> label_mask;
  for (const auto& part : parts) {
    for (const auto& r : part) label_mask[normalize_text(r.text)] |= (1 << r.label);
  }

  MergeResult result;
  std::vector<HeadlineRecord> kept;
  std::unordered_set<std::string> seen;
  std::unordered_set<std::string> counted_conflicts;
  std::unordered_set<std::string> ids;
  for (const auto& part : parts) {
    for (const auto& r : part) {
      auto key = normalize_text(r.text);
      if (label_mask[key] == 3) {
        if (counted_conflicts.insert(key).second) ++result.conflicts;
        continue;
      }
      if (!seen.insert(std::move(key)).second) {
        ++result.duplicates;
        continue;
      }
      auto copy = r;
      // Ids from different sources can collide; disambiguate deterministically.
      for (int suffix = 2; !ids.insert(copy.id).second; ++suffix) {
        copy.id = r.id + "#" + std::to_string(suffix);
      }
      kept.push_back(std::move(copy));
    }
  }
  result.corpus = LabeledCorpus(std::move(kept));
  return result;
}

MergeResult merge_dedupe(const std::vector<LabeledCorpus>& corpora) {
  std::vector<std::vector<HeadlineRecord>> parts;
  parts.reserve(corpora.size());
  for (const auto& c : corpora) parts.push_back(c.records());
  auto result = merge_dedupe_records(parts);
  if (!corpora.empty()) result.corpus = LabeledCorpus(result.corpus.records(), corpora[0].seed());
  return result;
}

namespace {

std::vector<std::size_t> indices_with_label(const LabeledCorpus& corpus, int label) {
  std::vector<std::size_t> out;
  const auto& records = corpus.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].label == label) out.push_back(i);
  }
  return out;
}

}  // namespace

LabeledCorpus balanced_sample(const LabeledCorpus& corpus, std::size_t n_per_class,
                              std::uint64_t seed) {
  if (corpus.positives() < n_per_class || corpus.negatives() < n_per_class) {
    std::ostringstream msg;
    msg << "balanced_sample needs " << n_per_class << " per class; short by "
        << (n_per_class > corpus.positives() ? n_per_class - corpus.positives() : 0)
        << " clickbait and "
        << (n_per_class > corpus.negatives() ? n_per_class - corpus.negatives() : 0)
        << " non-clickbait records";
    throw PreconditionError(msg.str());
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  chosen.reserve(2 * n_per_class);
  for (const int label : {1, 0}) {
    auto pool = indices_with_label(corpus, label);
    fisher_yates(std::span(pool), rng);
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_per_class));
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<HeadlineRecord> out;
  out.reserve(chosen.size());
  for (const auto i : chosen) out.push_back(corpus.records()[i]);
  return LabeledCorpus(std::move(out), seed);
}

SplitCorpus stratified_split(const LabeledCorpus& corpus, double train_fraction,
                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw PreconditionError("train fraction must lie in (0,1)");
  }
  if (corpus.positives() == 0 || corpus.negatives() == 0) {
    throw PreconditionError("stratified_split needs both classes present");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> pools;
  std::vector<std::size_t> train_counts;
  for (const int label : {1, 0}) {
    auto pool = indices_with_label(corpus, label);
    fisher_yates(std::span(pool), rng);
    train_counts.push_back(static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(pool.size()))));
    pools.push_back(std::move(pool));
  }

  // Rounding can starve one side entirely; move a single record from the
  // larger class so both sides stay non-empty.
  const auto total = corpus.size();
  const auto larger = pools[0].size() >= pools[1].size() ? 0u : 1u;
  if (train_counts[0] + train_counts[1] == total) --train_counts[larger];
  if (train_counts[0] + train_counts[1] == 0) ++train_counts[larger];

  std::vector<Split> assignment(corpus.size(), Split::kTest);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < train_counts[c]; ++j) assignment[pools[c][j]] = Split::kTrain;
  }
  std::vector<HeadlineRecord> train;
  std::vector<HeadlineRecord> test;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto r = corpus.records()[i];
    r.split = assignment[i];
    (assignment[i] == Split::kTrain ? train : test).push_back(std::move(r));
  }
  return {LabeledCorpus(std::move(train), seed), LabeledCorpus(std::move(test), seed)};
}

LabeledCorpus tag_splits(const SplitCorpus& split) {
  auto records = split.train.records();
  records.insert(records.end(), split.test.records().begin(), split.test.records().end());
  return LabeledCorpus(std::move(records), split.train.seed());
}

std::string record_to_json(const HeadlineRecord& record) {
  json j = {{"id", record.id},
            {"text", record.text},
            {"label", record.label},
            {"source", std::string(to_string(record.source))}};
  if (record.split != Split::kNone) j["split"] = std::string(to_string(record.split));
  return j.dump();
}

HeadlineRecord record_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid corpus line: ") + e.what());
  }
  try {
    HeadlineRecord r;
    r.id = j.at("id").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.label = j.at("label").get<int>();
    r.source = source_from_string(j.value("source", std::string("SYNTHETIC")));
    r.split = split_from_string(j.value("split", std::string("none")));
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("corpus line missing field: ") + e.what());
  }
}

void write_jsonl(const std::filesystem::path& path, const std::vector<HeadlineRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

std::vector<HeadlineRecord> read_jsonl(const std::filesystem::path& path) {
  const auto content = read_file(path);
  std::vector<HeadlineRecord> records;
  std::size_t start = 0;
  while (start < content.size()) {
    const auto end = std::min(content.find('\n', start), content.size());
    const auto line = trim(std::string_view(content).substr(start, end - start));
    if (!line.empty()) records.push_back(record_from_json(line));
    start = end + 1;
  }
  return records;
}

}  // namespace clickbait
