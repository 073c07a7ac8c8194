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

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace clickbait {

// Six stylistic indicators that feed the baitness score. Every field is in [0,1].
struct BaitSignals {
  double punctuation = 0.0;
  double capitalization = 0.0;
  double numeric = 0.0;
  double sentiment = 0.0;
  double readability = 0.0;
  double bait_phrase = 0.0;

  std::array<double, 6> as_array() const {
    return {punctuation, capitalization, numeric, sentiment, readability, bait_phrase};
  }
  friend bool operator==(const BaitSignals&, const BaitSignals&) = default;
};

// Four indicators behind informativeness. The vagueness penalty is subtracted.
struct InfoSignals {
  double lexical_density = 0.0;
  double numeric_content = 0.0;
  double length = 0.0;
  double vagueness_penalty = 0.0;

  std::array<double, 4> as_array() const {
    return {lexical_density, numeric_content, length, vagueness_penalty};
  }
  friend bool operator==(const InfoSignals&, const InfoSignals&) = default;
};

struct HeuristicScores {
  double baitness = 0.0;
  double informativeness = 0.0;
  BaitSignals bait_signals;
  InfoSignals info_signals;

  friend bool operator==(const HeuristicScores&, const HeuristicScores&) = default;
};

inline constexpr std::array<std::string_view, 6> kBaitSignalNames = {
    "punctuation", "capitalization", "numeric", "sentiment", "readability", "bait_phrase"};
inline constexpr std::array<std::string_view, 4> kInfoSignalNames = {
    "lexical_density", "numeric_content", "length", "vagueness_penalty"};

struct HeuristicConfig {
  // punctuation, capitalization, numeric, sentiment, readability, bait_phrase
  std::array<double, 6> bait_weights{0.20, 0.25, 0.05, 0.10, 0.05, 0.35};
  // lexical_density, numeric_content, length, vagueness_penalty
  std::array<double, 4> info_weights{0.4, 0.2, 0.2, 0.2};
  std::vector<std::string> bait_phrase_lexicon;
  std::unordered_set<std::string> vague_word_lexicon;
  std::unordered_map<std::string, double> sentiment_lexicon;
  std::unordered_set<std::string> function_words;
  double length_cap = 10.0;

  // Bundled lexicons and default weights.
  static const HeuristicConfig& defaults();

  // Replaces whichever lexicons are given; empty paths keep the bundled ones.
  static HeuristicConfig from_files(const std::filesystem::path& bait_phrases,
                                    const std::filesystem::path& vague_words,
                                    const std::filesystem::path& valence,
                                    const std::filesystem::path& function_words = {});

  // Throws PreconditionError on weights not summing to 1, negative weights,
  // empty lexicons, valences outside [-1,1] or a non-positive length cap.
  void validate() const;
};

// Lexicon file parsers: one entry per line, '#' comments, valence file is
// "word<TAB>value".
std::vector<std::string> parse_phrase_list(std::string_view content);
std::unordered_map<std::string, double> parse_valence_list(std::string_view content);

BaitSignals bait_signal_vector(std::string_view text, const HeuristicConfig& config);
double baitness(std::string_view text, const HeuristicConfig& config);
InfoSignals info_signal_vector(std::string_view text, const HeuristicConfig& config);
double informativeness(std::string_view text, const HeuristicConfig& config);
HeuristicScores score_headline(std::string_view text, const HeuristicConfig& config);

// Text primitives shared by the signals, exposed for testing.
namespace text {

// Splits on Unicode whitespace.
std::vector<std::string_view> split_whitespace(std::string_view text);
// Strips leading/trailing punctuation, folds typographic apostrophes to '\''
// and lowercases ASCII. May return an empty string.
std::string word_form(std::string_view token);
// Vowel-group syllable estimate, at least 1.
int count_syllables(std::string_view word);
double flesch_reading_ease(std::string_view text);

}  // namespace text

std::string scores_to_json(const HeuristicScores& scores);

}  // namespace clickbait
