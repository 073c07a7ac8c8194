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

#include "clickbait/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "clickbait/error.hpp"
#include "json.hpp"

namespace clickbait {

namespace lexicon_data {
extern const std::string_view kBaitPhrases;
extern const std::string_view kVagueWords;
extern const std::string_view kFunctionWords;
extern const std::string_view kValence;
}  // namespace lexicon_data

namespace {

std::vector<std::string_view> lines_of(std::string_view content) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < content.size()) {
    const auto end = std::min(content.find('\n', start), content.size());
    auto line = content.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (!line.empty() && line.front() != '#') out.push_back(line);
    start = end + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read lexicon " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::unordered_set<std::string> to_set(const std::vector<std::string>& words) {
  return {words.begin(), words.end()};
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

bool is_ascii_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }
bool is_ascii_letter(unsigned char c) { return is_ascii_upper(c) || is_ascii_lower(c); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Length of the UTF-8 whitespace sequence at text[i], or 0.
std::size_t whitespace_at(std::string_view text, std::size_t i) {
  const auto c = static_cast<unsigned char>(text[i]);
  if (c == ' ' || (c >= 0x09 && c <= 0x0D)) return 1;
  const auto byte = [&](std::size_t k) -> unsigned char {
    return i + k < text.size() ? static_cast<unsigned char>(text[i + k]) : 0;
  };
  if (c == 0xC2 && (byte(1) == 0x85 || byte(1) == 0xA0)) return 2;
  if (c == 0xE1 && byte(1) == 0x9A && byte(2) == 0x80) return 3;
  if (c == 0xE2 && byte(1) == 0x80) {
    const auto b = byte(2);
    if ((b >= 0x80 && b <= 0x8A) || b == 0xA8 || b == 0xA9 || b == 0xAF) return 3;
  }
  if (c == 0xE2 && byte(1) == 0x81 && byte(2) == 0x9F) return 3;
  if (c == 0xE3 && byte(1) == 0x80 && byte(2) == 0x80) return 3;
  return 0;
}

bool is_ascii_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
         (c >= 0x7B && c <= 0x7E);
}

// Multi-byte punctuation commonly found in headlines: dashes, curly quotes,
// ellipsis, guillemets, inverted marks.
std::size_t unicode_punct_at(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  const auto byte = [&](std::size_t k) -> unsigned char {
    return i + k < s.size() ? static_cast<unsigned char>(s[i + k]) : 0;
  };
  if (c == 0xE2 && byte(1) == 0x80 && byte(2) >= 0x90 && byte(2) <= 0xA7) return 3;
  if (c == 0xC2 && (byte(1) == 0xAB || byte(1) == 0xBB || byte(1) == 0xA1 || byte(1) == 0xBF)) {
    return 2;
  }
  return 0;
}

bool is_apostrophe_at(std::string_view s, std::size_t i) {
  if (s[i] == '\'') return true;
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         (static_cast<unsigned char>(s[i + 2]) == 0x98 ||
          static_cast<unsigned char>(s[i + 2]) == 0x99);
}

struct Token {
  std::string_view raw;
  std::string word;  // word_form(raw); may be empty
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  for (const auto raw : text::split_whitespace(text)) {
    tokens.push_back({raw, text::word_form(raw)});
  }
  return tokens;
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_digit(static_cast<unsigned char>(c)); });
}

// A word token made of letters (ASCII or any non-ASCII byte) plus inner
// apostrophes or hyphens, with at least one letter and no digit.
bool is_alphabetic_word(std::string_view word) {
  bool letter = false;
  for (const char ch : word) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_ascii_letter(c) || c >= 0x80) {
      letter = true;
    } else if (c != '\'' && c != '-') {
      return false;
    }
  }
  return letter;
}

// Title-Case or ALL-CAPS both start with an uppercase letter.
bool is_capitalized(std::string_view raw) {
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_ascii_letter(c)) return is_ascii_upper(c);
    if (c >= 0x80) return false;
  }
  return false;
}

int count_emphatic_punctuation(std::string_view text) {
  int count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '!' || c == '?' || c == '"') {
      ++count;
    } else if (c == '.' && text.substr(i, 3) == "...") {
      ++count;
      while (i + 1 < text.size() && text[i + 1] == '.') ++i;
    } else if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const auto b = static_cast<unsigned char>(text[i + 2]);
      // ellipsis, double curly quotes, low double quote
      if (b == 0xA6 || b == 0x9C || b == 0x9D || b == 0x9E) ++count;
      i += 2;
    } else if (c == 0xC2 && i + 1 < text.size()) {
      const auto b = static_cast<unsigned char>(text[i + 1]);
      if (b == 0xAB || b == 0xBB) ++count;  // guillemets
      ++i;
    }
  }
  return count;
}

// Lowercased words joined by single spaces, padded so " phrase " matching
// respects word boundaries.
std::string phrase_haystack(const std::vector<Token>& tokens) {
  std::string out = " ";
  for (const auto& t : tokens) {
    if (t.word.empty()) continue;
    out += t.word;
    out += ' ';
  }
  return out;
}

int count_occurrences(std::string_view haystack, std::string_view needle) {
  int count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

}  // namespace

std::vector<std::string> parse_phrase_list(std::string_view content) {
  std::vector<std::string> out;
  for (const auto line : lines_of(content)) {
    // Phrases may span words; normalize each word the way headline tokens are.
    std::string joined;
    for (const auto w : text::split_whitespace(line)) {
      const auto form = text::word_form(w);
      if (form.empty()) continue;
      if (!joined.empty()) joined += ' ';
      joined += form;
    }
    if (!joined.empty()) out.push_back(std::move(joined));
  }
  return out;
}

std::unordered_map<std::string, double> parse_valence_list(std::string_view content) {
  std::unordered_map<std::string, double> out;
  for (const auto line : lines_of(content)) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw FormatError("valence line lacks a tab: " + std::string(line));
    }
    const std::string value(line.substr(tab + 1));
    double v = 0.0;
    try {
      v = std::stod(value);
    } catch (const std::exception&) {
      throw FormatError("bad valence value: " + std::string(line));
    }
    out[text::word_form(line.substr(0, tab))] = v;
  }
  return out;
}

const HeuristicConfig& HeuristicConfig::defaults() {
  static const HeuristicConfig config = [] {
    HeuristicConfig c;
    c.bait_phrase_lexicon = parse_phrase_list(lexicon_data::kBaitPhrases);
    c.vague_word_lexicon = to_set(parse_phrase_list(lexicon_data::kVagueWords));
    c.function_words = to_set(parse_phrase_list(lexicon_data::kFunctionWords));
    c.sentiment_lexicon = parse_valence_list(lexicon_data::kValence);
    c.validate();
    return c;
  }();
  return config;
}

HeuristicConfig HeuristicConfig::from_files(const std::filesystem::path& bait_phrases,
                                            const std::filesystem::path& vague_words,
                                            const std::filesystem::path& valence,
                                            const std::filesystem::path& function_words) {
  HeuristicConfig c = defaults();
  if (!bait_phrases.empty()) c.bait_phrase_lexicon = parse_phrase_list(read_file(bait_phrases));
  if (!vague_words.empty()) c.vague_word_lexicon = to_set(parse_phrase_list(read_file(vague_words)));
  if (!valence.empty()) c.sentiment_lexicon = parse_valence_list(read_file(valence));
  if (!function_words.empty()) {
    c.function_words = to_set(parse_phrase_list(read_file(function_words)));
  }
  c.validate();
  return c;
}

void HeuristicConfig::validate() const {
  const auto check_weights = [](const auto& weights, const char* what) {
    double sum = 0.0;
    for (const double w : weights) {
      if (!(w >= 0.0)) throw PreconditionError(std::string(what) + " weights must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw PreconditionError(std::string(what) + " weights must sum to 1");
    }
  };
  check_weights(bait_weights, "bait");
  check_weights(info_weights, "info");
  if (bait_phrase_lexicon.empty() || vague_word_lexicon.empty() || sentiment_lexicon.empty() ||
      function_words.empty()) {
    throw PreconditionError("heuristic lexicons must be non-empty");
  }
  for (const auto& [word, v] : sentiment_lexicon) {
    if (!(v >= -1.0 && v <= 1.0)) throw PreconditionError("valence outside [-1,1]: " + word);
  }
  if (!(length_cap > 0.0)) throw PreconditionError("length cap must be positive");
}

namespace text {

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (const auto ws = whitespace_at(text, i); ws > 0) {
      if (i > start) out.push_back(text.substr(start, i - start));
      i += ws;
      start = i;
    } else {
      ++i;
    }
  }
  if (start < text.size()) out.push_back(text.substr(start));
  return out;
}

std::string word_form(std::string_view token) {
  // Strip punctuation from both ends, keeping inner apostrophes and hyphens.
  std::size_t begin = 0;
  std::size_t end = token.size();
  while (begin < end) {
    const auto c = static_cast<unsigned char>(token[begin]);
    if (is_ascii_punct(c)) {
      ++begin;
    } else if (const auto n = unicode_punct_at(token, begin); n > 0) {
      begin += n;
    } else {
      break;
    }
  }
  while (end > begin) {
    const auto c = static_cast<unsigned char>(token[end - 1]);
    if (is_ascii_punct(c)) {
      --end;
      continue;
    }
    bool stripped = false;
    for (std::size_t n : {3u, 2u}) {
      if (end >= begin + n && unicode_punct_at(token, end - n) == n) {
        end -= n;
        stripped = true;
        break;
      }
    }
    if (!stripped) break;
  }
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    if (is_apostrophe_at(token, i)) {
      out.push_back('\'');
      if (token[i] != '\'') i += 2;
      continue;
    }
    const auto c = static_cast<unsigned char>(token[i]);
    out.push_back(is_ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c));
  }
  return out;
}

int count_syllables(std::string_view word) {
  std::string letters;
  for (const char ch : word) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_ascii_letter(c)) letters.push_back(static_cast<char>(is_ascii_upper(c) ? c + 32 : c));
  }
  if (letters.empty()) return 1;
  const auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  int groups = 0;
  bool prev = false;
  for (const char c : letters) {
    const bool v = vowel(c);
    if (v && !prev) ++groups;
    prev = v;
  }
  // Silent final e ("make"), but not "-le" ("little").
  const auto n = letters.size();
  if (groups > 1 && letters[n - 1] == 'e' && !(n >= 2 && letters[n - 2] == 'l')) --groups;
  return std::max(groups, 1);
}

double flesch_reading_ease(std::string_view text) {
  const auto tokens = tokenize(text);
  int words = 0;
  int syllables = 0;
  for (const auto& t : tokens) {
    if (t.word.empty()) continue;
    ++words;
    syllables += count_syllables(t.word);
  }
  if (words == 0) return 100.0;
  int sentences = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i;
    while (j + 1 < text.size() && (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?')) ++j;
    const bool boundary = j + 1 == text.size() || whitespace_at(text, j + 1) > 0;
    if (boundary) ++sentences;
    i = j;
  }
  sentences = std::max(sentences, 1);
  return 206.835 - 1.015 * (static_cast<double>(words) / sentences) -
         84.6 * (static_cast<double>(syllables) / words);
}

}  // namespace text

BaitSignals bait_signal_vector(std::string_view text, const HeuristicConfig& config) {
  BaitSignals s;
  const auto tokens = tokenize(text);
  s.punctuation = clamp01(count_emphatic_punctuation(text) / 3.0);

  int alphabetic = 0;
  int capitalized = 0;
  bool any_word = false;
  double valence_sum = 0.0;
  int valence_hits = 0;
  for (const auto& t : tokens) {
    if (has_digit(t.raw)) s.numeric = 1.0;
    if (t.word.empty()) continue;
    any_word = true;
    if (is_alphabetic_word(t.word)) {
      ++alphabetic;
      if (is_capitalized(t.raw)) ++capitalized;
    }
    if (const auto it = config.sentiment_lexicon.find(t.word); it != config.sentiment_lexicon.end()) {
      valence_sum += std::abs(it->second);
      ++valence_hits;
    }
  }
  if (alphabetic > 0) s.capitalization = static_cast<double>(capitalized) / alphabetic;
  if (valence_hits > 0) s.sentiment = clamp01(2.0 * valence_sum / valence_hits);
  if (any_word) s.readability = clamp01((100.0 - text::flesch_reading_ease(text)) / 100.0);

  const auto haystack = phrase_haystack(tokens);
  int hits = 0;
  for (const auto& phrase : config.bait_phrase_lexicon) {
    hits += count_occurrences(haystack, " " + phrase + " ");
  }
  s.bait_phrase = clamp01(hits / 2.0);
  return s;
}

double baitness(std::string_view text, const HeuristicConfig& config) {
  const auto signals = bait_signal_vector(text, config).as_array();
  return clamp01(std::inner_product(signals.begin(), signals.end(), config.bait_weights.begin(), 0.0));
}

InfoSignals info_signal_vector(std::string_view text, const HeuristicConfig& config) {
  InfoSignals s;
  int words = 0;
  int content = 0;
  int vague = 0;
  for (const auto& t : tokenize(text)) {
    if (has_digit(t.raw)) s.numeric_content = 1.0;
    if (t.word.empty()) continue;
    ++words;
    if (!config.function_words.contains(t.word)) ++content;
    if (config.vague_word_lexicon.contains(t.word)) ++vague;
  }
  if (words > 0) s.lexical_density = static_cast<double>(content) / words;
  s.length = clamp01(words / config.length_cap);
  s.vagueness_penalty = clamp01(vague / 2.0);
  return s;
}

double informativeness(std::string_view text, const HeuristicConfig& config) {
  const auto s = info_signal_vector(text, config);
  const auto& w = config.info_weights;
  return clamp01(w[0] * s.lexical_density + w[1] * s.numeric_content + w[2] * s.length -
                 w[3] * s.vagueness_penalty);
}

HeuristicScores score_headline(std::string_view text, const HeuristicConfig& config) {
  HeuristicScores scores;
  scores.bait_signals = bait_signal_vector(text, config);
  scores.info_signals = info_signal_vector(text, config);
  const auto b = scores.bait_signals.as_array();
  scores.baitness = clamp01(std::inner_product(b.begin(), b.end(), config.bait_weights.begin(), 0.0));
  const auto& i = scores.info_signals;
  const auto& w = config.info_weights;
  scores.informativeness = clamp01(w[0] * i.lexical_density + w[1] * i.numeric_content +
                                   w[2] * i.length - w[3] * i.vagueness_penalty);
  return scores;
}

std::string scores_to_json(const HeuristicScores& scores) {
  nlohmann::ordered_json bait;
  const auto b = scores.bait_signals.as_array();
  for (std::size_t k = 0; k < b.size(); ++k) bait[std::string(kBaitSignalNames[k])] = b[k];
  nlohmann::ordered_json info;
  const auto i = scores.info_signals.as_array();
  for (std::size_t k = 0; k < i.size(); ++k) info[std::string(kInfoSignalNames[k])] = i[k];
  nlohmann::ordered_json j;
  j["baitness"] = scores.baitness;
  j["informativeness"] = scores.informativeness;
  j["bait_signals"] = bait;
  j["info_signals"] = info;
  return j.dump();
}

}  // namespace clickbait
