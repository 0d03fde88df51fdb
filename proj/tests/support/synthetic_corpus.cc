// Copyright 2026 The vocab-lifecycle Authors
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

#include "synthetic_corpus.h"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "vocab_lifecycle/random.h"
#include "vocab_lifecycle/unicode.h"

namespace vocab_lifecycle::testing {
namespace {

std::vector<char32_t> Range(char32_t first, int count, int step = 1) {
  std::vector<char32_t> out;
  for (int i = 0; i < count; ++i) out.push_back(first + static_cast<char32_t>(i * step));
  return out;
}

std::string Syllable(const SyntheticLanguage& lang, std::mt19937_64& rng) {
  std::string s;
  unicode::AppendUtf8(lang.consonants[UniformBelow(rng, lang.consonants.size())], &s);
  unicode::AppendUtf8(lang.vowels[UniformBelow(rng, lang.vowels.size())], &s);
  if (UniformBelow(rng, 4) == 0) {
    unicode::AppendUtf8(lang.consonants[UniformBelow(rng, lang.consonants.size())], &s);
  }
  return s;
}

}  // namespace

std::vector<SyntheticLanguage> BaseLanguages() {
  return {
      {"la", "Latin",
       {U'b', U'c', U'd', U'f', U'g', U'h', U'j', U'k', U'l', U'm', U'n', U'p', U'r', U's',
        U't', U'v', U'z'},
       {U'a', U'e', U'i', U'o', U'u'}},
      {"el", "Greek",
       {0x03B2, 0x03B3, 0x03B4, 0x03B6, 0x03B8, 0x03BA, 0x03BB, 0x03BC, 0x03BD, 0x03BE,
        0x03C0, 0x03C1, 0x03C3, 0x03C4, 0x03C6, 0x03C7, 0x03C8},
       {0x03B1, 0x03B5, 0x03B7, 0x03B9, 0x03BF, 0x03C5, 0x03C9}},
      {"ru", "Cyrillic",
       {0x0431, 0x0432, 0x0433, 0x0434, 0x0436, 0x0437, 0x043A, 0x043B, 0x043C, 0x043D,
        0x043F, 0x0440, 0x0441, 0x0442, 0x0444, 0x0445, 0x0446},
       {0x0430, 0x0435, 0x0438, 0x043E, 0x0443, 0x044B}},
      {"hy", "Armenian", Range(0x0562, 17), {0x0561, 0x0565, 0x056B, 0x0578, 0x0585}},
      {"he", "Hebrew", Range(0x05D1, 17), {0x05D0, 0x05D4, 0x05D5, 0x05D9, 0x05E2}},
      {"ka", "Georgian", Range(0x10D1, 17), {0x10D0, 0x10D4, 0x10D8, 0x10DD, 0x10E3}},
  };
}

std::vector<SyntheticLanguage> HeldOutLanguages() {
  return {
      {"hi", "Devanagari", Range(0x0915, 17), {0x093E, 0x093F, 0x0940, 0x0941, 0x0947}},
      {"th", "Thai", Range(0x0E01, 17), {0x0E30, 0x0E32, 0x0E34, 0x0E35, 0x0E38}},
  };
}

std::vector<std::string> GenerateLines(const SyntheticLanguage& language,
                                       const CorpusShape& shape, uint64_t seed) {
  // FNV-1a of the language code keeps streams independent per language.
  uint64_t stream = 1469598103934665603ull;
  for (unsigned char c : language.code) stream = (stream ^ c) * 1099511628211ull;
  auto rng = MakeStream(seed, stream);
  // Distinct words of 1 to 4 syllables; shorter words are more likely.
  std::vector<std::string> lexicon;
  std::set<std::string> seen;
  while (lexicon.size() < shape.lexicon_size) {
    const uint64_t syllables = 1 + std::min<uint64_t>(UniformBelow(rng, 6), 3);
    std::string word;
    for (uint64_t i = 0; i < syllables; ++i) word += Syllable(language, rng);
    if (seen.insert(word).second) lexicon.push_back(std::move(word));
  }
  std::vector<double> cumulative;
  double total = 0;
  for (uint64_t r = 1; r <= lexicon.size(); ++r) {
    total += 1.0 / std::pow(static_cast<double>(r), shape.zipf_exponent);
    cumulative.push_back(total);
  }

  std::vector<std::string> lines;
  lines.reserve(shape.lines);
  const uint32_t span = shape.max_words - shape.min_words + 1;
  for (uint64_t l = 0; l < shape.lines; ++l) {
    const uint64_t words = shape.min_words + UniformBelow(rng, span);
    std::string line;
    for (uint64_t w = 0; w < words; ++w) {
      const double u = UniformUnit(rng) * total;
      const size_t index = std::min<size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin(),
          lexicon.size() - 1);
      if (w > 0) line += ' ';
      line += lexicon[index];
      // Occasional shared material: numbers and sentence punctuation.
      if (UniformBelow(rng, 40) == 0) line += " " + std::to_string(UniformBelow(rng, 2000));
    }
    line += '.';
    lines.push_back(std::move(line));
  }
  return lines;
}

std::filesystem::path WriteCorpus(const std::filesystem::path& dir,
                                  const SyntheticLanguage& language,
                                  const CorpusShape& shape, uint64_t seed) {
  const auto path = dir / (language.code + ".txt");
  std::ofstream out(path, std::ios::binary);
  for (const auto& line : GenerateLines(language, shape, seed)) out << line << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return path;
}

std::filesystem::path MakeTempDir(const std::string& prefix) {
  std::string pattern =
      (std::filesystem::temp_directory_path() / (prefix + "-XXXXXX")).string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  return pattern;
}

}  // namespace vocab_lifecycle::testing
