#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ultra/corpus/pipeline.hpp"
#include "ultra/corpus/types.hpp"
#include "ultra/error.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::corpus {

/// Seeded topic-model corpus. Each category owns a handful of core words
/// that dominate its texts plus a larger pool of rare words; every article
/// also carries one token nobody else uses. Under the synthetic embedder this
/// gives tight same-category clusters that are near-orthogonal to each other.
struct SyntheticCorpusOptions {
  std::size_t articles = 5000;
  std::size_t categories = 5;
  std::size_t core_words = 4;
  std::size_t rare_words = 300;
  double p_core = 0.85;
  std::size_t headline_words = 12;
  std::size_t body_words = 80;
  /// Every n-th article gets a body long enough to need several model windows.
  std::size_t long_every = 50;
  std::size_t long_body_words = 700;
  std::uint64_t seed = 42;
};

class SyntheticCorpus {
 public:
  explicit SyntheticCorpus(SyntheticCorpusOptions opts) : opts_(opts) {
    require(opts_.categories >= 1 && opts_.core_words >= 1 && opts_.rare_words >= 1, ErrorKind::invalid_argument,
            "synthetic corpus: categories, core words and rare words must be >= 1");
    require(opts_.p_core >= 0.0 && opts_.p_core <= 1.0, ErrorKind::invalid_argument,
            "synthetic corpus: p_core must be in [0, 1]");
    require(opts_.headline_words >= 1 && opts_.body_words >= 1, ErrorKind::invalid_argument,
            "synthetic corpus: texts need at least one word");
    std::uint64_t next = 0;
    for (std::size_t c = 0; c < opts_.categories; ++c) {
      std::vector<std::string> core, rare;
      for (std::size_t i = 0; i < opts_.core_words; ++i) core.push_back(word(U'ژ', next++));
      for (std::size_t i = 0; i < opts_.rare_words; ++i) rare.push_back(word(U'ژ', next++));
      core_.push_back(std::move(core));
      rare_.push_back(std::move(rare));
    }
  }

  const SyntheticCorpusOptions& options() const noexcept { return opts_; }

  static std::string category_name(std::size_t c) {
    static const char* const names[] = {"کھیل", "سیاست", "کاروبار", "تفریح", "سائنس"};
    if (c < std::size(names)) return names[c];
    return "زمرہ " + std::to_string(c);
  }

  /// Raw rows as a news table would hold them; row i belongs to category
  /// i % categories.
  std::vector<RawRecord> records() const {
    std::vector<RawRecord> out;
    out.reserve(opts_.articles);
    std::mt19937_64 rng(opts_.seed);
    for (std::size_t i = 0; i < opts_.articles; ++i) {
      const std::size_t c = category_of(i);
      const bool long_body = opts_.long_every > 0 && i % opts_.long_every == opts_.long_every - 1;
      RawRecord r;
      r.category = category_name(c);
      r.source = "synthetic";
      r.headline = text(c, opts_.headline_words, rng);
      std::string body = text(c, long_body ? opts_.long_body_words : opts_.body_words, rng);
      body += ' ';
      body += word(U'ڈ', i);
      r.news_text = std::move(body);
      out.push_back(std::move(r));
    }
    return out;
  }

  /// The same rows as Articles with ids 0..n-1. They equal what the
  /// preprocessing pipeline makes of records(): the vocabulary has no
  /// characters cleaning would touch and no stop words.
  std::vector<Article> articles() const {
    std::vector<Article> out;
    const auto rows = records();
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Article a;
      a.id = i;
      a.category = *rows[i].category;
      a.headline = *rows[i].headline;
      a.content = compose_content(a.headline, *rows[i].news_text);
      a.char_len_headline = utf8::length(a.headline);
      a.char_len_content = utf8::length(a.content);
      out.push_back(std::move(a));
    }
    return out;
  }

  std::size_t category_of(std::size_t article_id) const noexcept { return article_id % opts_.categories; }

  /// Fresh text drawn from category c, `words` long.
  std::string text(std::size_t c, std::size_t words, std::mt19937_64& rng) const {
    require(c < opts_.categories, ErrorKind::invalid_argument, "synthetic corpus: category out of range");
    std::string out;
    for (std::size_t w = 0; w < words; ++w) {
      if (w) out += ' ';
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < opts_.p_core) {
        out += core_[c][rng() % core_[c].size()];
      } else {
        out += rare_[c][rng() % rare_[c].size()];
      }
    }
    return out;
  }

  std::string short_query(std::size_t c, std::mt19937_64& rng) const { return text(c, opts_.headline_words, rng); }
  std::string long_query(std::size_t c, std::mt19937_64& rng) const { return text(c, opts_.body_words, rng); }

 private:
  // Prefix letter plus the index written in base 20 over Urdu letters, at
  // least three digits, so words are unique and never collide with the
  // stop list.
  static std::string word(char32_t prefix, std::uint64_t index) {
    static constexpr char32_t letters[] = {U'ب', U'پ', U'ت', U'ٹ', U'ج', U'چ', U'د', U'ر', U'س', U'ش',
                                           U'ف', U'ق', U'ک', U'گ', U'ل', U'م', U'ن', U'و', U'ہ', U'ی'};
    std::u32string s(1, prefix);
    std::u32string digits;
    do {
      digits.push_back(letters[index % 20]);
      index /= 20;
    } while (index > 0 || digits.size() < 3);
    s.append(digits.rbegin(), digits.rend());
    return utf8::encode(s);
  }

  SyntheticCorpusOptions opts_;
  std::vector<std::vector<std::string>> core_;
  std::vector<std::vector<std::string>> rare_;
};

}  // namespace ultra::corpus
