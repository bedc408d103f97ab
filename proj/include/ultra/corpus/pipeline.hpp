#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultra/corpus/clean.hpp"
#include "ultra/corpus/encoding.hpp"
#include "ultra/corpus/stopwords.hpp"
#include "ultra/corpus/types.hpp"
#include "ultra/error.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::corpus {

inline constexpr std::string_view kDefaultDelimiter = " ۔ ";

/// headline + delimiter + body, or the headline alone when the body is empty.
inline std::string compose_content(std::string_view headline, std::string_view body,
                                   std::string_view delimiter = kDefaultDelimiter) {
  require(!headline.empty(), ErrorKind::invalid_argument, "compose_content: empty headline");
  std::string out(headline);
  if (!body.empty()) {
    out += delimiter;
    out += body;
  }
  return out;
}

/// A record after cleaning, before validity filtering. Empty optionals mark
/// fields that were null or became empty.
struct ArticleCandidate {
  ArticleId id = 0;
  std::optional<std::string> headline;
  std::optional<std::string> content;
  std::optional<std::string> category;
  std::optional<std::string> source;
};

struct PreprocessReport {
  std::size_t records_in = 0;
  std::size_t records_out = 0;
  std::size_t duplicates_removed = 0;
  std::size_t nulls_removed = 0;
  std::size_t short_removed = 0;
  std::size_t words_total = 0;
  std::size_t stopwords_removed = 0;
  double removal_rate = 0.0;
  double avg_article_len = 0.0;
  double avg_headline_len = 0.0;
  std::size_t categories = 0;
  std::size_t sources = 0;
};

inline void to_json(nlohmann::json& j, const PreprocessReport& r) {
  j = nlohmann::json{{"records_in", r.records_in},
                     {"records_out", r.records_out},
                     {"duplicates_removed", r.duplicates_removed},
                     {"nulls_removed", r.nulls_removed},
                     {"short_removed", r.short_removed},
                     {"words_total", r.words_total},
                     {"stopwords_removed", r.stopwords_removed},
                     {"removal_rate", r.removal_rate},
                     {"avg_article_len", r.avg_article_len},
                     {"avg_headline_len", r.avg_headline_len},
                     {"categories", r.categories},
                     {"sources", r.sources}};
}

struct FilterResult {
  std::vector<Article> articles;
  PreprocessReport report;  // only the record counters and averages are set
};

/// Drop null/empty rows, then exact duplicate contents (first kept), then
/// contents shorter than 15 scalar values. Survivors keep their ids.
inline FilterResult filter_records(const std::vector<ArticleCandidate>& candidates) {
  FilterResult result;
  auto& rep = result.report;
  rep.records_in = candidates.size();
  std::unordered_set<std::string> seen;
  std::set<std::string> categories;
  std::set<std::string> sources;
  double headline_chars = 0.0;
  double content_chars = 0.0;

  for (const auto& c : candidates) {
    const bool null_row = !c.content || c.content->empty() || !c.category ||
                          c.category->empty() || !c.headline || c.headline->empty();
    if (null_row) {
      ++rep.nulls_removed;
      continue;
    }
    if (!seen.insert(*c.content).second) {
      ++rep.duplicates_removed;
      continue;
    }
    const std::size_t content_len = utf8::length(*c.content);
    if (content_len < kMinContentChars) {
      ++rep.short_removed;
      continue;
    }
    Article a;
    a.id = c.id;
    a.headline = *c.headline;
    a.content = *c.content;
    a.category = *c.category;
    a.char_len_headline = utf8::length(a.headline);
    a.char_len_content = content_len;
    headline_chars += static_cast<double>(a.char_len_headline);
    content_chars += static_cast<double>(a.char_len_content);
    categories.insert(a.category);
    if (c.source && !c.source->empty()) sources.insert(*c.source);
    result.articles.push_back(std::move(a));
  }

  rep.records_out = result.articles.size();
  rep.categories = categories.size();
  rep.sources = sources.size();
  if (rep.records_out > 0) {
    rep.avg_article_len = content_chars / static_cast<double>(rep.records_out);
    rep.avg_headline_len = headline_chars / static_cast<double>(rep.records_out);
  }
  return result;
}

struct PreprocessOptions {
  std::string delimiter{kDefaultDelimiter};
  bool repair_encoding = true;
  bool stopwords_on_headline = true;
};

struct PreprocessResult {
  std::vector<Article> articles;
  PreprocessReport report;
};

namespace detail {

inline std::optional<std::string> non_empty(std::optional<std::string> s) {
  if (s && s->empty()) return std::nullopt;
  return s;
}

}  // namespace detail

/// Runs the whole pipeline: encoding repair, metadata pruning and composite
/// content, cleaning, stop-word removal, invalid-record filtering. Article ids
/// are the zero-based input positions.
inline PreprocessResult preprocess(const std::vector<RawRecord>& records, const StopList& stops,
                                   const PreprocessOptions& options = {}) {
  auto repair = [&](const std::optional<std::string>& field) -> std::optional<std::string> {
    if (!field) return std::nullopt;
    std::string text = utf8::normalize_input(*field);
    return options.repair_encoding ? repair_encoding(text) : text;
  };

  std::size_t words = 0;
  std::size_t stopped = 0;
  std::vector<ArticleCandidate> candidates;
  candidates.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RawRecord& r = records[i];
    ArticleCandidate c;
    c.id = i;
    auto headline = repair(r.headline);
    auto body = repair(r.news_text);
    auto category = repair(r.category);
    auto source = repair(r.source);

    if (category) category = utf8::trim(*category);
    c.category = detail::non_empty(std::move(category));
    if (source) source = utf8::trim(*source);
    c.source = detail::non_empty(std::move(source));

    std::string h = headline ? clean_text(*headline) : std::string();
    std::string b = body ? clean_text(*body) : std::string();
    if (options.stopwords_on_headline) {
      auto sw = remove_stopwords(h, stops);
      words += sw.tokens_in;
      stopped += sw.removed;
      h = std::move(sw.text);
    } else {
      words += utf8::split_whitespace(h).size();
    }
    auto sw = remove_stopwords(b, stops);
    words += sw.tokens_in;
    stopped += sw.removed;
    b = std::move(sw.text);

    if (!h.empty()) {
      c.headline = h;
      c.content = compose_content(h, b, options.delimiter);
    }
    candidates.push_back(std::move(c));
  }

  auto filtered = filter_records(candidates);
  PreprocessResult out{std::move(filtered.articles), filtered.report};
  out.report.words_total = words;
  out.report.stopwords_removed = stopped;
  out.report.removal_rate = words == 0 ? 0.0 : static_cast<double>(stopped) / static_cast<double>(words);
  return out;
}

}  // namespace ultra::corpus
