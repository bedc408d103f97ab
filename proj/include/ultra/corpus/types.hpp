#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace ultra::corpus {

using ArticleId = std::uint64_t;

/// One row of the raw news table. Absent cells are nullopt.
struct RawRecord {
  std::optional<std::string> headline;
  std::optional<std::string> news_text;
  std::optional<std::string> category;
  std::optional<std::string> source;
  std::map<std::string, std::string> extra_metadata;
};

struct Article {
  ArticleId id = 0;
  std::string headline;
  std::string content;  // headline, delimiter, body
  std::string category;
  std::size_t char_len_headline = 0;
  std::size_t char_len_content = 0;
};

inline constexpr std::size_t kMinContentChars = 15;

}  // namespace ultra::corpus
