#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "ultra/error.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::corpus {

class StopList {
 public:
  StopList() = default;

  StopList(std::initializer_list<std::string_view> words) {
    for (auto w : words) add(w);
  }

  /// One token per line; blank lines and lines starting with '#' are ignored.
  static StopList load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::not_found, "cannot open stop-word list: " + path.string());
    StopList list;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
      const std::string entry = utf8::trim(line);
      if (entry.empty() || entry.front() == '#') continue;
      try {
        list.add(entry);
      } catch (const Error& e) {
        fail(ErrorKind::format, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    return list;
  }

  void add(std::string_view word) {
    require(!word.empty(), ErrorKind::invalid_argument, "empty stop word");
    require(utf8::split_whitespace(word).size() == 1 && utf8::trim(word) == word,
            ErrorKind::invalid_argument, "stop word contains whitespace: '" + std::string(word) + "'");
    entries_.emplace(word);
  }

  bool contains(std::string_view token) const { return entries_.find(token) != entries_.end(); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::set<std::string, std::less<>>& entries() const noexcept { return entries_; }

 private:
  std::set<std::string, std::less<>> entries_;
};

struct StopwordResult {
  std::string text;
  std::size_t removed = 0;
  std::size_t tokens_in = 0;
};

/// Drops whitespace tokens found in `stops`, keeping survivors in order.
inline StopwordResult remove_stopwords(std::string_view text, const StopList& stops) {
  StopwordResult result;
  for (auto& token : utf8::split_whitespace(text)) {
    ++result.tokens_in;
    if (stops.contains(token)) {
      ++result.removed;
      continue;
    }
    if (!result.text.empty()) result.text.push_back(' ');
    result.text += token;
  }
  return result;
}

}  // namespace ultra::corpus
