#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultra/corpus/types.hpp"
#include "ultra/error.hpp"
#include "ultra/text/utf8.hpp"

namespace ultra::corpus {

enum class InputFormat { automatic, csv, jsonl };
enum class MalformedPolicy { skip, fail };

/// Maps each logical field to the input column that carries it. Column
/// names are compared case-insensitively with spaces, '_' and '-' ignored,
/// so "News Text", "news_text" and "NewsText" all match.
struct ColumnMap {
  std::string headline = "headline";
  std::string news_text = "news_text";
  std::string category = "category";
  std::string source = "source";
};

struct InputIssue {
  std::size_t line = 0;
  std::string message;
};

struct ReadResult {
  std::vector<RawRecord> records;
  std::vector<InputIssue> issues;
};

namespace detail {

inline std::string column_key(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == ' ' || c == '_' || c == '-') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return key;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::not_found, "cannot open input: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string data = ss.str();
  if (data.rfind("\xEF\xBB\xBF", 0) == 0) data.erase(0, 3);
  return data;
}

struct CsvRow {
  std::vector<std::optional<std::string>> fields;
  std::size_t line = 0;
  bool malformed = false;
};

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// newlines. Unquoted empty fields come back as nullopt.
inline std::vector<CsvRow> parse_csv(std::string_view data) {
  std::vector<CsvRow> rows;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < data.size()) {
    CsvRow row;
    row.line = line;
    bool end_of_row = false;
    while (!end_of_row) {
      std::string field;
      bool quoted = false;
      if (i < data.size() && data[i] == '"') {
        quoted = true;
        ++i;
        bool closed = false;
        while (i < data.size()) {
          if (data[i] == '"') {
            if (i + 1 < data.size() && data[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            closed = true;
            break;
          }
          if (data[i] == '\n') ++line;
          field.push_back(data[i++]);
        }
        if (!closed) row.malformed = true;
        if (i < data.size() && data[i] != ',' && data[i] != '\n' && data[i] != '\r') {
          row.malformed = true;
          while (i < data.size() && data[i] != ',' && data[i] != '\n') field.push_back(data[i++]);
        }
      } else {
        while (i < data.size() && data[i] != ',' && data[i] != '\n') {
          if (data[i] == '"') row.malformed = true;
          field.push_back(data[i++]);
        }
        if (!field.empty() && field.back() == '\r') field.pop_back();
      }
      if (quoted || !field.empty()) {
        row.fields.emplace_back(std::move(field));
      } else {
        row.fields.emplace_back(std::nullopt);
      }
      if (i < data.size() && data[i] == '\r') ++i;
      if (i >= data.size()) {
        end_of_row = true;
      } else if (data[i] == ',') {
        ++i;
      } else if (data[i] == '\n') {
        ++i;
        ++line;
        end_of_row = true;
      }
    }
    const bool blank = row.fields.size() == 1 && !row.fields[0];
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

inline void report_issue(ReadResult& out, MalformedPolicy policy, std::size_t line,
                         const std::string& message, const std::filesystem::path& path) {
  if (policy == MalformedPolicy::fail) {
    fail(ErrorKind::format, path.string() + ":" + std::to_string(line) + ": " + message);
  }
  out.issues.push_back({line, message});
}

}  // namespace detail

inline ReadResult read_csv_records(const std::filesystem::path& path, const ColumnMap& columns = {},
                                   MalformedPolicy policy = MalformedPolicy::skip) {
  const auto rows = detail::parse_csv(detail::read_file(path));
  if (rows.empty()) fail(ErrorKind::format, "missing CSV header: " + path.string());
  const auto& header = rows.front();

  std::map<std::string, std::size_t> by_key;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.fields.size(); ++c) {
    std::string name = header.fields[c].value_or("");
    by_key[detail::column_key(name)] = c;
    names.push_back(std::move(name));
  }
  auto locate = [&](const std::string& wanted) -> std::optional<std::size_t> {
    auto it = by_key.find(detail::column_key(wanted));
    if (it == by_key.end()) return std::nullopt;
    return it->second;
  };
  const auto h = locate(columns.headline);
  const auto t = locate(columns.news_text);
  const auto cat = locate(columns.category);
  const auto src = locate(columns.source);
  if (!h || !t || !cat) {
    fail(ErrorKind::format, "CSV header lacks headline/news_text/category columns: " + path.string());
  }

  ReadResult out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.malformed || row.fields.size() != header.fields.size()) {
      detail::report_issue(out, policy, row.line,
                           row.malformed ? "unbalanced quoting"
                                         : "expected " + std::to_string(header.fields.size()) +
                                               " fields, found " + std::to_string(row.fields.size()),
                           path);
      continue;
    }
    RawRecord rec;
    rec.headline = row.fields[*h];
    rec.news_text = row.fields[*t];
    rec.category = row.fields[*cat];
    if (src) rec.source = row.fields[*src];
    for (std::size_t c = 0; c < row.fields.size(); ++c) {
      if (c == *h || c == *t || c == *cat || (src && c == *src)) continue;
      if (row.fields[c]) rec.extra_metadata[names[c]] = *row.fields[c];
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

inline ReadResult read_jsonl_records(const std::filesystem::path& path, const ColumnMap& columns = {},
                                     MalformedPolicy policy = MalformedPolicy::skip) {
  std::istringstream in(detail::read_file(path));
  ReadResult out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      detail::report_issue(out, policy, line_no, std::string("invalid JSON: ") + e.what(), path);
      continue;
    }
    if (!obj.is_object()) {
      detail::report_issue(out, policy, line_no, "expected a JSON object", path);
      continue;
    }
    std::map<std::string, std::string> keys;  // normalized key -> original key
    for (auto it = obj.begin(); it != obj.end(); ++it) keys[detail::column_key(it.key())] = it.key();
    auto field = [&](const std::string& wanted) -> std::optional<std::string> {
      auto k = keys.find(detail::column_key(wanted));
      if (k == keys.end()) return std::nullopt;
      const auto& v = obj.at(k->second);
      if (v.is_null()) return std::nullopt;
      if (v.is_string()) return v.get<std::string>();
      return v.dump();
    };
    RawRecord rec;
    rec.headline = field(columns.headline);
    rec.news_text = field(columns.news_text);
    rec.category = field(columns.category);
    rec.source = field(columns.source);
    const std::set<std::string> used{detail::column_key(columns.headline),
                                     detail::column_key(columns.news_text),
                                     detail::column_key(columns.category),
                                     detail::column_key(columns.source)};
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (used.count(detail::column_key(it.key()))) continue;
      rec.extra_metadata[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

inline ReadResult read_records(const std::filesystem::path& path, InputFormat format = InputFormat::automatic,
                               const ColumnMap& columns = {}, MalformedPolicy policy = MalformedPolicy::skip) {
  if (format == InputFormat::automatic) {
    const auto ext = path.extension().string();
    format = (ext == ".csv" || ext == ".CSV") ? InputFormat::csv : InputFormat::jsonl;
  }
  return format == InputFormat::csv ? read_csv_records(path, columns, policy)
                                    : read_jsonl_records(path, columns, policy);
}

inline nlohmann::json article_to_json(const Article& a) {
  return {{"id", a.id}, {"headline", a.headline}, {"content", a.content}, {"category", a.category}};
}

inline Article article_from_json(const nlohmann::json& j) {
  Article a;
  a.id = j.at("id").get<ArticleId>();
  a.headline = j.at("headline").get<std::string>();
  a.content = j.at("content").get<std::string>();
  a.category = j.at("category").get<std::string>();
  a.char_len_headline = utf8::length(a.headline);
  a.char_len_content = utf8::length(a.content);
  return a;
}

inline void write_articles(const std::filesystem::path& path, const std::vector<Article>& articles) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write articles: " + path.string());
  for (const auto& a : articles) out << article_to_json(a).dump() << '\n';
  if (!out) fail(ErrorKind::io, "write failed: " + path.string());
}

inline std::vector<Article> read_articles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::not_found, "cannot open articles: " + path.string());
  std::vector<Article> articles;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      articles.push_back(article_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::format, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return articles;
}

}  // namespace ultra::corpus
