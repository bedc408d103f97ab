#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ultra::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

namespace detail {

// Decodes one scalar starting at bytes[pos]. Returns the scalar and advances
// pos, or returns nullopt (pos advanced by one) for an ill-formed sequence.
inline std::optional<char32_t> next(std::string_view bytes, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(bytes[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    ++pos;
    return std::nullopt;
  }
  if (pos + len > bytes.size()) {
    ++pos;
    return std::nullopt;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(bytes[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return std::nullopt;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return std::nullopt;
  }
  pos += len;
  return cp;
}

}  // namespace detail

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t cp : cps) append(out, cp);
  return out;
}

/// Strict decode; nullopt on any ill-formed sequence.
inline std::optional<std::u32string> decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto cp = detail::next(bytes, pos);
    if (!cp) return std::nullopt;
    out.push_back(*cp);
  }
  return out;
}

/// Decode substituting U+FFFD for each ill-formed byte.
inline std::u32string decode_lossy(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto cp = detail::next(bytes, pos);
    out.push_back(cp ? *cp : kReplacement);
  }
  return out;
}

inline bool is_valid(std::string_view bytes) { return decode(bytes).has_value(); }

/// Each byte read as one ISO-8859-1 code point.
inline std::u32string from_latin1(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  for (char c : bytes) out.push_back(static_cast<unsigned char>(c));
  return out;
}

/// Valid UTF-8 passes through; anything else is reinterpreted as ISO-8859-1.
inline std::string normalize_input(std::string_view bytes) {
  if (is_valid(bytes)) return std::string(bytes);
  return encode(from_latin1(bytes));
}

/// Number of Unicode scalar values (ill-formed bytes count one each).
inline std::size_t length(std::string_view bytes) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    detail::next(bytes, pos);
    ++n;
  }
  return n;
}

inline bool is_space(char32_t cp) noexcept {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline std::string trim(std::string_view text) {
  const auto cps = decode_lossy(text);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && is_space(cps[b])) ++b;
  while (e > b && is_space(cps[e - 1])) --e;
  return encode(std::u32string_view(cps).substr(b, e - b));
}

/// Split on runs of Unicode whitespace.
inline std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    auto cp = detail::next(text, pos);
    if (cp && is_space(*cp)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.append(text.substr(start, pos - start));
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

/// First n scalars of text.
inline std::string prefix(std::string_view text, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n && pos < text.size(); ++i) detail::next(text, pos);
  return std::string(text.substr(0, pos));
}

inline std::string substr(std::string_view text, std::size_t start, std::size_t count) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < start && pos < text.size(); ++i) detail::next(text, pos);
  return prefix(text.substr(pos), count);
}

}  // namespace ultra::utf8
