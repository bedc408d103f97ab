#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

#include "ultra/text/utf8.hpp"

namespace ultra::corpus {

enum class CharAction { keep, space, drop };

/// Character policy of the normalizer. `space` replaces the code point with
/// a word boundary; `drop` removes it without splitting the word.
inline CharAction classify(char32_t cp) noexcept {
  if (utf8::is_space(cp)) return CharAction::space;
  if (cp < 0x20 || (cp >= 0x7F && cp <= 0x9F)) return CharAction::space;  // controls
  if (cp < 0x7F) return CharAction::space;  // ASCII letters, digits, punctuation, symbols

  // Latin-1 punctuation/symbols, Latin letters, IPA, spacing modifiers.
  if (cp >= 0xA1 && cp <= 0x2FF) return CharAction::space;
  if (cp >= 0x1E00 && cp <= 0x1EFF) return CharAction::space;

  // Arabic-script punctuation: ، ؍ ؛ ؞ ؟ ٪ ٫ ٬ ٭ ۔ ۝ ۞ ۩ and number signs.
  switch (cp) {
    case 0x0609: case 0x060A: case 0x060C: case 0x060D: case 0x061B:
    case 0x061E: case 0x061F: case 0x066A: case 0x066B: case 0x066C:
    case 0x066D: case 0x06D4: case 0x06DD: case 0x06DE: case 0x06E9:
    case 0xFD3E: case 0xFD3F:
      return CharAction::space;
    default:
      break;
  }
  if (cp >= 0x0600 && cp <= 0x0605) return CharAction::drop;

  // Zero-width space splits; joiners are kept; direction marks are dropped.
  if (cp == 0x200B) return CharAction::space;
  if (cp == 0x200C || cp == 0x200D) return CharAction::keep;
  if ((cp >= 0x200E && cp <= 0x200F) || (cp >= 0x202A && cp <= 0x202E) ||
      (cp >= 0x2060 && cp <= 0x206F))
    return CharAction::drop;
  if (cp >= 0x2010 && cp <= 0x205E) return CharAction::space;  // general punctuation

  // Symbols, dingbats, arrows, emoji and pictographs.
  if (cp >= 0x20A0 && cp <= 0x2BFF) return CharAction::space;
  if (cp >= 0x2E00 && cp <= 0x2E7F) return CharAction::space;
  if (cp >= 0x3001 && cp <= 0x303F) return CharAction::space;
  if (cp >= 0xFE00 && cp <= 0xFE0F) return CharAction::drop;  // variation selectors
  if ((cp >= 0xFE10 && cp <= 0xFE1F) || (cp >= 0xFE30 && cp <= 0xFE6F))
    return CharAction::space;
  if (cp == 0xFEFF || cp == utf8::kReplacement) return CharAction::drop;
  if (cp >= 0xFF01 && cp <= 0xFF65) return CharAction::space;  // fullwidth ASCII
  if (cp >= 0x1F000 && cp <= 0x1FBFF) return CharAction::space;
  if (cp >= 0xE0000 && cp <= 0xE007F) return CharAction::drop;  // emoji tag sequences
  if (cp >= 0xE000 && cp <= 0xF8FF) return CharAction::drop;    // private use
  return CharAction::keep;
}

namespace detail {

inline bool iequals_prefix(std::string_view text, std::size_t pos, std::string_view word) {
  if (pos + word.size() > text.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != word[i]) return false;
  }
  return true;
}

// Replaces markup with spaces: whole <script>/<style> elements, comments,
// tags and character entities.
inline std::string strip_markup(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const char c = in[i];
    if (c == '<' && i + 1 < in.size()) {
      const char n = in[i + 1];
      const bool tag_start = std::isalpha(static_cast<unsigned char>(n)) || n == '/' ||
                             n == '!' || n == '?';
      if (tag_start) {
        std::string_view close;
        if (iequals_prefix(in, i, "<script")) close = "</script";
        if (iequals_prefix(in, i, "<style")) close = "</style";
        if (in.substr(i, 4) == "<!--") close = "-->";
        std::size_t end = std::string_view::npos;
        if (!close.empty()) {
          for (std::size_t j = i + 1; j + close.size() <= in.size(); ++j) {
            if (iequals_prefix(in, j, close)) {
              end = in.find('>', j + close.size() - 1);
              break;
            }
          }
        } else {
          end = in.find('>', i + 1);
        }
        if (end != std::string_view::npos) {
          out.push_back(' ');
          i = end + 1;
          continue;
        }
      }
    }
    if (c == '&') {
      std::size_t j = i + 1;
      if (j < in.size() && in[j] == '#') ++j;
      const std::size_t body = j;
      while (j < in.size() && j - body < 10 && std::isalnum(static_cast<unsigned char>(in[j]))) ++j;
      if (j > body && j < in.size() && in[j] == ';') {
        out.push_back(' ');
        i = j + 1;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

}  // namespace detail

/// Strip markup and every non-Urdu character class, then collapse
/// whitespace runs to one space and trim.
inline std::string clean_text(std::string_view raw) {
  const std::u32string cps = utf8::decode_lossy(detail::strip_markup(raw));
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char32_t cp : cps) {
    switch (classify(cp)) {
      case CharAction::drop:
        break;
      case CharAction::space:
        pending_space = true;
        break;
      case CharAction::keep:
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        utf8::append(out, cp);
        break;
    }
  }
  return out;
}

}  // namespace ultra::corpus
