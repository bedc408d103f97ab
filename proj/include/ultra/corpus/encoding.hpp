#pragma once

#include <string>
#include <string_view>

#include "ultra/text/utf8.hpp"

namespace ultra::corpus {

/// Arabic, Arabic Supplement and both Arabic Presentation Forms blocks.
inline bool is_urdu_codepoint(char32_t cp) noexcept {
  return (cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F) ||
         (cp >= 0xFB50 && cp <= 0xFDFF) || (cp >= 0xFE70 && cp <= 0xFEFF);
}

inline double urdu_fraction(std::u32string_view cps) noexcept {
  if (cps.empty()) return 0.0;
  std::size_t hits = 0;
  for (char32_t cp : cps) hits += is_urdu_codepoint(cp) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(cps.size());
}

/// Undo UTF-8 text that was decoded as ISO-8859-1. The Latin-1 byte image
/// of the input is re-decoded as UTF-8 and kept only if that succeeds and
/// raises the share of Urdu-script code points; otherwise the input is
/// returned untouched.
inline std::string repair_encoding(std::string_view raw) {
  const std::u32string cps = utf8::decode_lossy(raw);
  if (cps.empty()) return std::string(raw);

  std::string image;
  image.reserve(cps.size());
  for (char32_t cp : cps) {
    if (cp > 0xFF) return std::string(raw);  // no Latin-1 byte image exists
    image.push_back(static_cast<char>(cp));
  }
  auto repaired = utf8::decode(image);
  if (!repaired) return std::string(raw);
  if (urdu_fraction(*repaired) > urdu_fraction(cps)) return utf8::encode(*repaired);
  return std::string(raw);
}

}  // namespace ultra::corpus
