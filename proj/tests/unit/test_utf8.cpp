#include <gtest/gtest.h>

#include "ultra/text/utf8.hpp"

namespace utf8 = ultra::utf8;

TEST(Utf8, LengthCountsScalarsNotBytes) {
  EXPECT_EQ(utf8::length(""), 0u);
  EXPECT_EQ(utf8::length("abc"), 3u);
  EXPECT_EQ(utf8::length("پاکستان"), 7u);
  EXPECT_EQ(std::string("پاکستان").size(), 14u);
  EXPECT_EQ(utf8::length("\U0001F600"), 1u);
}

TEST(Utf8, EncodeDecodeRoundTrip) {
  const std::u32string cps = {U'a', 0x0627, 0x20AC, 0x1F600, 0x7F, 0x80, 0x7FF, 0x800, 0xFFFF, 0x10000};
  const auto bytes = utf8::encode(cps);
  const auto back = utf8::decode(bytes);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, cps);
}

TEST(Utf8, StrictDecodeRejectsMalformed) {
  EXPECT_FALSE(utf8::decode("\xC3").has_value());          // truncated
  EXPECT_FALSE(utf8::decode("\xC0\xAF").has_value());      // overlong
  EXPECT_FALSE(utf8::decode("\xED\xA0\x80").has_value());  // surrogate
  EXPECT_FALSE(utf8::decode("\xFF").has_value());
  EXPECT_TRUE(utf8::is_valid("سلام"));
}

TEST(Utf8, NormalizeInputTreatsInvalidBytesAsLatin1) {
  EXPECT_EQ(utf8::normalize_input("caf\xE9"), "café");
  EXPECT_EQ(utf8::normalize_input("سلام"), "سلام");
}

TEST(Utf8, TrimAndSplitUseUnicodeWhitespace) {
  EXPECT_EQ(utf8::trim("  x y \t\n"), "x y");
  EXPECT_EQ(utf8::trim("   "), "");
  const auto parts = utf8::split_whitespace("  ایک　دو  تین ");
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], "ایک");
  EXPECT_EQ(parts[1], "دو");
  EXPECT_EQ(parts[2], "تین");
}

TEST(Utf8, PrefixAndSubstrCutOnScalars) {
  EXPECT_EQ(utf8::prefix("پاکستان", 3), "پاک");
  EXPECT_EQ(utf8::substr("پاکستان", 3, 4), "ستان");
  EXPECT_EQ(utf8::substr("abc", 2, 10), "c");
  EXPECT_EQ(utf8::prefix("abc", 0), "");
}
