#include "blift/text.h"

#include <gtest/gtest.h>

namespace blift {
namespace {

using Tokens = std::vector<std::string>;

TEST(TokenizeTest, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(Tokenize("Wow. Love it!"), (Tokens{"wow", "love", "it"}));
  EXPECT_EQ(Tokenize("  "), Tokens{});
  EXPECT_EQ(Tokenize("re-watch x2"), (Tokens{"re", "watch", "x2"}));
}

TEST(TokenizeTest, KeepsNonAsciiLetters) {
  EXPECT_EQ(Tokenize("Ça VA très bien"),
            (Tokens{"ça", "va", "très", "bien"}));
  EXPECT_EQ(Tokenize("ΑΘΗΝΑ Москва"), (Tokens{"αθηνα", "москва"}));
}

TEST(TokenizeTest, EmojiAndSymbolsSplit) {
  EXPECT_EQ(Tokenize("great\xF0\x9F\x94\xA5job"), (Tokens{"great", "job"}));
  EXPECT_EQ(Tokenize("a\xE2\x80\x94" "b"), (Tokens{"a", "b"}));  // em dash
}

TEST(CountWordsTest, SplitsOnUnicodeWhitespace) {
  EXPECT_EQ(CountWords("Wow. Love it!"), 3u);
  EXPECT_EQ(CountWords(""), 0u);
  EXPECT_EQ(CountWords("  two\twords\n"), 2u);
  EXPECT_EQ(CountWords("no\xC2\xA0" "break"), 2u);       // U+00A0
  EXPECT_EQ(CountWords("ideo\xE3\x80\x80" "space"), 2u);  // U+3000
}

TEST(DecodeUtf8Test, MalformedBytesBecomeReplacement) {
  const auto cps = DecodeUtf8("a\xFF" "b\xE2\x82");
  ASSERT_EQ(cps.size(), 5u);
  EXPECT_EQ(cps[0], U'a');
  EXPECT_EQ(cps[1], 0xFFFDu);
  EXPECT_EQ(cps[2], U'b');
  EXPECT_EQ(cps[3], 0xFFFDu);
  EXPECT_EQ(cps[4], 0xFFFDu);
}

TEST(DecodeUtf8Test, RoundTripsThroughAppend) {
  const std::string text = "h\xC3\xA9llo \xF0\x9F\x98\x80 \xE4\xB8\xAD";
  std::string back;
  for (char32_t cp : DecodeUtf8(text)) AppendUtf8(cp, &back);
  EXPECT_EQ(back, text);
}

TEST(ToLowerTest, CoversCommonScripts) {
  EXPECT_EQ(ToLower(U'A'), U'a');
  EXPECT_EQ(ToLower(U'É'), U'é');
  EXPECT_EQ(ToLower(U'Α'), U'α');
  EXPECT_EQ(ToLower(U'Ж'), U'ж');
  EXPECT_EQ(ToLower(U'7'), U'7');
}

}  // namespace
}  // namespace blift
