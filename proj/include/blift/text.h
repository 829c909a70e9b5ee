#ifndef BLIFT_TEXT_H_
#define BLIFT_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace blift {

// Decodes UTF-8 into code points. Malformed sequences decode to U+FFFD one
// byte at a time so that every input is accepted.
std::vector<char32_t> DecodeUtf8(std::string_view text);
void AppendUtf8(char32_t cp, std::string* out);

bool IsUnicodeWhitespace(char32_t cp);

// ASCII letters and digits, plus non-ASCII code points outside the
// punctuation, symbol, emoji and whitespace blocks.
bool IsAlphanumeric(char32_t cp);

// Simple case folding for ASCII, Latin-1, basic Greek and Cyrillic.
char32_t ToLower(char32_t cp);

// Number of nonempty tokens after splitting on Unicode whitespace.
// Punctuation stays attached, so "Wow." counts as one word.
std::size_t CountWords(std::string_view text);

// Lowercased maximal runs of alphanumeric code points.
//   Tokenize("Wow. Love it!") == {"wow", "love", "it"}
std::vector<std::string> Tokenize(std::string_view text);

}  // namespace blift

#endif  // BLIFT_TEXT_H_
