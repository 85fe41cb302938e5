#ifndef HASHSEG_UTF8_HPP
#define HASHSEG_UTF8_HPP

#include <string>
#include <string_view>

namespace hashseg::utf8 {

// Decodes UTF-8 into Unicode scalar values. Throws std::invalid_argument on
// malformed input (truncated sequences, overlong encodings, surrogates).
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view chars);
std::string encode(char32_t c);

// ASCII-only case folding; non-ASCII scalars pass through unchanged.
std::string ascii_lower(std::string_view text);

inline bool is_ascii_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v';
}

}  // namespace hashseg::utf8

#endif
