#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace termwork::text {

/// Returns the byte offset of the first invalid UTF-8 sequence, or nullopt
/// when the whole input is well formed.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

/// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

char32_t fold_case(char32_t cp);
std::string fold_case(std::string_view s);

/// Strips combining diacritics from Latin letters (č -> c, ů -> u, ß kept).
char32_t strip_diacritic(char32_t cp);
std::string strip_diacritics(std::string_view s);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_digit(char32_t cp);
/// Anything that is neither space nor punctuation counts as a word character.
inline bool is_word_char(char32_t cp) { return !is_space(cp) && !is_punct(cp); }

/// Case-folds, trims, and collapses internal whitespace runs to one space.
std::string normalize_phrase(std::string_view s);

/// Number of code points.
std::size_t length(std::string_view s);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace termwork::text
