#pragma once

#include <cctype>
#include <string>
#include <string_view>

namespace salesgen {

// Trims leading/trailing whitespace and collapses internal runs to one space.
inline std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

inline std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Canonical form used for equality checks (dedup, repetition detection).
inline std::string normalize_for_match(std::string_view text) {
  return to_lower(normalize_whitespace(text));
}

// Whole-word, case-insensitive search; "maybe" does not contain the word "bye".
inline bool contains_word(std::string_view text, std::string_view word) {
  if (word.empty()) return false;
  const std::string haystack = to_lower(text);
  const std::string needle = to_lower(word);
  std::size_t pos = 0;
  auto is_word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'';
  };
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right_ok = end >= haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) return true;
    pos += 1;
  }
  return false;
}

}  // namespace salesgen
