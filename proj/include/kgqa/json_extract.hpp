#pragma once

// Robust extraction of the first balanced JSON value from free-form LLM
// output. The scan is string-aware: braces and brackets inside quoted
// strings (and escaped quotes) do not count toward nesting.

#include <optional>
#include <string>
#include <string_view>

namespace kgqa {

namespace detail {

inline std::optional<std::string> extract_balanced(std::string_view text, char open, char close) {
  std::size_t start = text.find(open);
  if (start == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == open) {
      ++depth;
    } else if (c == close) {
      --depth;
      if (depth == 0) return std::string(text.substr(start, i - start + 1));
    }
  }
  return std::nullopt;  // never closed: truncated output
}

}  // namespace detail

// First balanced {...} object, or nullopt when none closes.
inline std::optional<std::string> extract_json_object(std::string_view text) {
  return detail::extract_balanced(text, '{', '}');
}

// First balanced [...] array, or nullopt when none closes.
inline std::optional<std::string> extract_json_array(std::string_view text) {
  return detail::extract_balanced(text, '[', ']');
}

}  // namespace kgqa
