#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kgqa {

// Base class for every error this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input bytes (KB files, question files, LLM output without the
// expected JSON). Carries a 1-based line number when one is known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, std::size_t line_number = 0)
      : Error(line_number ? msg + " (line " + std::to_string(line_number) + ")" : msg),
        line(line_number) {}
  std::size_t line;
};

// Structurally valid input that violates a contract (unknown relation name,
// empty hops, id out of range, bad shapes).
struct ValidationError : Error {
  using Error::Error;
};

// Bracketed mention with no exact entity match, or unbalanced brackets.
struct LinkError : Error {
  explicit LinkError(const std::string& msg, std::string mention = {})
      : Error(msg), span(std::move(mention)) {}
  std::string span;
};

// Bad or inconsistent configuration (missing checkpoint, dim mismatch).
struct ConfigError : Error {
  using Error::Error;
};

// Network-level failure after retries were exhausted.
struct TransportError : Error {
  using Error::Error;
};

// Endpoint answered with a non-2xx status.
struct EndpointError : Error {
  EndpointError(int http_status, const std::string& body)
      : Error("endpoint returned status " + std::to_string(http_status) +
              (body.empty() ? std::string{} : ": " + body.substr(0, 200))),
        status(http_status) {}
  int status;
};

// Planning failed even after the repair pass; keeps both raw completions
// so callers can log what the model actually said.
struct PlanningError : Error {
  PlanningError(const std::string& msg, std::vector<std::string> raw)
      : Error(msg), raw_passes(std::move(raw)) {}
  std::vector<std::string> raw_passes;
};

// Non-finite value surfaced inside numeric code; names the offending layer.
struct NumericError : Error {
  using Error::Error;
};

// Filesystem trouble (unreadable input, unwritable output path).
struct IoError : Error {
  using Error::Error;
};

}  // namespace kgqa
