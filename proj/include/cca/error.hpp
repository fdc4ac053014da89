#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cca {

enum class ErrorKind {
  malformed_input,
  empty_document,
  duplicate_ref_id,
  unparseable_name,
  malformed_lexicon,
  malformed_config,
  invalid_count,
  unknown_ref,
  unknown_category,
  length_mismatch,
  no_overlap,
  incomplete_coding,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Structured failure raised by every module. `line` is 1-based and 0 when
/// the error is not tied to a position in an input file.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace cca
