#include "cca/error.hpp"

namespace cca {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_input: return "MalformedInput";
    case ErrorKind::empty_document: return "EmptyDocument";
    case ErrorKind::duplicate_ref_id: return "DuplicateRefId";
    case ErrorKind::unparseable_name: return "UnparseableName";
    case ErrorKind::malformed_lexicon: return "MalformedLexicon";
    case ErrorKind::malformed_config: return "MalformedConfig";
    case ErrorKind::invalid_count: return "InvalidCount";
    case ErrorKind::unknown_ref: return "UnknownRef";
    case ErrorKind::unknown_category: return "UnknownCategory";
    case ErrorKind::length_mismatch: return "LengthMismatch";
    case ErrorKind::no_overlap: return "NoOverlap";
    case ErrorKind::incomplete_coding: return "IncompleteCoding";
    case ErrorKind::io: return "IoError";
  }
  return "Error";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message, std::size_t line) {
  std::string out(to_string(kind));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(format_message(kind, message, line)), kind_(kind), line_(line) {}

}  // namespace cca
