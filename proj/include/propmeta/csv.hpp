#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "propmeta/study.hpp"

namespace propmeta {

/// Input error tied to a 1-based line of the source file.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Reads a study table: header row with columns `events` and `total`
/// (required) and `label` (optional), in any order. Missing labels become
/// "study_<row>" with 1-based data-row numbering.
std::vector<StudyRecord> parse_studies(std::istream& input);

/// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

}  // namespace propmeta
