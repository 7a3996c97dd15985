#include "propmeta/csv.hpp"

#include <charconv>
#include <optional>
#include <unordered_set>

namespace propmeta {

namespace {

std::string trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_count(const std::string& field, const char* column, std::size_t line) {
  std::int64_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(line, std::string(column) + " is not an integer: '" + field + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<StudyRecord> parse_studies(std::istream& input) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> col_label, col_events, col_total;
  std::size_t columns = 0;

  // Header: first non-blank line.
  while (std::getline(input, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError(line_no == 0 ? 1 : line_no, "missing header row");

  const auto header = split_csv_line(line);
  columns = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    auto assign = [&](std::optional<std::size_t>& slot) {
      if (slot) throw ParseError(line_no, "duplicate column '" + name + "'");
      slot = i;
    };
    if (name == "label") assign(col_label);
    else if (name == "events") assign(col_events);
    else if (name == "total") assign(col_total);
  }
  if (!col_events) throw ParseError(line_no, "missing required column 'events'");
  if (!col_total) throw ParseError(line_no, "missing required column 'total'");

  std::vector<StudyRecord> studies;
  std::unordered_set<std::string> seen;
  std::size_t row = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != columns) {
      throw ParseError(line_no, "expected " + std::to_string(columns) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    StudyRecord s;
    s.events = parse_count(trim(fields[*col_events]), "events", line_no);
    s.total = parse_count(trim(fields[*col_total]), "total", line_no);
    if (col_label) s.label = trim(fields[*col_label]);
    if (s.label.empty()) s.label = "study_" + std::to_string(row);

    if (s.total <= 0) throw ParseError(line_no, "total must be positive");
    if (s.events < 0) throw ParseError(line_no, "events must be non-negative");
    if (s.events > s.total) throw ParseError(line_no, "events exceeds total");
    if (!seen.insert(s.label).second) {
      throw ParseError(line_no, "duplicate label '" + s.label + "'");
    }
    studies.push_back(std::move(s));
  }
  return studies;
}

}  // namespace propmeta
