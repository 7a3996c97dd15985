#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace propmeta {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

enum class TransformKind { SingleArcsine, DoubleArcsine };

std::string_view to_string(TransformKind kind);
TransformKind transform_kind_from_string(std::string_view name);

/// One study's binomial outcome: `events` out of `total` trials.
struct StudyRecord {
  std::string label;
  std::int64_t events = 0;
  std::int64_t total = 1;

  double proportion() const { return static_cast<double>(events) / static_cast<double>(total); }
};

/// Throws DomainError unless 0 <= events <= total and total >= 1.
void validate(const StudyRecord& study);

}  // namespace propmeta
