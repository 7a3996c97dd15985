#include "propmeta/study.hpp"

#include <string>

namespace propmeta {

std::string_view to_string(TransformKind kind) {
  return kind == TransformKind::SingleArcsine ? "single" : "double";
}

TransformKind transform_kind_from_string(std::string_view name) {
  if (name == "single") return TransformKind::SingleArcsine;
  if (name == "double") return TransformKind::DoubleArcsine;
  throw DomainError("unknown transform '" + std::string(name) + "' (expected single or double)");
}

void validate(const StudyRecord& study) {
  if (study.total < 1) {
    throw DomainError("study '" + study.label + "': total must be at least 1");
  }
  if (study.events < 0) {
    throw DomainError("study '" + study.label + "': events must be non-negative");
  }
  if (study.events > study.total) {
    throw DomainError("study '" + study.label + "': events exceeds total");
  }
}

}  // namespace propmeta
