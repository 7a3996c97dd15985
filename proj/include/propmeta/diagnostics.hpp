#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "propmeta/study.hpp"
#include "propmeta/transform.hpp"

namespace propmeta {

enum class FindingKind { OrderReversal, NoPreimage, PooledOutsideObservedRange, PartialImageOverlap };
enum class Severity { Warning, Error };

std::string_view to_string(FindingKind kind);
std::string_view to_string(Severity severity);

struct Finding {
  FindingKind kind = FindingKind::OrderReversal;
  Severity severity = Severity::Warning;
  std::vector<std::string> studies;
  std::string detail;
};

struct DatasetSummary {
  std::size_t study_count = 0;
  std::int64_t total_events = 0;
  std::int64_t min_total = 0;
  std::int64_t max_total = 0;
};

/// An empty findings list means the checks ran and found nothing.
struct DiagnosticsReport {
  std::vector<Finding> findings;
  DatasetSummary dataset_summary;
  TransformKind transform = TransformKind::DoubleArcsine;

  bool has_errors() const;
};

/// Severity assignment. Defaults: a pooled point without preimage is an Error,
/// everything else a Warning.
struct DiagnosticsPolicy {
  Severity pooled_no_preimage = Severity::Error;
  Severity other = Severity::Warning;
};

/// Pairwise scan for pairs whose order on the proportion scale disagrees with
/// their order on the transformed scale. Proportions are compared exactly
/// (a_i*N_j vs a_j*N_i). Pairs with equal proportions but thetas differing by
/// more than 1e-12 are reported too. Output sorted by label pair.
std::vector<Finding> detect_order_reversals(std::span<const StudyRecord> studies,
                                            TransformKind kind,
                                            const DiagnosticsPolicy& policy = {});

std::optional<Finding> check_preimage(double theta, double total, TransformKind kind,
                                      Severity severity = Severity::Warning,
                                      std::string_view what = "theta");

/// Fires when p_hat falls strictly outside [min a_i/N_i, max a_i/N_i].
std::optional<Finding> check_pooled_between(double p_hat, std::span<const StudyRecord> studies,
                                            const DiagnosticsPolicy& policy = {});

/// Fires when the common intersection of the studies' attainable theta ranges
/// is strictly smaller than at least one study's range, i.e. the studies are
/// not all mapped onto the same image.
std::optional<Finding> overlap_report(std::span<const StudyRecord> studies, TransformKind kind,
                                      const DiagnosticsPolicy& policy = {});

DatasetSummary summarize(std::span<const StudyRecord> studies);

}  // namespace propmeta
