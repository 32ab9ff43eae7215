#pragma once

// Accuracy / precision / recall on confusion matrices and the classic reject
// curves (ARC, PRC, RRC) over the acceptance rate.

#include <optional>
#include <string>
#include <vector>

#include "score/reject.hpp"

namespace score {

/// A metric value; std::nullopt when the denominator vanishes.
using MetricValue = std::optional<double>;

enum class MetricKind { Accuracy, Precision, Recall };

class MetricSpec {
 public:
  static MetricSpec accuracy() { return MetricSpec(MetricKind::Accuracy, std::nullopt); }
  static MetricSpec precision(ClassId c) { return MetricSpec(MetricKind::Precision, c); }
  static MetricSpec recall(ClassId c) { return MetricSpec(MetricKind::Recall, c); }

  MetricKind kind() const { return kind_; }
  /// Present iff kind() != Accuracy.
  std::optional<ClassId> target_class() const { return target_; }

  /// "accuracy", "precision_2", "recall_1".
  std::string name() const {
    switch (kind_) {
      case MetricKind::Accuracy: return "accuracy";
      case MetricKind::Precision: return "precision_" + std::to_string(target_->value());
      case MetricKind::Recall: return "recall_" + std::to_string(target_->value());
    }
    return {};
  }

  /// Legend label in curve plots: "ARC", "PRC class 2", ...
  std::string curve_label() const {
    switch (kind_) {
      case MetricKind::Accuracy: return "ARC (accuracy)";
      case MetricKind::Precision: return "PRC (precision, class " + std::to_string(target_->value()) + ")";
      case MetricKind::Recall: return "RRC (recall, class " + std::to_string(target_->value()) + ")";
    }
    return {};
  }

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;

 private:
  MetricSpec(MetricKind kind, std::optional<ClassId> target) : kind_(kind), target_(target) {}

  MetricKind kind_;
  std::optional<ClassId> target_;
};

inline double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw InputError("no accepted samples");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

namespace detail {

inline void check_class(const ConfusionMatrix& cm, ClassId c) {
  if (c.value() < 1 || c.value() > cm.num_classes()) {
    throw InputError("class id " + std::to_string(c.value()) + " out of range 1.." +
                     std::to_string(cm.num_classes()));
  }
}

inline MetricValue ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

inline MetricValue precision(const ConfusionMatrix& cm, ClassId c) {
  detail::check_class(cm, c);
  return detail::ratio(cm.at(c, c), cm.column_sum(c));
}

inline MetricValue recall(const ConfusionMatrix& cm, ClassId c) {
  detail::check_class(cm, c);
  return detail::ratio(cm.at(c, c), cm.row_sum(c));
}

inline MetricValue evaluate(const ConfusionMatrix& cm, const MetricSpec& metric) {
  switch (metric.kind()) {
    case MetricKind::Accuracy: return accuracy(cm);
    case MetricKind::Precision: return precision(cm, *metric.target_class());
    case MetricKind::Recall: return recall(cm, *metric.target_class());
  }
  return std::nullopt;
}

struct CurvePoint {
  double acceptance_rate = 0.0;
  MetricValue value;
};

/// Metric over acceptance rate, ordered by decreasing acceptance rate.
struct RejectCurve {
  MetricSpec metric = MetricSpec::accuracy();
  std::vector<CurvePoint> points;
};

inline RejectCurve reject_curve(const ConfusionSweep& sweep, const MetricSpec& metric) {
  RejectCurve curve{metric, {}};
  curve.points.reserve(sweep.matrices.size());
  for (std::size_t i = 0; i < sweep.matrices.size(); ++i) {
    curve.points.push_back({sweep.schedule.acceptance_rate(i), evaluate(sweep.matrices[i], metric)});
  }
  return curve;
}

inline RejectCurve reject_curve(const PredictionSet& preds, const MetricSpec& metric) {
  return reject_curve(confusion_sweep(preds), metric);
}

/// ARC plus PRC and RRC for every class, in that order.
inline std::vector<MetricSpec> default_curve_metrics(int num_classes) {
  std::vector<MetricSpec> metrics{MetricSpec::accuracy()};
  for (int c = 1; c <= num_classes; ++c) metrics.push_back(MetricSpec::precision(ClassId(c)));
  for (int c = 1; c <= num_classes; ++c) metrics.push_back(MetricSpec::recall(ClassId(c)));
  return metrics;
}

}  // namespace score
