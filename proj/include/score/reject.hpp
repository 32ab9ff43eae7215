#pragma once

// Predictions, the global reject option and confusion matrices.
//
// A sample is accepted at threshold theta iff its certainty is >= theta.
// Class ids are 1-based on every public surface; ClassId::index() gives the
// 0-based slot used for storage.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace score {

/// Raised for malformed inputs (bad class ids, negative certainty, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1-based class identifier.
class ClassId {
 public:
  constexpr ClassId() = default;
  constexpr explicit ClassId(int value) : value_(value) {}

  static constexpr ClassId from_index(std::size_t index) {
    return ClassId(static_cast<int>(index) + 1);
  }

  constexpr int value() const { return value_; }
  constexpr std::size_t index() const { return static_cast<std::size_t>(value_ - 1); }

  friend constexpr auto operator<=>(ClassId, ClassId) = default;

 private:
  int value_ = 1;
};

struct LabeledPrediction {
  ClassId true_class;
  ClassId predicted_class;
  double certainty = 0.0;

  bool correct() const { return true_class == predicted_class; }
  friend bool operator==(const LabeledPrediction&, const LabeledPrediction&) = default;
};

/// Validated, immutable list of predictions over `num_classes` classes.
class PredictionSet {
 public:
  PredictionSet(std::vector<LabeledPrediction> predictions, int num_classes)
      : predictions_(std::move(predictions)), num_classes_(num_classes) {
    if (num_classes_ < 2) {
      throw InputError("prediction set needs at least 2 classes, got " +
                       std::to_string(num_classes_));
    }
    for (std::size_t i = 0; i < predictions_.size(); ++i) {
      const auto& p = predictions_[i];
      if (!valid(p.true_class) || !valid(p.predicted_class)) {
        throw InputError("prediction " + std::to_string(i) + ": class id out of range 1.." +
                         std::to_string(num_classes_));
      }
      if (!(p.certainty >= 0.0)) {
        throw InputError("prediction " + std::to_string(i) + ": certainty must be >= 0");
      }
    }
  }

  std::span<const LabeledPrediction> predictions() const { return predictions_; }
  int num_classes() const { return num_classes_; }
  std::size_t size() const { return predictions_.size(); }
  bool empty() const { return predictions_.empty(); }
  const LabeledPrediction& operator[](std::size_t i) const { return predictions_[i]; }

  auto begin() const { return predictions_.begin(); }
  auto end() const { return predictions_.end(); }

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;

 private:
  bool valid(ClassId c) const { return c.value() >= 1 && c.value() <= num_classes_; }

  std::vector<LabeledPrediction> predictions_;
  int num_classes_;
};

/// C x C count grid; rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes)
      : num_classes_(num_classes),
        counts_(static_cast<std::size_t>(num_classes) * static_cast<std::size_t>(num_classes), 0) {
    if (num_classes < 2) throw InputError("confusion matrix needs at least 2 classes");
  }

  /// Builds from a row-major grid; throws InputError if it is not square.
  static ConfusionMatrix from_rows(const std::vector<std::vector<std::size_t>>& rows) {
    ConfusionMatrix cm(static_cast<int>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t].size() != rows.size()) throw InputError("confusion matrix rows must be square");
      for (std::size_t p = 0; p < rows.size(); ++p) {
        cm.at(ClassId::from_index(t), ClassId::from_index(p)) = rows[t][p];
      }
    }
    return cm;
  }

  int num_classes() const { return num_classes_; }

  std::size_t& at(ClassId truth, ClassId predicted) {
    return counts_[truth.index() * static_cast<std::size_t>(num_classes_) + predicted.index()];
  }
  std::size_t at(ClassId truth, ClassId predicted) const {
    return counts_[truth.index() * static_cast<std::size_t>(num_classes_) + predicted.index()];
  }

  std::size_t total() const { return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0}); }

  std::size_t trace() const {
    std::size_t sum = 0;
    for (int c = 1; c <= num_classes_; ++c) sum += at(ClassId(c), ClassId(c));
    return sum;
  }

  std::size_t row_sum(ClassId truth) const {
    std::size_t sum = 0;
    for (int p = 1; p <= num_classes_; ++p) sum += at(truth, ClassId(p));
    return sum;
  }

  std::size_t column_sum(ClassId predicted) const {
    std::size_t sum = 0;
    for (int t = 1; t <= num_classes_; ++t) sum += at(ClassId(t), predicted);
    return sum;
  }

  void add(const LabeledPrediction& p) { ++at(p.true_class, p.predicted_class); }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  int num_classes_;
  std::vector<std::size_t> counts_;
};

/// Distinct certainty values (ascending) with the number of samples accepted at each.
struct ThresholdSchedule {
  std::vector<double> thresholds;
  std::vector<std::size_t> accepted_counts;
  std::size_t total = 0;

  std::size_t size() const { return thresholds.size(); }
  double acceptance_rate(std::size_t i) const {
    return static_cast<double>(accepted_counts[i]) / static_cast<double>(total);
  }
};

inline PredictionSet accepted_subset(const PredictionSet& preds, double theta) {
  std::vector<LabeledPrediction> kept;
  for (const auto& p : preds) {
    if (p.certainty >= theta) kept.push_back(p);
  }
  return PredictionSet(std::move(kept), preds.num_classes());
}

inline double acceptance_rate(const PredictionSet& preds, double theta) {
  if (preds.empty()) return 0.0;
  const auto kept = std::count_if(preds.begin(), preds.end(),
                                  [theta](const LabeledPrediction& p) { return p.certainty >= theta; });
  return static_cast<double>(kept) / static_cast<double>(preds.size());
}

inline ConfusionMatrix confusion_matrix(const PredictionSet& preds) {
  ConfusionMatrix cm(preds.num_classes());
  for (const auto& p : preds) cm.add(p);
  return cm;
}

namespace detail {

/// Indices of `preds` sorted by descending certainty.
inline std::vector<std::size_t> by_descending_certainty(const PredictionSet& preds) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].certainty > preds[b].certainty;
  });
  return order;
}

}  // namespace detail

inline ThresholdSchedule threshold_schedule(const PredictionSet& preds) {
  if (preds.empty()) throw InputError("cannot build a threshold schedule from an empty prediction set");

  std::vector<double> values;
  values.reserve(preds.size());
  for (const auto& p : preds) values.push_back(p.certainty);
  std::sort(values.begin(), values.end());

  ThresholdSchedule schedule;
  schedule.total = values.size();
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    schedule.thresholds.push_back(values[i]);
    schedule.accepted_counts.push_back(values.size() - i);
    i = j;
  }
  return schedule;
}

/// One confusion matrix per schedule threshold.
struct ConfusionSweep {
  ThresholdSchedule schedule;
  std::vector<ConfusionMatrix> matrices;
};

/// Confusion matrices of every accepted subset along the schedule, computed in
/// one pass from the most certain sample downwards.
inline ConfusionSweep confusion_sweep(const PredictionSet& preds) {
  ConfusionSweep sweep{threshold_schedule(preds), {}};
  const auto order = detail::by_descending_certainty(preds);

  const std::size_t n = sweep.schedule.size();
  sweep.matrices.assign(n, ConfusionMatrix(preds.num_classes()));
  ConfusionMatrix running(preds.num_classes());
  std::size_t next = 0;
  for (std::size_t k = n; k-- > 0;) {
    const double theta = sweep.schedule.thresholds[k];
    while (next < order.size() && preds[order[next]].certainty >= theta) {
      running.add(preds[order[next]]);
      ++next;
    }
    sweep.matrices[k] = running;
  }
  return sweep;
}

}  // namespace score
