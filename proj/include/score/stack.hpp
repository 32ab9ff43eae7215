#pragma once

// Stacked confusion columns: for every acceptance rate of the threshold
// schedule, all confusion cells of the accepted subset, in a fixed order,
// optionally normalized by the accepted count and shifted by a baseline.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "score/reject.hpp"

namespace score {

enum class CellOrder { Natural, CorrectLast };
enum class Align { Bottom, CorrectStart, CorrectCenter };

inline std::string to_string(CellOrder order) {
  return order == CellOrder::Natural ? "natural" : "correct_last";
}

inline std::string to_string(Align align) {
  switch (align) {
    case Align::Bottom: return "bottom";
    case Align::CorrectStart: return "correct_start";
    case Align::CorrectCenter: return "correct_center";
  }
  return {};
}

/// One confusion cell. An empty predicted class is the condensed OTHER cell
/// holding every error of `true_class`.
struct CellId {
  ClassId true_class;
  std::optional<ClassId> predicted_class;

  static CellId other(ClassId truth) { return {truth, std::nullopt}; }

  bool is_other() const { return !predicted_class.has_value(); }
  bool is_correct() const { return predicted_class && *predicted_class == true_class; }

  /// "confusion_1_2" or "confusion_1_other".
  std::string label() const {
    return "confusion_" + std::to_string(true_class.value()) + "_" +
           (is_other() ? std::string("other") : std::to_string(predicted_class->value()));
  }

  friend bool operator==(const CellId&, const CellId&) = default;
};

struct StackOptions {
  CellOrder order = CellOrder::Natural;
  bool normalize = false;
  Align align = Align::Bottom;
  bool condense = false;

  /// Throws InputError when an aligned layout is requested without CORRECT_LAST.
  void validate() const {
    if (align != Align::Bottom && order != CellOrder::CorrectLast) {
      throw InputError("align=" + to_string(align) + " requires order=correct_last");
    }
  }

  friend bool operator==(const StackOptions&, const StackOptions&) = default;
};

struct CellCount {
  CellId cell;
  std::size_t count = 0;
};

struct StackColumn {
  double acceptance_rate = 0.0;
  std::size_t accepted = 0;
  std::vector<std::size_t> counts;  // parallel to ConfusionStack::cells
  std::vector<double> sizes;        // counts, or counts / accepted when normalized
  double baseline = 0.0;

  double total() const {
    double sum = 0.0;
    for (double s : sizes) sum += s;
    return sum;
  }
};

struct ConfusionStack {
  std::vector<CellId> cells;  // shared order of every column
  std::vector<StackColumn> columns;  // decreasing acceptance rate
  StackOptions options;
  int num_classes = 2;

  bool normalized() const { return options.normalize; }

  /// Height of the correct block of column `i`, computed from integer counts
  /// so a normalized stack reproduces the accuracy ratio exactly.
  double correct_span(std::size_t i) const { return span_of(i, true); }
  double wrong_span(std::size_t i) const { return span_of(i, false); }

 private:
  double span_of(std::size_t i, bool correct) const {
    const auto& col = columns[i];
    std::size_t sum = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k].is_correct() == correct) sum += col.counts[k];
    }
    if (!options.normalize) return static_cast<double>(sum);
    return static_cast<double>(sum) / static_cast<double>(col.accepted);
  }
};

inline std::vector<CellId> order_cells(int num_classes, CellOrder order, bool condensed) {
  if (num_classes < 2) throw InputError("need at least 2 classes");
  std::vector<CellId> cells;
  const auto cls = [](int c) { return ClassId(c); };

  if (order == CellOrder::Natural) {
    for (int t = 1; t <= num_classes; ++t) {
      if (condensed) {
        cells.push_back({cls(t), cls(t)});
        cells.push_back(CellId::other(cls(t)));
      } else {
        for (int p = 1; p <= num_classes; ++p) cells.push_back({cls(t), cls(p)});
      }
    }
    return cells;
  }

  for (int t = 1; t <= num_classes; ++t) {
    if (condensed) {
      cells.push_back(CellId::other(cls(t)));
    } else {
      for (int p = 1; p <= num_classes; ++p) {
        if (p != t) cells.push_back({cls(t), cls(p)});
      }
    }
  }
  for (int t = 1; t <= num_classes; ++t) cells.push_back({cls(t), cls(t)});
  return cells;
}

inline std::size_t cell_count(const ConfusionMatrix& cm, const CellId& cell) {
  if (cell.is_other()) {
    return cm.row_sum(cell.true_class) - cm.at(cell.true_class, cell.true_class);
  }
  return cm.at(cell.true_class, *cell.predicted_class);
}

/// Per true class: the correct cell followed by a single OTHER error cell.
inline std::vector<CellCount> condense(const ConfusionMatrix& cm) {
  std::vector<CellCount> out;
  out.reserve(static_cast<std::size_t>(cm.num_classes()) * 2);
  for (int t = 1; t <= cm.num_classes(); ++t) {
    const ClassId c(t);
    out.push_back({{c, c}, cm.at(c, c)});
    out.push_back({CellId::other(c), cm.row_sum(c) - cm.at(c, c)});
  }
  return out;
}

/// Baseline offset of a column whose cells are listed in `cells` order.
/// CORRECT_START puts the wrong/correct border on 0, CORRECT_CENTER centers
/// the correct block on 0. Both require every wrong cell to precede every
/// correct cell.
inline double align_baseline(std::span<const CellId> cells, std::span<const double> sizes, Align align) {
  if (align == Align::Bottom) return 0.0;

  double wrong = 0.0;
  double correct = 0.0;
  bool seen_correct = false;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].is_correct()) {
      seen_correct = true;
      correct += sizes[k];
    } else {
      if (seen_correct) throw InputError("aligned baselines need cells in correct_last order");
      wrong += sizes[k];
    }
  }
  if (align == Align::CorrectStart) return -wrong;
  return -wrong - correct / 2.0;
}

inline double align_baseline(const StackColumn& column, std::span<const CellId> cells, Align align) {
  return align_baseline(cells, column.sizes, align);
}

inline ConfusionStack build_stack(const ConfusionSweep& sweep, const StackOptions& options) {
  options.validate();
  ConfusionStack stack;
  stack.options = options;
  stack.num_classes = sweep.matrices.empty() ? 2 : sweep.matrices.front().num_classes();
  stack.cells = order_cells(stack.num_classes, options.order, options.condense);

  stack.columns.reserve(sweep.matrices.size());
  for (std::size_t i = 0; i < sweep.matrices.size(); ++i) {
    const auto& cm = sweep.matrices[i];
    StackColumn col;
    col.acceptance_rate = sweep.schedule.acceptance_rate(i);
    col.accepted = sweep.schedule.accepted_counts[i];
    col.counts.reserve(stack.cells.size());
    col.sizes.reserve(stack.cells.size());
    for (const auto& cell : stack.cells) {
      const auto count = cell_count(cm, cell);
      col.counts.push_back(count);
      col.sizes.push_back(options.normalize
                              ? static_cast<double>(count) / static_cast<double>(col.accepted)
                              : static_cast<double>(count));
    }
    col.baseline = align_baseline(col, stack.cells, options.align);
    stack.columns.push_back(std::move(col));
  }
  return stack;
}

inline ConfusionStack build_stack(const PredictionSet& preds, const StackOptions& options) {
  options.validate();
  return build_stack(confusion_sweep(preds), options);
}

}  // namespace score
