// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "score/score.hpp"
#include "test_support.hpp"

namespace {

using namespace score;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// tests/oracles/bayes_accuracy_mc.py: 10^6 draws, stderr 4.1e-4.
constexpr double kMonteCarloBayesAccuracy = 0.781070;
constexpr double kBayesTolerance = 0.05;
constexpr double kSumTolerance = 1e-9;
constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<StackOptions> all_option_combinations() {
  std::vector<StackOptions> out;
  for (auto order : {CellOrder::Natural, CellOrder::CorrectLast})
    for (bool normalize : {false, true})
      for (auto align : {Align::Bottom, Align::CorrectStart, Align::CorrectCenter})
        for (bool condense : {false, true}) out.push_back({order, normalize, align, condense});
  return out;
}

std::string describe(const StackOptions& o) {
  return to_string(o.order) + "/" + (o.normalize ? "normalized" : "counts") + "/" + to_string(o.align) + "/" +
         (o.condense ? "condensed" : "full");
}

Check dataset_fidelity() {
  Check c;
  const auto start = Clock::now();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto samples = sample_dataset(paper_spec(), seed);
    std::size_t class1 = 0, class2 = 0;
    for (const auto& s : samples) (s.true_class == ClassId(1) ? class1 : class2)++;
    c.require(samples.size() == 240 && class1 == 80 && class2 == 160,
              "seed " + std::to_string(seed) + ": " + std::to_string(class1) + "/" + std::to_string(class2));
  }
  const double t = seconds_since(start);
  c.require(t < 1.0, "took " + std::to_string(t) + " s");
  c.detail << "100 seeds, 240 = 80 + 160 each, " << t << " s";
  return c;
}

Check bayes_sanity() {
  Check c;
  double sum = 0.0;
  c.detail << "per-seed accuracy:";
  for (auto seed : kSeeds) {
    const double acc = accuracy(confusion_matrix(synthetic_predictions(paper_spec(), seed)));
    c.detail << ' ' << acc;
    c.require(std::abs(acc - kMonteCarloBayesAccuracy) <= kBayesTolerance, " seed " + std::to_string(seed) + " OUT OF TOLERANCE;");
    sum += acc;
  }
  const double mean = sum / std::size(kSeeds);
  c.detail << "; mean " << mean << " vs oracle " << kMonteCarloBayesAccuracy << " +/- " << kBayesTolerance;
  c.require(std::abs(mean - kMonteCarloBayesAccuracy) <= kBayesTolerance, " OUT OF TOLERANCE");
  return c;
}

Check arc_shape() {
  Check c;
  for (auto seed : kSeeds) {
    const auto arc = reject_curve(synthetic_predictions(paper_spec(), seed), MetricSpec::accuracy());
    const double at_full = *arc.points.front().value;
    const double at_smallest = *arc.points.back().value;
    double max_low = -1.0, max_high = -1.0;
    for (const auto& p : arc.points) {
      (p.acceptance_rate < 0.3 ? max_low : max_high) = std::max(p.acceptance_rate < 0.3 ? max_low : max_high, *p.value);
    }
    c.require(at_smallest >= at_full, "seed " + std::to_string(seed) + ": smallest-rate ARC below full ARC");
    c.require(max_low >= max_high, "seed " + std::to_string(seed) + ": max ARC below 0.3 is " +
                                       std::to_string(max_low) + " < " + std::to_string(max_high));
  }
  c.detail << "10 seeds";
  return c;
}

Check oracle_equivalence() {
  Check c;
  const auto start = Clock::now();
  std::mt19937_64 rng(20241019);
  std::size_t points = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto preds = testing::random_predictions(rng, 50, 4);
    const auto thresholds = testing::distinct_certainties(preds);
    for (const auto& m : default_curve_metrics(preds.num_classes())) {
      const auto curve = reject_curve(preds, m);
      c.require(curve.points.size() == thresholds.size(), "curve length");
      for (std::size_t i = 0; i < thresholds.size() && i < curve.points.size(); ++i) {
        const double rate = static_cast<double>(testing::brute_accepted(preds, thresholds[i])) / preds.size();
        c.require(curve.points[i].acceptance_rate == rate, "acceptance rate mismatch");
        c.require(curve.points[i].value == testing::brute_metric(preds, thresholds[i], m),
                  "metric mismatch for " + m.name());
        ++points;
      }
    }
    for (bool normalize : {false, true}) {
      const auto stack = build_stack(preds, {CellOrder::Natural, normalize, Align::Bottom, false});
      c.require(stack.columns.size() == thresholds.size(), "stack length");
      for (std::size_t i = 0; i < thresholds.size() && i < stack.columns.size(); ++i) {
        const auto brute = testing::brute_confusion(preds, thresholds[i]);
        const auto accepted = testing::brute_accepted(preds, thresholds[i]);
        std::size_t k = 0;
        for (const auto& row : brute) {
          for (auto v : row) {
            const double expected = normalize ? static_cast<double>(v) / static_cast<double>(accepted)
                                              : static_cast<double>(v);
            c.require(stack.columns[i].sizes[k++] == expected, "stack cell mismatch");
          }
        }
      }
    }
  }
  const double t = seconds_since(start);
  c.require(t < 5.0, "took " + std::to_string(t) + " s");
  c.detail << "100 sets, " << points << " curve points, " << t << " s";
  return c;
}

Check conservation() {
  Check c;
  std::vector<PredictionSet> sets;
  for (auto seed : kSeeds) sets.push_back(synthetic_predictions(paper_spec(), seed));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) sets.push_back(testing::random_predictions(rng, 50, 4));

  int valid = 0, rejected = 0;
  for (const auto& options : all_option_combinations()) {
    const bool legal = options.align == Align::Bottom || options.order == CellOrder::CorrectLast;
    if (!legal) {
      bool threw = false;
      try {
        build_stack(sets.front(), options);
      } catch (const InputError&) {
        threw = true;
      }
      c.require(threw, describe(options) + " was accepted");
      ++rejected;
      continue;
    }
    ++valid;
    for (const auto& preds : sets) {
      const auto stack = build_stack(preds, options);
      for (const auto& col : stack.columns) {
        std::size_t count_sum = 0;
        for (auto n : col.counts) count_sum += n;
        c.require(count_sum == col.accepted, describe(options) + ": counts do not sum to |X_theta|");
        if (options.normalize) {
          c.require(std::abs(col.total() - 1.0) <= kSumTolerance, describe(options) + ": normalized sum off");
        } else {
          c.require(col.total() == static_cast<double>(col.accepted), describe(options) + ": count sum off");
        }
      }
    }
  }
  c.detail << valid << " valid combinations checked on " << sets.size() << " sets; " << rejected
           << " natural+aligned combinations rejected as invalid";
  return c;
}

Check metric_stack_consistency() {
  Check c;
  std::size_t columns = 0;
  for (auto seed : kSeeds) {
    const auto preds = synthetic_predictions(paper_spec(), seed);
    const auto arc = reject_curve(preds, MetricSpec::accuracy());
    for (auto align : {Align::Bottom, Align::CorrectStart, Align::CorrectCenter}) {
      for (bool condense : {false, true}) {
        const auto stack = build_stack(preds, {CellOrder::CorrectLast, true, align, condense});
        for (std::size_t i = 0; i < stack.columns.size(); ++i) {
          c.require(stack.correct_span(i) == *arc.points[i].value, "span != accuracy");
          ++columns;
        }
      }
    }
  }
  c.detail << columns << " columns, exact equality";
  return c;
}

Check pie_geometry() {
  Check c;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::size_t rings_checked = 0;
  for (auto seed : kSeeds) {
    const auto stack =
        build_stack(synthetic_predictions(paper_spec(), seed), {CellOrder::CorrectLast, true, Align::CorrectCenter, false});
    const auto rings = testing::parse_pie(render_pie(stack, ChartStyle::pie()).text);
    c.require(rings.size() == stack.columns.size(), "ring count");
    for (std::size_t j = 0; j < rings.size(); ++j) {
      double total = 0.0;
      double correct_start = 0.0, correct_end = 0.0;
      bool first = true;
      for (const auto& s : rings[j].sectors) {
        total += s.sweep;
        const bool correct = s.cell == "confusion_1_1" || s.cell == "confusion_2_2";
        if (!correct) continue;
        if (first) correct_start = s.start;
        first = false;
        correct_end = s.start + s.sweep;
      }
      c.require(std::abs(total - two_pi) <= kSumTolerance, "angles do not sum to 2pi");
      if (!first) {
        c.require(std::abs(std::remainder(correct_start + correct_end, two_pi)) <= kSumTolerance,
                  "correct block not symmetric about 0");
      }
      if (j > 0) c.require(rings[j].outer < rings[j - 1].outer, "ring radii not strictly decreasing");
      ++rings_checked;
    }
  }
  c.detail << rings_checked << " rings over 10 seeds";
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SCORE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Check determinism() {
  Check c;
  const auto base = fs::temp_directory_path() / "score_acceptance_figures";
  fs::remove_all(base);
  double worst = 0.0;
  for (const char* run : {"a", "b"}) {
    const auto start = Clock::now();
    c.require(run_cli("paper-figures --seed 7 --out " + (base / run).string()) == 0, "CLI failed");
    worst = std::max(worst, seconds_since(start));
  }
  int files = 0;
  if (fs::exists(base / "a")) {
    for (const auto& entry : fs::directory_iterator(base / "a")) {
      if (entry.path().extension() != ".svg") continue;
      ++files;
      const auto other = base / "b" / entry.path().filename();
      c.require(fs::exists(other) && io::read_file(entry.path()) == io::read_file(other),
                entry.path().filename().string() + " differs");
    }
  }
  c.require(files == 6, "expected 6 SVG files, got " + std::to_string(files));
  c.require(worst < 10.0, "slowest run " + std::to_string(worst) + " s");
  c.detail << files << " files byte-identical, slowest run " << worst << " s";
  return c;
}

Check degenerate_handling() {
  Check c;
  // Class 1 only appears at low certainty, so raising the threshold starves
  // both its recall and its precision.
  const PredictionSet preds({{ClassId(1), ClassId(1), 0.2},
                             {ClassId(1), ClassId(2), 0.3},
                             {ClassId(2), ClassId(1), 0.4},
                             {ClassId(2), ClassId(2), 0.6},
                             {ClassId(2), ClassId(2), 0.7},
                             {ClassId(2), ClassId(2), 0.8}},
                            2);
  const auto recall1 = reject_curve(preds, MetricSpec::recall(ClassId(1)));
  const auto precision1 = reject_curve(preds, MetricSpec::precision(ClassId(1)));
  std::size_t undefined_recall = 0, undefined_precision = 0;
  for (std::size_t i = 0; i < recall1.points.size(); ++i) {
    // Both class 1 samples are gone from rate 4/6 down; the last class 1
    // prediction (certainty 0.4) is gone from rate 3/6 down.
    const double rate = recall1.points[i].acceptance_rate;
    c.require((rate < 0.7) == !recall1.points[i].value.has_value(),
              "recall definedness wrong at point " + std::to_string(i));
    c.require((rate < 0.6) == !precision1.points[i].value.has_value(),
              "precision definedness wrong at point " + std::to_string(i));
    undefined_recall += !recall1.points[i].value;
    undefined_precision += !precision1.points[i].value;
  }

  // A curve with an interior hole: class 2 recall on a set where class 2
  // disappears in the middle of the schedule only to come back is impossible
  // (subsets shrink), so use a hand-made curve for the split check.
  RejectCurve holed{MetricSpec::precision(ClassId(1)),
                    {{1.0, 0.5}, {0.8, 0.6}, {0.6, std::nullopt}, {0.4, 0.7}, {0.2, 0.9}}};
  std::size_t segments = 0;
  try {
    const auto doc = render_curves({recall1, precision1, holed}, ChartStyle::curves());
    segments = testing::elements(doc.text, "polyline", "curve-segment").size();
    c.require(testing::well_formed_xml(doc.text), "malformed SVG");
    const auto csv = io::curves_csv({recall1});
    c.require(csv.find("undefined") != std::string::npos, "CSV lacks undefined marker");
  } catch (const std::exception& e) {
    c.require(false, std::string("render threw: ") + e.what());
  }
  c.require(segments == 4, "expected 4 polyline segments, got " + std::to_string(segments));
  c.detail << undefined_recall << " undefined recall points, " << undefined_precision
           << " undefined precision points, " << segments << " rendered segments";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"1 dataset fidelity", dataset_fidelity},
      {"2 Bayes sanity", bayes_sanity},
      {"3 ARC qualitative shape", arc_shape},
      {"4 oracle equivalence", oracle_equivalence},
      {"5 stack conservation", conservation},
      {"6 metric/stack consistency", metric_stack_consistency},
      {"7 pie geometry", pie_geometry},
      {"8 determinism", determinism},
      {"9 degenerate handling", degenerate_handling},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Check result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail << "exception: " << e.what();
    }
    std::cout << (result.ok ? "PASS  " : "FAIL  ") << name << "  (" << result.detail.str() << ")\n";
    failures += result.ok ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
