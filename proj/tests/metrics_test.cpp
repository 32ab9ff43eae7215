#include <random>

#include <gtest/gtest.h>

#include "score/metrics.hpp"
#include "score/synth.hpp"
#include "test_support.hpp"

namespace score {
namespace {

const ConfusionMatrix kSmall = ConfusionMatrix::from_rows({{1, 1}, {0, 1}});

TEST(Accuracy, TraceOverTotal) {
  EXPECT_DOUBLE_EQ(accuracy(kSmall), 2.0 / 3.0);
  EXPECT_EQ(accuracy(ConfusionMatrix::from_rows({{4, 0, 0}, {0, 2, 0}, {0, 0, 9}})), 1.0);
}

TEST(Accuracy, EmptyMatrixIsAnError) {
  try {
    accuracy(ConfusionMatrix(2));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "no accepted samples");
  }
}

TEST(Precision, ColumnRatioOrUndefined) {
  EXPECT_EQ(precision(kSmall, ClassId(2)), 0.5);
  EXPECT_EQ(precision(ConfusionMatrix::from_rows({{3, 0}, {2, 0}}), ClassId(2)), std::nullopt);
  EXPECT_THROW(precision(kSmall, ClassId(3)), InputError);
}

TEST(Recall, RowRatioOrUndefined) {
  EXPECT_EQ(recall(kSmall, ClassId(1)), 0.5);
  EXPECT_EQ(recall(ConfusionMatrix::from_rows({{0, 0}, {2, 1}}), ClassId(1)), std::nullopt);
}

TEST(PrecisionRecall, RandomSetsAgainstRecount) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto preds = testing::random_predictions(rng, 20);
    const auto cm = confusion_matrix(preds);
    for (int c = 1; c <= preds.num_classes(); ++c) {
      EXPECT_EQ(precision(cm, ClassId(c)), testing::brute_metric(preds, 0.0, MetricSpec::precision(ClassId(c))));
      EXPECT_EQ(recall(cm, ClassId(c)), testing::brute_metric(preds, 0.0, MetricSpec::recall(ClassId(c))));
    }
  }
}

TEST(MetricSpec, Names) {
  EXPECT_EQ(MetricSpec::accuracy().name(), "accuracy");
  EXPECT_EQ(MetricSpec::precision(ClassId(2)).name(), "precision_2");
  EXPECT_EQ(MetricSpec::recall(ClassId(1)).name(), "recall_1");
  EXPECT_FALSE(MetricSpec::accuracy().target_class().has_value());
  EXPECT_EQ(MetricSpec::recall(ClassId(3)).target_class(), ClassId(3));
}

TEST(RejectCurve, PerfectClassifierIsFlatOne) {
  std::vector<LabeledPrediction> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({ClassId(1 + i % 3), ClassId(1 + i % 3), (i % 7) / 7.0});
  const auto curve = reject_curve(PredictionSet(rows, 3), MetricSpec::accuracy());
  ASSERT_EQ(curve.points.size(), 7u);
  for (const auto& p : curve.points) EXPECT_EQ(p.value, 1.0);
}

TEST(RejectCurve, FirstPointEqualsUnfilteredMetric) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto preds = testing::random_predictions(rng);
    const auto cm = confusion_matrix(preds);
    for (const auto& m : default_curve_metrics(preds.num_classes())) {
      const auto curve = reject_curve(preds, m);
      EXPECT_EQ(curve.points.front().acceptance_rate, 1.0);
      EXPECT_EQ(curve.points.front().value, evaluate(cm, m));
    }
  }
}

TEST(RejectCurve, StrictlyDecreasingRates) {
  const auto curve = reject_curve(synthetic_predictions(paper_spec(), 4), MetricSpec::recall(ClassId(2)));
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    EXPECT_LT(curve.points[i].acceptance_rate, curve.points[i - 1].acceptance_rate);
    if (curve.points[i].value) {
      EXPECT_GE(*curve.points[i].value, 0.0);
      EXPECT_LE(*curve.points[i].value, 1.0);
    }
  }
}

TEST(RejectCurve, SyntheticArcMatchesPerThresholdReevaluation) {
  const auto preds = synthetic_predictions(paper_spec(), 8);
  const auto curve = reject_curve(preds, MetricSpec::accuracy());
  const auto thresholds = testing::distinct_certainties(preds);
  ASSERT_EQ(curve.points.size(), thresholds.size());
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double rate = static_cast<double>(testing::brute_accepted(preds, thresholds[i])) / preds.size();
    EXPECT_EQ(curve.points[i].acceptance_rate, rate);
    EXPECT_EQ(curve.points[i].value, testing::brute_metric(preds, thresholds[i], MetricSpec::accuracy()));
  }
}

TEST(RejectCurve, StarvedClassRecallIsUndefined) {
  // class 1 only has low-certainty samples; above 0.5 its recall is undefined
  std::vector<LabeledPrediction> rows{{ClassId(1), ClassId(1), 0.2}, {ClassId(1), ClassId(2), 0.3},
                                      {ClassId(2), ClassId(2), 0.8}, {ClassId(2), ClassId(2), 0.9}};
  const auto curve = reject_curve(PredictionSet(rows, 2), MetricSpec::recall(ClassId(1)));
  ASSERT_EQ(curve.points.size(), 4u);
  EXPECT_EQ(curve.points[0].value, 0.5);
  EXPECT_EQ(curve.points[1].value, 0.0);
  EXPECT_EQ(curve.points[2].value, std::nullopt);
  EXPECT_EQ(curve.points[3].value, std::nullopt);
}

}  // namespace
}  // namespace score
