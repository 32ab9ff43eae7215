#pragma once

// Synthetic experiment: axis-aligned Gaussian mixtures per class, seeded
// sampling, and the Bayes-optimal classifier that knows the true mixture.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "score/reject.hpp"

namespace score {

struct GaussianComponent {
  std::vector<double> mean;
  std::vector<double> stddev;  // per axis, diagonal covariance
  int count = 1;
};

struct GaussianMixtureSpec {
  std::vector<std::vector<GaussianComponent>> classes;
  std::size_t dimensionality = 0;

  int num_classes() const { return static_cast<int>(classes.size()); }

  int class_count(ClassId c) const {
    int n = 0;
    for (const auto& comp : classes[c.index()]) n += comp.count;
    return n;
  }

  int total_count() const {
    int n = 0;
    for (int c = 1; c <= num_classes(); ++c) n += class_count(ClassId(c));
    return n;
  }

  /// Throws InputError describing the first violated constraint.
  void validate() const {
    if (classes.size() < 2) throw InputError("mixture needs at least 2 classes");
    if (dimensionality < 1) throw InputError("mixture dimensionality must be >= 1");
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto where = "class " + std::to_string(c + 1);
      if (classes[c].empty()) throw InputError(where + " has no components");
      for (const auto& comp : classes[c]) {
        if (comp.mean.size() != dimensionality || comp.stddev.size() != dimensionality) {
          throw InputError(where + ": component dimensionality differs from " +
                           std::to_string(dimensionality));
        }
        for (double s : comp.stddev) {
          if (!(s > 0.0) || !std::isfinite(s)) throw InputError(where + ": stddev entries must be > 0");
        }
        for (double m : comp.mean) {
          if (!std::isfinite(m)) throw InputError(where + ": mean entries must be finite");
        }
        if (comp.count < 1) throw InputError(where + ": component count must be >= 1");
      }
    }
  }
};

struct Sample {
  std::vector<double> point;
  ClassId true_class;
};

/// Two-class, two-dimensional mixture of the reference experiment: 240 samples,
/// 80 of class 1 and 160 of class 2.
inline GaussianMixtureSpec paper_spec() {
  GaussianMixtureSpec spec;
  spec.dimensionality = 2;
  spec.classes = {
      {{{0.0, 0.0}, {2.0, 1.0}, 40}, {{4.0, 0.0}, {2.0, 1.0}, 40}},
      {{{2.0, 0.0}, {1.0, 0.5}, 100}, {{6.0, 0.0}, {1.0, 1.0}, 60}},
  };
  return spec;
}

/// Seed derivation and normal variates with a fixed, documented stream layout:
/// component k (counted class-major) draws from std::mt19937_64 seeded with
/// splitmix64(master_seed + splitmix64(k)). mt19937_64 output is fixed by the
/// standard; normals use Box-Muller on 53-bit uniforms instead of
/// std::normal_distribution, whose algorithm is implementation-defined.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  static std::uint64_t component_seed(std::uint64_t master_seed, std::uint64_t component) {
    return splitmix64(master_seed + splitmix64(component));
  }

  /// Uniform in (0, 1].
  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Exactly `count` draws per component; class-major, component-major, draw order.
inline std::vector<Sample> sample_dataset(const GaussianMixtureSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(spec.total_count()));
  std::uint64_t component_index = 0;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    for (const auto& comp : spec.classes[c]) {
      NormalStream stream(NormalStream::component_seed(seed, component_index++));
      for (int i = 0; i < comp.count; ++i) {
        Sample s{std::vector<double>(spec.dimensionality), ClassId::from_index(c)};
        for (std::size_t d = 0; d < spec.dimensionality; ++d) {
          s.point[d] = comp.mean[d] + comp.stddev[d] * stream.standard_normal();
        }
        samples.push_back(std::move(s));
      }
    }
  }
  return samples;
}

/// Normalizes unnormalized log-scores into probabilities (max-subtraction
/// before exponentiation). Falls back to uniform when no score is finite.
inline std::vector<double> posterior_from_log_scores(std::span<const double> log_scores) {
  const std::size_t n = log_scores.size();
  double max_score = -std::numeric_limits<double>::infinity();
  for (double s : log_scores) {
    if (s > max_score) max_score = s;
  }
  std::vector<double> out(n, 1.0 / static_cast<double>(n));
  if (!std::isfinite(max_score)) return out;

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(log_scores[i] - max_score);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

/// log(n_k) + log N(x; mean_k, diag(stddev_k^2)).
inline double component_log_score(const GaussianComponent& comp, std::span<const double> x) {
  constexpr double half_log_two_pi = 0.91893853320467274178;
  double log_density = std::log(static_cast<double>(comp.count));
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double z = (x[d] - comp.mean[d]) / comp.stddev[d];
    log_density -= std::log(comp.stddev[d]) + half_log_two_pi + 0.5 * z * z;
  }
  return log_density;
}

/// p(c | x) with priors n_c / N and count-weighted class mixtures, so the
/// joint p(c, x) is proportional to sum_k n_k N(x; component k).
inline std::vector<double> posterior(const GaussianMixtureSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dimensionality) {
    throw InputError("point has dimensionality " + std::to_string(x.size()) + ", mixture has " +
                     std::to_string(spec.dimensionality));
  }
  std::vector<double> log_scores(spec.classes.size());
  std::vector<double> terms;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    terms.clear();
    double max_term = -std::numeric_limits<double>::infinity();
    for (const auto& comp : spec.classes[c]) {
      terms.push_back(component_log_score(comp, x));
      if (terms.back() > max_term) max_term = terms.back();
    }
    if (!std::isfinite(max_term)) {
      log_scores[c] = max_term;
      continue;
    }
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - max_term);
    log_scores[c] = max_term + std::log(sum);
  }
  return posterior_from_log_scores(log_scores);
}

struct Prediction {
  ClassId predicted_class;
  double certainty = 0.0;
};

/// Argmax of a probability vector (smallest class on exact ties) and its value.
inline Prediction argmax_prediction(std::span<const double> probabilities) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < probabilities.size(); ++c) {
    if (probabilities[c] > probabilities[best]) best = c;
  }
  return {ClassId::from_index(best), probabilities[best]};
}

inline Prediction predict(const GaussianMixtureSpec& spec, std::span<const double> x) {
  const auto p = posterior(spec, x);
  return argmax_prediction(p);
}

inline PredictionSet classify_dataset(const GaussianMixtureSpec& spec, std::span<const Sample> samples) {
  std::vector<LabeledPrediction> preds;
  preds.reserve(samples.size());
  for (const auto& s : samples) {
    const auto p = predict(spec, s.point);
    preds.push_back({s.true_class, p.predicted_class, p.certainty});
  }
  return PredictionSet(std::move(preds), spec.num_classes());
}

/// Samples `spec` with `seed` and classifies every sample with the Bayes rule.
inline PredictionSet synthetic_predictions(const GaussianMixtureSpec& spec, std::uint64_t seed) {
  const auto samples = sample_dataset(spec, seed);
  return classify_dataset(spec, samples);
}

}  // namespace score
