#pragma once

#include <cmath>
#include <vector>

#include "causreg/model.hpp"
#include "causreg/rng.hpp"
#include "causreg/types.hpp"

namespace testutil {

// Independent scalar sigmoid in long double, for oracle comparisons.
inline long double sigmoid_oracle(long double z) {
  if (z >= 0) return 1.0L / (1.0L + std::exp(-z));
  const long double e = std::exp(z);
  return e / (1.0L + e);
}

// Plain long double summation of the BCE terms, no clamping shortcuts.
inline long double bce_oracle(const std::vector<double>& probs,
                              const std::vector<int>& labels) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const long double p = probs[i];
    acc += labels[i] == 1 ? -std::log(p) : -std::log(1.0L - p);
  }
  return acc / static_cast<long double>(probs.size());
}

// Central finite differences of total_loss over (weights, bias).
inline causreg::Gradient fd_gradient(const causreg::LinearModel& model,
                                     const causreg::DesignMatrix& data,
                                     const causreg::LabelVector& labels,
                                     const causreg::FeatureGroups& groups,
                                     const causreg::PenaltyConfig& cfg,
                                     double step = 1e-6) {
  causreg::Gradient g;
  g.weights.resize(model.dimension());
  for (std::size_t j = 0; j < model.dimension(); ++j) {
    causreg::LinearModel up = model, down = model;
    up.weights[j] += step;
    down.weights[j] -= step;
    g.weights[j] = (causreg::total_loss(up, data, labels, groups, cfg) -
                    causreg::total_loss(down, data, labels, groups, cfg)) /
                   (2.0 * step);
  }
  causreg::LinearModel up = model, down = model;
  up.bias += step;
  down.bias -= step;
  g.bias = (causreg::total_loss(up, data, labels, groups, cfg) -
            causreg::total_loss(down, data, labels, groups, cfg)) /
           (2.0 * step);
  return g;
}

// Random small dense problem for gradient/convexity checks.
struct RandomInstance {
  causreg::DesignMatrix x;
  causreg::LabelVector y;
  causreg::FeatureGroups groups;
  causreg::PenaltyConfig penalty;
  causreg::LinearModel model;
};

inline RandomInstance random_instance(causreg::Rng& rng, std::size_t max_n = 10,
                                      std::size_t max_d = 8) {
  const std::size_t n = 1 + rng.below(max_n);
  const std::size_t d = 1 + rng.below(max_d);
  std::vector<double> values(n * d);
  for (double& v : values) v = 2.0 * rng.uniform() - 1.0;
  std::vector<int> labels(n);
  for (int& y : labels) y = rng.bernoulli(0.5) ? 1 : 0;

  // Random partition of the d features.
  std::vector<std::size_t> causal, spurious;
  for (std::size_t j = 0; j < d; ++j) {
    const double u = rng.uniform();
    if (u < 1.0 / 3) causal.push_back(j);
    else if (u < 2.0 / 3) spurious.push_back(j);
  }
  RandomInstance inst{
      causreg::DesignMatrix::dense(d, std::move(values)),
      causreg::LabelVector(std::move(labels)),
      causreg::FeatureGroups(d, std::move(causal), std::move(spurious)),
      causreg::PenaltyConfig{rng.uniform() * 10, rng.uniform() * 10,
                             rng.uniform() * 10},
      causreg::LinearModel{},
  };
  inst.model.weights.resize(d);
  for (double& w : inst.model.weights) w = 2.0 * rng.uniform() - 1.0;
  inst.model.bias = 2.0 * rng.uniform() - 1.0;
  return inst;
}

}  // namespace testutil
