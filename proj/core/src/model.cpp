#include "causreg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace causreg {

double sigmoid(double logit) {
  double p;
  if (logit >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-logit));
  } else {
    const double e = std::exp(logit);
    p = e / (1.0 + e);
  }
  // Keep the result strictly inside (0,1); at |logit| > ~37 the exact value
  // rounds to 0 or 1 in double precision.
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  return std::clamp(p, lo, hi);
}

double predict_proba(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw DataError("predict_proba: row has " + std::to_string(x.size()) +
                    " features, model expects " +
                    std::to_string(model.dimension()));
  }
  double z = model.bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += x[j] * model.weights[j];
  return sigmoid(z);
}

double predict_proba(const LinearModel& model, const DesignMatrix& data,
                     std::size_t row) {
  if (data.cols() != model.dimension()) {
    throw DataError("predict_proba: matrix has " + std::to_string(data.cols()) +
                    " columns, model expects " +
                    std::to_string(model.dimension()));
  }
  return sigmoid(data.row_dot(row, model.weights) + model.bias);
}

std::vector<double> predict_proba(const LinearModel& model,
                                  const DesignMatrix& data) {
  if (data.cols() != model.dimension()) {
    throw DataError("predict_proba: matrix/model dimension mismatch");
  }
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out[i] = sigmoid(data.row_dot(i, model.weights) + model.bias);
  }
  return out;
}

double bce_loss(std::span<const double> probs, const LabelVector& labels) {
  if (probs.empty()) throw DataError("bce_loss: empty input");
  if (probs.size() != labels.size()) {
    throw DataError("bce_loss: " + std::to_string(probs.size()) +
                    " probabilities vs " + std::to_string(labels.size()) +
                    " labels");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kBceClip, 1.0 - kBceClip);
    acc += labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  return acc / static_cast<double>(probs.size());
}

namespace {

double group_term(const LinearModel& model, const std::vector<std::size_t>& set,
                  double lambda) {
  if (set.empty() || lambda == 0.0) return 0.0;
  double ss = 0.0;
  for (std::size_t j : set) ss += model.weights[j] * model.weights[j];
  return lambda / static_cast<double>(set.size()) * ss;
}

}  // namespace

double grouped_penalty(const LinearModel& model, const FeatureGroups& groups,
                       const PenaltyConfig& cfg) {
  cfg.validate();
  if (groups.dimension() != model.dimension()) {
    throw DataError("grouped_penalty: groups cover dimension " +
                    std::to_string(groups.dimension()) + ", model has " +
                    std::to_string(model.dimension()));
  }
  return group_term(model, groups.causal(), cfg.lambda_c) +
         group_term(model, groups.spurious(), cfg.lambda_s) +
         group_term(model, groups.remaining(), cfg.lambda_r);
}

double total_loss(const LinearModel& model, const DesignMatrix& data,
                  const LabelVector& labels, const FeatureGroups& groups,
                  const PenaltyConfig& cfg) {
  const std::vector<double> probs = predict_proba(model, data);
  return bce_loss(probs, labels) + grouped_penalty(model, groups, cfg);
}

std::vector<double> penalty_coefficients(const FeatureGroups& groups,
                                         const PenaltyConfig& cfg) {
  cfg.validate();
  std::vector<double> coef(groups.dimension(), 0.0);
  const auto fill = [&](const std::vector<std::size_t>& set, double lambda) {
    if (set.empty()) return;
    const double c = 2.0 * lambda / static_cast<double>(set.size());
    for (std::size_t j : set) coef[j] = c;
  };
  fill(groups.causal(), cfg.lambda_c);
  fill(groups.spurious(), cfg.lambda_s);
  fill(groups.remaining(), cfg.lambda_r);
  return coef;
}

Gradient gradient(const LinearModel& model, const DesignMatrix& data,
                  const LabelVector& labels, const FeatureGroups& groups,
                  const PenaltyConfig& cfg) {
  if (data.rows() == 0) throw DataError("gradient: empty batch");
  if (data.rows() != labels.size()) {
    throw DataError("gradient: row/label count mismatch");
  }
  if (data.cols() != model.dimension() ||
      groups.dimension() != model.dimension()) {
    throw DataError("gradient: dimension mismatch");
  }

  const double inv_n = 1.0 / static_cast<double>(data.rows());
  Gradient g;
  g.weights.assign(model.dimension(), 0.0);
  double bias_acc = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double p = sigmoid(data.row_dot(i, model.weights) + model.bias);
    const double r = p - static_cast<double>(labels[i]);
    data.add_row_scaled(i, r * inv_n, g.weights);
    bias_acc += r;
  }
  g.bias = bias_acc * inv_n;

  const std::vector<double> coef = penalty_coefficients(groups, cfg);
  for (std::size_t j = 0; j < g.weights.size(); ++j) {
    g.weights[j] += coef[j] * model.weights[j];
  }
  return g;
}

}  // namespace causreg
