#pragma once

#include <span>
#include <vector>

#include "causreg/types.hpp"

namespace causreg {

// Probability clamp used inside bce_loss so log(0) can never occur.
inline constexpr double kBceClip = 1e-12;

/// sigmoid(<x,w> + b). Stable for any finite logit; the result is clamped
/// into the open interval (0,1) so downstream logs stay finite.
double predict_proba(const LinearModel& model, std::span<const double> x);
double predict_proba(const LinearModel& model, const DesignMatrix& data,
                     std::size_t row);
std::vector<double> predict_proba(const LinearModel& model,
                                  const DesignMatrix& data);

/// Numerically stable logistic function on a raw logit, clamped to (0,1).
double sigmoid(double logit);

/// Mean binary cross entropy. Probabilities are clamped to
/// [kBceClip, 1-kBceClip] before the logs.
double bce_loss(std::span<const double> probs, const LabelVector& labels);

/// Size-normalized grouped L2 penalty:
///   lc/|C| sum_C w^2  +  ls/|S| sum_S w^2  +  lr/|R| sum_R w^2.
/// Empty groups contribute 0 (no division by zero). The bias is not penalized.
double grouped_penalty(const LinearModel& model, const FeatureGroups& groups,
                       const PenaltyConfig& cfg);

/// bce_loss over all rows plus grouped_penalty.
double total_loss(const LinearModel& model, const DesignMatrix& data,
                  const LabelVector& labels, const FeatureGroups& groups,
                  const PenaltyConfig& cfg);

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Analytic gradient of total_loss:
///   dL/dw = X^T (p - y) / n + 2 lambda_g / |G| * w  (per feature's group)
///   dL/db = mean(p - y)
Gradient gradient(const LinearModel& model, const DesignMatrix& data,
                  const LabelVector& labels, const FeatureGroups& groups,
                  const PenaltyConfig& cfg);

/// Per-feature penalty-gradient coefficients 2*lambda_g/|G|, precomputed once
/// per training run.
std::vector<double> penalty_coefficients(const FeatureGroups& groups,
                                         const PenaltyConfig& cfg);

}  // namespace causreg
