#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "causreg/dataset.hpp"
#include "causreg/types.hpp"

namespace causreg {

// Decision rule used everywhere: predict 1 iff p >= 0.5.
inline constexpr double kDecisionThreshold = 0.5;

std::vector<int> threshold_predictions(std::span<const double> probs);

double accuracy(std::span<const double> probs, const LabelVector& labels);

/// F1 of the positive class. Zero true positives gives 0 (logged when there
/// are neither predicted nor actual positives).
double f1(std::span<const double> probs, const LabelVector& labels);

/// Equal opportunity difference between sensitive groups i and j:
///   |Pr(yhat=1 | S=i, y=1) - Pr(yhat=1 | S=j, y=1)|
/// Errors if either group has no positive-label rows.
double delta_eo(std::span<const double> probs, const LabelVector& labels,
                const SensitiveAssignment& sens, const std::string& group_i,
                const std::string& group_j);

/// Demographic parity difference: |Pr(yhat=1 | S=i) - Pr(yhat=1 | S=j)|.
/// Errors if either group is empty.
double delta_dp(std::span<const double> probs, const SensitiveAssignment& sens,
                const std::string& group_i, const std::string& group_j);

struct FairnessReport {
  double delta_eo = 0.0;  // absolute
  double delta_dp = 0.0;  // absolute
  // Signed i-minus-j values, groups ordered lexicographically.
  double signed_eo = 0.0;
  double signed_dp = 0.0;
  std::map<std::string, double> positive_rate;       // Pr(yhat=1 | S=g)
  std::map<std::string, double> true_positive_rate;  // Pr(yhat=1 | S=g, y=1)
};

/// Full fairness readout; requires exactly two sensitive groups.
FairnessReport fairness_report(std::span<const double> probs,
                               const LabelVector& labels,
                               const SensitiveAssignment& sens);

/// For every n in n_list: rank features by |weight| descending (ties broken
/// by lower index) and report the fraction of causal features in the top n.
std::vector<double> causal_fraction_topn(const LinearModel& model,
                                         const FeatureGroups& groups,
                                         const std::vector<std::size_t>& n_list);

/// Plain accuracy on a counterfactual split (its labels are already the
/// flipped ones). Errors when the split is empty.
double counterfactual_accuracy(const LinearModel& model, const SplitData& ctf);

}  // namespace causreg
