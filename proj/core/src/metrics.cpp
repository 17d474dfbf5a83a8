#include "causreg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "causreg/model.hpp"

namespace causreg {

std::vector<int> threshold_predictions(std::span<const double> probs) {
  std::vector<int> preds(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    preds[i] = probs[i] >= kDecisionThreshold ? 1 : 0;
  }
  return preds;
}

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a == 0) throw DataError(std::string(what) + ": empty input");
  if (a != b) throw DataError(std::string(what) + ": length mismatch");
}

}  // namespace

double accuracy(std::span<const double> probs, const LabelVector& labels) {
  check_lengths(probs.size(), labels.size(), "accuracy");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const int pred = probs[i] >= kDecisionThreshold ? 1 : 0;
    if (pred == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(probs.size());
}

double f1(std::span<const double> probs, const LabelVector& labels) {
  check_lengths(probs.size(), labels.size(), "f1");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const int pred = probs[i] >= kDecisionThreshold ? 1 : 0;
    if (pred == 1 && labels[i] == 1) ++tp;
    if (pred == 1 && labels[i] == 0) ++fp;
    if (pred == 0 && labels[i] == 1) ++fn;
  }
  if (tp == 0) {
    if (fp == 0 && fn == 0) {
      std::cerr << "[causreg] f1: no predicted and no actual positives, "
                   "reporting 0\n";
    }
    return 0.0;
  }
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

namespace {

// Pr(yhat=1) within the rows of one sensitive group, optionally restricted to
// label-1 rows. Counts are exposed so callers can detect undefined cases.
struct GroupRate {
  std::size_t denom = 0;
  std::size_t numer = 0;
  double rate() const {
    return static_cast<double>(numer) / static_cast<double>(denom);
  }
};

GroupRate group_positive_rate(std::span<const double> probs,
                              const LabelVector* labels,
                              const SensitiveAssignment& sens,
                              const std::string& group) {
  GroupRate r;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (sens.values[i] != group) continue;
    if (labels && (*labels)[i] != 1) continue;
    ++r.denom;
    if (probs[i] >= kDecisionThreshold) ++r.numer;
  }
  return r;
}

void check_sens(std::span<const double> probs, const SensitiveAssignment& sens,
                const char* what) {
  if (probs.empty()) throw DataError(std::string(what) + ": empty input");
  if (sens.values.size() != probs.size()) {
    throw DataError(std::string(what) + ": sensitive assignment covers " +
                    std::to_string(sens.values.size()) + " rows, expected " +
                    std::to_string(probs.size()));
  }
}

}  // namespace

double delta_eo(std::span<const double> probs, const LabelVector& labels,
                const SensitiveAssignment& sens, const std::string& group_i,
                const std::string& group_j) {
  check_sens(probs, sens, "delta_eo");
  check_lengths(probs.size(), labels.size(), "delta_eo");
  const GroupRate ri = group_positive_rate(probs, &labels, sens, group_i);
  const GroupRate rj = group_positive_rate(probs, &labels, sens, group_j);
  if (ri.denom == 0 || rj.denom == 0) {
    throw DataError("delta_eo: group '" + (ri.denom == 0 ? group_i : group_j) +
                    "' has no positive-label rows; conditional is undefined");
  }
  return std::abs(ri.rate() - rj.rate());
}

double delta_dp(std::span<const double> probs, const SensitiveAssignment& sens,
                const std::string& group_i, const std::string& group_j) {
  check_sens(probs, sens, "delta_dp");
  const GroupRate ri = group_positive_rate(probs, nullptr, sens, group_i);
  const GroupRate rj = group_positive_rate(probs, nullptr, sens, group_j);
  if (ri.denom == 0 || rj.denom == 0) {
    throw DataError("delta_dp: group '" + (ri.denom == 0 ? group_i : group_j) +
                    "' is empty");
  }
  return std::abs(ri.rate() - rj.rate());
}

FairnessReport fairness_report(std::span<const double> probs,
                               const LabelVector& labels,
                               const SensitiveAssignment& sens) {
  check_sens(probs, sens, "fairness_report");
  check_lengths(probs.size(), labels.size(), "fairness_report");
  const std::vector<std::string> groups = sens.distinct_groups();
  if (groups.size() != 2) {
    throw DataError("fairness_report: expected exactly 2 sensitive groups, got " +
                    std::to_string(groups.size()));
  }
  const std::string& gi = groups[0];
  const std::string& gj = groups[1];

  FairnessReport rep;
  for (const auto& g : groups) {
    const GroupRate pr = group_positive_rate(probs, nullptr, sens, g);
    rep.positive_rate[g] = pr.rate();
    const GroupRate tpr = group_positive_rate(probs, &labels, sens, g);
    if (tpr.denom == 0) {
      throw DataError("fairness_report: group '" + g +
                      "' has no positive-label rows");
    }
    rep.true_positive_rate[g] = tpr.rate();
  }
  rep.signed_eo = rep.true_positive_rate[gi] - rep.true_positive_rate[gj];
  rep.signed_dp = rep.positive_rate[gi] - rep.positive_rate[gj];
  rep.delta_eo = std::abs(rep.signed_eo);
  rep.delta_dp = std::abs(rep.signed_dp);
  return rep;
}

std::vector<double> causal_fraction_topn(const LinearModel& model,
                                         const FeatureGroups& groups,
                                         const std::vector<std::size_t>& n_list) {
  const std::size_t d = model.dimension();
  if (groups.dimension() != d) {
    throw DataError("causal_fraction_topn: dimension mismatch");
  }
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(model.weights[a]);
    const double mb = std::abs(model.weights[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });

  std::vector<double> out;
  out.reserve(n_list.size());
  for (std::size_t n : n_list) {
    if (n > d) throw DataError("causal_fraction_topn: n exceeds dimension");
    if (n == 0) throw DataError("causal_fraction_topn: n must be >= 1");
    std::size_t causal_count = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (groups.kind_of(idx[k]) == GroupKind::causal) ++causal_count;
    }
    out.push_back(static_cast<double>(causal_count) / static_cast<double>(n));
  }
  return out;
}

double counterfactual_accuracy(const LinearModel& model, const SplitData& ctf) {
  if (ctf.x.rows() == 0) {
    throw DataError("counterfactual_accuracy: counterfactual split is empty");
  }
  const std::vector<double> probs = predict_proba(model, ctf.x);
  return accuracy(probs, ctf.y);
}

}  // namespace causreg
