#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causreg/dataset.hpp"
#include "causreg/optimizer.hpp"
#include "causreg/types.hpp"

namespace causreg {

/// The penalty-strength search range.
inline const std::vector<double> kDefaultLambdaGrid = {
    0.0, 0.0001, 0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};

enum class ConstraintMode { paper, none };
enum class SelectionMode { ctf_validation, fairness };

ConstraintMode constraint_mode_from_string(const std::string& s);
SelectionMode selection_mode_from_string(const std::string& s);

struct GridSpec {
  std::vector<double> lambda_c_values = kDefaultLambdaGrid;
  std::vector<double> lambda_s_values = kDefaultLambdaGrid;
  std::vector<double> lambda_r_values = kDefaultLambdaGrid;
  ConstraintMode constraint = ConstraintMode::paper;

  // Admissible triples in ascending (lambda_c, lambda_s, lambda_r) order.
  // Under the paper constraint only lambda_s >= lambda_r >= lambda_c with
  // lambda_s > lambda_c survive.
  std::vector<PenaltyConfig> enumerate() const;
};

using MetricMap = std::map<std::string, double>;

/// All applicable metrics for one trained model: test accuracy/F1, validation
/// accuracy and BCE, counterfactual accuracies where twins exist, fairness
/// deltas where a two-group sensitive attribute exists, and the top-10 causal
/// fraction when causal features are annotated.
MetricMap evaluate_model(const LinearModel& model, const DatasetBundle& bundle);

struct SeedRun {
  std::uint64_t seed = 0;
  MetricMap metrics;
};

struct Aggregate {
  MetricMap mean;
  MetricMap std_dev;  // sample standard deviation; 0 when single_seed
  bool single_seed = false;
};

Aggregate aggregate_runs(const std::vector<SeedRun>& runs);

/// Train/evaluate the same setting under seeds seed0..seed0+k-1.
std::vector<SeedRun> repeat_seeds(const DatasetBundle& bundle,
                                  const PenaltyConfig& penalty,
                                  const TrainConfig& tcfg, int k, int jobs = 1);

struct CandidateResult {
  PenaltyConfig lambda;
  std::vector<SeedRun> per_seed;
  Aggregate aggregate;
};

struct BaselineRow {
  std::string name;
  bool skipped = false;
  std::string skip_reason;
  PenaltyConfig lambda;  // the selected shared-lambda triple
  std::vector<SeedRun> per_seed;
  Aggregate aggregate;
};

struct ExperimentReport {
  std::vector<CandidateResult> settings;
  std::optional<std::size_t> selected;
  std::string selection_criterion;
  std::vector<BaselineRow> baselines;
  int num_seeds = 1;
  std::uint64_t seed0 = 0;
};

/// Train every admissible triple under every seed and pick the best:
///  - ctf_validation: maximize mean counterfactual-validation accuracy
///    (falls back to minimizing validation BCE, with a warning, when the
///    bundle has no counterfactual validation split);
///  - fairness: among triples within 0.01 mean validation accuracy of the
///    best, minimize mean validation delta_eo.
/// Exact ties break toward the lexicographically smallest triple.
ExperimentReport grid_search(const DatasetBundle& bundle, const GridSpec& grid,
                             const TrainConfig& tcfg, SelectionMode selection,
                             int num_seeds, int jobs = 1);

/// Baseline rows trained and selected with the same protocol as grid
/// candidates: plain L2 (shared lambda), feature selection (spurious columns
/// deleted), data augmentation (train plus counterfactual twins), and L2 on a
/// dense embedding bundle when one is supplied.
std::vector<BaselineRow> run_baselines(
    const DatasetBundle& bundle, const GridSpec& grid, const TrainConfig& tcfg,
    SelectionMode selection, int num_seeds, int jobs = 1,
    const DatasetBundle* glove_bundle = nullptr);

struct SweepPoint {
  char axis = 'c';  // 'c', 's' or 'r'
  PenaltyConfig lambda;
  Aggregate aggregate;
};

struct SweepTable {
  std::vector<SweepPoint> points;
  // Largest |mean metric at any point - mean metric at the all-zero origin|.
  double max_change(char axis, const std::string& metric) const;
};

/// One-factor-at-a-time sensitivity sweep from the all-zero triple. The
/// shared origin is computed once and attached to all three axes.
SweepTable lambda_sweep(const DatasetBundle& bundle, const TrainConfig& tcfg,
                        const std::vector<double>& values = kDefaultLambdaGrid,
                        int num_seeds = 1, int jobs = 1);

/// Fixed reference setting for datasets without a counterfactual validation
/// split: (lambda_c, lambda_s, lambda_r) = (0, 100, 10).
PenaltyConfig recommended_defaults();

}  // namespace causreg
