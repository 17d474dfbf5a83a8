#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "causreg/model.hpp"
#include "causreg/types.hpp"

namespace causreg {

/// Adam moment estimates. Sized weights+1: the last slot tracks the bias.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  explicit AdamState(std::size_t n_params) : m(n_params, 0.0), v(n_params, 0.0) {}
};

/// One bias-corrected Adam update over a flat parameter vector.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, double learning_rate);

struct TrainConfig {
  double learning_rate = 1e-3;
  int patience = 10;
  int max_epochs = 500;
  // Rows per mini-batch; empty = full batch (the default: deterministic and
  // fast at these data sizes).
  std::optional<std::size_t> batch_size;
  std::uint64_t seed = 0;
  // Stddev of the normal weight init; 0 starts from the origin.
  double init_scale = 0.01;
  // Shrinks the step size for large penalties:
  //   lr = learning_rate / max(1, log10(1 + max(lc, ls, lr))).
  // Disable to use learning_rate as-is.
  bool auto_adjust_lr = true;

  void validate() const;
};

struct TrainResult {
  LinearModel model;  // snapshot at the minimum validation loss
  int epochs_run = 0;
  std::vector<double> train_loss_history;
  std::vector<double> val_loss_history;
  bool stopped_early = false;

  double best_val_loss() const;
};

/// Effective learning rate after the penalty-dependent adjustment.
double effective_learning_rate(const TrainConfig& tcfg,
                               const PenaltyConfig& penalty);

/// Gradient descent with Adam on total_loss. Tracks validation total_loss
/// after every epoch and stops once it has not improved for `patience`
/// epochs, returning the best-validation snapshot. Deterministic: identical
/// seeds and inputs give bit-identical trajectories.
TrainResult train(const DesignMatrix& train_data, const LabelVector& train_labels,
                  const DesignMatrix& val_data, const LabelVector& val_labels,
                  const FeatureGroups& groups, const PenaltyConfig& penalty,
                  const TrainConfig& tcfg);

}  // namespace causreg
