#include "causreg/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "causreg/rng.hpp"

namespace causreg {

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, double learning_rate) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw DataError("adam_step: parameter/gradient/state size mismatch");
  }
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericError("adam_step: non-finite gradient at index " +
                         std::to_string(i));
    }
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
  }
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (patience < 1) throw ConfigError("patience must be >= 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (batch_size && *batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be >= 0");
}

double TrainResult::best_val_loss() const {
  return *std::min_element(val_loss_history.begin(), val_loss_history.end());
}

double effective_learning_rate(const TrainConfig& tcfg,
                               const PenaltyConfig& penalty) {
  if (!tcfg.auto_adjust_lr) return tcfg.learning_rate;
  const double lmax =
      std::max({penalty.lambda_c, penalty.lambda_s, penalty.lambda_r});
  return tcfg.learning_rate / std::max(1.0, std::log10(1.0 + lmax));
}

TrainResult train(const DesignMatrix& train_data, const LabelVector& train_labels,
                  const DesignMatrix& val_data, const LabelVector& val_labels,
                  const FeatureGroups& groups, const PenaltyConfig& penalty,
                  const TrainConfig& tcfg) {
  tcfg.validate();
  penalty.validate();
  if (val_data.rows() == 0) throw DataError("train: validation set is empty");
  if (train_data.rows() == 0) throw DataError("train: training set is empty");
  if (train_data.rows() != train_labels.size() ||
      val_data.rows() != val_labels.size()) {
    throw DataError("train: row/label count mismatch");
  }
  if (train_data.cols() != val_data.cols() ||
      train_data.cols() != groups.dimension()) {
    throw DataError("train: feature dimension mismatch");
  }

  const std::size_t d = train_data.cols();
  const double lr = effective_learning_rate(tcfg, penalty);

  LinearModel model;
  model.weights.assign(d, 0.0);
  Rng rng(tcfg.seed);
  if (tcfg.init_scale > 0.0) {
    for (double& w : model.weights) w = tcfg.init_scale * rng.normal();
  }

  AdamState state(d + 1);
  std::vector<double> flat_grad(d + 1, 0.0);

  std::vector<std::size_t> order(train_data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  LinearModel best = model;
  double best_val = std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;

  const auto apply_grad = [&](const Gradient& g) {
    std::copy(g.weights.begin(), g.weights.end(), flat_grad.begin());
    flat_grad[d] = g.bias;
    std::vector<double> params(d + 1);
    std::copy(model.weights.begin(), model.weights.end(), params.begin());
    params[d] = model.bias;
    adam_step(state, params, flat_grad, lr);
    std::copy(params.begin(), params.begin() + static_cast<long>(d),
              model.weights.begin());
    model.bias = params[d];
  };

  for (int epoch = 1; epoch <= tcfg.max_epochs; ++epoch) {
    if (!tcfg.batch_size || *tcfg.batch_size >= train_data.rows()) {
      apply_grad(gradient(model, train_data, train_labels, groups, penalty));
    } else {
      rng.shuffle(order);
      const std::size_t bs = *tcfg.batch_size;
      for (std::size_t start = 0; start < order.size(); start += bs) {
        const std::size_t stop = std::min(start + bs, order.size());
        // Materialize the mini-batch; batches are small by construction.
        std::vector<std::vector<std::uint32_t>> bin_rows;
        std::vector<double> dense_vals;
        std::vector<int> ys;
        ys.reserve(stop - start);
        for (std::size_t k = start; k < stop; ++k) {
          const std::size_t i = order[k];
          if (train_data.is_binary()) {
            bin_rows.push_back(train_data.binary_row(i));
          } else {
            const auto r = train_data.dense_row(i);
            dense_vals.insert(dense_vals.end(), r.begin(), r.end());
          }
          ys.push_back(train_labels[i]);
        }
        const DesignMatrix batch =
            train_data.is_binary()
                ? DesignMatrix::binary(d, std::move(bin_rows))
                : DesignMatrix::dense(d, std::move(dense_vals));
        apply_grad(gradient(model, batch, LabelVector(std::move(ys)), groups,
                            penalty));
      }
    }

    const double train_loss =
        total_loss(model, train_data, train_labels, groups, penalty);
    const double val_loss =
        total_loss(model, val_data, val_labels, groups, penalty);
    if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) {
      throw NumericError("train: loss diverged at epoch " +
                         std::to_string(epoch) + " (lr=" + std::to_string(lr) +
                         ")");
    }
    result.train_loss_history.push_back(train_loss);
    result.val_loss_history.push_back(val_loss);
    result.epochs_run = epoch;

    if (val_loss < best_val) {
      best_val = val_loss;
      best = model;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
    }
    if (epochs_since_best >= tcfg.patience) {
      result.stopped_early = true;
      break;
    }
  }

  result.model = std::move(best);
  return result;
}

}  // namespace causreg
