#include "causreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>
#include <tuple>

#include "causreg/metrics.hpp"
#include "causreg/model.hpp"

namespace causreg {

ConstraintMode constraint_mode_from_string(const std::string& s) {
  if (s == "paper") return ConstraintMode::paper;
  if (s == "none") return ConstraintMode::none;
  throw ConfigError("unknown constraint mode: '" + s + "'");
}

SelectionMode selection_mode_from_string(const std::string& s) {
  if (s == "ctf_validation") return SelectionMode::ctf_validation;
  if (s == "fairness") return SelectionMode::fairness;
  throw ConfigError("unknown selection mode: '" + s + "'");
}

std::vector<PenaltyConfig> GridSpec::enumerate() const {
  const auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const std::vector<double> cs = sorted(lambda_c_values);
  const std::vector<double> ss = sorted(lambda_s_values);
  const std::vector<double> rs = sorted(lambda_r_values);
  std::vector<PenaltyConfig> out;
  for (double lc : cs) {
    for (double ls : ss) {
      for (double lr : rs) {
        const PenaltyConfig p{lc, ls, lr};
        p.validate();
        if (constraint == ConstraintMode::paper &&
            !p.satisfies_search_constraint()) {
          continue;
        }
        out.push_back(p);
      }
    }
  }
  // Ascending (lambda_c, lambda_s, lambda_r); the loop order almost gives
  // this already, kept explicit for the tie-break contract.
  std::sort(out.begin(), out.end(), [](const PenaltyConfig& a, const PenaltyConfig& b) {
    return std::tie(a.lambda_c, a.lambda_s, a.lambda_r) <
           std::tie(b.lambda_c, b.lambda_s, b.lambda_r);
  });
  return out;
}

namespace {

// Runs fn(0..njobs-1) on up to `jobs` threads; order of completion does not
// affect results because every job writes only its own slot.
void parallel_for(std::size_t njobs, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || njobs <= 1) {
    for (std::size_t i = 0; i < njobs; ++i) fn(i);
    return;
  }
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), njobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= njobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

MetricMap evaluate_model(const LinearModel& model, const DatasetBundle& bundle) {
  MetricMap m;
  const std::vector<double> test_probs = predict_proba(model, bundle.test.x);
  m["test_accuracy"] = accuracy(test_probs, bundle.test.y);
  m["test_f1"] = f1(test_probs, bundle.test.y);

  const std::vector<double> val_probs = predict_proba(model, bundle.validation.x);
  m["val_accuracy"] = accuracy(val_probs, bundle.validation.y);
  m["val_bce"] = bce_loss(val_probs, bundle.validation.y);

  if (bundle.ctf_test) {
    m["ctf_accuracy"] = counterfactual_accuracy(model, *bundle.ctf_test);
  }
  if (bundle.ctf_validation) {
    m["ctf_val_accuracy"] = counterfactual_accuracy(model, *bundle.ctf_validation);
  }
  if (bundle.test.sensitive &&
      bundle.test.sensitive->distinct_groups().size() == 2) {
    const FairnessReport rep =
        fairness_report(test_probs, bundle.test.y, *bundle.test.sensitive);
    m["delta_eo"] = rep.delta_eo;
    m["delta_dp"] = rep.delta_dp;
  }
  if (bundle.validation.sensitive &&
      bundle.validation.sensitive->distinct_groups().size() == 2) {
    const FairnessReport rep = fairness_report(val_probs, bundle.validation.y,
                                               *bundle.validation.sensitive);
    m["val_delta_eo"] = rep.delta_eo;
    m["val_delta_dp"] = rep.delta_dp;
  }
  if (!bundle.groups.causal().empty() && bundle.groups.dimension() >= 10) {
    m["causal_fraction_top10"] =
        causal_fraction_topn(model, bundle.groups, {10}).front();
  }
  return m;
}

Aggregate aggregate_runs(const std::vector<SeedRun>& runs) {
  if (runs.empty()) throw DataError("aggregate_runs: no runs");
  Aggregate agg;
  agg.single_seed = runs.size() == 1;
  for (const auto& [key, _] : runs.front().metrics) {
    double sum = 0.0;
    for (const SeedRun& r : runs) sum += r.metrics.at(key);
    const double mean = sum / static_cast<double>(runs.size());
    agg.mean[key] = mean;
    if (agg.single_seed) {
      agg.std_dev[key] = 0.0;
    } else {
      double ss = 0.0;
      for (const SeedRun& r : runs) {
        const double d = r.metrics.at(key) - mean;
        ss += d * d;
      }
      agg.std_dev[key] = std::sqrt(ss / static_cast<double>(runs.size() - 1));
    }
  }
  return agg;
}

std::vector<SeedRun> repeat_seeds(const DatasetBundle& bundle,
                                  const PenaltyConfig& penalty,
                                  const TrainConfig& tcfg, int k, int jobs) {
  if (k < 1) throw ConfigError("repeat_seeds: k must be >= 1");
  std::vector<SeedRun> runs(static_cast<std::size_t>(k));
  parallel_for(static_cast<std::size_t>(k), jobs, [&](std::size_t i) {
    TrainConfig cfg = tcfg;
    cfg.seed = tcfg.seed + i;
    const TrainResult res =
        train(bundle.train.x, bundle.train.y, bundle.validation.x,
              bundle.validation.y, bundle.groups, penalty, cfg);
    runs[i] = SeedRun{cfg.seed, evaluate_model(res.model, bundle)};
  });
  return runs;
}

namespace {

// Shared selection machinery for grid candidates and L2-style baselines.
std::size_t select_candidate(const std::vector<CandidateResult>& candidates,
                             SelectionMode selection,
                             const std::string& criterion_used) {
  const auto lex_less = [](const PenaltyConfig& a, const PenaltyConfig& b) {
    return std::tie(a.lambda_c, a.lambda_s, a.lambda_r) <
           std::tie(b.lambda_c, b.lambda_s, b.lambda_r);
  };

  if (selection == SelectionMode::fairness) {
    double best_acc = -1.0;
    for (const auto& c : candidates) {
      best_acc = std::max(best_acc, c.aggregate.mean.at("val_accuracy"));
    }
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto& c = candidates[i];
      if (c.aggregate.mean.at("val_accuracy") < best_acc - 0.01) continue;
      if (best == candidates.size()) {
        best = i;
        continue;
      }
      const double cur = c.aggregate.mean.at("val_delta_eo");
      const double inc = candidates[best].aggregate.mean.at("val_delta_eo");
      if (cur < inc ||
          (cur == inc && lex_less(c.lambda, candidates[best].lambda))) {
        best = i;
      }
    }
    return best;
  }

  // ctf_validation (or its validation-BCE fallback).
  const bool minimize = criterion_used == "validation_bce";
  const std::string key = minimize ? "val_bce" : "ctf_val_accuracy";
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double cur = candidates[i].aggregate.mean.at(key);
    const double inc = candidates[best].aggregate.mean.at(key);
    const bool better = minimize ? cur < inc : cur > inc;
    if (better ||
        (cur == inc && lex_less(candidates[i].lambda, candidates[best].lambda))) {
      best = i;
    }
  }
  return best;
}

std::string resolve_criterion(const DatasetBundle& bundle,
                              SelectionMode selection) {
  if (selection == SelectionMode::fairness) {
    if (!bundle.validation.sensitive ||
        bundle.validation.sensitive->distinct_groups().size() != 2) {
      throw DataError(
          "fairness selection requires a two-group sensitive attribute on the "
          "validation split");
    }
    return "fairness";
  }
  if (bundle.ctf_validation) return "ctf_validation";
  std::cerr << "[causreg] no counterfactual validation split; selecting on "
               "validation BCE instead\n";
  return "validation_bce";
}

std::vector<CandidateResult> run_candidates(
    const DatasetBundle& bundle, const std::vector<PenaltyConfig>& triples,
    const TrainConfig& tcfg, int num_seeds, int jobs) {
  std::vector<CandidateResult> out(triples.size());
  const std::size_t k = static_cast<std::size_t>(num_seeds);
  std::vector<SeedRun> flat(triples.size() * k);
  parallel_for(flat.size(), jobs, [&](std::size_t job) {
    const std::size_t ci = job / k;
    const std::size_t si = job % k;
    TrainConfig cfg = tcfg;
    cfg.seed = tcfg.seed + si;
    const TrainResult res =
        train(bundle.train.x, bundle.train.y, bundle.validation.x,
              bundle.validation.y, bundle.groups, triples[ci], cfg);
    flat[job] = SeedRun{cfg.seed, evaluate_model(res.model, bundle)};
  });
  for (std::size_t ci = 0; ci < triples.size(); ++ci) {
    out[ci].lambda = triples[ci];
    out[ci].per_seed.assign(flat.begin() + static_cast<long>(ci * k),
                            flat.begin() + static_cast<long>((ci + 1) * k));
    out[ci].aggregate = aggregate_runs(out[ci].per_seed);
  }
  return out;
}

}  // namespace

ExperimentReport grid_search(const DatasetBundle& bundle, const GridSpec& grid,
                             const TrainConfig& tcfg, SelectionMode selection,
                             int num_seeds, int jobs) {
  if (num_seeds < 1) throw ConfigError("grid_search: num_seeds must be >= 1");
  const std::vector<PenaltyConfig> triples = grid.enumerate();
  if (triples.empty()) {
    throw ConfigError("grid_search: no admissible penalty triples");
  }
  ExperimentReport report;
  report.selection_criterion = resolve_criterion(bundle, selection);
  report.num_seeds = num_seeds;
  report.seed0 = tcfg.seed;
  report.settings = run_candidates(bundle, triples, tcfg, num_seeds, jobs);
  report.selected =
      select_candidate(report.settings, selection, report.selection_criterion);
  return report;
}

namespace {

BaselineRow l2_protocol(const std::string& name, const DatasetBundle& bundle,
                        const GridSpec& grid, const TrainConfig& tcfg,
                        SelectionMode selection, int num_seeds, int jobs) {
  // Shared-lambda triples over the union of the grid's value lists.
  std::vector<double> values = grid.lambda_c_values;
  values.insert(values.end(), grid.lambda_s_values.begin(),
                grid.lambda_s_values.end());
  values.insert(values.end(), grid.lambda_r_values.begin(),
                grid.lambda_r_values.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<PenaltyConfig> triples;
  triples.reserve(values.size());
  for (double v : values) triples.push_back(PenaltyConfig{v, v, v});

  const std::string criterion = resolve_criterion(bundle, selection);
  std::vector<CandidateResult> candidates =
      run_candidates(bundle, triples, tcfg, num_seeds, jobs);
  const std::size_t best = select_candidate(candidates, selection, criterion);

  BaselineRow row;
  row.name = name;
  row.lambda = candidates[best].lambda;
  row.per_seed = std::move(candidates[best].per_seed);
  row.aggregate = std::move(candidates[best].aggregate);
  return row;
}

BaselineRow skipped_row(const std::string& name, const std::string& reason) {
  BaselineRow row;
  row.name = name;
  row.skipped = true;
  row.skip_reason = reason;
  return row;
}

}  // namespace

std::vector<BaselineRow> run_baselines(const DatasetBundle& bundle,
                                       const GridSpec& grid,
                                       const TrainConfig& tcfg,
                                       SelectionMode selection, int num_seeds,
                                       int jobs,
                                       const DatasetBundle* glove_bundle) {
  std::vector<BaselineRow> rows;

  rows.push_back(
      l2_protocol("l2", bundle, grid, tcfg, selection, num_seeds, jobs));

  if (glove_bundle) {
    rows.push_back(l2_protocol("l2_glove", *glove_bundle, grid, tcfg, selection,
                               num_seeds, jobs));
  } else {
    rows.push_back(skipped_row("l2_glove", "no embedding bundle supplied"));
  }

  if (bundle.groups.spurious().empty()) {
    rows.push_back(
        skipped_row("feature_selection", "no spurious features annotated"));
  } else {
    const DatasetBundle reduced = drop_spurious_features(bundle);
    rows.push_back(l2_protocol("feature_selection", reduced, grid, tcfg,
                               selection, num_seeds, jobs));
  }

  if (!bundle.ctf_train) {
    rows.push_back(skipped_row("data_augmentation",
                               "no counterfactual twins for the training split"));
  } else {
    const DatasetBundle augmented = augment_train_with_counterfactuals(bundle);
    rows.push_back(l2_protocol("data_augmentation", augmented, grid, tcfg,
                               selection, num_seeds, jobs));
  }
  return rows;
}

double SweepTable::max_change(char axis, const std::string& metric) const {
  double origin = 0.0;
  bool have_origin = false;
  for (const SweepPoint& p : points) {
    if (p.axis == axis && p.lambda.lambda_c == 0.0 &&
        p.lambda.lambda_s == 0.0 && p.lambda.lambda_r == 0.0) {
      origin = p.aggregate.mean.at(metric);
      have_origin = true;
      break;
    }
  }
  if (!have_origin) throw DataError("sweep: axis has no all-zero origin point");
  double change = 0.0;
  for (const SweepPoint& p : points) {
    if (p.axis != axis) continue;
    change = std::max(change, std::abs(p.aggregate.mean.at(metric) - origin));
  }
  return change;
}

SweepTable lambda_sweep(const DatasetBundle& bundle, const TrainConfig& tcfg,
                        const std::vector<double>& values, int num_seeds,
                        int jobs) {
  if (values.empty()) throw ConfigError("lambda_sweep: empty value list");
  std::vector<double> vals = values;
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  // The shared origin is trained once and reused on all three axes.
  const std::vector<SeedRun> origin_runs =
      repeat_seeds(bundle, PenaltyConfig{0, 0, 0}, tcfg, num_seeds, jobs);
  const Aggregate origin = aggregate_runs(origin_runs);

  SweepTable table;
  for (char axis : {'c', 's', 'r'}) {
    for (double v : vals) {
      SweepPoint point;
      point.axis = axis;
      point.lambda = PenaltyConfig{axis == 'c' ? v : 0.0, axis == 's' ? v : 0.0,
                                   axis == 'r' ? v : 0.0};
      if (v == 0.0) {
        point.aggregate = origin;
      } else {
        point.aggregate = aggregate_runs(
            repeat_seeds(bundle, point.lambda, tcfg, num_seeds, jobs));
      }
      table.points.push_back(std::move(point));
    }
  }
  return table;
}

PenaltyConfig recommended_defaults() { return PenaltyConfig{0.0, 100.0, 10.0}; }

}  // namespace causreg
