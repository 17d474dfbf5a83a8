#include <cmath>
#include <tuple>

#include "causreg/experiments.hpp"
#include "causreg/synthetic.hpp"
#include "doctest.h"

using namespace causreg;

namespace {

SynthConfig small_planted(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n = 500;
  cfg.d = 24;
  cfg.n_causal = 6;
  cfg.n_spurious = 6;
  cfg.spurious_train_corr = 0.95;
  return cfg;
}

TrainConfig fast_train() {
  TrainConfig t;
  t.max_epochs = 80;
  t.patience = 20;
  t.batch_size = 32;
  t.learning_rate = 0.01;
  t.auto_adjust_lr = false;
  return t;
}

}  // namespace

TEST_CASE("grid enumeration") {
  SUBCASE("paper constraint matches a brute-force filter over 9^3 triples") {
    GridSpec grid;  // default value lists, paper constraint
    const auto triples = grid.enumerate();
    std::size_t expected = 0;
    for (double lc : kDefaultLambdaGrid) {
      for (double ls : kDefaultLambdaGrid) {
        for (double lr : kDefaultLambdaGrid) {
          if (ls >= lr && lr >= lc && ls > lc) ++expected;
        }
      }
    }
    CHECK(triples.size() == expected);
    CHECK(expected == 156);  // C(11,3) non-decreasing triples minus 9 constant
    for (const auto& p : triples) CHECK(p.satisfies_search_constraint());
  }
  SUBCASE("unconstrained mode enumerates the full cross product") {
    GridSpec grid;
    grid.constraint = ConstraintMode::none;
    CHECK(grid.enumerate().size() == 9 * 9 * 9);
  }
  SUBCASE("triples come out in ascending lexicographic order") {
    GridSpec grid;
    const auto triples = grid.enumerate();
    for (std::size_t i = 1; i < triples.size(); ++i) {
      const auto& a = triples[i - 1];
      const auto& b = triples[i];
      CHECK(std::tie(a.lambda_c, a.lambda_s, a.lambda_r) <
            std::tie(b.lambda_c, b.lambda_s, b.lambda_r));
    }
  }
  SUBCASE("admits the reported settings with lambda_r = lambda_c = 0") {
    const PenaltyConfig p{0, 10, 0};
    CHECK(p.satisfies_search_constraint());
  }
}

TEST_CASE("recommended_defaults") {
  const PenaltyConfig p = recommended_defaults();
  CHECK(p.lambda_c == 0.0);
  CHECK(p.lambda_s == 100.0);
  CHECK(p.lambda_r == 10.0);
  CHECK(p.lambda_c <= 0.01);
  CHECK(p.lambda_s >= 1.0);
  CHECK(p.lambda_r >= 1.0);
  CHECK(p.satisfies_search_constraint());
}

TEST_CASE("repeat_seeds") {
  const DatasetBundle b = synth_generate(small_planted(3));
  const TrainConfig tcfg = fast_train();

  SUBCASE("k=1 reports zero std with the single-seed flag") {
    const auto runs = repeat_seeds(b, PenaltyConfig{0, 1, 0}, tcfg, 1);
    const Aggregate agg = aggregate_runs(runs);
    CHECK(agg.single_seed);
    for (const auto& [k, v] : agg.std_dev) CHECK(v == 0.0);
  }
  SUBCASE("seeds form the deterministic sequence seed0..seed0+k-1") {
    TrainConfig t = tcfg;
    t.seed = 100;
    const auto runs = repeat_seeds(b, PenaltyConfig{0, 1, 0}, t, 3);
    CHECK(runs[0].seed == 100);
    CHECK(runs[1].seed == 101);
    CHECK(runs[2].seed == 102);
  }
  SUBCASE("full-batch randomness comes from the init alone") {
    TrainConfig t = tcfg;
    t.batch_size.reset();
    t.init_scale = 0.0;  // no randomness left anywhere
    const auto runs = repeat_seeds(b, PenaltyConfig{0, 1, 0}, t, 3);
    const Aggregate agg = aggregate_runs(runs);
    for (const auto& [k, v] : agg.std_dev) CHECK(v == 0.0);
  }
  SUBCASE("parallel execution returns the same runs as serial") {
    const auto serial = repeat_seeds(b, PenaltyConfig{0, 1, 0}, tcfg, 4, 1);
    const auto parallel = repeat_seeds(b, PenaltyConfig{0, 1, 0}, tcfg, 4, 2);
    for (int i = 0; i < 4; ++i) {
      CHECK(serial[i].seed == parallel[i].seed);
      CHECK(serial[i].metrics == parallel[i].metrics);
    }
  }
}

TEST_CASE("grid_search") {
  const DatasetBundle b = synth_generate(small_planted(7));
  const TrainConfig tcfg = fast_train();

  SUBCASE("degenerate single-triple grid yields exactly one candidate row") {
    GridSpec grid;
    grid.lambda_c_values = {0.0};
    grid.lambda_s_values = {100.0};
    grid.lambda_r_values = {100.0};
    const ExperimentReport rep =
        grid_search(b, grid, tcfg, SelectionMode::ctf_validation, 2);
    CHECK(rep.settings.size() == 1);
    REQUIRE(rep.selected.has_value());
    CHECK(*rep.selected == 0);
    CHECK(rep.selection_criterion == "ctf_validation");
    CHECK(rep.settings[0].per_seed.size() == 2);
  }

  SUBCASE("planted-spurious bundle selects a triple with lambda_s > lambda_c") {
    GridSpec grid;
    grid.lambda_c_values = {0.0, 1.0, 100.0};
    grid.lambda_s_values = {0.0, 1.0, 100.0};
    grid.lambda_r_values = {0.0};
    grid.constraint = ConstraintMode::none;  // let the data decide
    const ExperimentReport rep =
        grid_search(b, grid, tcfg, SelectionMode::ctf_validation, 2);
    REQUIRE(rep.selected.has_value());
    const PenaltyConfig& sel = rep.settings[*rep.selected].lambda;
    CHECK(sel.lambda_s > sel.lambda_c);
  }

  SUBCASE("argmax correctness with lexicographic ties") {
    GridSpec grid;
    grid.lambda_c_values = {0.0};
    grid.lambda_s_values = {0.1, 1.0, 10.0};
    grid.lambda_r_values = {0.0, 0.1};
    const ExperimentReport rep =
        grid_search(b, grid, tcfg, SelectionMode::ctf_validation, 1);
    REQUIRE(rep.selected.has_value());
    const double best =
        rep.settings[*rep.selected].aggregate.mean.at("ctf_val_accuracy");
    for (std::size_t i = 0; i < rep.settings.size(); ++i) {
      const double acc = rep.settings[i].aggregate.mean.at("ctf_val_accuracy");
      CHECK(acc <= best);
      if (acc == best) {
        // The winner is the lexicographically smallest among exact ties.
        const auto& s = rep.settings[*rep.selected].lambda;
        const auto& c = rep.settings[i].lambda;
        CHECK(std::tie(s.lambda_c, s.lambda_s, s.lambda_r) <=
              std::tie(c.lambda_c, c.lambda_s, c.lambda_r));
      }
    }
  }

  SUBCASE("empty admissible grid is an error") {
    GridSpec grid;
    grid.lambda_c_values = {5.0};
    grid.lambda_s_values = {5.0};
    grid.lambda_r_values = {5.0};  // all-equal violates lambda_s > lambda_c
    CHECK_THROWS_AS(grid_search(b, grid, tcfg, SelectionMode::ctf_validation, 1),
                    ConfigError);
  }

  SUBCASE("missing ctf validation falls back to validation BCE") {
    DatasetBundle nb = b;
    nb.ctf_validation.reset();
    GridSpec grid;
    grid.lambda_c_values = {0.0};
    grid.lambda_s_values = {1.0};
    grid.lambda_r_values = {0.0};
    const ExperimentReport rep =
        grid_search(nb, grid, tcfg, SelectionMode::ctf_validation, 1);
    CHECK(rep.selection_criterion == "validation_bce");
  }
}

TEST_CASE("run_baselines") {
  SynthConfig scfg = small_planted(11);
  const DatasetBundle b = synth_generate(scfg);
  const TrainConfig tcfg = fast_train();
  GridSpec grid;
  grid.lambda_c_values = {0.0, 1.0};
  grid.lambda_s_values = {0.0, 1.0};
  grid.lambda_r_values = {0.0, 1.0};

  const auto rows =
      run_baselines(b, grid, tcfg, SelectionMode::ctf_validation, 2);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].name == "l2");
  CHECK(!rows[0].skipped);
  CHECK(rows[0].lambda.lambda_c == rows[0].lambda.lambda_s);
  CHECK(rows[0].lambda.lambda_s == rows[0].lambda.lambda_r);

  CHECK(rows[1].name == "l2_glove");
  CHECK(rows[1].skipped);  // no embedding bundle supplied

  CHECK(rows[2].name == "feature_selection");
  CHECK(!rows[2].skipped);

  CHECK(rows[3].name == "data_augmentation");
  CHECK(!rows[3].skipped);

  SUBCASE("feature-selection baseline trains without the spurious columns") {
    const DatasetBundle reduced = drop_spurious_features(b);
    CHECK(reduced.train.x.cols() == b.train.x.cols() - b.groups.spurious().size());
    CHECK(reduced.groups.spurious().empty());
    for (const auto& name : reduced.feature_names) CHECK(name[0] != 's');
  }

  SUBCASE("augmentation baseline doubles the training rows") {
    const DatasetBundle augmented = augment_train_with_counterfactuals(b);
    CHECK(augmented.train.x.rows() == 2 * b.train.x.rows());
    CHECK(augmented.test.x.rows() == b.test.x.rows());
  }

  SUBCASE("L2 row equals the grouped row at the same shared lambda") {
    GridSpec one;
    one.lambda_c_values = {1.0};
    one.lambda_s_values = {1.0};
    one.lambda_r_values = {1.0};
    one.constraint = ConstraintMode::none;
    const ExperimentReport rep =
        grid_search(b, one, tcfg, SelectionMode::ctf_validation, 2);
    const auto l2 = run_baselines(b, one, tcfg, SelectionMode::ctf_validation, 2);
    REQUIRE(rep.settings.size() == 1);
    for (const auto& [key, value] : rep.settings[0].aggregate.mean) {
      CHECK(std::abs(l2[0].aggregate.mean.at(key) - value) < 1e-10);
    }
  }
}

TEST_CASE("lambda_sweep") {
  const DatasetBundle b = synth_generate(small_planted(13));
  const TrainConfig tcfg = fast_train();
  const std::vector<double> values{0.0, 1.0, 100.0};
  const SweepTable table = lambda_sweep(b, tcfg, values, 1);

  SUBCASE("three axes, shared origin with identical metrics") {
    CHECK(table.points.size() == 9);
    const SweepPoint* origins[3] = {nullptr, nullptr, nullptr};
    int idx = 0;
    for (const auto& p : table.points) {
      if (p.lambda.lambda_c == 0 && p.lambda.lambda_s == 0 &&
          p.lambda.lambda_r == 0) {
        origins[idx++] = &p;
      }
    }
    REQUIRE(idx == 3);
    CHECK(origins[0]->aggregate.mean == origins[1]->aggregate.mean);
    CHECK(origins[1]->aggregate.mean == origins[2]->aggregate.mean);
  }

  SUBCASE("max_change is measured against the origin") {
    const double change = table.max_change('s', "ctf_accuracy");
    double expect = 0.0;
    double origin = 0.0;
    for (const auto& p : table.points) {
      if (p.axis != 's') continue;
      if (p.lambda.lambda_s == 0.0) origin = p.aggregate.mean.at("ctf_accuracy");
    }
    for (const auto& p : table.points) {
      if (p.axis != 's') continue;
      expect = std::max(expect,
                        std::abs(p.aggregate.mean.at("ctf_accuracy") - origin));
    }
    CHECK(change == expect);
  }
}
