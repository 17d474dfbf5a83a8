#include <algorithm>
#include <cmath>

#include "causreg/metrics.hpp"
#include "causreg/model.hpp"
#include "causreg/rng.hpp"
#include "doctest.h"

using namespace causreg;

namespace {

// Brute-force counting oracles, written independently of the library path.
struct Counts {
  int tp = 0, fp = 0, tn = 0, fn = 0;
};

Counts count_confusion(const std::vector<double>& probs,
                       const std::vector<int>& labels) {
  Counts c;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const int yhat = probs[i] >= 0.5 ? 1 : 0;
    if (yhat == 1 && labels[i] == 1) c.tp++;
    if (yhat == 1 && labels[i] == 0) c.fp++;
    if (yhat == 0 && labels[i] == 0) c.tn++;
    if (yhat == 0 && labels[i] == 1) c.fn++;
  }
  return c;
}

double accuracy_oracle(const Counts& c) {
  return double(c.tp + c.tn) / double(c.tp + c.tn + c.fp + c.fn);
}

double f1_oracle(const Counts& c) {
  if (c.tp == 0) return 0.0;
  const double prec = double(c.tp) / double(c.tp + c.fp);
  const double rec = double(c.tp) / double(c.tp + c.fn);
  return 2.0 * prec * rec / (prec + rec);
}

double eo_oracle(const std::vector<double>& probs, const std::vector<int>& labels,
                 const std::vector<std::string>& sens, const std::string& gi,
                 const std::string& gj) {
  int ni = 0, pi = 0, nj = 0, pj = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (labels[k] != 1) continue;
    const int yhat = probs[k] >= 0.5 ? 1 : 0;
    if (sens[k] == gi) {
      ni++;
      pi += yhat;
    } else if (sens[k] == gj) {
      nj++;
      pj += yhat;
    }
  }
  return std::abs(double(pi) / double(ni) - double(pj) / double(nj));
}

double dp_oracle(const std::vector<double>& probs,
                 const std::vector<std::string>& sens, const std::string& gi,
                 const std::string& gj) {
  int ni = 0, pi = 0, nj = 0, pj = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const int yhat = probs[k] >= 0.5 ? 1 : 0;
    if (sens[k] == gi) {
      ni++;
      pi += yhat;
    } else if (sens[k] == gj) {
      nj++;
      pj += yhat;
    }
  }
  return std::abs(double(pi) / double(ni) - double(pj) / double(nj));
}

}  // namespace

TEST_CASE("accuracy and f1 basics") {
  SUBCASE("perfect predictions") {
    const std::vector<double> p{0.9, 0.1, 0.8};
    const LabelVector y({1, 0, 1});
    CHECK(accuracy(p, y) == 1.0);
    CHECK(f1(p, y) == 1.0);
  }
  SUBCASE("all wrong") {
    const std::vector<double> p{0.1, 0.9};
    CHECK(accuracy(p, LabelVector({1, 0})) == 0.0);
  }
  SUBCASE("confusion-matrix counting example") {
    const std::vector<double> p{1.0, 1.0, 0.0, 0.0};
    const LabelVector y({1, 0, 1, 0});
    CHECK(accuracy(p, y) == 0.5);
    CHECK(f1(p, y) == 0.5);
  }
  SUBCASE("no predicted and no actual positives gives 0") {
    CHECK(f1(std::vector<double>{0.1, 0.2}, LabelVector({0, 0})) == 0.0);
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(
        accuracy(std::vector<double>{}, LabelVector(std::vector<int>{})),
        DataError);
  }
}

TEST_CASE("delta_eo") {
  const SensitiveAssignment sens{
      "gender", {"a", "a", "a", "a", "b", "b", "x", "x"}};
  SUBCASE("hand-counted 0.25 gap") {
    // Group a: 4 positives, 3 predicted positive. Group b: 2 positives, 1.
    const std::vector<double> p{0.9, 0.9, 0.9, 0.1, 0.9, 0.1, 0.9, 0.1};
    const LabelVector y({1, 1, 1, 1, 1, 1, 1, 1});
    CHECK(delta_eo(p, y, sens, "a", "b") == doctest::Approx(0.25));
    CHECK(delta_eo(p, y, sens, "b", "a") == doctest::Approx(0.25));  // symmetric
  }
  SUBCASE("identical group TPRs give 0") {
    const std::vector<double> p{0.9, 0.1, 0.9, 0.1, 0.9, 0.1, 0.9, 0.9};
    const LabelVector y({1, 1, 1, 1, 1, 1, 0, 0});
    CHECK(delta_eo(p, y, sens, "a", "b") == 0.0);
  }
  SUBCASE("group without positive labels is an error") {
    const std::vector<double> p{0.9, 0.9};
    const SensitiveAssignment s2{"g", {"a", "b"}};
    CHECK_THROWS_AS(delta_eo(p, LabelVector({1, 0}), s2, "a", "b"), DataError);
  }
}

TEST_CASE("delta_dp") {
  SUBCASE("rates 0.6 vs 0.35 -> 0.25") {
    std::vector<double> p;
    std::vector<std::string> sens;
    for (int i = 0; i < 20; ++i) {
      p.push_back(i < 12 ? 0.9 : 0.1);  // 12/20 positive
      sens.push_back("i");
    }
    for (int i = 0; i < 20; ++i) {
      p.push_back(i < 7 ? 0.9 : 0.1);  // 7/20 positive
      sens.push_back("j");
    }
    CHECK(delta_dp(p, SensitiveAssignment{"g", sens}, "i", "j") ==
          doctest::Approx(0.25));
  }
  SUBCASE("equal positive rates give 0") {
    const std::vector<double> p{0.9, 0.1, 0.9, 0.1};
    const SensitiveAssignment s{"g", {"i", "i", "j", "j"}};
    CHECK(delta_dp(p, s, "i", "j") == 0.0);
  }
  SUBCASE("all-positive predictions give 0") {
    const std::vector<double> p{0.9, 0.9, 0.9};
    const SensitiveAssignment s{"g", {"i", "j", "j"}};
    CHECK(delta_dp(p, s, "i", "j") == 0.0);
  }
  SUBCASE("empty group is an error") {
    const std::vector<double> p{0.9};
    const SensitiveAssignment s{"g", {"i"}};
    CHECK_THROWS_AS(delta_dp(p, s, "i", "j"), DataError);
  }
}

TEST_CASE("fairness metrics agree with counting oracles on random tiny sets") {
  Rng rng(314);
  int checked = 0;
  while (checked < 100) {
    const std::size_t n = 2 + rng.below(11);  // n <= 12
    std::vector<double> probs(n);
    std::vector<int> labels(n);
    std::vector<std::string> sens(n);
    for (std::size_t i = 0; i < n; ++i) {
      probs[i] = rng.uniform();
      labels[i] = rng.bernoulli(0.5) ? 1 : 0;
      sens[i] = rng.bernoulli(0.5) ? "i" : "j";
    }
    const Counts c = count_confusion(probs, labels);
    const LabelVector y(labels);
    CHECK(accuracy(probs, y) == accuracy_oracle(c));
    CHECK(f1(probs, y) == f1_oracle(c));

    // Fairness deltas only when defined.
    int pos_i = 0, pos_j = 0, cnt_i = 0, cnt_j = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (sens[k] == "i") {
        cnt_i++;
        pos_i += labels[k];
      } else {
        cnt_j++;
        pos_j += labels[k];
      }
    }
    const SensitiveAssignment sa{"g", sens};
    if (cnt_i > 0 && cnt_j > 0) {
      CHECK(delta_dp(probs, sa, "i", "j") == dp_oracle(probs, sens, "i", "j"));
    }
    if (pos_i > 0 && pos_j > 0) {
      CHECK(delta_eo(probs, y, sa, "i", "j") ==
            eo_oracle(probs, labels, sens, "i", "j"));
    }
    ++checked;
  }
}

TEST_CASE("fairness invariants") {
  Rng rng(2718);
  const std::size_t n = 40;
  std::vector<double> probs(n);
  std::vector<int> labels(n);
  std::vector<std::string> sens(n);
  for (std::size_t i = 0; i < n; ++i) {
    probs[i] = rng.uniform();
    labels[i] = static_cast<int>(i % 2);
    sens[i] = rng.bernoulli(0.4) ? "i" : "j";
  }
  const LabelVector y(labels);
  const SensitiveAssignment sa{"g", sens};

  SUBCASE("row permutation leaves the deltas unchanged") {
    const double eo = delta_eo(probs, y, sa, "i", "j");
    const double dp = delta_dp(probs, sa, "i", "j");
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<double> p2(n);
    std::vector<int> l2(n);
    std::vector<std::string> s2(n);
    for (std::size_t i = 0; i < n; ++i) {
      p2[i] = probs[perm[i]];
      l2[i] = labels[perm[i]];
      s2[i] = sens[perm[i]];
    }
    CHECK(delta_eo(p2, LabelVector(l2), SensitiveAssignment{"g", s2}, "i",
                   "j") == eo);
    CHECK(delta_dp(p2, SensitiveAssignment{"g", s2}, "i", "j") == dp);
  }

  SUBCASE("constant classifiers are perfectly fair") {
    const std::vector<double> ones(n, 0.99);
    const std::vector<double> zeros(n, 0.01);
    CHECK(delta_eo(ones, y, sa, "i", "j") == 0.0);
    CHECK(delta_eo(zeros, y, sa, "i", "j") == 0.0);
    CHECK(delta_dp(ones, sa, "i", "j") == 0.0);
    CHECK(delta_dp(zeros, sa, "i", "j") == 0.0);
  }

  SUBCASE("duplicating every row changes nothing") {
    std::vector<double> p2 = probs;
    p2.insert(p2.end(), probs.begin(), probs.end());
    std::vector<int> l2 = labels;
    l2.insert(l2.end(), labels.begin(), labels.end());
    std::vector<std::string> s2 = sens;
    s2.insert(s2.end(), sens.begin(), sens.end());
    const SensitiveAssignment sa2{"g", s2};
    CHECK(delta_eo(p2, LabelVector(l2), sa2, "i", "j") ==
          delta_eo(probs, y, sa, "i", "j"));
    CHECK(delta_dp(p2, sa2, "i", "j") == delta_dp(probs, sa, "i", "j"));
    CHECK(accuracy(p2, LabelVector(l2)) == accuracy(probs, y));
    CHECK(f1(p2, LabelVector(l2)) == f1(probs, y));
  }

  SUBCASE("fairness_report carries signed values and per-group rates") {
    const FairnessReport rep = fairness_report(probs, y, sa);
    CHECK(rep.delta_eo == std::abs(rep.signed_eo));
    CHECK(rep.delta_dp == std::abs(rep.signed_dp));
    CHECK(rep.positive_rate.size() == 2);
    CHECK(rep.true_positive_rate.size() == 2);
    CHECK(rep.delta_eo == delta_eo(probs, y, sa, "i", "j"));
    CHECK(rep.delta_dp == delta_dp(probs, sa, "i", "j"));
  }
}

TEST_CASE("causal_fraction_topn") {
  SUBCASE("all top weights causal") {
    LinearModel m{{5.0, -4.0, 3.0, 0.1, 0.2, 0.05}, 0.0};
    FeatureGroups g(6, {0, 1, 2}, {3, 4});
    const auto f = causal_fraction_topn(m, g, {3});
    CHECK(f[0] == 1.0);
  }
  SUBCASE("zero weights fall back to index order deterministically") {
    LinearModel m{{0.0, 0.0, 0.0, 0.0}, 0.0};
    FeatureGroups g(4, {0, 2}, {});
    const auto a = causal_fraction_topn(m, g, {2});
    const auto b = causal_fraction_topn(m, g, {2});
    CHECK(a == b);
    // Ties break by lower index: top-2 = {0, 1}, one causal.
    CHECK(a[0] == 0.5);
  }
  SUBCASE("hand-ranked six-feature model") {
    // |w| ranking: 3 (2.5), 1 (2.0), 5 (1.5), 0 (1.0), 4 (0.5), 2 (0.1)
    LinearModel m{{1.0, -2.0, 0.1, 2.5, -0.5, 1.5}, 0.0};
    FeatureGroups g(6, {1, 3}, {0, 5});
    const auto f = causal_fraction_topn(m, g, {1, 2, 3, 6});
    CHECK(f[0] == 1.0);  // {3}
    CHECK(f[1] == 1.0);  // {3,1}
    CHECK(f[2] == doctest::Approx(2.0 / 3));  // {3,1,5}
    CHECK(f[3] == doctest::Approx(2.0 / 6));
  }
  SUBCASE("invariant under uniform positive rescaling") {
    Rng rng(11);
    LinearModel m;
    m.weights.resize(12);
    for (double& w : m.weights) w = 2.0 * rng.uniform() - 1.0;
    FeatureGroups g(12, {0, 3, 7}, {1, 5});
    const auto base = causal_fraction_topn(m, g, {1, 4, 8, 12});
    LinearModel scaled = m;
    for (double& w : scaled.weights) w *= 17.5;
    CHECK(causal_fraction_topn(scaled, g, {1, 4, 8, 12}) == base);
  }
  SUBCASE("n larger than the dimension is an error") {
    LinearModel m{{1.0}, 0.0};
    FeatureGroups g(1, {0}, {});
    CHECK_THROWS_AS(causal_fraction_topn(m, g, {2}), DataError);
  }
}

TEST_CASE("counterfactual_accuracy") {
  SUBCASE("empty split is an error") {
    SplitData ctf;
    ctf.x = DesignMatrix::dense(2, {});
    ctf.y = LabelVector(std::vector<int>{});
    LinearModel m{{1.0, 1.0}, 0.0};
    CHECK_THROWS_AS(counterfactual_accuracy(m, ctf), DataError);
  }
  SUBCASE("plain accuracy on the twin rows") {
    SplitData ctf;
    ctf.x = DesignMatrix::dense(1, {1.0, -1.0});
    ctf.y = LabelVector({1, 0});
    LinearModel m{{2.0}, 0.0};
    CHECK(counterfactual_accuracy(m, ctf) == 1.0);
  }
}
