#include "causreg/synthetic.hpp"

#include <algorithm>
#include <numeric>

#include "causreg/rng.hpp"

namespace causreg {

void SynthConfig::validate() const {
  if (n < 20) throw ConfigError("synth: n must be at least 20");
  if (d == 0) throw ConfigError("synth: d must be positive");
  if (n_causal == 0) throw ConfigError("synth: need at least one causal feature");
  if (n_causal + n_spurious > d) {
    throw ConfigError("synth: n_causal + n_spurious exceeds d");
  }
  if (plant_sensitive && n_spurious == 0) {
    throw ConfigError("synth: planted sensitive column requires n_spurious >= 1");
  }
  if (!(spurious_train_corr >= 0.0 && spurious_train_corr <= 1.0)) {
    throw ConfigError("synth: spurious_train_corr must be in [0,1]");
  }
  if (!(flip_noise >= 0.0 && flip_noise < 0.5)) {
    throw ConfigError("synth: flip_noise must be in [0, 0.5)");
  }
  if (!(sensitive_corr >= 0.0 && sensitive_corr <= 1.0)) {
    throw ConfigError("synth: sensitive_corr must be in [0,1]");
  }
  if (!(train_fraction > 0.0) || !(validation_fraction > 0.0) ||
      train_fraction + validation_fraction >= 1.0) {
    throw ConfigError("synth: invalid split fractions");
  }
  const auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(n));
  const auto n_val = static_cast<std::size_t>(validation_fraction * static_cast<double>(n));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= n) {
    throw ConfigError("synth: split fractions leave an empty split");
  }
}

namespace {

struct SynthRow {
  std::vector<std::uint8_t> bits;  // length d
  int label = 0;
};

struct SynthDraw {
  std::vector<SynthRow> originals;
  std::vector<std::size_t> split_start;  // train, validation, test offsets
};

// Vote of the causal block: first half +1, second half -1.
int causal_vote(const std::vector<std::uint8_t>& bits, std::size_t n_causal) {
  const std::size_t half = (n_causal + 1) / 2;
  int score = 0;
  for (std::size_t j = 0; j < n_causal; ++j) {
    if (bits[j]) score += j < half ? 1 : -1;
  }
  return score;
}

SynthDraw draw_rows(const SynthConfig& cfg) {
  Rng rng(cfg.seed);
  SynthDraw out;
  out.originals.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    SynthRow row;
    row.bits.assign(cfg.d, 0);
    int score = 0;
    do {
      for (std::size_t j = 0; j < cfg.n_causal; ++j) {
        row.bits[j] = rng.bernoulli(0.5) ? 1 : 0;
      }
      score = causal_vote(row.bits, cfg.n_causal);
    } while (score == 0);
    const int y_clean = score > 0 ? 1 : 0;
    row.label = rng.bernoulli(cfg.flip_noise) ? 1 - y_clean : y_clean;
    for (std::size_t j = cfg.n_causal; j < cfg.n_causal + cfg.n_spurious; ++j) {
      const bool sensitive_col = cfg.plant_sensitive && j == cfg.n_causal;
      const double corr =
          sensitive_col ? cfg.sensitive_corr : cfg.spurious_train_corr;
      const int agree = rng.bernoulli(corr) ? 1 : 0;
      row.bits[j] = agree ? static_cast<std::uint8_t>(row.label)
                          : static_cast<std::uint8_t>(1 - row.label);
    }
    for (std::size_t j = cfg.n_causal + cfg.n_spurious; j < cfg.d; ++j) {
      row.bits[j] = rng.bernoulli(0.5) ? 1 : 0;
    }
    out.originals.push_back(std::move(row));
  }
  const auto n_train =
      static_cast<std::size_t>(cfg.train_fraction * static_cast<double>(cfg.n));
  const auto n_val = static_cast<std::size_t>(cfg.validation_fraction *
                                              static_cast<double>(cfg.n));
  out.split_start = {0, n_train, n_train + n_val};
  return out;
}

SynthRow make_twin(const SynthRow& row, std::size_t n_causal) {
  SynthRow twin = row;
  for (std::size_t j = 0; j < n_causal; ++j) twin.bits[j] ^= 1;
  twin.label = 1 - row.label;
  return twin;
}

std::vector<std::uint32_t> active_columns(const SynthRow& row) {
  std::vector<std::uint32_t> cols;
  for (std::size_t j = 0; j < row.bits.size(); ++j) {
    if (row.bits[j]) cols.push_back(static_cast<std::uint32_t>(j));
  }
  return cols;
}

}  // namespace

std::vector<std::string> synth_feature_names(const SynthConfig& cfg) {
  std::vector<std::string> names;
  names.reserve(cfg.d);
  for (std::size_t j = 0; j < cfg.n_causal; ++j) {
    names.push_back("c" + std::to_string(j));
  }
  for (std::size_t j = 0; j < cfg.n_spurious; ++j) {
    if (cfg.plant_sensitive && j == 0) names.push_back("sens");
    else names.push_back("s" + std::to_string(j));
  }
  for (std::size_t j = cfg.n_causal + cfg.n_spurious; j < cfg.d; ++j) {
    names.push_back("r" + std::to_string(j - cfg.n_causal - cfg.n_spurious));
  }
  return names;
}

DatasetBundle synth_generate(const SynthConfig& cfg) {
  cfg.validate();
  const SynthDraw draw = draw_rows(cfg);

  const auto build = [&](std::size_t lo, std::size_t hi, bool twins) {
    std::vector<std::vector<std::uint32_t>> rows;
    rows.reserve(hi - lo);
    std::vector<int> labels;
    labels.reserve(hi - lo);
    std::vector<std::string> sens;
    for (std::size_t i = lo; i < hi; ++i) {
      const SynthRow row = twins ? make_twin(draw.originals[i], cfg.n_causal)
                                 : draw.originals[i];
      rows.push_back(active_columns(row));
      labels.push_back(row.label);
      if (cfg.plant_sensitive) {
        sens.push_back(row.bits[cfg.n_causal] ? "1" : "0");
      }
    }
    SplitData s;
    s.x = DesignMatrix::binary(cfg.d, std::move(rows));
    s.y = LabelVector(std::move(labels));
    if (cfg.plant_sensitive) {
      s.sensitive = SensitiveAssignment{"sens", std::move(sens)};
    }
    return s;
  };

  const std::size_t t0 = draw.split_start[0];
  const std::size_t v0 = draw.split_start[1];
  const std::size_t e0 = draw.split_start[2];

  DatasetBundle b;
  b.feature_names = synth_feature_names(cfg);
  std::vector<std::size_t> causal(cfg.n_causal);
  std::iota(causal.begin(), causal.end(), std::size_t{0});
  std::vector<std::size_t> spurious(cfg.n_spurious);
  std::iota(spurious.begin(), spurious.end(), cfg.n_causal);
  b.groups = FeatureGroups(cfg.d, std::move(causal), std::move(spurious));

  b.train = build(t0, v0, false);
  b.validation = build(v0, e0, false);
  b.test = build(e0, cfg.n, false);
  b.ctf_train = build(t0, v0, true);
  b.ctf_validation = build(v0, e0, true);
  b.ctf_test = build(e0, cfg.n, true);
  b.validate();
  return b;
}

SynthCorpus synth_corpus(const SynthConfig& cfg) {
  cfg.validate();
  const SynthDraw draw = draw_rows(cfg);
  const std::vector<std::string> names = synth_feature_names(cfg);

  SynthCorpus out;
  out.corpus.sensitive_attribute = "sens";
  for (std::size_t j = 0; j < cfg.n_causal; ++j) {
    out.lexicon.causal.push_back(names[j]);
  }
  for (std::size_t j = cfg.n_causal; j < cfg.n_causal + cfg.n_spurious; ++j) {
    out.lexicon.spurious.push_back(names[j]);
  }

  const auto render = [&](const SynthRow& row) {
    std::string text;
    for (std::size_t j = 0; j < cfg.d; ++j) {
      if (!row.bits[j]) continue;
      if (!text.empty()) text.push_back(' ');
      text += names[j];
    }
    return text;
  };

  const std::size_t v0 = draw.split_start[1];
  const std::size_t e0 = draw.split_start[2];
  for (std::size_t i = 0; i < cfg.n; ++i) {
    const Split split = i < v0 ? Split::train
                        : i < e0 ? Split::validation
                                 : Split::test;
    const SynthRow& row = draw.originals[i];
    const SynthRow twin = make_twin(row, cfg.n_causal);

    Document orig;
    orig.text = render(row);
    orig.label = row.label;
    orig.split = split;
    Document ctf;
    ctf.text = render(twin);
    ctf.label = twin.label;
    ctf.split = ctf_split_of(split);
    if (cfg.plant_sensitive) {
      orig.sensitive = row.bits[cfg.n_causal] ? "1" : "0";
      ctf.sensitive = twin.bits[cfg.n_causal] ? "1" : "0";
    }
    const std::size_t orig_idx = out.corpus.docs.size();
    orig.counterfactual_of = orig_idx + 1;
    ctf.counterfactual_of = orig_idx;
    out.corpus.docs.push_back(std::move(orig));
    out.corpus.docs.push_back(std::move(ctf));
  }
  out.corpus.validate_pairing();
  return out;
}

}  // namespace causreg
