#pragma once

#include <cstdint>

#include "causreg/dataset.hpp"
#include "causreg/text.hpp"

namespace causreg {

/// Planted-correlation benchmark generator.
///
/// Labels come from the causal block alone: the first half of the causal
/// features vote +1, the second half -1, the block is redrawn until the vote
/// is nonzero, and the clean label is the sign of the vote (then flipped with
/// probability flip_noise). Spurious features agree with the final label at
/// rate spurious_train_corr. Counterfactual twins flip the causal block and
/// the label while keeping everything else, so spurious features
/// anti-correlate with the twin labels.
struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n = 4000;  // original rows across train/validation/test
  std::size_t d = 200;
  std::size_t n_causal = 20;
  std::size_t n_spurious = 30;
  double spurious_train_corr = 0.9;
  double flip_noise = 0.0;
  // Plants a binary sensitive column (named "sens") as the first spurious
  // feature, agreeing with the label at rate sensitive_corr; its value is
  // also carried as the sensitive attribute of every split.
  bool plant_sensitive = false;
  double sensitive_corr = 0.8;
  double train_fraction = 0.7;
  double validation_fraction = 0.15;

  void validate() const;
};

/// Bundle with ground-truth groups and counterfactual twins for every split.
DatasetBundle synth_generate(const SynthConfig& cfg);

/// The same draw rendered as a text corpus (feature j active => token with
/// feature j's name) plus the matching group lexicon. Feeding the corpus
/// through the bag-of-words pipeline reproduces the planted design exactly.
struct SynthCorpus {
  Corpus corpus;
  GroupLexicon lexicon;
};

SynthCorpus synth_corpus(const SynthConfig& cfg);

/// Feature names of the planted design: c0.., then the spurious block
/// ("sens" first when planted, then s1..), then r0...
std::vector<std::string> synth_feature_names(const SynthConfig& cfg);

}  // namespace causreg
