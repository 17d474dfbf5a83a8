#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causreg/types.hpp"

namespace causreg {

/// One split: features, labels and (when available) the sensitive attribute.
struct SplitData {
  DesignMatrix x;
  LabelVector y;
  std::optional<SensitiveAssignment> sensitive;
};

/// Everything an experiment needs: the three standard splits, optional
/// counterfactual twins per split, the feature partition and feature names.
struct DatasetBundle {
  SplitData train;
  SplitData validation;
  SplitData test;
  std::optional<SplitData> ctf_train;
  std::optional<SplitData> ctf_validation;
  std::optional<SplitData> ctf_test;
  FeatureGroups groups = FeatureGroups::all_remaining(0);
  std::vector<std::string> feature_names;

  void validate() const;
};

/// Causal/spurious feature names as annotated in a group file; every other
/// feature is remaining. Names refer to tokens (text) or columns (tabular).
struct GroupLexicon {
  std::vector<std::string> causal;
  std::vector<std::string> spurious;
};

GroupLexicon load_group_lexicon(const std::string& path);
void save_group_lexicon(const std::string& path, const GroupLexicon& lex);

/// Map annotated names onto feature indices. A lexicon entry `e` matches a
/// feature named `e` exactly or any one-hot column `e=<value>`. Entries that
/// match nothing are counted in `unmatched` (when given) and otherwise ignored.
FeatureGroups resolve_groups(const GroupLexicon& lex,
                             const std::vector<std::string>& feature_names,
                             std::size_t* unmatched = nullptr);

struct FeatureReduction {
  DesignMatrix matrix;
  std::vector<std::string> names;
  FeatureGroups groups;
  // old index -> new index, DesignMatrix::npos where removed.
  std::vector<std::size_t> old_to_new;
};

/// Delete the given feature columns and re-index names and groups.
FeatureReduction remove_features(const DesignMatrix& matrix,
                                 const std::vector<std::string>& names,
                                 const FeatureGroups& groups,
                                 const std::vector<std::size_t>& remove);

/// Feature-selection transform on a whole bundle: drop every spurious column
/// from all splits; the resulting bundle has an empty spurious set.
DatasetBundle drop_spurious_features(const DatasetBundle& bundle);

/// Data-augmentation transform: training split becomes originals plus their
/// counterfactual twins. Requires ctf_train.
DatasetBundle augment_train_with_counterfactuals(const DatasetBundle& bundle);

}  // namespace causreg
