#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causreg/embedding.hpp"
#include "causreg/experiments.hpp"
#include "causreg/types.hpp"

namespace causreg {

/// Self-contained trained-model artifact: weights plus whatever is needed to
/// re-encode raw inputs (vocabulary order or fitted tabular schema) and the
/// group assignment. Stored as versioned JSON; doubles round-trip exactly.
struct ModelFile {
  int format_version = 1;
  std::string representation;  // bow | glove | glove_weighted | tabular
  LinearModel model;
  std::vector<std::string> feature_names;
  std::vector<std::size_t> causal;
  std::vector<std::size_t> spurious;
  int min_df = 1;
  std::optional<std::string> tabular_schema_json;
  std::optional<GroupWeightTriple> embedding_weights;

  FeatureGroups groups() const {
    return FeatureGroups(feature_names.size(), causal, spurious);
  }
};

void save_model_file(const std::string& path, const ModelFile& mf);
ModelFile load_model_file(const std::string& path);

std::string report_to_json_string(const ExperimentReport& report);
std::string report_to_text(const ExperimentReport& report);

std::string sweep_to_json_string(const SweepTable& table);
std::string sweep_to_text(const SweepTable& table);

/// Ranked coefficient export for human annotation: features with
/// |weight| > threshold, sorted by |weight| descending then index.
struct AnnotationExport {
  double threshold = 1.0;
  // (feature name, signed weight) pairs.
  std::vector<std::pair<std::string, double>> entries;
};

AnnotationExport make_annotation_export(const LinearModel& model,
                                        const std::vector<std::string>& names,
                                        double threshold);

/// Two-column TSV (feature, weight) with a comment header recording the
/// threshold.
void save_annotation_export(const std::string& path, const AnnotationExport& ex);

}  // namespace causreg
