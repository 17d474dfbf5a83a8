#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causreg/error.hpp"

namespace causreg {

enum class GroupKind : std::uint8_t { causal, spurious, remaining };

/// Partition of the feature indices {0..d-1} into causal, spurious and
/// remaining sets. The partition is validated once at construction; the
/// per-feature kind lookup is O(1) afterwards.
class FeatureGroups {
 public:
  FeatureGroups() = default;  // empty partition over dimension 0

  // Remaining = complement of causal ∪ spurious.
  FeatureGroups(std::size_t dimension, std::vector<std::size_t> causal,
                std::vector<std::size_t> spurious);

  // All three sets given explicitly; must form an exact partition.
  static FeatureGroups from_parts(std::size_t dimension,
                                  std::vector<std::size_t> causal,
                                  std::vector<std::size_t> spurious,
                                  std::vector<std::size_t> remaining);

  // Single group: everything remaining (used by plain dense representations).
  static FeatureGroups all_remaining(std::size_t dimension);

  std::size_t dimension() const { return dimension_; }
  const std::vector<std::size_t>& causal() const { return causal_; }
  const std::vector<std::size_t>& spurious() const { return spurious_; }
  const std::vector<std::size_t>& remaining() const { return remaining_; }

  GroupKind kind_of(std::size_t feature) const { return kinds_.at(feature); }
  std::size_t size_of(GroupKind kind) const;

 private:
  void build_kinds();

  std::size_t dimension_ = 0;
  std::vector<std::size_t> causal_, spurious_, remaining_;
  std::vector<GroupKind> kinds_;
};

/// Per-group penalty strengths for the grouped L2 term.
struct PenaltyConfig {
  double lambda_c = 0.0;
  double lambda_s = 0.0;
  double lambda_r = 0.0;

  void validate() const;
  // Grid-search admissibility: lambda_s >= lambda_r >= lambda_c with
  // lambda_s > lambda_c strictly.
  bool satisfies_search_constraint() const {
    return lambda_s >= lambda_r && lambda_r >= lambda_c && lambda_s > lambda_c;
  }
  bool operator==(const PenaltyConfig&) const = default;
};

/// Logistic classifier parameters: one weight per feature plus a bias.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  std::size_t dimension() const { return weights.size(); }
  bool all_finite() const;
};

/// Feature matrix with two storage modes: sparse binary rows (bag of words
/// and the synthetic generator) or dense real rows (tabular, embeddings).
class DesignMatrix {
 public:
  DesignMatrix() = default;

  // rows[i] lists the active column indices of row i (will be sorted,
  // duplicates rejected).
  static DesignMatrix binary(std::size_t cols,
                             std::vector<std::vector<std::uint32_t>> rows);

  // Row-major dense values; every entry must be finite.
  static DesignMatrix dense(std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_binary() const { return binary_; }

  double at(std::size_t row, std::size_t col) const;

  // <x_row, w>, w must have length cols().
  double row_dot(std::size_t row, std::span<const double> w) const;

  // out += alpha * x_row
  void add_row_scaled(std::size_t row, double alpha,
                      std::span<double> out) const;

  const std::vector<std::uint32_t>& binary_row(std::size_t row) const;
  std::span<const double> dense_row(std::size_t row) const;

  // Copy with the given columns removed; `keep_map` (optional out) receives
  // old index -> new index (or npos for dropped columns).
  DesignMatrix without_columns(const std::vector<std::size_t>& drop,
                               std::vector<std::size_t>* keep_map = nullptr) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  bool binary_ = true;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<std::uint32_t>> brows_;  // binary mode
  std::vector<double> dvalues_;                    // dense mode, row-major
};

/// Binary labels, one per matrix row.
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(std::vector<int> values);

  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  const std::vector<int>& values() const { return values_; }

 private:
  std::vector<int> values_;
};

/// Per-row sensitive attribute values (e.g. gender), used by the fairness
/// metrics. Kept apart from the spurious feature set: a sensitive column may
/// or may not also be a model feature.
struct SensitiveAssignment {
  std::string attribute;            // e.g. "gender"
  std::vector<std::string> values;  // one group value per row

  std::vector<std::string> distinct_groups() const;
};

}  // namespace causreg
