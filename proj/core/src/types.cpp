#include "causreg/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace causreg {

namespace {

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v,
                                       const char* what, std::size_t dim) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
    throw DataError(std::string("duplicate feature index in ") + what);
  }
  if (!v.empty() && v.back() >= dim) {
    throw DataError(std::string(what) + " index " + std::to_string(v.back()) +
                    " out of range for dimension " + std::to_string(dim));
  }
  return v;
}

}  // namespace

FeatureGroups::FeatureGroups(std::size_t dimension,
                             std::vector<std::size_t> causal,
                             std::vector<std::size_t> spurious)
    : dimension_(dimension),
      causal_(sorted_unique(std::move(causal), "causal set", dimension)),
      spurious_(sorted_unique(std::move(spurious), "spurious set", dimension)) {
  std::vector<bool> taken(dimension_, false);
  for (std::size_t i : causal_) taken[i] = true;
  for (std::size_t i : spurious_) {
    if (taken[i]) {
      throw DataError("feature index " + std::to_string(i) +
                      " appears in both causal and spurious sets");
    }
    taken[i] = true;
  }
  remaining_.reserve(dimension_ - causal_.size() - spurious_.size());
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (!taken[i]) remaining_.push_back(i);
  }
  build_kinds();
}

FeatureGroups FeatureGroups::from_parts(std::size_t dimension,
                                        std::vector<std::size_t> causal,
                                        std::vector<std::size_t> spurious,
                                        std::vector<std::size_t> remaining) {
  FeatureGroups g(dimension, std::move(causal), std::move(spurious));
  std::vector<std::size_t> rem =
      sorted_unique(std::move(remaining), "remaining set", dimension);
  if (rem != g.remaining_) {
    throw DataError("remaining set is not the complement of causal+spurious");
  }
  return g;
}

FeatureGroups FeatureGroups::all_remaining(std::size_t dimension) {
  return FeatureGroups(dimension, {}, {});
}

std::size_t FeatureGroups::size_of(GroupKind kind) const {
  switch (kind) {
    case GroupKind::causal: return causal_.size();
    case GroupKind::spurious: return spurious_.size();
    case GroupKind::remaining: return remaining_.size();
  }
  return 0;
}

void FeatureGroups::build_kinds() {
  kinds_.assign(dimension_, GroupKind::remaining);
  for (std::size_t i : causal_) kinds_[i] = GroupKind::causal;
  for (std::size_t i : spurious_) kinds_[i] = GroupKind::spurious;
}

void PenaltyConfig::validate() const {
  if (!(lambda_c >= 0.0) || !(lambda_s >= 0.0) || !(lambda_r >= 0.0)) {
    throw ConfigError("penalty strengths must be non-negative and finite");
  }
}

bool LinearModel::all_finite() const {
  if (!std::isfinite(bias)) return false;
  for (double w : weights) {
    if (!std::isfinite(w)) return false;
  }
  return true;
}

DesignMatrix DesignMatrix::binary(std::size_t cols,
                                  std::vector<std::vector<std::uint32_t>> rows) {
  DesignMatrix m;
  m.binary_ = true;
  m.cols_ = cols;
  m.rows_ = rows.size();
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end()) {
      throw DataError("duplicate column index in binary row");
    }
    if (!r.empty() && r.back() >= cols) {
      throw DataError("binary row index out of range");
    }
  }
  m.brows_ = std::move(rows);
  return m;
}

DesignMatrix DesignMatrix::dense(std::size_t cols, std::vector<double> values) {
  if (cols == 0 || values.size() % cols != 0) {
    throw DataError("dense matrix size is not a multiple of the column count");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("non-finite entry in dense matrix");
  }
  DesignMatrix m;
  m.binary_ = false;
  m.cols_ = cols;
  m.rows_ = values.size() / cols;
  m.dvalues_ = std::move(values);
  return m;
}

double DesignMatrix::at(std::size_t row, std::size_t col) const {
  if (binary_) {
    const auto& r = brows_[row];
    return std::binary_search(r.begin(), r.end(),
                              static_cast<std::uint32_t>(col))
               ? 1.0
               : 0.0;
  }
  return dvalues_[row * cols_ + col];
}

double DesignMatrix::row_dot(std::size_t row, std::span<const double> w) const {
  if (w.size() != cols_) {
    throw DataError("row_dot: vector length " + std::to_string(w.size()) +
                    " does not match " + std::to_string(cols_) + " columns");
  }
  double acc = 0.0;
  if (binary_) {
    for (std::uint32_t j : brows_[row]) acc += w[j];
  } else {
    const double* x = dvalues_.data() + row * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += x[j] * w[j];
  }
  return acc;
}

void DesignMatrix::add_row_scaled(std::size_t row, double alpha,
                                  std::span<double> out) const {
  if (out.size() != cols_) {
    throw DataError("add_row_scaled: output length mismatch");
  }
  if (binary_) {
    for (std::uint32_t j : brows_[row]) out[j] += alpha;
  } else {
    const double* x = dvalues_.data() + row * cols_;
    for (std::size_t j = 0; j < cols_; ++j) out[j] += alpha * x[j];
  }
}

const std::vector<std::uint32_t>& DesignMatrix::binary_row(
    std::size_t row) const {
  if (!binary_) throw DataError("binary_row called on dense matrix");
  return brows_[row];
}

std::span<const double> DesignMatrix::dense_row(std::size_t row) const {
  if (binary_) throw DataError("dense_row called on binary matrix");
  return {dvalues_.data() + row * cols_, cols_};
}

DesignMatrix DesignMatrix::without_columns(
    const std::vector<std::size_t>& drop,
    std::vector<std::size_t>* keep_map) const {
  std::vector<bool> dropped(cols_, false);
  for (std::size_t j : drop) {
    if (j >= cols_) throw DataError("without_columns: index out of range");
    dropped[j] = true;
  }
  std::vector<std::size_t> map(cols_, npos);
  std::size_t next = 0;
  for (std::size_t j = 0; j < cols_; ++j) {
    if (!dropped[j]) map[j] = next++;
  }
  DesignMatrix out;
  out.binary_ = binary_;
  out.rows_ = rows_;
  out.cols_ = next;
  if (binary_) {
    out.brows_.reserve(rows_);
    for (const auto& r : brows_) {
      std::vector<std::uint32_t> nr;
      nr.reserve(r.size());
      for (std::uint32_t j : r) {
        if (map[j] != npos) nr.push_back(static_cast<std::uint32_t>(map[j]));
      }
      out.brows_.push_back(std::move(nr));
    }
  } else {
    out.dvalues_.reserve(rows_ * next);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* x = dvalues_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (map[j] != npos) out.dvalues_.push_back(x[j]);
      }
    }
  }
  if (keep_map) *keep_map = std::move(map);
  return out;
}

LabelVector::LabelVector(std::vector<int> values) : values_(std::move(values)) {
  for (int y : values_) {
    if (y != 0 && y != 1) {
      throw DataError("labels must be 0 or 1, got " + std::to_string(y));
    }
  }
}

std::vector<std::string> SensitiveAssignment::distinct_groups() const {
  std::set<std::string> s(values.begin(), values.end());
  return {s.begin(), s.end()};
}

}  // namespace causreg
