#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causreg/dataset.hpp"
#include "causreg/types.hpp"

namespace causreg {

enum class ColumnKind { numeric, categorical, label, sensitive };

ColumnKind column_kind_from_string(const std::string& s);
std::string column_kind_to_string(ColumnKind k);

/// Simple CSV with a header row. Quoted fields ("...") may contain commas
/// and doubled quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;
};

CsvTable load_csv(const std::string& path);

/// Column kinds as declared in a schema JSON file:
///   {"columns": {"lsat": "numeric", "gender": "sensitive", ...},
///    "sensitive_as_feature": true}
struct SchemaSpec {
  std::map<std::string, ColumnKind> columns;
  bool sensitive_as_feature = true;
};

SchemaSpec load_schema_spec(const std::string& path);

/// Fitted encoder: numeric min/max and categorical vocabularies learned from
/// the training rows. Feature order follows the CSV header; one-hot columns
/// are ordered by sorted category value and named "<column>=<value>".
class TabularSchema {
 public:
  static TabularSchema fit(const CsvTable& train, const SchemaSpec& spec);

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::string& label_column() const { return label_column_; }
  const std::string& sensitive_column() const { return sensitive_column_; }
  bool sensitive_as_feature() const { return sensitive_as_feature_; }

  struct Column {
    std::string name;
    ColumnKind kind;
    double min = 0.0, max = 0.0;           // numeric
    std::vector<std::string> categories;   // categorical/sensitive, sorted
  };
  const std::vector<Column>& columns() const { return columns_; }

  // Serialization hooks for the model file.
  std::string to_json_string() const;
  static TabularSchema from_json_string(const std::string& json_text);

 private:
  std::vector<Column> columns_;  // feature columns in header order
  std::vector<std::string> feature_names_;
  std::string label_column_;
  std::string sensitive_column_;  // empty when absent
  bool sensitive_as_feature_ = true;
};

/// Apply a fitted schema: numerics min-max scaled with the training range
/// (values outside are clipped to [0,1]), categoricals one-hot (unseen
/// categories encode as an all-zero block, logged). The sensitive column is
/// returned alongside and also one-hot encoded as a feature when the schema
/// says so.
SplitData encode_tabular(const CsvTable& records, const TabularSchema& schema);

/// Bundle assembly for tabular data; rows are assigned to
/// train/validation/test by an explicit `split` column when present,
/// otherwise by the given fractions in file order.
DatasetBundle bundle_from_tabular(const CsvTable& records,
                                  const SchemaSpec& spec,
                                  const GroupLexicon& lex,
                                  double train_fraction = 0.5,
                                  double validation_fraction = 0.2);

}  // namespace causreg
