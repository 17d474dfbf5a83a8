#include "causreg/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>

#include "json.hpp"

namespace causreg {

ColumnKind column_kind_from_string(const std::string& s) {
  if (s == "numeric") return ColumnKind::numeric;
  if (s == "categorical") return ColumnKind::categorical;
  if (s == "label") return ColumnKind::label;
  if (s == "sensitive") return ColumnKind::sensitive;
  throw ConfigError("unknown column kind: '" + s + "'");
}

std::string column_kind_to_string(ColumnKind k) {
  switch (k) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::label: return "label";
    case ColumnKind::sensitive: return "sensitive";
  }
  throw ConfigError("invalid column kind");
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw DataError("CSV has no column named '" + name + "'");
}

namespace {

std::vector<std::string> parse_csv_line(const std::string& line,
                                        const std::string& path,
                                        std::size_t lineno) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw DataError(path + ":" + std::to_string(lineno) +
                    ": unterminated quoted field");
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

CsvTable load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV file: " + path);
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = parse_csv_line(line, path, lineno);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size()) {
        throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(table.header.size()) +
                        " fields, got " + std::to_string(fields.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw DataError("CSV file is empty: " + path);
  return table;
}

SchemaSpec load_schema_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("schema file " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("columns") || !j.at("columns").is_object()) {
    throw ConfigError("schema file " + path +
                      ": expected {\"columns\": {name: kind, ...}}");
  }
  SchemaSpec spec;
  for (const auto& [name, kind] : j.at("columns").items()) {
    spec.columns[name] = column_kind_from_string(kind.get<std::string>());
  }
  spec.sensitive_as_feature = j.value("sensitive_as_feature", true);
  return spec;
}

namespace {

double parse_numeric(const std::string& s, const std::string& col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) {
      throw DataError("");
    }
    return v;
  } catch (const std::exception&) {
    throw DataError("column '" + col + "': non-numeric value '" + s + "'");
  }
}

}  // namespace

TabularSchema TabularSchema::fit(const CsvTable& train, const SchemaSpec& spec) {
  TabularSchema schema;
  schema.sensitive_as_feature_ = spec.sensitive_as_feature;
  for (const std::string& name : train.header) {
    if (name == "split") continue;  // split assignment column, never a feature
    const auto it = spec.columns.find(name);
    if (it == spec.columns.end()) {
      throw ConfigError("schema does not declare CSV column '" + name + "'");
    }
    const ColumnKind kind = it->second;
    const std::size_t c = train.column_index(name);
    if (kind == ColumnKind::label) {
      if (!schema.label_column_.empty()) {
        throw ConfigError("schema declares more than one label column");
      }
      schema.label_column_ = name;
      continue;
    }
    Column col;
    col.name = name;
    col.kind = kind;
    if (kind == ColumnKind::numeric) {
      if (train.rows.empty()) throw DataError("cannot fit schema on empty table");
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (const auto& row : train.rows) {
        const double v = parse_numeric(row[c], name);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      col.min = lo;
      col.max = hi;
    } else {
      std::set<std::string> cats;
      for (const auto& row : train.rows) cats.insert(row[c]);
      col.categories.assign(cats.begin(), cats.end());
      if (kind == ColumnKind::sensitive) {
        if (!schema.sensitive_column_.empty()) {
          throw ConfigError("schema declares more than one sensitive column");
        }
        schema.sensitive_column_ = name;
      }
    }
    schema.columns_.push_back(std::move(col));
  }
  if (schema.label_column_.empty()) {
    throw ConfigError("schema must declare exactly one label column");
  }
  for (const Column& col : schema.columns_) {
    if (col.kind == ColumnKind::sensitive && !schema.sensitive_as_feature_) {
      continue;
    }
    if (col.kind == ColumnKind::numeric) {
      schema.feature_names_.push_back(col.name);
    } else {
      for (const std::string& cat : col.categories) {
        schema.feature_names_.push_back(col.name + "=" + cat);
      }
    }
  }
  return schema;
}

SplitData encode_tabular(const CsvTable& records, const TabularSchema& schema) {
  const std::size_t d = schema.feature_names().size();
  std::vector<double> values;
  values.reserve(records.rows.size() * d);
  std::vector<int> labels;
  labels.reserve(records.rows.size());
  std::vector<std::string> sens;
  std::size_t unseen_categories = 0;

  const std::size_t label_c = records.column_index(schema.label_column());

  for (const auto& row : records.rows) {
    for (const auto& col : schema.columns()) {
      const std::size_t c = records.column_index(col.name);
      if (col.kind == ColumnKind::numeric) {
        const double v = parse_numeric(row[c], col.name);
        double scaled =
            col.max > col.min ? (v - col.min) / (col.max - col.min) : 0.0;
        values.push_back(std::clamp(scaled, 0.0, 1.0));
      } else {
        if (col.kind == ColumnKind::sensitive) {
          sens.push_back(row[c]);
          if (!schema.sensitive_as_feature()) continue;
        }
        const auto it = std::lower_bound(col.categories.begin(),
                                         col.categories.end(), row[c]);
        const bool seen = it != col.categories.end() && *it == row[c];
        if (!seen) ++unseen_categories;
        for (const std::string& cat : col.categories) {
          values.push_back(seen && cat == row[c] ? 1.0 : 0.0);
        }
      }
    }
    const std::string& lab = row[label_c];
    if (lab == "0") labels.push_back(0);
    else if (lab == "1") labels.push_back(1);
    else throw DataError("label column: expected 0 or 1, got '" + lab + "'");
  }

  if (unseen_categories > 0) {
    std::cerr << "[causreg] encode_tabular: " << unseen_categories
              << " values outside the training categories encoded as zeros\n";
  }

  SplitData out;
  out.x = DesignMatrix::dense(d, std::move(values));
  out.y = LabelVector(std::move(labels));
  if (!schema.sensitive_column().empty()) {
    out.sensitive = SensitiveAssignment{schema.sensitive_column(), std::move(sens)};
  }
  return out;
}

std::string TabularSchema::to_json_string() const {
  nlohmann::json j;
  j["label_column"] = label_column_;
  j["sensitive_column"] = sensitive_column_;
  j["sensitive_as_feature"] = sensitive_as_feature_;
  nlohmann::json cols = nlohmann::json::array();
  for (const Column& c : columns_) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["kind"] = column_kind_to_string(c.kind);
    if (c.kind == ColumnKind::numeric) {
      jc["min"] = c.min;
      jc["max"] = c.max;
    } else {
      jc["categories"] = c.categories;
    }
    cols.push_back(std::move(jc));
  }
  j["columns"] = std::move(cols);
  return j.dump();
}

TabularSchema TabularSchema::from_json_string(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  TabularSchema s;
  s.label_column_ = j.at("label_column").get<std::string>();
  s.sensitive_column_ = j.value("sensitive_column", std::string());
  s.sensitive_as_feature_ = j.value("sensitive_as_feature", true);
  for (const auto& jc : j.at("columns")) {
    Column c;
    c.name = jc.at("name").get<std::string>();
    c.kind = column_kind_from_string(jc.at("kind").get<std::string>());
    if (c.kind == ColumnKind::numeric) {
      c.min = jc.at("min").get<double>();
      c.max = jc.at("max").get<double>();
    } else {
      for (const auto& cat : jc.at("categories")) {
        c.categories.push_back(cat.get<std::string>());
      }
    }
    s.columns_.push_back(std::move(c));
  }
  for (const Column& col : s.columns_) {
    if (col.kind == ColumnKind::sensitive && !s.sensitive_as_feature_) continue;
    if (col.kind == ColumnKind::numeric) {
      s.feature_names_.push_back(col.name);
    } else {
      for (const std::string& cat : col.categories) {
        s.feature_names_.push_back(col.name + "=" + cat);
      }
    }
  }
  return s;
}

DatasetBundle bundle_from_tabular(const CsvTable& records, const SchemaSpec& spec,
                                  const GroupLexicon& lex,
                                  double train_fraction,
                                  double validation_fraction) {
  if (records.rows.empty()) throw DataError("tabular bundle: no data rows");
  CsvTable train, validation, test;
  train.header = validation.header = test.header = records.header;

  bool has_split_col = false;
  for (const auto& h : records.header) {
    if (h == "split") has_split_col = true;
  }
  if (has_split_col) {
    const std::size_t c = records.column_index("split");
    for (const auto& row : records.rows) {
      if (row[c] == "train") train.rows.push_back(row);
      else if (row[c] == "validation") validation.rows.push_back(row);
      else if (row[c] == "test") test.rows.push_back(row);
      else throw DataError("tabular split column: unknown tag '" + row[c] + "'");
    }
  } else {
    if (!(train_fraction > 0.0) || !(validation_fraction > 0.0) ||
        train_fraction + validation_fraction >= 1.0) {
      throw ConfigError("tabular bundle: invalid split fractions");
    }
    const std::size_t n = records.rows.size();
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(n)));
    const auto n_val = static_cast<std::size_t>(
        std::floor(validation_fraction * static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
      if (i < n_train) train.rows.push_back(records.rows[i]);
      else if (i < n_train + n_val) validation.rows.push_back(records.rows[i]);
      else test.rows.push_back(records.rows[i]);
    }
  }
  if (train.rows.empty() || validation.rows.empty() || test.rows.empty()) {
    throw DataError("tabular bundle: every split must be non-empty");
  }

  const TabularSchema schema = TabularSchema::fit(train, spec);
  DatasetBundle b;
  b.feature_names = schema.feature_names();
  std::size_t unmatched = 0;
  b.groups = resolve_groups(lex, b.feature_names, &unmatched);
  if (unmatched > 0) {
    std::cerr << "[causreg] " << unmatched
              << " group-file entries matched no tabular feature\n";
  }
  b.train = encode_tabular(train, schema);
  b.validation = encode_tabular(validation, schema);
  b.test = encode_tabular(test, schema);
  b.validate();
  return b;
}

}  // namespace causreg
