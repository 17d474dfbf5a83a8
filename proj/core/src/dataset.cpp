#include "causreg/dataset.hpp"

#include <fstream>

#include "json.hpp"

namespace causreg {

namespace {

void check_split(const SplitData& s, const char* name, std::size_t dim) {
  if (s.x.cols() != dim) {
    throw DataError(std::string("bundle: split '") + name + "' has " +
                    std::to_string(s.x.cols()) + " columns, expected " +
                    std::to_string(dim));
  }
  if (s.x.rows() != s.y.size()) {
    throw DataError(std::string("bundle: split '") + name +
                    "' row/label mismatch");
  }
  if (s.sensitive && s.sensitive->values.size() != s.x.rows()) {
    throw DataError(std::string("bundle: split '") + name +
                    "' sensitive column length mismatch");
  }
}

}  // namespace

void DatasetBundle::validate() const {
  const std::size_t dim = groups.dimension();
  if (feature_names.size() != dim) {
    throw DataError("bundle: feature_names length does not match dimension");
  }
  check_split(train, "train", dim);
  check_split(validation, "validation", dim);
  check_split(test, "test", dim);
  if (ctf_train) check_split(*ctf_train, "ctf_train", dim);
  if (ctf_validation) check_split(*ctf_validation, "ctf_validation", dim);
  if (ctf_test) check_split(*ctf_test, "ctf_test", dim);
}

GroupLexicon load_group_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open group file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("group file " + path + ": " + e.what());
  }
  GroupLexicon lex;
  if (!j.is_object() || !j.contains("causal") || !j.contains("spurious")) {
    throw DataError("group file " + path +
                    ": expected object with 'causal' and 'spurious' arrays");
  }
  for (const auto& v : j.at("causal")) lex.causal.push_back(v.get<std::string>());
  for (const auto& v : j.at("spurious")) {
    lex.spurious.push_back(v.get<std::string>());
  }
  return lex;
}

void save_group_lexicon(const std::string& path, const GroupLexicon& lex) {
  nlohmann::json j;
  j["causal"] = lex.causal;
  j["spurious"] = lex.spurious;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write group file: " + path);
  out << j.dump(2) << "\n";
}

namespace {

bool name_matches(const std::string& feature, const std::string& entry) {
  if (feature == entry) return true;
  // One-hot columns are named "<column>=<value>".
  return feature.size() > entry.size() + 1 &&
         feature.compare(0, entry.size(), entry) == 0 &&
         feature[entry.size()] == '=';
}

}  // namespace

FeatureGroups resolve_groups(const GroupLexicon& lex,
                             const std::vector<std::string>& feature_names,
                             std::size_t* unmatched) {
  std::vector<std::size_t> causal, spurious;
  std::size_t miss = 0;
  const auto resolve = [&](const std::vector<std::string>& entries,
                           std::vector<std::size_t>& out) {
    for (const auto& e : entries) {
      bool hit = false;
      for (std::size_t j = 0; j < feature_names.size(); ++j) {
        if (name_matches(feature_names[j], e)) {
          out.push_back(j);
          hit = true;
        }
      }
      if (!hit) ++miss;
    }
  };
  resolve(lex.causal, causal);
  resolve(lex.spurious, spurious);
  if (unmatched) *unmatched = miss;
  return FeatureGroups(feature_names.size(), std::move(causal),
                       std::move(spurious));
}

FeatureReduction remove_features(const DesignMatrix& matrix,
                                 const std::vector<std::string>& names,
                                 const FeatureGroups& groups,
                                 const std::vector<std::size_t>& remove) {
  if (names.size() != matrix.cols() || groups.dimension() != matrix.cols()) {
    throw DataError("remove_features: names/groups/matrix dimension mismatch");
  }
  FeatureReduction out;
  out.matrix = matrix.without_columns(remove, &out.old_to_new);
  out.names.reserve(out.matrix.cols());
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (out.old_to_new[j] != DesignMatrix::npos) out.names.push_back(names[j]);
  }
  const auto remap = [&](const std::vector<std::size_t>& set) {
    std::vector<std::size_t> r;
    for (std::size_t j : set) {
      if (out.old_to_new[j] != DesignMatrix::npos) {
        r.push_back(out.old_to_new[j]);
      }
    }
    return r;
  };
  out.groups = FeatureGroups(out.matrix.cols(), remap(groups.causal()),
                             remap(groups.spurious()));
  return out;
}

DatasetBundle drop_spurious_features(const DatasetBundle& bundle) {
  const std::vector<std::size_t>& drop = bundle.groups.spurious();
  DatasetBundle out = bundle;
  const auto reduce = [&](SplitData& s) {
    s.x = s.x.without_columns(drop);
  };
  reduce(out.train);
  reduce(out.validation);
  reduce(out.test);
  if (out.ctf_train) reduce(*out.ctf_train);
  if (out.ctf_validation) reduce(*out.ctf_validation);
  if (out.ctf_test) reduce(*out.ctf_test);

  const FeatureReduction red = remove_features(
      bundle.train.x, bundle.feature_names, bundle.groups, drop);
  out.feature_names = red.names;
  out.groups = red.groups;
  // remove_features already rebuilt train.x identically; keep the reduced one.
  out.train.x = red.matrix;
  out.validate();
  return out;
}

DatasetBundle augment_train_with_counterfactuals(const DatasetBundle& bundle) {
  if (!bundle.ctf_train) {
    throw DataError(
        "augment: bundle has no counterfactual twins for the training split");
  }
  const SplitData& orig = bundle.train;
  const SplitData& twin = *bundle.ctf_train;
  if (orig.x.rows() != twin.x.rows()) {
    throw DataError("augment: training split and its twins differ in size");
  }
  DatasetBundle out = bundle;

  std::vector<int> labels = orig.y.values();
  labels.insert(labels.end(), twin.y.values().begin(), twin.y.values().end());

  if (orig.x.is_binary() != twin.x.is_binary()) {
    throw DataError("augment: mixed storage modes between train and twins");
  }
  if (orig.x.is_binary()) {
    std::vector<std::vector<std::uint32_t>> rows;
    rows.reserve(orig.x.rows() * 2);
    for (std::size_t i = 0; i < orig.x.rows(); ++i) rows.push_back(orig.x.binary_row(i));
    for (std::size_t i = 0; i < twin.x.rows(); ++i) rows.push_back(twin.x.binary_row(i));
    out.train.x = DesignMatrix::binary(orig.x.cols(), std::move(rows));
  } else {
    std::vector<double> vals;
    vals.reserve(orig.x.rows() * orig.x.cols() * 2);
    for (std::size_t i = 0; i < orig.x.rows(); ++i) {
      const auto r = orig.x.dense_row(i);
      vals.insert(vals.end(), r.begin(), r.end());
    }
    for (std::size_t i = 0; i < twin.x.rows(); ++i) {
      const auto r = twin.x.dense_row(i);
      vals.insert(vals.end(), r.begin(), r.end());
    }
    out.train.x = DesignMatrix::dense(orig.x.cols(), std::move(vals));
  }
  out.train.y = LabelVector(std::move(labels));
  if (orig.sensitive && twin.sensitive) {
    SensitiveAssignment s = *orig.sensitive;
    s.values.insert(s.values.end(), twin.sensitive->values.begin(),
                    twin.sensitive->values.end());
    out.train.sensitive = std::move(s);
  } else {
    out.train.sensitive.reset();
  }
  out.validate();
  return out;
}

}  // namespace causreg
