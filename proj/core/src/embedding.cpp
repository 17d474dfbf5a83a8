#include "causreg/embedding.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace causreg {

EmbeddingTable EmbeddingTable::load_glove(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);
  std::vector<std::pair<std::string, std::vector<double>>> entries;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string token;
    iss >> token;
    std::vector<double> vec;
    double v;
    while (iss >> v) vec.push_back(v);
    if (vec.empty()) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": no vector components");
    }
    if (dim == 0) {
      dim = vec.size();
    } else if (vec.size() != dim) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(dim) + " components, got " +
                      std::to_string(vec.size()));
    }
    entries.emplace_back(std::move(token), std::move(vec));
  }
  if (entries.empty()) throw DataError("embedding file is empty: " + path);
  return from_entries(dim, std::move(entries));
}

EmbeddingTable EmbeddingTable::from_entries(
    std::size_t dim,
    std::vector<std::pair<std::string, std::vector<double>>> entries) {
  if (dim == 0) throw DataError("embedding dimension must be positive");
  EmbeddingTable t;
  t.dim_ = dim;
  t.fallback_.assign(dim, 0.0);
  t.storage_.reserve(entries.size() * dim);
  for (auto& [token, vec] : entries) {
    if (vec.size() != dim) throw DataError("embedding vector length mismatch");
    for (double v : vec) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite embedding component for token '" + token +
                        "'");
      }
    }
    const auto [it, inserted] = t.index_.emplace(token, t.index_.size());
    if (!inserted) throw DataError("duplicate embedding token: " + token);
    t.storage_.insert(t.storage_.end(), vec.begin(), vec.end());
  }
  return t;
}

std::span<const double> EmbeddingTable::vector_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return {fallback_.data(), dim_};
  return {storage_.data() + it->second * dim_, dim_};
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

void GroupWeightTriple::validate() const {
  if (!(causal_weight > 0.0) || !(spurious_weight > 0.0) ||
      !(remain_weight > 0.0)) {
    throw ConfigError("group embedding weights must be positive");
  }
}

std::vector<double> embed_document(const std::vector<std::string>& tokens,
                                   const EmbeddingTable& table,
                                   const GroupLexicon& lex,
                                   const GroupWeightTriple& weights) {
  weights.validate();
  std::vector<double> acc(table.dim(), 0.0);
  if (tokens.empty()) return acc;
  const std::set<std::string> causal(lex.causal.begin(), lex.causal.end());
  const std::set<std::string> spurious(lex.spurious.begin(), lex.spurious.end());
  for (const std::string& tok : tokens) {
    double w = weights.remain_weight;
    if (causal.count(tok)) w = weights.causal_weight;
    else if (spurious.count(tok)) w = weights.spurious_weight;
    const auto vec = table.vector_of(tok);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * vec[k];
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : acc) v *= inv;
  return acc;
}

namespace {

SplitData embed_split(const Corpus& corpus, Split split,
                      const EmbeddingTable& table, const GroupLexicon& lex,
                      const GroupWeightTriple& weights) {
  const auto rows = corpus.rows_of(split);
  std::vector<double> values;
  values.reserve(rows.size() * table.dim());
  std::vector<int> labels;
  std::vector<std::string> sens;
  std::size_t with_sens = 0;
  for (std::size_t i : rows) {
    const Document& doc = corpus.docs[i];
    const auto vec = embed_document(tokenize(doc.text), table, lex, weights);
    values.insert(values.end(), vec.begin(), vec.end());
    labels.push_back(doc.label);
    if (doc.sensitive) {
      ++with_sens;
      sens.push_back(*doc.sensitive);
    }
  }
  SplitData out;
  out.x = DesignMatrix::dense(table.dim(), std::move(values));
  out.y = LabelVector(std::move(labels));
  if (with_sens == rows.size() && !rows.empty()) {
    out.sensitive =
        SensitiveAssignment{corpus.sensitive_attribute, std::move(sens)};
  } else if (with_sens != 0) {
    throw DataError("split '" + split_to_string(split) +
                    "': sensitive value present on some rows but not all");
  }
  return out;
}

}  // namespace

DatasetBundle bundle_from_corpus_embedding(const Corpus& corpus,
                                           const EmbeddingTable& table,
                                           const GroupLexicon& lex,
                                           const GroupWeightTriple& weights) {
  DatasetBundle b;
  b.feature_names.reserve(table.dim());
  for (std::size_t k = 0; k < table.dim(); ++k) {
    b.feature_names.push_back("dim" + std::to_string(k));
  }
  b.groups = FeatureGroups::all_remaining(table.dim());
  b.train = embed_split(corpus, Split::train, table, lex, weights);
  b.validation = embed_split(corpus, Split::validation, table, lex, weights);
  b.test = embed_split(corpus, Split::test, table, lex, weights);
  const auto optional_split = [&](Split s) -> std::optional<SplitData> {
    if (corpus.rows_of(s).empty()) return std::nullopt;
    return embed_split(corpus, s, table, lex, weights);
  };
  b.ctf_train = optional_split(Split::ctf_train);
  b.ctf_validation = optional_split(Split::ctf_validation);
  b.ctf_test = optional_split(Split::ctf_test);
  b.validate();
  return b;
}

}  // namespace causreg
