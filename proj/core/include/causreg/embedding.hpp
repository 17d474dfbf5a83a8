#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causreg/dataset.hpp"
#include "causreg/text.hpp"

namespace causreg {

/// Token -> dense vector table in the standard GloVe text layout: one token
/// per line followed by k space-separated reals. Unknown tokens map to the
/// zero vector.
class EmbeddingTable {
 public:
  static EmbeddingTable load_glove(const std::string& path);
  static EmbeddingTable from_entries(
      std::size_t dim,
      std::vector<std::pair<std::string, std::vector<double>>> entries);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }

  // Zero fallback for out-of-vocabulary tokens.
  std::span<const double> vector_of(std::string_view token) const;
  bool contains(std::string_view token) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> storage_;  // row-major, one row per known token
  std::vector<double> fallback_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Per-group multipliers for the weighted document embedding; (1,1,1)
/// reproduces the plain mean-of-vectors representation.
struct GroupWeightTriple {
  double causal_weight = 1.0;
  double spurious_weight = 1.0;
  double remain_weight = 1.0;

  void validate() const;
};

/// Mean over tokens of group_weight(token) * vector(token). Tokens outside
/// the annotated causal/spurious lists use remain_weight; an empty token list
/// gives the zero vector.
std::vector<double> embed_document(const std::vector<std::string>& tokens,
                                   const EmbeddingTable& table,
                                   const GroupLexicon& lex,
                                   const GroupWeightTriple& weights);

/// Dense bundle where every document is its (weighted) mean embedding. All
/// embedding dimensions land in the remaining group: the causal/spurious
/// distinction acts through the weights, not through the penalty.
DatasetBundle bundle_from_corpus_embedding(const Corpus& corpus,
                                           const EmbeddingTable& table,
                                           const GroupLexicon& lex,
                                           const GroupWeightTriple& weights);

}  // namespace causreg
