#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causreg/dataset.hpp"
#include "causreg/types.hpp"

namespace causreg {

/// Lowercase, strip ASCII punctuation, split on whitespace. Bytes >= 0x80
/// pass through unchanged so UTF-8 text stays intact.
std::vector<std::string> tokenize(std::string_view text);

enum class Split { train, validation, test, ctf_train, ctf_validation, ctf_test };

Split split_from_string(const std::string& s);
std::string split_to_string(Split s);

/// Returns the counterfactual split paired with a standard one.
Split ctf_split_of(Split s);

struct Document {
  std::string text;
  int label = 0;
  // Index of this row's counterfactual twin, symmetric where present.
  std::optional<std::size_t> counterfactual_of;
  Split split = Split::train;
  std::optional<std::string> sensitive;
};

struct Corpus {
  std::vector<Document> docs;
  std::string sensitive_attribute = "sensitive";

  std::vector<std::size_t> rows_of(Split split) const;
  // Checks that twin links are a symmetric bijection with opposite labels.
  void validate_pairing() const;
};

/// TSV with a header line. Columns: `text`, `label` (0/1), optional
/// `pair_id` (twin linkage), optional `split`, optional `sensitive`.
Corpus load_corpus_tsv(const std::string& path);
void save_corpus_tsv(const std::string& path, const Corpus& corpus);

/// Token -> dense feature index, fitted on the training split only.
class Vocabulary {
 public:
  Vocabulary() = default;

  // First-occurrence order over training documents; tokens appearing in
  // fewer than min_df training documents are dropped.
  static Vocabulary fit(const Corpus& corpus, int min_df = 1);
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::optional<std::uint32_t> index_of(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Binary bag-of-words rows for one split; labels and sensitive values ride
/// along. Out-of-vocabulary tokens are dropped.
SplitData vectorize_bow(const Corpus& corpus, Split split,
                        const Vocabulary& vocab);

struct RatedReview {
  std::string text;
  std::string rating;  // expected "1".."5"
};

/// Rating-polarity filter: keep reviews of 5 to 40 tokens; ratings {4,5}
/// become label 1, {1,2} label 0, rating 3 is dropped. Malformed ratings are
/// rejected with a logged reason.
Corpus filter_kindle(const std::vector<RatedReview>& reviews);

/// JSON-lines reader for review dumps with `reviewText` and `overall` fields.
std::vector<RatedReview> load_reviews_jsonl(const std::string& path);

/// Training split becomes originals plus their counterfactual twins (twins
/// are re-tagged into the train split). Errors listing any train row without
/// a twin.
Corpus augment_with_counterfactuals(const Corpus& corpus);

/// Assemble the experiment bundle for the bag-of-words representation.
DatasetBundle bundle_from_corpus_bow(const Corpus& corpus,
                                     const Vocabulary& vocab,
                                     const GroupLexicon& lex);

}  // namespace causreg
