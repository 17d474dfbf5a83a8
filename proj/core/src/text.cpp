#include "causreg/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace causreg {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x80) {
      current.push_back(c);  // UTF-8 payload byte
    } else if (std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (std::isspace(u)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    }
    // Remaining ASCII (punctuation etc.) is stripped.
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "validation") return Split::validation;
  if (s == "test") return Split::test;
  if (s == "ctf_train") return Split::ctf_train;
  if (s == "ctf_validation") return Split::ctf_validation;
  if (s == "ctf_test") return Split::ctf_test;
  throw DataError("unknown split tag: '" + s + "'");
}

std::string split_to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
    case Split::ctf_train: return "ctf_train";
    case Split::ctf_validation: return "ctf_validation";
    case Split::ctf_test: return "ctf_test";
  }
  throw DataError("invalid split value");
}

Split ctf_split_of(Split s) {
  switch (s) {
    case Split::train: return Split::ctf_train;
    case Split::validation: return Split::ctf_validation;
    case Split::test: return Split::ctf_test;
    default: throw DataError("split has no counterfactual counterpart");
  }
}

std::vector<std::size_t> Corpus::rows_of(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].split == split) out.push_back(i);
  }
  return out;
}

void Corpus::validate_pairing() const {
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].counterfactual_of) continue;
    const std::size_t j = *docs[i].counterfactual_of;
    if (j >= docs.size()) {
      throw DataError("row " + std::to_string(i) + " twin index out of range");
    }
    if (!docs[j].counterfactual_of || *docs[j].counterfactual_of != i) {
      throw DataError("counterfactual pairing is not symmetric at row " +
                      std::to_string(i));
    }
    if (docs[i].label == docs[j].label) {
      throw DataError("counterfactual pair (" + std::to_string(i) + ", " +
                      std::to_string(j) + ") has equal labels");
    }
  }
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

Corpus load_corpus_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("corpus file is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_tabs(line);
  long text_col = -1, label_col = -1, pair_col = -1, split_col = -1,
       sens_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "text") text_col = static_cast<long>(c);
    else if (header[c] == "label") label_col = static_cast<long>(c);
    else if (header[c] == "pair_id") pair_col = static_cast<long>(c);
    else if (header[c] == "split") split_col = static_cast<long>(c);
    else if (header[c] == "sensitive") sens_col = static_cast<long>(c);
  }
  if (text_col < 0 || label_col < 0) {
    throw DataError("corpus header must contain 'text' and 'label' columns");
  }

  Corpus corpus;
  std::unordered_map<std::string, std::size_t> first_of_pair;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_tabs(line);
    if (f.size() != header.size()) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " columns, got " +
                      std::to_string(f.size()));
    }
    Document doc;
    doc.text = f[static_cast<std::size_t>(text_col)];
    const std::string& lab = f[static_cast<std::size_t>(label_col)];
    if (lab == "0") doc.label = 0;
    else if (lab == "1") doc.label = 1;
    else {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": label must be 0 or 1, got '" + lab + "'");
    }
    if (split_col >= 0) {
      doc.split = split_from_string(f[static_cast<std::size_t>(split_col)]);
    }
    if (sens_col >= 0 && !f[static_cast<std::size_t>(sens_col)].empty()) {
      doc.sensitive = f[static_cast<std::size_t>(sens_col)];
    }
    const std::size_t row = corpus.docs.size();
    if (pair_col >= 0) {
      const std::string& pid = f[static_cast<std::size_t>(pair_col)];
      if (!pid.empty()) {
        auto [it, inserted] = first_of_pair.try_emplace(pid, row);
        if (!inserted) {
          const std::size_t other = it->second;
          if (other == std::string::npos) {
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": pair_id '" + pid + "' used more than twice");
          }
          doc.counterfactual_of = other;
          corpus.docs[other].counterfactual_of = row;
          it->second = std::string::npos;  // consumed
        }
      }
    }
    corpus.docs.push_back(std::move(doc));
  }
  corpus.validate_pairing();
  return corpus;
}

void save_corpus_tsv(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus file: " + path);
  const bool any_sens = std::any_of(
      corpus.docs.begin(), corpus.docs.end(),
      [](const Document& d) { return d.sensitive.has_value(); });
  out << "text\tlabel\tpair_id\tsplit";
  if (any_sens) out << "\tsensitive";
  out << "\n";
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const Document& d = corpus.docs[i];
    std::string pid;
    if (d.counterfactual_of) {
      // Stable id derived from the lower row index of the pair.
      pid = "p" + std::to_string(std::min(i, *d.counterfactual_of));
    }
    out << d.text << "\t" << d.label << "\t" << pid << "\t"
        << split_to_string(d.split);
    if (any_sens) out << "\t" << (d.sensitive ? *d.sensitive : std::string());
    out << "\n";
  }
  if (!out) throw DataError("failed writing corpus file: " + path);
}

Vocabulary Vocabulary::fit(const Corpus& corpus, int min_df) {
  if (min_df < 1) throw ConfigError("min_df must be >= 1");
  std::vector<std::string> order;
  std::unordered_map<std::string, int> df;
  std::unordered_set<std::string> seen_in_doc;
  for (const Document& doc : corpus.docs) {
    if (doc.split != Split::train) continue;
    seen_in_doc.clear();
    // Document frequency: each token counts once per document. First
    // occurrence across the split fixes the feature order.
    for (auto& t : tokenize(doc.text)) {
      if (!seen_in_doc.insert(t).second) continue;
      auto [it, inserted] = df.try_emplace(t, 0);
      if (inserted) order.push_back(t);
      ++it->second;
    }
  }
  std::vector<std::string> kept;
  kept.reserve(order.size());
  for (auto& t : order) {
    if (df[t] >= min_df) kept.push_back(std::move(t));
  }
  return from_tokens(std::move(kept));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.index_.reserve(v.tokens_.size());
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    auto [it, inserted] =
        v.index_.emplace(v.tokens_[i], static_cast<std::uint32_t>(i));
    if (!inserted) throw DataError("duplicate token in vocabulary: " + v.tokens_[i]);
  }
  return v;
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SplitData vectorize_bow(const Corpus& corpus, Split split,
                        const Vocabulary& vocab) {
  const std::vector<std::size_t> rows = corpus.rows_of(split);
  std::vector<std::vector<std::uint32_t>> brows;
  brows.reserve(rows.size());
  std::vector<int> labels;
  labels.reserve(rows.size());
  std::vector<std::string> sens;
  std::size_t with_sens = 0;
  for (std::size_t i : rows) {
    const Document& doc = corpus.docs[i];
    std::vector<std::uint32_t> cols;
    for (const std::string& tok : tokenize(doc.text)) {
      if (const auto idx = vocab.index_of(tok)) cols.push_back(*idx);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    brows.push_back(std::move(cols));
    labels.push_back(doc.label);
    if (doc.sensitive) {
      ++with_sens;
      sens.push_back(*doc.sensitive);
    }
  }
  SplitData out;
  out.x = DesignMatrix::binary(vocab.size(), std::move(brows));
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

Corpus filter_kindle(const std::vector<RatedReview>& reviews) {
  Corpus corpus;
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    const RatedReview& r = reviews[i];
    int rating = 0;
    try {
      std::size_t used = 0;
      rating = std::stoi(r.rating, &used);
      if (used != r.rating.size()) rating = -1;
    } catch (const std::exception&) {
      rating = -1;
    }
    if (rating < 1 || rating > 5) {
      std::cerr << "[causreg] filter_kindle: review " << i
                << " rejected, malformed rating '" << r.rating << "'\n";
      continue;
    }
    if (rating == 3) continue;  // neutral, no polarity
    const std::size_t words = tokenize(r.text).size();
    if (words < 5 || words > 40) continue;
    Document doc;
    doc.text = r.text;
    doc.label = rating >= 4 ? 1 : 0;
    doc.split = Split::train;
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<RatedReview> load_reviews_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open reviews file: " + path);
  std::vector<RatedReview> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    RatedReview r;
    r.text = j.value("reviewText", std::string());
    if (j.contains("overall")) {
      const auto& o = j.at("overall");
      r.rating = o.is_number() ? std::to_string(o.get<int>())
                               : o.get<std::string>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

Corpus augment_with_counterfactuals(const Corpus& corpus) {
  corpus.validate_pairing();
  Corpus out = corpus;
  std::vector<std::size_t> unpaired;
  for (std::size_t i = 0; i < out.docs.size(); ++i) {
    if (out.docs[i].split != Split::train) continue;
    if (!out.docs[i].counterfactual_of) {
      unpaired.push_back(i);
      continue;
    }
    const std::size_t j = *out.docs[i].counterfactual_of;
    if (out.docs[j].split != Split::train) out.docs[j].split = Split::train;
  }
  if (!unpaired.empty()) {
    std::string msg = "augment: training rows without counterfactual twins:";
    for (std::size_t k = 0; k < unpaired.size() && k < 20; ++k) {
      msg += " " + std::to_string(unpaired[k]);
    }
    if (unpaired.size() > 20) {
      msg += " (+" + std::to_string(unpaired.size() - 20) + " more)";
    }
    throw DataError(msg);
  }
  return out;
}

DatasetBundle bundle_from_corpus_bow(const Corpus& corpus,
                                     const Vocabulary& vocab,
                                     const GroupLexicon& lex) {
  DatasetBundle b;
  b.feature_names = vocab.tokens();
  std::size_t unmatched = 0;
  b.groups = resolve_groups(lex, b.feature_names, &unmatched);
  if (unmatched > 0) {
    std::cerr << "[causreg] " << unmatched
              << " group-file entries matched no vocabulary token\n";
  }
  b.train = vectorize_bow(corpus, Split::train, vocab);
  b.validation = vectorize_bow(corpus, Split::validation, vocab);
  b.test = vectorize_bow(corpus, Split::test, vocab);
  const auto optional_split = [&](Split s) -> std::optional<SplitData> {
    if (corpus.rows_of(s).empty()) return std::nullopt;
    return vectorize_bow(corpus, s, vocab);
  };
  b.ctf_train = optional_split(Split::ctf_train);
  b.ctf_validation = optional_split(Split::ctf_validation);
  b.ctf_test = optional_split(Split::ctf_test);
  b.validate();
  return b;
}

}  // namespace causreg
