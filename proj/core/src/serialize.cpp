#include "causreg/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace causreg {

namespace {

using nlohmann::json;

json penalty_to_json(const PenaltyConfig& p) {
  return json{{"c", p.lambda_c}, {"s", p.lambda_s}, {"r", p.lambda_r}};
}

json aggregate_to_json(const Aggregate& agg) {
  return json{{"mean", agg.mean},
              {"std", agg.std_dev},
              {"single_seed", agg.single_seed}};
}

json runs_to_json(const std::vector<SeedRun>& runs) {
  json arr = json::array();
  for (const SeedRun& r : runs) {
    arr.push_back(json{{"seed", r.seed}, {"metrics", r.metrics}});
  }
  return arr;
}

std::string format_lambda(const PenaltyConfig& p) {
  std::ostringstream os;
  os << "(" << p.lambda_c << "," << p.lambda_s << "," << p.lambda_r << ")";
  return os.str();
}

std::string format_mean_std(const Aggregate& agg, const std::string& key) {
  if (!agg.mean.count(key)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f ± %.3f", agg.mean.at(key),
                agg.std_dev.at(key));
  return buf;
}

}  // namespace

void save_model_file(const std::string& path, const ModelFile& mf) {
  json j;
  j["format_version"] = mf.format_version;
  j["representation"] = mf.representation;
  j["weights"] = mf.model.weights;
  j["bias"] = mf.model.bias;
  j["feature_names"] = mf.feature_names;
  j["groups"] = json{{"causal", mf.causal}, {"spurious", mf.spurious}};
  j["min_df"] = mf.min_df;
  if (mf.tabular_schema_json) {
    j["tabular_schema"] = json::parse(*mf.tabular_schema_json);
  }
  if (mf.embedding_weights) {
    j["embedding_weights"] = json{{"causal", mf.embedding_weights->causal_weight},
                                  {"spurious", mf.embedding_weights->spurious_weight},
                                  {"remain", mf.embedding_weights->remain_weight}};
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw DataError("failed writing model file: " + path);
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("model file " + path + ": " + e.what());
  }
  ModelFile mf;
  mf.format_version = j.at("format_version").get<int>();
  if (mf.format_version != 1) {
    throw DataError("model file " + path + ": unsupported format_version " +
                    std::to_string(mf.format_version));
  }
  mf.representation = j.at("representation").get<std::string>();
  mf.model.weights = j.at("weights").get<std::vector<double>>();
  mf.model.bias = j.at("bias").get<double>();
  mf.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  mf.causal = j.at("groups").at("causal").get<std::vector<std::size_t>>();
  mf.spurious = j.at("groups").at("spurious").get<std::vector<std::size_t>>();
  mf.min_df = j.value("min_df", 1);
  if (j.contains("tabular_schema")) {
    mf.tabular_schema_json = j.at("tabular_schema").dump();
  }
  if (j.contains("embedding_weights")) {
    GroupWeightTriple w;
    w.causal_weight = j.at("embedding_weights").at("causal").get<double>();
    w.spurious_weight = j.at("embedding_weights").at("spurious").get<double>();
    w.remain_weight = j.at("embedding_weights").at("remain").get<double>();
    mf.embedding_weights = w;
  }
  if (mf.model.weights.size() != mf.feature_names.size()) {
    throw DataError("model file " + path + ": weights/feature_names mismatch");
  }
  return mf;
}

std::string report_to_json_string(const ExperimentReport& report) {
  json j;
  j["format_version"] = 1;
  j["num_seeds"] = report.num_seeds;
  j["seed0"] = report.seed0;
  json settings = json::array();
  for (const CandidateResult& c : report.settings) {
    settings.push_back(json{{"lambda", penalty_to_json(c.lambda)},
                            {"per_seed_metrics", runs_to_json(c.per_seed)},
                            {"aggregate", aggregate_to_json(c.aggregate)}});
  }
  j["settings"] = std::move(settings);
  json baselines = json::array();
  for (const BaselineRow& b : report.baselines) {
    json row;
    row["name"] = b.name;
    row["skipped"] = b.skipped;
    if (b.skipped) {
      row["skip_reason"] = b.skip_reason;
    } else {
      row["lambda"] = penalty_to_json(b.lambda);
      row["per_seed_metrics"] = runs_to_json(b.per_seed);
      row["aggregate"] = aggregate_to_json(b.aggregate);
    }
    baselines.push_back(std::move(row));
  }
  j["baselines"] = std::move(baselines);
  json sel;
  sel["criterion"] = report.selection_criterion;
  if (report.selected) {
    sel["index"] = *report.selected;
    sel["lambda"] = penalty_to_json(report.settings[*report.selected].lambda);
  }
  j["selection"] = std::move(sel);
  return j.dump(2) + "\n";
}

std::string report_to_text(const ExperimentReport& report) {
  // Columns shown only when at least one row carries the metric.
  const std::vector<std::pair<std::string, std::string>> metric_cols = {
      {"test_accuracy", "test"},   {"ctf_accuracy", "ctf"},
      {"test_f1", "f1"},           {"delta_eo", "d_eo"},
      {"delta_dp", "d_dp"},
  };
  std::vector<std::string> active;
  const auto scan = [&](const Aggregate& agg) {
    for (const auto& [key, title] : metric_cols) {
      if (agg.mean.count(key) &&
          std::find(active.begin(), active.end(), key) == active.end()) {
        active.push_back(key);
      }
    }
  };
  for (const auto& b : report.baselines) {
    if (!b.skipped) scan(b.aggregate);
  }
  for (const auto& c : report.settings) scan(c.aggregate);
  // Keep declaration order.
  std::vector<std::pair<std::string, std::string>> cols;
  for (const auto& mc : metric_cols) {
    if (std::find(active.begin(), active.end(), mc.first) != active.end()) {
      cols.push_back(mc);
    }
  }

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"method", "lambda(c,s,r)"});
  for (const auto& [_, title] : cols) rows.back().push_back(title);

  const auto add_row = [&](const std::string& name, const PenaltyConfig& p,
                           const Aggregate& agg, bool selected) {
    std::vector<std::string> row;
    row.push_back(selected ? name + " *" : name);
    row.push_back(format_lambda(p));
    for (const auto& [key, _] : cols) row.push_back(format_mean_std(agg, key));
    rows.push_back(std::move(row));
  };

  for (const auto& b : report.baselines) {
    if (b.skipped) {
      rows.push_back({b.name, "(skipped: " + b.skip_reason + ")"});
      continue;
    }
    add_row(b.name, b.lambda, b.aggregate, false);
  }
  for (std::size_t i = 0; i < report.settings.size(); ++i) {
    const auto& c = report.settings[i];
    add_row("grouped", c.lambda, c.aggregate,
            report.selected && *report.selected == i);
  }

  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream os;
  os << "selection: " << report.selection_criterion
     << "  seeds: " << report.num_seeds << " (seed0=" << report.seed0 << ")\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c];
      if (c + 1 < row.size()) {
        os << std::string(widths[c] - row[c].size() + 2, ' ');
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string sweep_to_json_string(const SweepTable& table) {
  json arr = json::array();
  for (const SweepPoint& p : table.points) {
    arr.push_back(json{{"axis", std::string(1, p.axis)},
                       {"lambda", penalty_to_json(p.lambda)},
                       {"aggregate", aggregate_to_json(p.aggregate)}});
  }
  json j;
  j["format_version"] = 1;
  j["points"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string sweep_to_text(const SweepTable& table) {
  std::ostringstream os;
  os << "axis  lambda      test_acc         ctf_acc\n";
  for (const SweepPoint& p : table.points) {
    const double v = p.axis == 'c'   ? p.lambda.lambda_c
                     : p.axis == 's' ? p.lambda.lambda_s
                                     : p.lambda.lambda_r;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%c     %-10g  %-15s  %-15s\n", p.axis, v,
                  format_mean_std(p.aggregate, "test_accuracy").c_str(),
                  format_mean_std(p.aggregate, "ctf_accuracy").c_str());
    os << buf;
  }
  return os.str();
}

AnnotationExport make_annotation_export(const LinearModel& model,
                                        const std::vector<std::string>& names,
                                        double threshold) {
  if (names.size() != model.dimension()) {
    throw DataError("annotation export: names/model dimension mismatch");
  }
  if (!model.all_finite()) {
    throw NumericError("annotation export: model has non-finite weights");
  }
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (std::abs(model.weights[j]) > threshold) idx.push_back(j);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(model.weights[a]);
    const double mb = std::abs(model.weights[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  AnnotationExport ex;
  ex.threshold = threshold;
  ex.entries.reserve(idx.size());
  for (std::size_t j : idx) ex.entries.emplace_back(names[j], model.weights[j]);
  return ex;
}

void save_annotation_export(const std::string& path,
                            const AnnotationExport& ex) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write annotation export: " + path);
  out << "# coefficient magnitude threshold: " << ex.threshold << "\n";
  out << "feature\tweight\n";
  char buf[64];
  for (const auto& [name, w] : ex.entries) {
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    out << name << "\t" << buf << "\n";
  }
  if (!out) throw DataError("failed writing annotation export: " + path);
}

}  // namespace causreg
