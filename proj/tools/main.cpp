// Command-line front end: dataset preparation, annotation export, training,
// grid search, sensitivity sweeps and evaluation, all driven by a JSON config
// file. Exit codes: 0 success, 2 config error, 3 data error, 4 numerical
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "causreg/embedding.hpp"
#include "causreg/experiments.hpp"
#include "causreg/metrics.hpp"
#include "causreg/serialize.hpp"
#include "causreg/synthetic.hpp"
#include "causreg/tabular.hpp"
#include "causreg/text.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace causreg;

namespace {

struct RunConfig {
  // dataset
  std::string format;  // tsv | csv | synth
  std::string data_path;
  std::string schema_path;
  std::string groups_path;
  SynthConfig synth;

  std::string representation = "bow";  // bow | glove | glove_weighted | tabular
  std::string embedding_path;
  GroupWeightTriple embedding_weights;
  int min_df = 1;

  std::optional<PenaltyConfig> penalty;
  GridSpec grid;
  TrainConfig train;
  int seeds = 1;
  SelectionMode selection = SelectionMode::ctf_validation;
  int jobs = 1;
  std::string output_dir = "out";
  std::string model_path;  // for eval
  double annotate_threshold = 1.0;
  double annotate_lambda = 0.01;
};

template <typename T>
T get_field(const json& j, const std::string& key, const T& fallback) {
  try {
    return j.value(key, fallback);
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + key + "': " + e.what());
  }
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError("config: missing " + what + " path");
  if (!fs::exists(path)) {
    throw ConfigError("config: " + what + " file does not exist: " + path);
  }
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }

  RunConfig cfg;
  if (!j.contains("dataset") || !j.at("dataset").is_object()) {
    throw ConfigError("config: missing 'dataset' object");
  }
  const json& d = j.at("dataset");
  cfg.format = get_field<std::string>(d, "format", "");
  if (cfg.format != "tsv" && cfg.format != "csv" && cfg.format != "synth") {
    throw ConfigError("config: dataset.format must be tsv, csv or synth");
  }
  cfg.data_path = get_field<std::string>(d, "path", "");
  cfg.schema_path = get_field<std::string>(d, "schema", "");
  cfg.groups_path = get_field<std::string>(d, "groups", "");
  if (d.contains("synth")) {
    const json& s = d.at("synth");
    cfg.synth.seed = get_field<std::uint64_t>(s, "seed", cfg.synth.seed);
    cfg.synth.n = get_field<std::size_t>(s, "n", cfg.synth.n);
    cfg.synth.d = get_field<std::size_t>(s, "d", cfg.synth.d);
    cfg.synth.n_causal = get_field<std::size_t>(s, "n_causal", cfg.synth.n_causal);
    cfg.synth.n_spurious =
        get_field<std::size_t>(s, "n_spurious", cfg.synth.n_spurious);
    cfg.synth.spurious_train_corr = get_field<double>(
        s, "spurious_train_corr", cfg.synth.spurious_train_corr);
    cfg.synth.flip_noise = get_field<double>(s, "flip_noise", cfg.synth.flip_noise);
    cfg.synth.plant_sensitive =
        get_field<bool>(s, "plant_sensitive", cfg.synth.plant_sensitive);
    cfg.synth.sensitive_corr =
        get_field<double>(s, "sensitive_corr", cfg.synth.sensitive_corr);
    cfg.synth.train_fraction =
        get_field<double>(s, "train_fraction", cfg.synth.train_fraction);
    cfg.synth.validation_fraction = get_field<double>(
        s, "validation_fraction", cfg.synth.validation_fraction);
  }

  cfg.representation = get_field<std::string>(j, "representation", "bow");
  if (j.contains("embedding")) {
    const json& e = j.at("embedding");
    cfg.embedding_path = get_field<std::string>(e, "path", "");
    if (e.contains("weights")) {
      const json& w = e.at("weights");
      cfg.embedding_weights.causal_weight = get_field<double>(w, "causal", 1.0);
      cfg.embedding_weights.spurious_weight =
          get_field<double>(w, "spurious", 1.0);
      cfg.embedding_weights.remain_weight = get_field<double>(w, "remain", 1.0);
    }
  }
  cfg.min_df = get_field<int>(j, "min_df", 1);

  if (j.contains("penalty")) {
    const json& p = j.at("penalty");
    PenaltyConfig pc;
    pc.lambda_c = get_field<double>(p, "lambda_c", 0.0);
    pc.lambda_s = get_field<double>(p, "lambda_s", 0.0);
    pc.lambda_r = get_field<double>(p, "lambda_r", 0.0);
    cfg.penalty = pc;
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.contains("values")) {
      const auto vals = g.at("values").get<std::vector<double>>();
      cfg.grid.lambda_c_values = vals;
      cfg.grid.lambda_s_values = vals;
      cfg.grid.lambda_r_values = vals;
    }
    if (g.contains("lambda_c_values")) {
      cfg.grid.lambda_c_values = g.at("lambda_c_values").get<std::vector<double>>();
    }
    if (g.contains("lambda_s_values")) {
      cfg.grid.lambda_s_values = g.at("lambda_s_values").get<std::vector<double>>();
    }
    if (g.contains("lambda_r_values")) {
      cfg.grid.lambda_r_values = g.at("lambda_r_values").get<std::vector<double>>();
    }
    cfg.grid.constraint = constraint_mode_from_string(
        get_field<std::string>(g, "constraint", "paper"));
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    cfg.train.learning_rate =
        get_field<double>(t, "learning_rate", cfg.train.learning_rate);
    cfg.train.patience = get_field<int>(t, "patience", cfg.train.patience);
    cfg.train.max_epochs = get_field<int>(t, "max_epochs", cfg.train.max_epochs);
    if (t.contains("batch_size") && !t.at("batch_size").is_null()) {
      cfg.train.batch_size = t.at("batch_size").get<std::size_t>();
    }
    cfg.train.seed = get_field<std::uint64_t>(t, "seed", cfg.train.seed);
    cfg.train.init_scale =
        get_field<double>(t, "init_scale", cfg.train.init_scale);
    cfg.train.auto_adjust_lr =
        get_field<bool>(t, "auto_adjust_lr", cfg.train.auto_adjust_lr);
  }
  cfg.seeds = get_field<int>(j, "seeds", 1);
  if (cfg.seeds < 1) throw ConfigError("config: seeds must be >= 1");
  cfg.selection = selection_mode_from_string(
      get_field<std::string>(j, "selection", "ctf_validation"));
  cfg.jobs = get_field<int>(j, "jobs", 1);
  if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");
  cfg.output_dir = get_field<std::string>(j, "output_dir", "out");
  if (cfg.output_dir.empty()) throw ConfigError("config: output_dir is empty");
  cfg.model_path = get_field<std::string>(j, "model", "");
  if (j.contains("annotate")) {
    const json& a = j.at("annotate");
    cfg.annotate_threshold = get_field<double>(a, "threshold", 1.0);
    cfg.annotate_lambda = get_field<double>(a, "lambda", 0.01);
  }
  return cfg;
}

void validate_dataset_inputs(const RunConfig& cfg) {
  if (cfg.format == "synth") {
    if (cfg.representation != "bow") {
      throw ConfigError("config: synthetic data uses representation 'bow'");
    }
    cfg.synth.validate();
    return;
  }
  require_file(cfg.data_path, "dataset");
  if (cfg.format == "csv") {
    if (cfg.representation != "tabular") {
      throw ConfigError("config: csv data requires representation 'tabular'");
    }
    require_file(cfg.schema_path, "schema");
  } else {
    if (cfg.representation != "bow" && cfg.representation != "glove" &&
        cfg.representation != "glove_weighted") {
      throw ConfigError(
          "config: tsv data requires representation bow, glove or "
          "glove_weighted");
    }
    if (cfg.representation != "bow") {
      require_file(cfg.embedding_path, "embedding");
    }
  }
  if (!cfg.groups_path.empty()) require_file(cfg.groups_path, "groups");
}

GroupLexicon load_lexicon_or_empty(const RunConfig& cfg) {
  if (cfg.groups_path.empty()) {
    std::cerr << "[causreg] no group file given; all features are 'remaining'\n";
    return {};
  }
  return load_group_lexicon(cfg.groups_path);
}

DatasetBundle build_bundle(const RunConfig& cfg) {
  if (cfg.format == "synth") return synth_generate(cfg.synth);
  if (cfg.format == "csv") {
    const CsvTable table = load_csv(cfg.data_path);
    const SchemaSpec spec = load_schema_spec(cfg.schema_path);
    return bundle_from_tabular(table, spec, load_lexicon_or_empty(cfg));
  }
  const Corpus corpus = load_corpus_tsv(cfg.data_path);
  const GroupLexicon lex = load_lexicon_or_empty(cfg);
  if (cfg.representation == "bow") {
    const Vocabulary vocab = Vocabulary::fit(corpus, cfg.min_df);
    return bundle_from_corpus_bow(corpus, vocab, lex);
  }
  const EmbeddingTable table = EmbeddingTable::load_glove(cfg.embedding_path);
  const GroupWeightTriple weights = cfg.representation == "glove_weighted"
                                        ? cfg.embedding_weights
                                        : GroupWeightTriple{};
  return bundle_from_corpus_embedding(corpus, table, lex, weights);
}

// Optional dense companion bundle for the L2+embedding baseline row.
std::optional<DatasetBundle> build_glove_companion(const RunConfig& cfg) {
  if (cfg.format != "tsv" || cfg.representation != "bow" ||
      cfg.embedding_path.empty()) {
    return std::nullopt;
  }
  require_file(cfg.embedding_path, "embedding");
  const Corpus corpus = load_corpus_tsv(cfg.data_path);
  const EmbeddingTable table = EmbeddingTable::load_glove(cfg.embedding_path);
  return bundle_from_corpus_embedding(corpus, table, load_lexicon_or_empty(cfg),
                                      GroupWeightTriple{});
}

// All outputs land in a temp directory that replaces output_dir only on
// success, so failures never leave partial output behind.
class OutputDir {
 public:
  explicit OutputDir(const std::string& final_path)
      : final_(final_path), tmp_(final_path + ".tmp") {
    fs::remove_all(tmp_);
    fs::create_directories(tmp_);
  }
  ~OutputDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(tmp_, ec);
    }
  }
  fs::path file(const std::string& name) const { return tmp_ / name; }
  void commit() {
    fs::remove_all(final_);
    fs::rename(tmp_, final_);
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path tmp_;
  bool committed_ = false;
};

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
}

ModelFile make_model_file(const RunConfig& cfg, const DatasetBundle& bundle,
                          const LinearModel& model) {
  ModelFile mf;
  mf.representation = cfg.representation;
  mf.model = model;
  mf.feature_names = bundle.feature_names;
  mf.causal = bundle.groups.causal();
  mf.spurious = bundle.groups.spurious();
  mf.min_df = cfg.min_df;
  if (cfg.representation == "tabular") {
    const CsvTable table = load_csv(cfg.data_path);
    const SchemaSpec spec = load_schema_spec(cfg.schema_path);
    // Refit on the training rows only, mirroring bundle_from_tabular.
    CsvTable train;
    train.header = table.header;
    bool has_split = false;
    for (const auto& h : table.header) has_split |= h == "split";
    if (has_split) {
      const std::size_t c = table.column_index("split");
      for (const auto& row : table.rows) {
        if (row[c] == "train") train.rows.push_back(row);
      }
    } else {
      const auto n_train = static_cast<std::size_t>(
          0.5 * static_cast<double>(table.rows.size()));
      train.rows.assign(table.rows.begin(),
                        table.rows.begin() + static_cast<long>(n_train));
    }
    mf.tabular_schema_json = TabularSchema::fit(train, spec).to_json_string();
  }
  if (cfg.representation == "glove_weighted") {
    mf.embedding_weights = cfg.embedding_weights;
  }
  return mf;
}

ExperimentReport single_setting_report(const DatasetBundle& bundle,
                                       const PenaltyConfig& penalty,
                                       const TrainConfig& tcfg, int seeds,
                                       int jobs) {
  ExperimentReport rep;
  rep.num_seeds = seeds;
  rep.seed0 = tcfg.seed;
  rep.selection_criterion = "fixed";
  CandidateResult c;
  c.lambda = penalty;
  c.per_seed = repeat_seeds(bundle, penalty, tcfg, seeds, jobs);
  c.aggregate = aggregate_runs(c.per_seed);
  rep.settings.push_back(std::move(c));
  rep.selected = 0;
  return rep;
}

int cmd_synth(const RunConfig& cfg) {
  if (cfg.format != "synth") {
    throw ConfigError("synth: dataset.format must be 'synth'");
  }
  cfg.synth.validate();
  OutputDir out(cfg.output_dir);
  const SynthCorpus sc = synth_corpus(cfg.synth);
  save_corpus_tsv(out.file("corpus.tsv").string(), sc.corpus);
  save_group_lexicon(out.file("groups.json").string(), sc.lexicon);
  json echo;
  echo["n"] = cfg.synth.n;
  echo["d"] = cfg.synth.d;
  echo["n_causal"] = cfg.synth.n_causal;
  echo["n_spurious"] = cfg.synth.n_spurious;
  echo["spurious_train_corr"] = cfg.synth.spurious_train_corr;
  echo["flip_noise"] = cfg.synth.flip_noise;
  echo["plant_sensitive"] = cfg.synth.plant_sensitive;
  echo["sensitive_corr"] = cfg.synth.sensitive_corr;
  echo["seed"] = cfg.synth.seed;
  write_text(out.file("synth_config.json"), echo.dump(2) + "\n");
  out.commit();
  std::cout << "wrote " << cfg.output_dir << "/corpus.tsv and groups.json\n";
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  if (!cfg.penalty) {
    throw ConfigError("train: config needs a 'penalty' object (or overrides)");
  }
  const DatasetBundle bundle = build_bundle(cfg);
  OutputDir out(cfg.output_dir);

  const ExperimentReport rep = single_setting_report(
      bundle, *cfg.penalty, cfg.train, cfg.seeds, cfg.jobs);
  const TrainResult res =
      train(bundle.train.x, bundle.train.y, bundle.validation.x,
            bundle.validation.y, bundle.groups, *cfg.penalty, cfg.train);
  save_model_file(out.file("model.json").string(),
                  make_model_file(cfg, bundle, res.model));
  write_text(out.file("report.json"), report_to_json_string(rep));
  write_text(out.file("report.txt"), report_to_text(rep));
  out.commit();
  std::cout << report_to_text(rep);
  std::cout << "wrote " << cfg.output_dir << "/model.json and report.json\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  require_file(cfg.model_path, "model");
  const ModelFile mf = load_model_file(cfg.model_path);

  DatasetBundle bundle;
  if (mf.representation == "tabular") {
    if (cfg.format != "csv") {
      throw ConfigError("eval: tabular model needs a csv dataset");
    }
    if (!mf.tabular_schema_json) {
      throw DataError("eval: model file is missing the fitted tabular schema");
    }
    const TabularSchema schema =
        TabularSchema::from_json_string(*mf.tabular_schema_json);
    const CsvTable table = load_csv(cfg.data_path);
    CsvTable train = table, val = table, test = table;
    train.rows.clear();
    val.rows.clear();
    test.rows.clear();
    bool has_split = false;
    for (const auto& h : table.header) has_split |= h == "split";
    if (has_split) {
      const std::size_t c = table.column_index("split");
      for (const auto& row : table.rows) {
        if (row[c] == "train") train.rows.push_back(row);
        else if (row[c] == "validation") val.rows.push_back(row);
        else if (row[c] == "test") test.rows.push_back(row);
      }
    } else {
      test.rows = table.rows;  // no split column: evaluate everything as test
      train.rows = table.rows;
      val.rows = table.rows;
    }
    bundle.train = encode_tabular(train, schema);
    bundle.validation = encode_tabular(val, schema);
    bundle.test = encode_tabular(test, schema);
    bundle.feature_names = mf.feature_names;
    bundle.groups = mf.groups();
    bundle.validate();
  } else {
    if (cfg.format != "tsv" && cfg.format != "synth") {
      throw ConfigError("eval: text model needs a tsv or synth dataset");
    }
    Corpus corpus;
    if (cfg.format == "synth") {
      corpus = synth_corpus(cfg.synth).corpus;
    } else {
      corpus = load_corpus_tsv(cfg.data_path);
    }
    if (mf.representation == "bow") {
      const Vocabulary vocab = Vocabulary::from_tokens(mf.feature_names);
      bundle.train = vectorize_bow(corpus, Split::train, vocab);
      bundle.validation = vectorize_bow(corpus, Split::validation, vocab);
      bundle.test = vectorize_bow(corpus, Split::test, vocab);
      const auto opt = [&](Split s) -> std::optional<SplitData> {
        if (corpus.rows_of(s).empty()) return std::nullopt;
        return vectorize_bow(corpus, s, vocab);
      };
      bundle.ctf_train = opt(Split::ctf_train);
      bundle.ctf_validation = opt(Split::ctf_validation);
      bundle.ctf_test = opt(Split::ctf_test);
      bundle.feature_names = mf.feature_names;
      bundle.groups = mf.groups();
      bundle.validate();
    } else {
      require_file(cfg.embedding_path, "embedding");
      const EmbeddingTable table = EmbeddingTable::load_glove(cfg.embedding_path);
      const GroupWeightTriple weights =
          mf.embedding_weights ? *mf.embedding_weights : GroupWeightTriple{};
      bundle = bundle_from_corpus_embedding(
          corpus, table, load_lexicon_or_empty(cfg), weights);
    }
  }

  OutputDir out(cfg.output_dir);
  ExperimentReport rep;
  rep.num_seeds = 1;
  rep.selection_criterion = "fixed";
  CandidateResult c;
  c.lambda = cfg.penalty ? *cfg.penalty : PenaltyConfig{};
  c.per_seed = {SeedRun{0, evaluate_model(mf.model, bundle)}};
  c.aggregate = aggregate_runs(c.per_seed);
  rep.settings.push_back(std::move(c));
  rep.selected = 0;
  write_text(out.file("report.json"), report_to_json_string(rep));
  write_text(out.file("report.txt"), report_to_text(rep));
  out.commit();
  std::cout << report_to_text(rep);
  return 0;
}

int cmd_grid(const RunConfig& cfg) {
  const DatasetBundle bundle = build_bundle(cfg);
  const std::optional<DatasetBundle> glove = build_glove_companion(cfg);

  OutputDir out(cfg.output_dir);
  ExperimentReport rep = grid_search(bundle, cfg.grid, cfg.train, cfg.selection,
                                     cfg.seeds, cfg.jobs);
  rep.baselines =
      run_baselines(bundle, cfg.grid, cfg.train, cfg.selection, cfg.seeds,
                    cfg.jobs, glove ? &*glove : nullptr);

  // Persist the selected model, retrained at seed0.
  const PenaltyConfig best = rep.settings.at(*rep.selected).lambda;
  const TrainResult res =
      train(bundle.train.x, bundle.train.y, bundle.validation.x,
            bundle.validation.y, bundle.groups, best, cfg.train);
  save_model_file(out.file("model.json").string(),
                  make_model_file(cfg, bundle, res.model));
  write_text(out.file("report.json"), report_to_json_string(rep));
  write_text(out.file("report.txt"), report_to_text(rep));
  out.commit();
  std::cout << report_to_text(rep);
  std::cout << "wrote " << cfg.output_dir << "/report.json\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const DatasetBundle bundle = build_bundle(cfg);
  OutputDir out(cfg.output_dir);
  std::vector<double> values = cfg.grid.lambda_s_values;
  const SweepTable table =
      lambda_sweep(bundle, cfg.train, values, cfg.seeds, cfg.jobs);
  write_text(out.file("sweep.json"), sweep_to_json_string(table));
  write_text(out.file("sweep.txt"), sweep_to_text(table));
  out.commit();
  std::cout << sweep_to_text(table);
  return 0;
}

int cmd_annotate_export(const RunConfig& cfg) {
  const DatasetBundle bundle = build_bundle(cfg);
  OutputDir out(cfg.output_dir);
  const double l = cfg.annotate_lambda;
  const TrainResult res =
      train(bundle.train.x, bundle.train.y, bundle.validation.x,
            bundle.validation.y, bundle.groups, PenaltyConfig{l, l, l},
            cfg.train);
  const AnnotationExport ex = make_annotation_export(
      res.model, bundle.feature_names, cfg.annotate_threshold);
  save_annotation_export(out.file("export.tsv").string(), ex);
  out.commit();
  std::cout << "wrote " << cfg.output_dir << "/export.tsv ("
            << ex.entries.size() << " features above |w| > "
            << cfg.annotate_threshold << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grouped-penalty logistic regression: robustness and fairness "
               "experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> lc, ls, lr;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--lambda-c", lc, "override penalty.lambda_c");
    sub->add_option("--lambda-s", ls, "override penalty.lambda_s");
    sub->add_option("--lambda-r", lr, "override penalty.lambda_r");
    sub->add_option("--seed", seed, "override train.seed");
    sub->add_option("--jobs", jobs, "override jobs count");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  CLI::App* trn = app.add_subcommand("train", "train one penalty setting");
  CLI::App* evl = app.add_subcommand("eval", "evaluate a saved model");
  CLI::App* grd = app.add_subcommand("grid", "constrained grid search");
  CLI::App* swp = app.add_subcommand("sweep", "one-factor lambda sweep");
  CLI::App* ann = app.add_subcommand("annotate-export",
                                     "export top coefficients for labeling");
  for (CLI::App* sub : {synth, trn, evl, grd, swp, ann}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = parse_config(config_path);
    if (lc || ls || lr) {
      PenaltyConfig p = cfg.penalty ? *cfg.penalty : PenaltyConfig{};
      if (lc) p.lambda_c = *lc;
      if (ls) p.lambda_s = *ls;
      if (lr) p.lambda_r = *lr;
      cfg.penalty = p;
    }
    if (seed) cfg.train.seed = *seed;
    if (jobs) {
      if (*jobs < 1) throw ConfigError("--jobs must be >= 1");
      cfg.jobs = *jobs;
    }
    cfg.train.validate();
    if (cfg.penalty) cfg.penalty->validate();
    validate_dataset_inputs(cfg);

    if (synth->parsed()) return cmd_synth(cfg);
    if (trn->parsed()) return cmd_train(cfg);
    if (evl->parsed()) return cmd_eval(cfg);
    if (grd->parsed()) return cmd_grid(cfg);
    if (swp->parsed()) return cmd_sweep(cfg);
    if (ann->parsed()) return cmd_annotate_export(cfg);
    throw ConfigError("no subcommand given");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
