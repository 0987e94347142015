// cryptopulse — next-day crypto close forecasting pipeline.
//
// Subcommands: ingest, indicators, label-sentiment, train, evaluate, ablate,
// report, plot. Exit codes: 0 success, 2 usage, 3 data error, 4 external
// service, 5 numerical failure.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cryptopulse/data_io.hpp"
#include "cryptopulse/indicators.hpp"
#include "cryptopulse/runner.hpp"
#include "cryptopulse/sentiment.hpp"
#include "cryptopulse/training.hpp"

namespace fs = std::filesystem;
using namespace cpulse;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

// Overlays any keys present in `path` onto `config` (missing keys keep their
// current values). Used for the config-file layer of the precedence chain
// flags > config file > environment > defaults.
void overlay_config_file(TrainConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid JSON in " + path.string() + ": " + e.what());
  }
  if (j.contains("config")) j = j["config"];
  config.epochs = j.value("epochs", config.epochs);
  config.batch_size = j.value("batch_size", config.batch_size);
  config.lr0 = j.value("lr0", config.lr0);
  config.dropout = j.value("dropout", config.dropout);
  config.seeds = j.value("seeds", config.seeds);
  config.window_length = j.value("window_length", config.window_length);
  config.n_macro = j.value("n_macro", config.n_macro);
  config.d_model = j.value("d_model", config.d_model);
  config.patience = j.value("patience", config.patience);
  config.dlinear_ma_window = j.value("dlinear_ma_window",
                                     config.dlinear_ma_window);
}

// Shared training-config flags. Flag values land in `staged`; resolve() folds
// them over the environment/config-file layers only where the user actually
// passed the flag.
struct ConfigFlags {
  TrainConfig staged;
  std::string config_file;
  CLI::App* cmd = nullptr;

  void attach(CLI::App* sub) {
    cmd = sub;
    sub->add_option("--config", config_file,
                    "JSON training-config file (overrides environment)");
    sub->add_option("--epochs", staged.epochs, "training epochs");
    sub->add_option("--batch-size", staged.batch_size, "mini-batch size");
    sub->add_option("--lr0", staged.lr0, "initial learning rate");
    sub->add_option("--dropout", staged.dropout, "dropout rate");
    sub->add_option("--seeds", staged.seeds, "seed list for multi-seed runs");
    sub->add_option("--window", staged.window_length, "window length L");
    sub->add_option("--n-macro", staged.n_macro, "macro asset count");
    sub->add_option("--d-model", staged.d_model, "embedding width");
    sub->add_option("--patience", staged.patience, "early-stop patience");
    sub->add_option("--dlinear-ma-window", staged.dlinear_ma_window,
                    "DLinear moving-average window");
  }

  TrainConfig resolve() const {
    TrainConfig config;  // defaults
    const std::string env_file = env_or("CRYPTOPULSE_CONFIG", "");
    if (!env_file.empty()) overlay_config_file(config, env_file);
    if (!config_file.empty()) overlay_config_file(config, config_file);
    auto take = [&](const char* flag, auto member) {
      if (cmd->count(flag)) config.*member = staged.*member;
    };
    take("--epochs", &TrainConfig::epochs);
    take("--batch-size", &TrainConfig::batch_size);
    take("--lr0", &TrainConfig::lr0);
    take("--dropout", &TrainConfig::dropout);
    take("--seeds", &TrainConfig::seeds);
    take("--window", &TrainConfig::window_length);
    take("--n-macro", &TrainConfig::n_macro);
    take("--d-model", &TrainConfig::d_model);
    take("--patience", &TrainConfig::patience);
    take("--dlinear-ma-window", &TrainConfig::dlinear_ma_window);
    config.validate();
    return config;
  }
};

DatasetManifest load_manifest(const fs::path& dataset_dir) {
  return DatasetManifest::load(dataset_dir / "manifest.json");
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const fs::path& dataset_dir,
               const std::vector<std::string>& price_files,
               const std::string& news_file,
               std::vector<std::string> macro_symbols, int window_length,
               bool exclude_target_from_macro) {
  fs::create_directories(dataset_dir / "prices");
  DatasetManifest manifest;
  manifest.window_length = window_length;
  manifest.include_target_in_macro = !exclude_target_from_macro;

  for (const std::string& file : price_files) {
    const std::string symbol = fs::path(file).stem().string();
    CryptoSeries series = load_price_csv(file, symbol);
    save_price_csv(series, dataset_dir / "prices" / (symbol + ".csv"));
    manifest.target_symbols.push_back(symbol);
    std::cout << "ingested " << symbol << ": " << series.bars.size()
              << " bars\n";
  }
  if (manifest.target_symbols.empty())
    throw DataError("ingest: no price files given");

  if (macro_symbols.empty()) macro_symbols = manifest.target_symbols;
  for (const std::string& m : macro_symbols)
    if (!fs::exists(dataset_dir / "prices" / (m + ".csv")))
      throw DataError("macro symbol " + m + " has no ingested price file");
  manifest.macro_symbols = std::move(macro_symbols);

  if (!news_file.empty()) {
    auto articles = load_news_jsonl(news_file);
    save_news_jsonl(articles, dataset_dir / "news.jsonl");
    std::cout << "ingested " << articles.size() << " news articles\n";
  }
  manifest.save(dataset_dir / "manifest.json");
  std::cout << "wrote " << (dataset_dir / "manifest.json").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// indicators

int cmd_indicators(const fs::path& dataset_dir, const std::string& asset,
                   std::string out_file) {
  CryptoSeries series =
      load_price_csv(dataset_dir / "prices" / (asset + ".csv"), asset);
  auto rows = compute_feature_rows(series);
  if (out_file.empty()) {
    fs::create_directories(dataset_dir / "features");
    out_file = (dataset_dir / "features" / (asset + ".csv")).string();
  }
  save_feature_csv(rows, out_file);
  std::cout << "wrote " << rows.size() << " feature rows to " << out_file
            << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// label-sentiment

int cmd_label_sentiment(const fs::path& dataset_dir, const std::string& llm,
                        int m, const std::string& example_bank_file,
                        const LabelingOptions& options) {
  const fs::path news_path = dataset_dir / "news.jsonl";
  if (!fs::exists(news_path))
    throw DataError("no news.jsonl in " + dataset_dir.string() +
                    " (run ingest with --news first)");
  auto articles = load_news_jsonl(news_path);

  PromptConfig prompt;
  prompt.m = m;
  prompt.example_bank = example_bank_file.empty()
                            ? PromptConfig::default_example_bank()
                            : PromptConfig::load_example_bank(example_bank_file);
  prompt.validate();

  auto client = make_client(llm, LlmConfig::from_env());
  LabelCache cache(dataset_dir / "sentiment_labels.csv");
  LabelingStats stats =
      label_articles(articles, *client, prompt, cache, options);
  cache.flush();
  std::cout << "labeled " << stats.labeled << " articles ("
            << stats.cache_hits << " cache hits, " << stats.client_calls
            << " client calls, " << stats.failures << " failures)\n";
  if (stats.failures > 0)
    throw ExternalServiceError(std::to_string(stats.failures) +
                               " articles failed to label after retries");
  return 0;
}

// ---------------------------------------------------------------------------
// train

std::vector<ModelKind> all_model_kinds() {
  return {ModelKind::cryptopulse, ModelKind::linear, ModelKind::nlinear,
          ModelKind::dlinear};
}

std::vector<Variant> all_variants() {
  return {Variant::full, Variant::xs, Variant::xi};
}

// Trains every spec in `specs`, reusing per-asset prepared data; completed run
// directories are skipped unless `force`.
int run_specs(const fs::path& dataset_dir, const fs::path& runs_dir,
              const std::vector<RunSpec>& specs, const TrainConfig& config,
              bool force, int jobs) {
  const DatasetManifest manifest = load_manifest(dataset_dir);

  std::map<std::string, AssetData> prepared;
  for (const RunSpec& spec : specs)
    if (!prepared.count(spec.asset))
      prepared.emplace(spec.asset,
                       prepare_asset(dataset_dir, manifest, spec.asset, config));

  std::atomic<size_t> next{0};
  std::atomic<int> trained{0}, skipped{0};
  std::mutex io_mutex;
  std::vector<std::string> errors;

  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < specs.size();
         i = next.fetch_add(1)) {
      const RunSpec& spec = specs[i];
      const fs::path dir = run_dir(runs_dir, spec);
      if (!force && run_complete(dir)) {
        ++skipped;
        continue;
      }
      try {
        SeedRun run = run_seed(spec.model, spec.variant,
                               prepared.at(spec.asset).split, config,
                               spec.seed);
        write_run(dir, spec, config, run);
        ++trained;
        std::lock_guard<std::mutex> lock(io_mutex);
        std::cout << dir.string() << ": test MAE " << run.test.metrics.mae
                  << (run.training.diverged ? " (diverged)" : "") << '\n';
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(io_mutex);
        errors.push_back(dir.string() + ": " + e.what());
      }
    }
  };

  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(specs.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::cout << trained << " trained, " << skipped << " skipped\n";
  if (!errors.empty()) {
    for (const std::string& e : errors) std::cerr << "error: " << e << '\n';
    throw NumericalError(std::to_string(errors.size()) + " runs failed");
  }
  return 0;
}

int cmd_train(const fs::path& dataset_dir, const fs::path& runs_dir,
              const std::string& model, const std::string& asset,
              const std::string& variant, std::uint64_t seed, bool all,
              bool force, int jobs, const std::string& from_manifest,
              const ConfigFlags& flags) {
  if (!from_manifest.empty()) {
    // Re-run a single cell from its effective-config manifest.
    std::ifstream in(from_manifest);
    if (!in) throw DataError("cannot open " + from_manifest);
    nlohmann::json j;
    in >> j;
    RunSpec spec;
    spec.model = parse_model_kind(j.at("model").get<std::string>());
    spec.asset = j.at("asset").get<std::string>();
    spec.variant = parse_variant(j.at("variant").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    TrainConfig config = train_config_from_json(from_manifest);
    return run_specs(dataset_dir, runs_dir, {spec}, config, /*force=*/true,
                     1);
  }

  TrainConfig config = flags.resolve();
  std::vector<RunSpec> specs;
  if (all) {
    const DatasetManifest manifest = load_manifest(dataset_dir);
    for (ModelKind kind : all_model_kinds())
      for (const std::string& sym : manifest.target_symbols)
        for (Variant v : all_variants())
          for (std::uint64_t s : config.seeds)
            specs.push_back({kind, sym, v, s});
  } else {
    if (asset.empty())
      throw CLI::RequiredError("--asset (or --all)");
    specs.push_back(
        {parse_model_kind(model), asset, parse_variant(variant), seed});
  }
  return run_specs(dataset_dir, runs_dir, specs, config, force, jobs);
}

// ---------------------------------------------------------------------------
// evaluate / report

// Aggregates completed seed runs under runs/<model>/<asset>/<variant>/.
std::optional<ReportRow> aggregate_cell(const fs::path& runs_dir,
                                        const std::string& model,
                                        const std::string& asset,
                                        const std::string& variant) {
  const fs::path cell = runs_dir / model / asset / variant;
  if (!fs::is_directory(cell)) return std::nullopt;
  std::vector<fs::path> seed_dirs;
  for (const auto& entry : fs::directory_iterator(cell))
    if (entry.is_directory() &&
        entry.path().filename().string().rfind("seed", 0) == 0 &&
        run_complete(entry.path()))
      seed_dirs.push_back(entry.path());
  if (seed_dirs.empty()) return std::nullopt;
  std::sort(seed_dirs.begin(), seed_dirs.end());
  std::vector<Metrics> per_seed;
  for (const fs::path& dir : seed_dirs)
    per_seed.push_back(read_run_metrics(dir));
  return average_over_seeds(asset, model, variant, per_seed);
}

EvalReport build_report(const fs::path& runs_dir) {
  EvalReport report;
  if (!fs::is_directory(runs_dir))
    throw DataError("no runs directory at " + runs_dir.string());
  // stable order: asset, then model, then variant
  std::vector<std::array<std::string, 3>> cells;
  for (const auto& model_dir : fs::directory_iterator(runs_dir)) {
    if (!model_dir.is_directory()) continue;
    for (const auto& asset_dir : fs::directory_iterator(model_dir.path())) {
      if (!asset_dir.is_directory()) continue;
      for (const auto& variant_dir : fs::directory_iterator(asset_dir.path()))
        if (variant_dir.is_directory())
          cells.push_back({asset_dir.path().filename().string(),
                           model_dir.path().filename().string(),
                           variant_dir.path().filename().string()});
    }
  }
  std::sort(cells.begin(), cells.end());
  for (const auto& [asset, model, variant] : cells)
    if (auto row = aggregate_cell(runs_dir, model, asset, variant))
      report.rows.push_back(*row);
  if (report.rows.empty())
    throw DataError("no completed runs under " + runs_dir.string());
  return report;
}

int cmd_evaluate(const fs::path& runs_dir, const std::string& model,
                 const std::string& asset, const std::string& variant) {
  auto row = aggregate_cell(runs_dir, model, asset, variant);
  if (!row)
    throw DataError("no completed runs for " + model + "/" + asset + "/" +
                    variant + " under " + runs_dir.string());
  EvalReport report;
  report.rows.push_back(*row);
  std::cout << report.to_table();
  return 0;
}

int cmd_report(const fs::path& runs_dir, int top, const std::string& out_csv) {
  EvalReport report = build_report(runs_dir);
  if (top > 0) {
    std::vector<std::pair<std::string, std::string>> combos;
    for (const ReportRow& r : report.rows)
      combos.emplace_back(r.model, r.variant);
    std::sort(combos.begin(), combos.end());
    combos.erase(std::unique(combos.begin(), combos.end()), combos.end());
    for (const auto& [model, variant] : combos)
      report.add_topk_row(model, variant, top);
  }
  std::cout << report.to_table();
  const fs::path csv = out_csv.empty() ? runs_dir / "report.csv"
                                       : fs::path(out_csv);
  report.save_csv(csv);
  std::cout << "wrote " << csv.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// ablate

int cmd_ablate(const fs::path& dataset_dir, const fs::path& runs_dir,
               const std::string& model, const std::string& asset, bool force,
               int jobs, const ConfigFlags& flags) {
  TrainConfig config = flags.resolve();
  std::vector<std::string> assets;
  if (asset.empty())
    assets = load_manifest(dataset_dir).target_symbols;
  else
    assets.push_back(asset);
  std::vector<ModelKind> kinds;
  if (model.empty())
    kinds = all_model_kinds();
  else
    kinds.push_back(parse_model_kind(model));

  std::vector<RunSpec> specs;
  for (ModelKind kind : kinds)
    for (const std::string& sym : assets)
      for (Variant v : all_variants())
        for (std::uint64_t s : config.seeds) specs.push_back({kind, sym, v, s});
  run_specs(dataset_dir, runs_dir, specs, config, force, jobs);

  EvalReport report;
  for (const std::string& sym : assets)
    for (ModelKind kind : kinds)
      for (Variant v : all_variants())
        if (auto row = aggregate_cell(runs_dir, model_kind_name(kind), sym,
                                      variant_name(v)))
          report.rows.push_back(*row);
  std::cout << report.to_table();
  return 0;
}

// ---------------------------------------------------------------------------
// plot

std::vector<PredictionRecord> load_predictions_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw DataError("empty predictions file " + path.string());
  std::vector<PredictionRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw DataError(path.string() + " line " + std::to_string(line_no) +
                      ": expected 7 fields, got " +
                      std::to_string(fields.size()));
    PredictionRecord r;
    r.target_date = Date::parse(fields[0]);
    r.p1 = std::stod(fields[1]);
    r.p2 = std::stod(fields[2]);
    r.kappa = std::stod(fields[3]);
    r.gamma = std::stod(fields[4]);
    r.pred = std::stod(fields[5]);
    r.true_close = std::stod(fields[6]);
    records.push_back(r);
  }
  return records;
}

int cmd_plot(const fs::path& runs_dir, const std::string& model,
             const std::string& asset, const std::string& variant,
             std::uint64_t seed, bool bars) {
  if (!model.empty()) {
    RunSpec spec{parse_model_kind(model), asset, parse_variant(variant), seed};
    const fs::path dir = run_dir(runs_dir, spec);
    auto records = load_predictions_csv(dir / "predictions.csv");
    save_prediction_svg(records, dir / "predictions.svg");
    std::cout << "wrote " << (dir / "predictions.svg").string() << '\n';
  }
  if (bars) {
    EvalReport report = build_report(runs_dir);
    report.save_csv(runs_dir / "report.csv");
    save_mae_bar_svg(report, runs_dir / "mae_bars.svg");
    std::cout << "wrote " << (runs_dir / "mae_bars.svg").string() << '\n';
  }
  if (model.empty() && !bars)
    throw CLI::RequiredError("--model (for a prediction plot) or --bars");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CryptoPulse: dual-branch next-day crypto close forecasting"};
  app.require_subcommand(1);

  std::string dataset_dir = env_or("CRYPTOPULSE_DATASET", "dataset");
  std::string runs_dir = env_or("CRYPTOPULSE_RUNS", "runs");
  app.add_option("--dataset", dataset_dir, "dataset directory")
      ->capture_default_str();
  app.add_option("--runs", runs_dir, "run output directory")
      ->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "validate raw files into the canonical dataset layout");
  std::vector<std::string> price_files;
  std::string news_file;
  std::vector<std::string> macro_symbols;
  int window_length = 7;
  bool exclude_target = false;
  ingest->add_option("--prices", price_files, "OHLCV CSV files (one per asset)")
      ->required();
  ingest->add_option("--news", news_file, "news JSONL file");
  ingest->add_option("--macro", macro_symbols,
                     "macro asset symbols (default: all ingested)");
  ingest->add_option("--window", window_length, "window length L")
      ->capture_default_str();
  ingest->add_flag("--exclude-target-from-macro", exclude_target,
                   "drop the target from its own macro set");

  // indicators
  auto* indicators =
      app.add_subcommand("indicators", "emit the technical-indicator CSV");
  std::string ind_asset, ind_out;
  indicators->add_option("--asset", ind_asset, "asset symbol")->required();
  indicators->add_option("--out", ind_out,
                         "output CSV (default dataset/features/<asset>.csv)");

  // label-sentiment
  auto* label = app.add_subcommand("label-sentiment",
                                   "label news articles with an LLM");
  std::string llm = "live", example_bank_file;
  int m = 3;
  LabelingOptions label_opts;
  label->add_option("--llm", llm, "live, mock:<label> or replay:<file>")
      ->capture_default_str();
  label->add_option("--m", m, "simulated trader count")->capture_default_str();
  label->add_option("--example-bank", example_bank_file,
                    "few-shot example JSONL (default: built-in bank)");
  label->add_option("--max-attempts", label_opts.max_attempts,
                    "transport retries per article")
      ->capture_default_str();
  label->add_option("--concurrency", label_opts.concurrency, "labeling workers")
      ->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "train one (model, asset, "
                                            "variant, seed) cell or --all");
  std::string tr_model = "cryptopulse", tr_asset, tr_variant = "full";
  std::string from_manifest;
  std::uint64_t tr_seed = 0;
  bool tr_all = false, tr_force = false;
  int tr_jobs = 1;
  ConfigFlags tr_flags;
  train->add_option("--model", tr_model,
                    "cryptopulse, linear, nlinear or dlinear")
      ->capture_default_str();
  train->add_option("--asset", tr_asset, "asset symbol");
  train->add_option("--variant", tr_variant, "full, xs or xi")
      ->capture_default_str();
  train->add_option("--seed", tr_seed, "RNG seed")->capture_default_str();
  train->add_flag("--all", tr_all,
                  "train every model/asset/variant/seed combination");
  train->add_flag("--force", tr_force, "re-run completed run directories");
  train->add_option("--jobs", tr_jobs, "parallel training workers")
      ->capture_default_str();
  train->add_option("--from-manifest", from_manifest,
                    "re-run a cell from its run manifest.json");
  tr_flags.attach(train);

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "aggregate seed runs for one cell");
  std::string ev_model = "cryptopulse", ev_asset, ev_variant = "full";
  evaluate->add_option("--model", ev_model, "model kind")
      ->capture_default_str();
  evaluate->add_option("--asset", ev_asset, "asset symbol")->required();
  evaluate->add_option("--variant", ev_variant, "full, xs or xi")
      ->capture_default_str();

  // ablate
  auto* ablate = app.add_subcommand(
      "ablate", "train and compare the full/xs/xi feature variants");
  std::string ab_model, ab_asset;
  bool ab_force = false;
  int ab_jobs = 1;
  ConfigFlags ab_flags;
  ablate->add_option("--model", ab_model, "model kind (default: all)");
  ablate->add_option("--asset", ab_asset, "asset symbol (default: all)");
  ablate->add_flag("--force", ab_force, "re-run completed run directories");
  ablate->add_option("--jobs", ab_jobs, "parallel training workers")
      ->capture_default_str();
  ab_flags.attach(ablate);

  // report
  auto* report =
      app.add_subcommand("report", "aligned table + CSV over completed runs");
  int top = 0;
  std::string report_out;
  report->add_option("--top", top, "append top-k average rows");
  report->add_option("--out", report_out, "report CSV path");

  // plot
  auto* plot = app.add_subcommand(
      "plot", "prediction-vs-truth SVG for a run; --bars for the MAE chart");
  std::string pl_model, pl_asset, pl_variant = "full";
  std::uint64_t pl_seed = 0;
  bool pl_bars = false;
  plot->add_option("--model", pl_model, "model kind");
  plot->add_option("--asset", pl_asset, "asset symbol");
  plot->add_option("--variant", pl_variant, "full, xs or xi")
      ->capture_default_str();
  plot->add_option("--seed", pl_seed, "RNG seed")->capture_default_str();
  plot->add_flag("--bars", pl_bars, "also emit the MAE bar chart and CSV");

  // let --dataset/--runs appear after the subcommand too
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
    const fs::path dataset{dataset_dir}, runs{runs_dir};
    if (*ingest)
      return cmd_ingest(dataset, price_files, news_file, macro_symbols,
                        window_length, exclude_target);
    if (*indicators) return cmd_indicators(dataset, ind_asset, ind_out);
    if (*label)
      return cmd_label_sentiment(dataset, llm, m, example_bank_file,
                                 label_opts);
    if (*train)
      return cmd_train(dataset, runs, tr_model, tr_asset, tr_variant, tr_seed,
                       tr_all, tr_force, tr_jobs, from_manifest, tr_flags);
    if (*evaluate) return cmd_evaluate(runs, ev_model, ev_asset, ev_variant);
    if (*ablate)
      return cmd_ablate(dataset, runs, ab_model, ab_asset, ab_force, ab_jobs,
                        ab_flags);
    if (*report) return cmd_report(runs, top, report_out);
    if (*plot)
      return cmd_plot(runs, pl_model, pl_asset, pl_variant, pl_seed, pl_bars);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ExternalServiceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
