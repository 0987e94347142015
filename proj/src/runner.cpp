#include "cryptopulse/runner.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "cryptopulse/sentiment.hpp"

namespace cpulse {

AssetData prepare_asset(const std::filesystem::path& dataset_dir,
                        const DatasetManifest& manifest,
                        const std::string& symbol, const TrainConfig& config,
                        const std::array<double, 3>& ratios) {
  const auto prices_dir = dataset_dir / "prices";
  CryptoSeries target = load_price_csv(prices_dir / (symbol + ".csv"), symbol);

  std::vector<CryptoSeries> macro_set;
  for (const std::string& m : manifest.macro_symbols) {
    if (!manifest.include_target_in_macro && m == symbol) continue;
    macro_set.push_back(load_price_csv(prices_dir / (m + ".csv"), m));
  }
  if (macro_set.empty())
    throw DataError("no macro assets available for " + symbol);

  SentimentByDay sentiment;
  const auto cache_path = dataset_dir / "sentiment_labels.csv";
  const auto news_path = dataset_dir / "news.jsonl";
  if (std::filesystem::exists(cache_path) &&
      std::filesystem::exists(news_path)) {
    LabelCache cache(cache_path);
    sentiment = daily_sentiment(load_news_jsonl(news_path), cache);
  }

  auto features = compute_feature_rows(target);
  auto samples = build_windows(target, macro_set, features, sentiment,
                               config.window_length);
  AssetData data;
  data.n_samples = samples.size();
  DatasetSplit raw = chronological_split(samples, ratios);
  data.normalizer = Normalizer::fit(raw.train);
  data.split = data.normalizer.apply(raw);
  return data;
}

std::filesystem::path run_dir(const std::filesystem::path& root,
                              const RunSpec& spec) {
  return root / model_kind_name(spec.model) / spec.asset /
         variant_name(spec.variant) / ("seed" + std::to_string(spec.seed));
}

bool run_complete(const std::filesystem::path& dir) {
  return std::filesystem::exists(dir / "metrics.json");
}

void save_predictions_csv(const std::vector<PredictionRecord>& records,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "date,p1,p2,kappa,gamma,pred,true\n" << std::setprecision(17);
  for (const auto& r : records)
    out << r.target_date.str() << ',' << r.p1 << ',' << r.p2 << ',' << r.kappa
        << ',' << r.gamma << ',' << r.pred << ',' << r.true_close << '\n';
}

namespace {

nlohmann::json config_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"lr0", c.lr0},
          {"dropout", c.dropout},
          {"seeds", c.seeds},
          {"window_length", c.window_length},
          {"n_macro", c.n_macro},
          {"d_model", c.d_model},
          {"patience", c.patience},
          {"dlinear_ma_window", c.dlinear_ma_window}};
}

}  // namespace

TrainConfig train_config_from_json(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw DataError("cannot open " + manifest.string());
  nlohmann::json j;
  in >> j;
  if (j.contains("config")) j = j["config"];
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr0 = j.value("lr0", c.lr0);
  c.dropout = j.value("dropout", c.dropout);
  c.seeds = j.value("seeds", c.seeds);
  c.window_length = j.value("window_length", c.window_length);
  c.n_macro = j.value("n_macro", c.n_macro);
  c.d_model = j.value("d_model", c.d_model);
  c.patience = j.value("patience", c.patience);
  c.dlinear_ma_window = j.value("dlinear_ma_window", c.dlinear_ma_window);
  c.validate();
  return c;
}

void write_run(const std::filesystem::path& dir, const RunSpec& spec,
               const TrainConfig& config, const SeedRun& run) {
  std::filesystem::create_directories(dir);

  nlohmann::json manifest{{"model", model_kind_name(spec.model)},
                          {"asset", spec.asset},
                          {"variant", variant_name(spec.variant)},
                          {"seed", spec.seed},
                          {"config", config_json(config)}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';

  {
    std::ofstream out(dir / "epochs.csv");
    out << "epoch,lr,train_mse,val_mse\n" << std::setprecision(17);
    for (const auto& e : run.training.epochs)
      out << e.epoch << ',' << e.lr << ',' << e.train_mse << ',' << e.val_mse
          << '\n';
  }

  save_predictions_csv(run.test.records, dir / "predictions.csv");

  auto params = run.model->parameters();
  save_checkpoint(params, dir / "checkpoint.bin");

  nlohmann::json metrics{{"mae", run.test.metrics.mae},
                         {"mse", run.test.metrics.mse},
                         {"corr", run.test.metrics.corr},
                         {"corr_defined", run.test.metrics.corr_defined},
                         {"val_mse", run.training.best_val_mse},
                         {"best_epoch", run.training.best_epoch},
                         {"diverged", run.training.diverged}};
  std::ofstream(dir / "metrics.json") << metrics.dump(2) << '\n';
}

Metrics read_run_metrics(const std::filesystem::path& dir) {
  std::ifstream in(dir / "metrics.json");
  if (!in) throw DataError("no metrics in " + dir.string());
  nlohmann::json j;
  in >> j;
  Metrics m;
  m.mae = j.at("mae").get<double>();
  m.mse = j.at("mse").get<double>();
  m.corr = j.at("corr").get<double>();
  m.corr_defined = j.value("corr_defined", true);
  return m;
}

namespace {

std::string polyline(const std::vector<double>& ys, double y_min, double y_max,
                     double width, double height, const char* color) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color
     << "\" stroke-width=\"1.5\" points=\"";
  const double span = y_max - y_min == 0 ? 1.0 : y_max - y_min;
  for (size_t i = 0; i < ys.size(); ++i) {
    const double x = width * static_cast<double>(i) /
                     std::max<size_t>(1, ys.size() - 1);
    const double y = height - height * (ys[i] - y_min) / span;
    os << x << ',' << y << ' ';
  }
  os << "\"/>\n";
  return os.str();
}

}  // namespace

void save_prediction_svg(const std::vector<PredictionRecord>& records,
                         const std::filesystem::path& path) {
  if (records.empty()) throw DataError("no predictions to plot");
  std::vector<double> truth, pred;
  for (const auto& r : records) {
    truth.push_back(r.true_close);
    pred.push_back(r.pred);
  }
  double lo = truth.front(), hi = truth.front();
  for (double v : truth) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : pred) lo = std::min(lo, v), hi = std::max(hi, v);
  const double w = 800, h = 300;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n";
  out << polyline(truth, lo, hi, w, h, "#333333");
  out << polyline(pred, lo, hi, w, h, "#d62728");
  out << "</svg>\n";
}

void save_mae_bar_svg(const EvalReport& report,
                      const std::filesystem::path& path) {
  if (report.rows.empty()) throw DataError("no report rows to plot");
  const double bar_w = 40, gap = 18, h = 300, pad = 20;
  double max_mae = 0;
  for (const auto& r : report.rows) max_mae = std::max(max_mae, r.mae);
  if (max_mae == 0) max_mae = 1;
  const double w = pad * 2 + report.rows.size() * (bar_w + gap);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h + 40 << "\">\n";
  for (size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const double bh = h * r.mae / max_mae;
    const double x = pad + i * (bar_w + gap);
    out << "<rect x=\"" << x << "\" y=\"" << h - bh << "\" width=\"" << bar_w
        << "\" height=\"" << bh << "\" fill=\"#1f77b4\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << h + 14
        << "\" font-size=\"9\">" << r.asset << '/' << r.model << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace cpulse
