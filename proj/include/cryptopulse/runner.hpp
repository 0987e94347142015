#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "cryptopulse/data_io.hpp"
#include "cryptopulse/training.hpp"

namespace cpulse {

// Dataset directory layout:
//   manifest.json            asset lists + window length
//   prices/<SYMBOL>.csv      canonical OHLCV
//   news.jsonl               optional market news
//   sentiment_labels.csv     label cache (hash,date,label)
//   example_bank.jsonl       optional few-shot bank
struct AssetData {
  DatasetSplit split;        // normalized
  Normalizer normalizer;
  std::size_t n_samples = 0;
};

AssetData prepare_asset(const std::filesystem::path& dataset_dir,
                        const DatasetManifest& manifest,
                        const std::string& symbol, const TrainConfig& config,
                        const std::array<double, 3>& ratios = {0.7, 0.1, 0.2});

struct RunSpec {
  ModelKind model = ModelKind::cryptopulse;
  std::string asset;
  Variant variant = Variant::full;
  std::uint64_t seed = 0;
};

// runs/<model>/<asset>/<variant>/seed<k>/
std::filesystem::path run_dir(const std::filesystem::path& root,
                              const RunSpec& spec);
bool run_complete(const std::filesystem::path& dir);

// Writes manifest.json, checkpoint.bin, epochs.csv, predictions.csv and
// metrics.json into the run directory.
void write_run(const std::filesystem::path& dir, const RunSpec& spec,
               const TrainConfig& config, const SeedRun& run);

Metrics read_run_metrics(const std::filesystem::path& dir);

void save_predictions_csv(const std::vector<PredictionRecord>& records,
                          const std::filesystem::path& path);

// Prediction-vs-truth polyline chart.
void save_prediction_svg(const std::vector<PredictionRecord>& records,
                         const std::filesystem::path& path);
// MAE bar chart over report rows.
void save_mae_bar_svg(const EvalReport& report,
                      const std::filesystem::path& path);

TrainConfig train_config_from_json(const std::filesystem::path& manifest);

}  // namespace cpulse
