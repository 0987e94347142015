#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "cryptopulse/baselines.hpp"
#include "cryptopulse/dataset.hpp"
#include "cryptopulse/metrics.hpp"
#include "cryptopulse/model.hpp"

namespace cpulse {

enum class ModelKind { cryptopulse, linear, nlinear, dlinear };

std::string model_kind_name(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

struct TrainConfig {
  int epochs = 10;
  int batch_size = 32;
  double lr0 = 0.0005;
  double dropout = 0.1;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  int window_length = 7;  // L
  int n_macro = 5;
  int d_model = 64;
  int patience = 3;  // early stop on validation MSE
  int dlinear_ma_window = 3;

  // Halved after each epoch; epoch is 0-based.
  double lr_at_epoch(int epoch) const { return lr0 * std::pow(2.0, -epoch); }
  void validate() const;
};

// Uniform training/eval surface over CryptoPulse and the linear baselines.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::vector<Parameter*> parameters() = 0;
  virtual TensorId predict(Tape& tape, const WindowSample& sample,
                           bool training, RngStream& rng) = 0;
  virtual PredictionRecord last_record(Tape& tape, TensorId pred,
                                       const WindowSample& sample);
};

std::unique_ptr<Forecaster> make_forecaster(ModelKind kind, Variant variant,
                                            const TrainConfig& config,
                                            RngStream& init_rng);

struct EpochLog {
  int epoch = 0;
  double lr = 0;
  double train_mse = 0;
  double val_mse = 0;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  int best_epoch = -1;
  double best_val_mse = 0;
  bool diverged = false;
};

// Mini-batch MSE descent with Adam; deterministic given seed; retains the
// best-validation-MSE parameters. Divergence (non-finite loss) aborts with
// the last finite epoch recorded.
TrainResult train(Forecaster& model, const DatasetSplit& data,
                  const TrainConfig& config, std::uint64_t seed);

struct Evaluation {
  Vector truth;
  Vector predicted;
  std::vector<PredictionRecord> records;
  Metrics metrics;
};

Evaluation evaluate(Forecaster& model, const std::vector<WindowSample>& samples);

// The naive forecast yhat_{t+1} = y_t.
Metrics persistence_metrics(const std::vector<WindowSample>& samples);

struct SeedRun {
  TrainResult training;
  Evaluation test;
  Evaluation validation;
  std::unique_ptr<Forecaster> model;  // trained (best-validation) parameters
};

SeedRun run_seed(ModelKind kind, Variant variant, const DatasetSplit& data,
                 const TrainConfig& config, std::uint64_t seed);

}  // namespace cpulse
