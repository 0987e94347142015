#include "cryptopulse/training.hpp"

#include <algorithm>
#include <numeric>

namespace cpulse {

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::cryptopulse: return "cryptopulse";
    case ModelKind::linear: return "linear";
    case ModelKind::nlinear: return "nlinear";
    case ModelKind::dlinear: return "dlinear";
  }
  return "cryptopulse";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "cryptopulse") return ModelKind::cryptopulse;
  if (s == "linear") return ModelKind::linear;
  if (s == "nlinear") return ModelKind::nlinear;
  if (s == "dlinear") return ModelKind::dlinear;
  throw DataError("unknown model '" + s + "'");
}

void TrainConfig::validate() const {
  if (epochs < 1 || batch_size < 1 || lr0 <= 0 || window_length < 2 ||
      n_macro < 1 || d_model < 2 || patience < 1)
    throw DataError("train config: all settings must be positive");
  std::vector<std::uint64_t> sorted = seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DataError("train config: seeds must be distinct");
}

PredictionRecord Forecaster::last_record(Tape& tape, TensorId pred,
                                         const WindowSample& sample) {
  PredictionRecord r;
  r.target_date = sample.target_date;
  r.pred = tape.scalar_value(pred);
  r.p1 = r.p2 = r.pred;
  r.true_close = sample.target_close;
  return r;
}

namespace {

class CryptoPulseForecaster : public Forecaster {
 public:
  CryptoPulseForecaster(const ModelConfig& cfg, RngStream& rng) : model_(cfg) {
    model_.init(rng);
  }

  std::vector<Parameter*> parameters() override { return model_.parameters(); }

  TensorId predict(Tape& tape, const WindowSample& sample, bool training,
                   RngStream& rng) override {
    last_ = model_.forward(tape, sample, training, rng);
    return last_.pred;
  }

  PredictionRecord last_record(Tape&, TensorId,
                               const WindowSample&) override {
    return last_.record;
  }

  CryptoPulseModel& model() { return model_; }

 private:
  CryptoPulseModel model_;
  ForwardResult last_;
};

class BaselineForecaster : public Forecaster {
 public:
  BaselineForecaster(BaselineKind kind, Variant variant,
                     const TrainConfig& cfg, RngStream& rng)
      : variant_(variant),
        baseline_(kind, cfg.window_length, baseline_channels(variant),
                  cfg.dlinear_ma_window) {
    baseline_.init(rng);
  }

  std::vector<Parameter*> parameters() override {
    return baseline_.parameters();
  }

  TensorId predict(Tape& tape, const WindowSample& sample, bool, RngStream&)
      override {
    return baseline_.forward(tape, baseline_window(sample, variant_),
                             sample.last_close);
  }

 private:
  Variant variant_;
  LinearBaseline baseline_;
};

}  // namespace

std::unique_ptr<Forecaster> make_forecaster(ModelKind kind, Variant variant,
                                            const TrainConfig& config,
                                            RngStream& init_rng) {
  if (kind == ModelKind::cryptopulse) {
    ModelConfig mc;
    mc.window_length = config.window_length;
    mc.n_macro = config.n_macro;
    mc.d_model = config.d_model;
    mc.dropout = config.dropout;
    mc.variant = variant;
    return std::make_unique<CryptoPulseForecaster>(mc, init_rng);
  }
  BaselineKind bk = kind == ModelKind::linear    ? BaselineKind::linear
                    : kind == ModelKind::nlinear ? BaselineKind::nlinear
                                                 : BaselineKind::dlinear;
  return std::make_unique<BaselineForecaster>(bk, variant, config, init_rng);
}

namespace {

double split_mse(Forecaster& model, const std::vector<WindowSample>& samples) {
  if (samples.empty()) return 0.0;
  RngStream rng(0);  // unused in eval mode
  double acc = 0;
  for (const WindowSample& s : samples) {
    Tape tape;
    const double pred = tape.scalar_value(model.predict(tape, s, false, rng));
    const double d = pred - s.target_close;
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

}  // namespace

TrainResult train(Forecaster& model, const DatasetSplit& data,
                  const TrainConfig& config, std::uint64_t seed) {
  config.validate();
  if (data.train.empty() || data.validation.empty())
    throw DataError("train: empty train or validation split");

  std::vector<Parameter*> params = model.parameters();
  TrainResult result;
  std::vector<Matrix> best;
  int stale = 0;

  RngStream base(seed);
  std::vector<size_t> order(data.train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.lr_at_epoch(epoch);
    RngStream epoch_rng = base.fork(static_cast<std::uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), epoch_rng.engine());

    double train_acc = 0;
    size_t seen = 0;
    try {
      for (size_t start = 0; start < order.size();
           start += static_cast<size_t>(config.batch_size)) {
        const size_t end = std::min(
            order.size(), start + static_cast<size_t>(config.batch_size));
        Tape tape;
        TensorId loss{};
        for (size_t i = start; i < end; ++i) {
          const WindowSample& s = data.train[order[i]];
          TensorId pred = model.predict(tape, s, true, epoch_rng);
          TensorId err = tape.sub(pred, tape.scalar(s.target_close));
          TensorId sq = tape.mul(err, err);
          loss = (i == start) ? sq : tape.add(loss, sq);
        }
        loss = tape.scale(loss, 1.0 / static_cast<double>(end - start));
        tape.backward(loss);
        train_acc += tape.scalar_value(loss) * static_cast<double>(end - start);
        seen += end - start;
        adam_step(params, lr);
      }
    } catch (const NumericalError&) {
      result.diverged = true;
      break;
    }

    EpochLog log;
    log.epoch = epoch;
    log.lr = lr;
    log.train_mse = train_acc / static_cast<double>(seen);
    log.val_mse = split_mse(model, data.validation);
    result.epochs.push_back(log);

    if (result.best_epoch < 0 || log.val_mse < result.best_val_mse) {
      result.best_epoch = epoch;
      result.best_val_mse = log.val_mse;
      best = snapshot_values(params);
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }

  if (!best.empty()) restore_values(params, best);
  return result;
}

Evaluation evaluate(Forecaster& model,
                    const std::vector<WindowSample>& samples) {
  if (samples.empty()) throw DataError("evaluate: empty sample set");
  Evaluation ev;
  ev.truth.resize(static_cast<Eigen::Index>(samples.size()));
  ev.predicted.resize(static_cast<Eigen::Index>(samples.size()));
  RngStream rng(0);  // unused in eval mode
  for (size_t i = 0; i < samples.size(); ++i) {
    Tape tape;
    TensorId pred = model.predict(tape, samples[i], false, rng);
    ev.records.push_back(model.last_record(tape, pred, samples[i]));
    ev.truth(static_cast<Eigen::Index>(i)) = samples[i].target_close;
    ev.predicted(static_cast<Eigen::Index>(i)) = tape.scalar_value(pred);
  }
  ev.metrics = compute_metrics(ev.truth, ev.predicted);
  return ev;
}

Metrics persistence_metrics(const std::vector<WindowSample>& samples) {
  if (samples.empty()) throw DataError("persistence: empty sample set");
  Vector truth(static_cast<Eigen::Index>(samples.size()));
  Vector pred(static_cast<Eigen::Index>(samples.size()));
  for (size_t i = 0; i < samples.size(); ++i) {
    truth(static_cast<Eigen::Index>(i)) = samples[i].target_close;
    pred(static_cast<Eigen::Index>(i)) = samples[i].last_close;
  }
  return compute_metrics(truth, pred);
}

SeedRun run_seed(ModelKind kind, Variant variant, const DatasetSplit& data,
                 const TrainConfig& config, std::uint64_t seed) {
  SeedRun run;
  RngStream init_rng(seed * 7919 + 17);
  run.model = make_forecaster(kind, variant, config, init_rng);
  run.training = train(*run.model, data, config, seed);
  run.validation = evaluate(*run.model, data.validation);
  run.test = evaluate(*run.model, data.test);
  return run;
}

}  // namespace cpulse
