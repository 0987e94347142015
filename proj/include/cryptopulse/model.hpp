#pragma once

#include <string>
#include <vector>

#include "cryptopulse/embedding.hpp"
#include "cryptopulse/tape.hpp"

namespace cpulse {

// Feature ablations: xs removes sentiment, xi removes technical indicators.
enum class Variant { full, xs, xi };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

// Position-wise feed-forward (d -> 2d -> d, ReLU) followed by a temporal
// linear (L -> 1) and a feature linear (d -> 1); collapses L x d to a scalar.
struct ZetaHead {
  int d_in = 0;
  int length = 0;
  Parameter ff_w1, ff_b1, ff_w2, ff_b2;
  Parameter temporal_w, temporal_b;
  Parameter feature_w, feature_b;

  ZetaHead() = default;
  ZetaHead(const std::string& name, int d, int L);

  void init(RngStream& rng);
  std::vector<Parameter*> parameters();

  TensorId apply(Tape& tape, TensorId x, double dropout_rate, RngStream& rng,
                 bool training);
};

// (1/L) sum_t <q_t, r_t>: mean over time of the per-step inner product.
TensorId lag_similarity(Tape& tape, TensorId q, TensorId r);

struct MacroAttention {
  TensorId weights;  // (L-1) x 1, softmax over shifts tau = 1 .. L-1
  TensorId h_m;      // L x d
};

// Autocorrelation-style aggregation: the target embedding queries every
// nonzero cyclic shift of the macro embedding; shifts serve as both keys and
// values.
MacroAttention macro_attend(Tape& tape, TensorId x_g_emb, TensorId x_m_emb);

struct PredictionRecord {
  Date target_date;
  double p1 = 0, p2 = 0;
  double kappa = 0, gamma = 0;
  double pred = 0;
  double true_close = 0;
};

struct ModelConfig {
  int window_length = 7;   // L
  int n_macro = 5;
  int d_model = 64;
  int kernel_width = 3;
  double dropout = 0.1;
  Variant variant = Variant::full;
};

struct ForwardResult {
  TensorId pred, p1, p2, kappa, gamma, delta1, delta2;
  PredictionRecord record;
};

class CryptoPulseModel {
 public:
  explicit CryptoPulseModel(const ModelConfig& cfg);

  void init(RngStream& rng);
  std::vector<Parameter*> parameters();
  const ModelConfig& config() const { return cfg_; }

  ForwardResult forward(Tape& tape, const WindowSample& sample, bool training,
                        RngStream& rng);

 private:
  ModelConfig cfg_;
  Embedding emb_target_;
  Embedding emb_macro_;
  Embedding emb_sent_;
  ZetaHead zeta_delta_;
  ZetaHead zeta_kappa_;
  ZetaHead zeta_gamma_;  // input width 2*d_model after concatenation
  Parameter dyn_w_;      // 1 x L temporal linear over normalized closes
  Parameter dyn_b_;      // 1 x 1
};

}  // namespace cpulse
