#pragma once

#include <string>
#include <vector>

#include "cryptopulse/tape.hpp"

namespace cpulse {

struct EmbeddingConfig {
  int d_model = 64;       // must be even (sinusoidal pairing)
  int kernel_width = 3;   // must be odd
  int channels = 5;       // 5 for x_g, 5n for x_m, 1 for sentiment
};

// Fixed sinusoidal position matrix, L x d_model:
// PE[pos, 2i] = sin(pos / 10000^(2i/d)), PE[pos, 2i+1] = cos(same argument).
Matrix positional_encoding(int length, int d_model);

// Value-plus-position embedding: temporal conv1d ("same" padding, so L is
// preserved) plus the sinusoidal position matrix.
struct Embedding {
  EmbeddingConfig cfg;
  Parameter kernel;  // (width * channels) x d_model
  Parameter bias;    // 1 x d_model

  Embedding() = default;
  Embedding(const std::string& name, const EmbeddingConfig& config);

  void init(RngStream& rng);
  std::vector<Parameter*> parameters();

  // x: L x channels -> L x d_model.
  TensorId apply(Tape& tape, TensorId x);
};

// n x L x 5 macro block flattened to L x 5n: asset a's channel c lands in
// column a*5 + c. Asset order is positional.
Matrix flatten_macro(const std::vector<Matrix>& per_asset);

}  // namespace cpulse
