#include "cryptopulse/embedding.hpp"

#include <cmath>

#include "cryptopulse/errors.hpp"

namespace cpulse {

Matrix positional_encoding(int length, int d_model) {
  if (d_model % 2 != 0)
    throw ShapeError("positional_encoding: d_model must be even");
  Matrix pe(length, d_model);
  for (int pos = 0; pos < length; ++pos)
    for (int i = 0; i < d_model / 2; ++i) {
      const double angle =
          pos / std::pow(10000.0, (2.0 * i) / static_cast<double>(d_model));
      pe(pos, 2 * i) = std::sin(angle);
      pe(pos, 2 * i + 1) = std::cos(angle);
    }
  return pe;
}

Embedding::Embedding(const std::string& name, const EmbeddingConfig& config)
    : cfg(config),
      kernel(name + ".kernel", config.kernel_width * config.channels,
             config.d_model),
      bias(name + ".bias", 1, config.d_model) {
  if (cfg.d_model % 2 != 0)
    throw ShapeError("embedding: d_model must be even");
  if (cfg.kernel_width % 2 == 0)
    throw ShapeError("embedding: kernel width must be odd");
}

void Embedding::init(RngStream& rng) {
  kernel.init_uniform(rng, cfg.kernel_width * cfg.channels);
  // biases stay zero
}

std::vector<Parameter*> Embedding::parameters() { return {&kernel, &bias}; }

TensorId Embedding::apply(Tape& tape, TensorId x) {
  // note: recording ops may reallocate the tape's node storage, so read the
  // input shape before creating any new nodes
  const Eigen::Index rows = tape.value(x).rows();
  const Eigen::Index cols = tape.value(x).cols();
  if (cols != cfg.channels)
    throw ShapeError("embedding: input has " + std::to_string(cols) +
                     " channels, expected " + std::to_string(cfg.channels));
  TensorId conv = tape.conv1d_same(x, tape.param(kernel), tape.param(bias),
                                   cfg.kernel_width);
  TensorId pe = tape.input(
      positional_encoding(static_cast<int>(rows), cfg.d_model));
  return tape.add(conv, pe);
}

Matrix flatten_macro(const std::vector<Matrix>& per_asset) {
  if (per_asset.empty()) throw ShapeError("flatten_macro: empty macro set");
  const Eigen::Index L = per_asset.front().rows();
  const Eigen::Index C = per_asset.front().cols();
  for (const Matrix& m : per_asset)
    if (m.rows() != L || m.cols() != C)
      throw ShapeError("flatten_macro: ragged macro block");
  Matrix out(L, C * static_cast<Eigen::Index>(per_asset.size()));
  for (size_t a = 0; a < per_asset.size(); ++a)
    out.middleCols(static_cast<Eigen::Index>(a) * C, C) = per_asset[a];
  return out;
}

}  // namespace cpulse
