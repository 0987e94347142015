#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cryptopulse/types.hpp"

namespace cpulse {

// A learnable tensor with its gradient slot and Adam moment state.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix m;  // first moment
  Matrix v;  // second moment
  long step = 0;

  Parameter() = default;
  Parameter(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)),
        value(Matrix::Zero(rows, cols)),
        grad(Matrix::Zero(rows, cols)),
        m(Matrix::Zero(rows, cols)),
        v(Matrix::Zero(rows, cols)) {}

  // Uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
  void init_uniform(class RngStream& rng, Eigen::Index fan_in);
  void zero_grad() { grad.setZero(); }
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Standard Adam with bias correction; gradients are zeroed afterwards.
void adam_step(std::vector<Parameter*>& params, double lr,
               const AdamConfig& cfg = {});

// Flat binary checkpoint: u32 count, then per parameter
// u32 name length, name bytes, u32 rows, u32 cols, row-major little-endian
// doubles.
void save_checkpoint(const std::vector<Parameter*>& params,
                     const std::filesystem::path& path);
void load_checkpoint(std::vector<Parameter*>& params,
                     const std::filesystem::path& path);

std::vector<Matrix> snapshot_values(const std::vector<Parameter*>& params);
void restore_values(std::vector<Parameter*>& params,
                    const std::vector<Matrix>& values);

}  // namespace cpulse
