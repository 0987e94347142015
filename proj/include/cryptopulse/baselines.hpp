#pragma once

#include <string>
#include <vector>

#include "cryptopulse/model.hpp"
#include "cryptopulse/tape.hpp"

namespace cpulse {

enum class BaselineKind { linear, nlinear, dlinear };

std::string baseline_name(BaselineKind k);

// Centered moving average along rows with edge-replicated padding; the trend
// component of DLinear's decomposition. trend(x) + remainder(x) == x.
Matrix moving_average_rows(const Matrix& x, int window);

// One-layer linear forecasters over the L x C feature window. The close price
// is expected in column kCloseColumn of the window.
class LinearBaseline {
 public:
  static constexpr int kCloseColumn = 3;

  LinearBaseline(BaselineKind kind, int window_length, int channels,
                 int ma_window = 3);

  BaselineKind kind() const { return kind_; }
  int channels() const { return channels_; }
  void init(RngStream& rng);
  std::vector<Parameter*> parameters();

  // x: L x C window, last_close: close of the final row. Returns the 1 x 1
  // predicted next close.
  TensorId forward(Tape& tape, const Matrix& x, double last_close);

 private:
  BaselineKind kind_;
  int length_;
  int channels_;
  int ma_window_;
  Parameter w_;        // L x C, per-channel temporal weights
  Parameter b_;        // 1 x 1
  Parameter w_trend_;  // dlinear only
};

}  // namespace cpulse
