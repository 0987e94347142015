#pragma once

#include <array>
#include <map>
#include <vector>

#include "cryptopulse/indicators.hpp"
#include "cryptopulse/model.hpp"
#include "cryptopulse/types.hpp"

namespace cpulse {

// Per-day aggregated sentiment in [-1, 1]; days absent from the map are 0.
using SentimentByDay = std::map<Date, double>;

// One sample per day t with L prior days of every input and a day-(t+1)
// close. Inputs are aligned on the intersection of available dates; macro
// assets are sliced per asset and concatenated as channels.
std::vector<WindowSample> build_windows(
    const CryptoSeries& target, const std::vector<CryptoSeries>& macro_set,
    const std::vector<FeatureRow>& target_features,
    const SentimentByDay& sentiment, int window_length);

// Chronological split, default 7:1:2. Requires at least 10 samples.
DatasetSplit chronological_split(const std::vector<WindowSample>& samples,
                                 const std::array<double, 3>& ratios = {0.7,
                                                                        0.1,
                                                                        0.2});

// Per-feature z-scoring fitted on the training split only. Zero-variance
// features fall back to std 1 (logged via the warnings list). Training,
// prediction and metrics all live in normalized space.
class Normalizer {
 public:
  static Normalizer fit(const std::vector<WindowSample>& train);

  WindowSample apply(const WindowSample& sample) const;
  std::vector<WindowSample> apply(const std::vector<WindowSample>& v) const;
  DatasetSplit apply(const DatasetSplit& split) const;

  double normalize_close(double raw) const;
  double denormalize_close(double normalized) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  Eigen::RowVectorXd g_mean_, g_std_;      // x_g channels
  Eigen::RowVectorXd m_mean_, m_std_;      // x_m channels
  Eigen::RowVectorXd ind_mean_, ind_std_;  // indicator channels
  std::vector<std::string> warnings_;
};

// Baseline feature window for a variant: price channels, then indicator
// channels (dropped by xi), then the sentiment channel (dropped by xs).
Matrix baseline_window(const WindowSample& sample, Variant variant);
int baseline_channels(Variant variant, int price_channels = 5,
                      int indicator_channels = 7);

}  // namespace cpulse
