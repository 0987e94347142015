#pragma once

#include <filesystem>
#include <vector>

#include "cryptopulse/types.hpp"

namespace cpulse {

struct IndicatorConfig {
  int n_stoch = 14;      // stochastic %K lookback
  int n_stoch_d = 3;     // %D moving-average length
  int n_momentum = 10;
  int n_roc = 12;
  int n_disparity = 7;

  // Rows at or before the warm-up index carry incomplete indicator history
  // and are dropped.
  int warmup() const;
};

// All indicator windows are inclusive of day t: a length-N window covers days
// t-N+1 ... t. Day indices are 1-based. Flat high==low stretches fall back to
// the neutral mid-scale value (50 for %K / Williams, 0 for A/D).

double stochastic_k(const CryptoSeries& series, int t, int n = 14);
double stochastic_d(const std::vector<double>& k_values, int t, int n = 3);
double williams_r(const CryptoSeries& series, int t, int n = 14);
double ad_oscillator(const CryptoSeries& series, int t);
double momentum(const CryptoSeries& series, int t, int n = 10);
double disparity7(const CryptoSeries& series, int t, int n = 7);
double rate_of_change(const CryptoSeries& series, int t, int n = 12);

std::vector<FeatureRow> compute_feature_rows(const CryptoSeries& series,
                                             const IndicatorConfig& config = {});

void save_feature_csv(const std::vector<FeatureRow>& rows,
                      const std::filesystem::path& path);

}  // namespace cpulse
