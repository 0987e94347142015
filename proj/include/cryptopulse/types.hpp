#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "cryptopulse/errors.hpp"

namespace cpulse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// UTC calendar day. Comparison is chronological.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  // Days since 1970-01-01 (proleptic Gregorian).
  std::int64_t serial() const;
  static Date from_serial(std::int64_t days);
  Date next() const { return from_serial(serial() + 1); }

  static Date parse(const std::string& iso);  // "YYYY-MM-DD"
  std::string str() const;
};

struct PriceBar {
  Date date;
  double open = 0, high = 0, low = 0, close = 0, volume = 0;

  // low <= min(open, close), high >= max(open, close), volume >= 0, finite.
  void validate() const;
};

struct CryptoSeries {
  std::string symbol;
  std::vector<PriceBar> bars;  // strictly ascending dates
};

struct NewsArticle {
  Date date;
  std::string title;
  std::string content;
};

struct FeatureRow {
  Date date;
  double open = 0, high = 0, low = 0, close = 0, volume = 0;
  double stoch_k = 0, stoch_d = 0, momentum = 0, williams_r = 0;
  double ad_osc = 0, disparity7 = 0, roc = 0;

  static constexpr int kPriceChannels = 5;
  static constexpr int kIndicatorChannels = 7;

  Eigen::Matrix<double, 1, 5> prices() const {
    return {open, high, low, close, volume};
  }
  Eigen::Matrix<double, 1, 7> indicators() const {
    return {stoch_k, stoch_d, momentum, williams_r, ad_osc, disparity7, roc};
  }
};

// One training sample: L days of aligned history plus the next day's close.
struct WindowSample {
  std::string target_symbol;
  Date target_date;              // day t+1, the day being predicted
  Matrix x_g;                    // L x 5 target prices (o,h,l,c,v)
  Matrix x_m;                    // L x 5n macro prices, assets concatenated as channels
  Matrix indicators;             // L x 7
  Vector sentiment;              // L, entries in [-1, 1]
  double target_close = 0;       // close on target_date
  double last_close = 0;         // p_L, close of the window's final day
};

struct DatasetSplit {
  std::vector<WindowSample> train;
  std::vector<WindowSample> validation;
  std::vector<WindowSample> test;
};

}  // namespace cpulse
