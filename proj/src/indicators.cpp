#include "cryptopulse/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace cpulse {

namespace {

void require_history(const CryptoSeries& s, int t, int needed,
                     const char* name) {
  if (t < 1 || t > static_cast<int>(s.bars.size()))
    throw DataError(std::string(name) + ": day index " + std::to_string(t) +
                    " out of range");
  if (t < needed)
    throw DataError(std::string(name) + ": insufficient history at t=" +
                    std::to_string(t) + " (need " + std::to_string(needed) +
                    " days)");
}

// min low / max high over days t-n+1 ... t (1-based, inclusive).
std::pair<double, double> low_high_range(const CryptoSeries& s, int t, int n) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = t - n; i < t; ++i) {
    lo = std::min(lo, s.bars[i].low);
    hi = std::max(hi, s.bars[i].high);
  }
  return {lo, hi};
}

}  // namespace

int IndicatorConfig::warmup() const {
  return std::max({n_stoch + n_stoch_d - 1, n_momentum + 1, n_roc + 1});
}

double stochastic_k(const CryptoSeries& series, int t, int n) {
  require_history(series, t, n, "stochastic_k");
  auto [lo, hi] = low_high_range(series, t, n);
  if (hi == lo) return 50.0;
  return (series.bars[t - 1].close - lo) / (hi - lo) * 100.0;
}

double stochastic_d(const std::vector<double>& k_values, int t, int n) {
  if (t < n || t > static_cast<int>(k_values.size()))
    throw DataError("stochastic_d: insufficient %K history at t=" +
                    std::to_string(t));
  double sum = 0;
  for (int i = t - n; i < t; ++i) sum += k_values[i];
  return sum / n;
}

double williams_r(const CryptoSeries& series, int t, int n) {
  require_history(series, t, n, "williams_r");
  auto [lo, hi] = low_high_range(series, t, n);
  if (hi == lo) return 50.0;
  return (hi - series.bars[t - 1].close) / (hi - lo) * 100.0;
}

double ad_oscillator(const CryptoSeries& series, int t) {
  require_history(series, t, 2, "ad_oscillator");
  const PriceBar& bar = series.bars[t - 1];
  if (bar.high == bar.low) return 0.0;
  return (bar.close - series.bars[t - 2].close) / (bar.high - bar.low);
}

double momentum(const CryptoSeries& series, int t, int n) {
  require_history(series, t, n + 1, "momentum");
  return series.bars[t - 1].close - series.bars[t - 1 - n].close;
}

double disparity7(const CryptoSeries& series, int t, int n) {
  require_history(series, t, n, "disparity7");
  double sum = 0;
  for (int i = t - n; i < t; ++i) sum += series.bars[i].close;
  double avg = sum / n;
  if (avg == 0) throw NumericalError("disparity7: zero moving average at t=" +
                                     std::to_string(t));
  return series.bars[t - 1].close / avg * 100.0;
}

double rate_of_change(const CryptoSeries& series, int t, int n) {
  require_history(series, t, n + 1, "rate_of_change");
  double base = series.bars[t - 1 - n].close;
  if (base == 0)
    throw NumericalError("rate_of_change: zero base price at t=" +
                         std::to_string(t));
  return series.bars[t - 1].close / base * 100.0;
}

std::vector<FeatureRow> compute_feature_rows(const CryptoSeries& series,
                                             const IndicatorConfig& config) {
  const int total = static_cast<int>(series.bars.size());
  const int warmup = config.warmup();
  if (total <= warmup)
    throw DataError("series '" + series.symbol + "' has " +
                    std::to_string(total) + " bars, need more than " +
                    std::to_string(warmup));

  std::vector<double> k_values(total, 0.0);
  for (int t = config.n_stoch; t <= total; ++t)
    k_values[t - 1] = stochastic_k(series, t, config.n_stoch);

  std::vector<FeatureRow> rows;
  rows.reserve(total - warmup);
  for (int t = warmup + 1; t <= total; ++t) {
    const PriceBar& bar = series.bars[t - 1];
    FeatureRow row;
    row.date = bar.date;
    row.open = bar.open;
    row.high = bar.high;
    row.low = bar.low;
    row.close = bar.close;
    row.volume = bar.volume;
    row.stoch_k = k_values[t - 1];
    row.stoch_d = stochastic_d(k_values, t, config.n_stoch_d);
    row.momentum = momentum(series, t, config.n_momentum);
    row.williams_r = williams_r(series, t, config.n_stoch);
    row.ad_osc = ad_oscillator(series, t);
    row.disparity7 = disparity7(series, t, config.n_disparity);
    row.roc = rate_of_change(series, t, config.n_roc);
    rows.push_back(row);
  }
  return rows;
}

void save_feature_csv(const std::vector<FeatureRow>& rows,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "date,open,high,low,close,volume,stoch_k,stoch_d,momentum,"
         "williams_r,ad_osc,disparity7,roc\n";
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows)
    out << r.date.str() << ',' << fmt(r.open) << ',' << fmt(r.high) << ','
        << fmt(r.low) << ',' << fmt(r.close) << ',' << fmt(r.volume) << ','
        << fmt(r.stoch_k) << ',' << fmt(r.stoch_d) << ',' << fmt(r.momentum)
        << ',' << fmt(r.williams_r) << ',' << fmt(r.ad_osc) << ','
        << fmt(r.disparity7) << ',' << fmt(r.roc) << '\n';
}

}  // namespace cpulse
