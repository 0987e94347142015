#include "cryptopulse/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cpulse {

std::vector<WindowSample> build_windows(
    const CryptoSeries& target, const std::vector<CryptoSeries>& macro_set,
    const std::vector<FeatureRow>& target_features,
    const SentimentByDay& sentiment, int window_length) {
  if (macro_set.empty()) throw DataError("build_windows: empty macro set");
  const int L = window_length;
  if (L < 2) throw DataError("build_windows: window length must be >= 2");

  std::map<Date, const FeatureRow*> features_by_date;
  for (const FeatureRow& row : target_features)
    features_by_date.emplace(row.date, &row);

  std::vector<std::map<Date, const PriceBar*>> macro_by_date;
  for (const CryptoSeries& series : macro_set) {
    std::map<Date, const PriceBar*> m;
    for (const PriceBar& bar : series.bars) m.emplace(bar.date, &bar);
    macro_by_date.push_back(std::move(m));
  }

  // intersection of dates available in every input
  std::vector<Date> dates;
  for (const auto& [date, row] : features_by_date) {
    bool everywhere = true;
    for (const auto& m : macro_by_date)
      if (!m.count(date)) {
        everywhere = false;
        break;
      }
    if (everywhere) dates.push_back(date);
  }
  if (dates.empty())
    throw DataError("build_windows: no dates shared by target and macro set");

  const int D = static_cast<int>(dates.size());
  const int n = static_cast<int>(macro_set.size());
  std::vector<WindowSample> samples;
  for (int t = L; t <= D - 2; ++t) {
    WindowSample s;
    s.target_symbol = target.symbol;
    s.target_date = dates[t + 1];
    s.x_g.resize(L, 5);
    s.x_m.resize(L, 5 * n);
    s.indicators.resize(L, 7);
    s.sentiment.resize(L);
    for (int i = 0; i < L; ++i) {
      const Date d = dates[t - L + 1 + i];
      const FeatureRow& row = *features_by_date.at(d);
      s.x_g.row(i) = row.prices();
      s.indicators.row(i) = row.indicators();
      for (int a = 0; a < n; ++a) {
        const PriceBar& bar = *macro_by_date[a].at(d);
        s.x_m(i, a * 5 + 0) = bar.open;
        s.x_m(i, a * 5 + 1) = bar.high;
        s.x_m(i, a * 5 + 2) = bar.low;
        s.x_m(i, a * 5 + 3) = bar.close;
        s.x_m(i, a * 5 + 4) = bar.volume;
      }
      auto it = sentiment.find(d);
      s.sentiment(i) = it == sentiment.end() ? 0.0 : it->second;
    }
    s.last_close = s.x_g(L - 1, 3);
    s.target_close = features_by_date.at(dates[t + 1])->close;
    samples.push_back(std::move(s));
  }
  return samples;
}

DatasetSplit chronological_split(const std::vector<WindowSample>& samples,
                                 const std::array<double, 3>& ratios) {
  const size_t N = samples.size();
  if (N < 10) throw DataError("chronological_split: insufficient samples (" +
                              std::to_string(N) + " < 10)");
  for (double r : ratios)
    if (!(r > 0)) throw DataError("chronological_split: ratios must be positive");
  const double total = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(total - 1.0) > 1e-9)
    throw DataError("chronological_split: ratios must sum to 1");

  const size_t n_train = static_cast<size_t>(std::floor(ratios[0] * N));
  const size_t n_val = static_cast<size_t>(std::floor(ratios[1] * N));
  DatasetSplit split;
  split.train.assign(samples.begin(), samples.begin() + n_train);
  split.validation.assign(samples.begin() + n_train,
                          samples.begin() + n_train + n_val);
  split.test.assign(samples.begin() + n_train + n_val, samples.end());
  return split;
}

namespace {

void fit_columns(const std::vector<const Matrix*>& blocks,
                 Eigen::RowVectorXd& mean, Eigen::RowVectorXd& stddev,
                 const char* what, std::vector<std::string>& warnings) {
  const Eigen::Index C = blocks.front()->cols();
  Eigen::Index rows = 0;
  mean = Eigen::RowVectorXd::Zero(C);
  for (const Matrix* b : blocks) {
    mean += b->colwise().sum();
    rows += b->rows();
  }
  mean /= static_cast<double>(rows);
  Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(C);
  for (const Matrix* b : blocks)
    var += (b->rowwise() - mean).array().square().colwise().sum().matrix();
  var /= static_cast<double>(rows);
  stddev = var.array().sqrt();
  for (Eigen::Index c = 0; c < C; ++c)
    if (stddev(c) <= 0.0) {
      warnings.push_back(std::string(what) + " column " + std::to_string(c) +
                         " has zero variance; using std 1");
      stddev(c) = 1.0;
    }
}

}  // namespace

Normalizer Normalizer::fit(const std::vector<WindowSample>& train) {
  if (train.empty()) throw DataError("normalizer: empty training split");
  Normalizer n;
  std::vector<const Matrix*> g, m, ind;
  for (const WindowSample& s : train) {
    g.push_back(&s.x_g);
    m.push_back(&s.x_m);
    ind.push_back(&s.indicators);
  }
  fit_columns(g, n.g_mean_, n.g_std_, "x_g", n.warnings_);
  fit_columns(m, n.m_mean_, n.m_std_, "x_m", n.warnings_);
  fit_columns(ind, n.ind_mean_, n.ind_std_, "indicators", n.warnings_);
  return n;
}

double Normalizer::normalize_close(double raw) const {
  return (raw - g_mean_(3)) / g_std_(3);
}

double Normalizer::denormalize_close(double normalized) const {
  return normalized * g_std_(3) + g_mean_(3);
}

WindowSample Normalizer::apply(const WindowSample& sample) const {
  WindowSample out = sample;
  out.x_g = ((sample.x_g.rowwise() - g_mean_).array().rowwise() /
             g_std_.array())
                .matrix();
  out.x_m = ((sample.x_m.rowwise() - m_mean_).array().rowwise() /
             m_std_.array())
                .matrix();
  out.indicators = ((sample.indicators.rowwise() - ind_mean_)
                        .array()
                        .rowwise() /
                    ind_std_.array())
                       .matrix();
  out.last_close = normalize_close(sample.last_close);
  out.target_close = normalize_close(sample.target_close);
  return out;
}

std::vector<WindowSample> Normalizer::apply(
    const std::vector<WindowSample>& v) const {
  std::vector<WindowSample> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(apply(s));
  return out;
}

DatasetSplit Normalizer::apply(const DatasetSplit& split) const {
  DatasetSplit out;
  out.train = apply(split.train);
  out.validation = apply(split.validation);
  out.test = apply(split.test);
  return out;
}

int baseline_channels(Variant variant, int price_channels,
                      int indicator_channels) {
  switch (variant) {
    case Variant::full: return price_channels + indicator_channels + 1;
    case Variant::xs: return price_channels + indicator_channels;
    case Variant::xi: return price_channels + 1;
  }
  return 0;
}

Matrix baseline_window(const WindowSample& sample, Variant variant) {
  const Eigen::Index L = sample.x_g.rows();
  Matrix out(L, baseline_channels(variant));
  out.leftCols(5) = sample.x_g;
  switch (variant) {
    case Variant::full:
      out.middleCols(5, 7) = sample.indicators;
      out.col(12) = sample.sentiment;
      break;
    case Variant::xs:
      out.middleCols(5, 7) = sample.indicators;
      break;
    case Variant::xi:
      out.col(5) = sample.sentiment;
      break;
  }
  return out;
}

}  // namespace cpulse
