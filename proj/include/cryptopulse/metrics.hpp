#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cryptopulse/types.hpp"

namespace cpulse {

struct Metrics {
  double mae = 0;
  double mse = 0;
  // Uncentered cosine: sum(y*yhat) / sqrt(sum(y^2) * sum(yhat^2)).
  double corr = 0;
  bool corr_defined = true;  // false when either vector is all zeros
};

Metrics compute_metrics(const Vector& truth, const Vector& predicted);

// One Table-style report row; metrics are means over seeds.
struct ReportRow {
  std::string asset;
  std::string model;
  std::string variant;
  double mae = 0, mse = 0, corr = 0;
  double mae_std = 0;  // across seeds
  int seeds = 0;
  bool aggregate = false;  // top-k average row
};

struct EvalReport {
  std::vector<ReportRow> rows;

  // Arithmetic mean over the first k asset rows for a given (model, variant).
  void add_topk_row(const std::string& model, const std::string& variant,
                    int k);
  void save_csv(const std::filesystem::path& path) const;
  std::string to_table() const;
};

ReportRow average_over_seeds(const std::string& asset, const std::string& model,
                             const std::string& variant,
                             const std::vector<Metrics>& per_seed);

}  // namespace cpulse
