#include "cryptopulse/metrics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cryptopulse/errors.hpp"

namespace cpulse {

Metrics compute_metrics(const Vector& truth, const Vector& predicted) {
  if (truth.size() == 0 || truth.size() != predicted.size())
    throw DataError("metrics: vectors must be equal nonzero length");
  Metrics m;
  const Vector diff = truth - predicted;
  m.mae = diff.cwiseAbs().mean();
  m.mse = diff.squaredNorm() / static_cast<double>(diff.size());
  const double denom = std::sqrt(truth.squaredNorm() * predicted.squaredNorm());
  if (denom == 0.0) {
    m.corr = 0.0;
    m.corr_defined = false;
  } else {
    m.corr = truth.dot(predicted) / denom;
  }
  return m;
}

ReportRow average_over_seeds(const std::string& asset, const std::string& model,
                             const std::string& variant,
                             const std::vector<Metrics>& per_seed) {
  if (per_seed.empty()) throw DataError("average_over_seeds: no runs");
  ReportRow row;
  row.asset = asset;
  row.model = model;
  row.variant = variant;
  row.seeds = static_cast<int>(per_seed.size());
  for (const Metrics& m : per_seed) {
    row.mae += m.mae;
    row.mse += m.mse;
    row.corr += m.corr;
  }
  row.mae /= row.seeds;
  row.mse /= row.seeds;
  row.corr /= row.seeds;
  double var = 0;
  for (const Metrics& m : per_seed) var += (m.mae - row.mae) * (m.mae - row.mae);
  row.mae_std = std::sqrt(var / row.seeds);
  return row;
}

void EvalReport::add_topk_row(const std::string& model,
                              const std::string& variant, int k) {
  ReportRow agg;
  agg.asset = "top" + std::to_string(k);
  agg.model = model;
  agg.variant = variant;
  agg.aggregate = true;
  int count = 0;
  for (const ReportRow& r : rows) {
    if (r.aggregate || r.model != model || r.variant != variant) continue;
    if (count == k) break;
    agg.mae += r.mae;
    agg.mse += r.mse;
    agg.corr += r.corr;
    agg.mae_std += r.mae_std;
    agg.seeds = r.seeds;
    ++count;
  }
  if (count == 0) throw DataError("add_topk_row: no member rows");
  agg.mae /= count;
  agg.mse /= count;
  agg.corr /= count;
  agg.mae_std /= count;
  rows.push_back(agg);
}

void EvalReport::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "asset,model,variant,MAE,MSE,CORR,MAE_std\n";
  out << std::setprecision(17);
  for (const ReportRow& r : rows)
    out << r.asset << ',' << r.model << ',' << r.variant << ',' << r.mae << ','
        << r.mse << ',' << r.corr << ',' << r.mae_std << '\n';
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  os << std::left << std::setw(12) << "asset" << std::setw(14) << "model"
     << std::setw(8) << "variant" << std::right << std::setw(10) << "MAE"
     << std::setw(10) << "MSE" << std::setw(10) << "CORR" << std::setw(10)
     << "MAE_std" << '\n';
  os << std::string(74, '-') << '\n';
  os << std::fixed << std::setprecision(4);
  for (const ReportRow& r : rows)
    os << std::left << std::setw(12) << r.asset << std::setw(14) << r.model
       << std::setw(8) << r.variant << std::right << std::setw(10) << r.mae
       << std::setw(10) << r.mse << std::setw(10) << r.corr << std::setw(10)
       << r.mae_std << '\n';
  return os.str();
}

}  // namespace cpulse
