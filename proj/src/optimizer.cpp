#include "cryptopulse/optimizer.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "cryptopulse/errors.hpp"
#include "cryptopulse/rng.hpp"

namespace cpulse {

void Parameter::init_uniform(RngStream& rng, Eigen::Index fan_in) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (Eigen::Index i = 0; i < value.rows(); ++i)
    for (Eigen::Index j = 0; j < value.cols(); ++j)
      value(i, j) = rng.uniform(-bound, bound);
}

void adam_step(std::vector<Parameter*>& params, double lr,
               const AdamConfig& cfg) {
  for (Parameter* p : params) {
    ++p->step;
    p->m = cfg.beta1 * p->m + (1.0 - cfg.beta1) * p->grad;
    p->v = cfg.beta2 * p->v + (1.0 - cfg.beta2) * p->grad.cwiseProduct(p->grad);
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p->step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p->step));
    Matrix m_hat = p->m / bc1;
    Matrix v_hat = p->v / bc2;
    p->value.array() -=
        lr * m_hat.array() / (v_hat.array().sqrt() + cfg.eps);
    p->grad.setZero();
  }
}

namespace {

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw DataError("checkpoint truncated");
  return v;
}

}  // namespace

void save_checkpoint(const std::vector<Parameter*>& params,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const Parameter* p : params) {
    write_u32(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    write_u32(out, static_cast<std::uint32_t>(p->value.rows()));
    write_u32(out, static_cast<std::uint32_t>(p->value.cols()));
    for (Eigen::Index i = 0; i < p->value.rows(); ++i)
      for (Eigen::Index j = 0; j < p->value.cols(); ++j) {
        double v = p->value(i, j);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
  }
}

void load_checkpoint(std::vector<Parameter*>& params,
                     const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::uint32_t count = read_u32(in);
  std::map<std::string, Matrix> by_name;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t len = read_u32(in);
    std::string name(len, '\0');
    in.read(name.data(), len);
    const std::uint32_t rows = read_u32(in);
    const std::uint32_t cols = read_u32(in);
    Matrix m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j) {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        if (!in) throw DataError("checkpoint truncated");
        m(i, j) = v;
      }
    by_name.emplace(std::move(name), std::move(m));
  }
  for (Parameter* p : params) {
    auto it = by_name.find(p->name);
    if (it == by_name.end())
      throw DataError("checkpoint missing parameter '" + p->name + "'");
    if (it->second.rows() != p->value.rows() ||
        it->second.cols() != p->value.cols())
      throw DataError("checkpoint shape mismatch for '" + p->name + "'");
    p->value = it->second;
  }
}

std::vector<Matrix> snapshot_values(const std::vector<Parameter*>& params) {
  std::vector<Matrix> out;
  out.reserve(params.size());
  for (const Parameter* p : params) out.push_back(p->value);
  return out;
}

void restore_values(std::vector<Parameter*>& params,
                    const std::vector<Matrix>& values) {
  for (size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
}

}  // namespace cpulse
