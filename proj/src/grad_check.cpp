#include "cryptopulse/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace cpulse {

double grad_check(const std::function<double()>& loss_fn,
                  std::vector<Parameter*> params, double h) {
  for (Parameter* p : params) p->zero_grad();
  loss_fn();
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  double max_rel = 0.0;
  for (size_t k = 0; k < params.size(); ++k) {
    Parameter* p = params[k];
    for (Eigen::Index i = 0; i < p->value.rows(); ++i)
      for (Eigen::Index j = 0; j < p->value.cols(); ++j) {
        const double orig = p->value(i, j);
        p->value(i, j) = orig + h;
        const double f_plus = loss_fn();
        p->value(i, j) = orig - h;
        const double f_minus = loss_fn();
        p->value(i, j) = orig;
        const double fd = (f_plus - f_minus) / (2.0 * h);
        const double a = analytic[k](i, j);
        const double rel =
            std::abs(a - fd) / std::max(1e-8, std::abs(a) + std::abs(fd));
        max_rel = std::max(max_rel, rel);
      }
  }
  for (Parameter* p : params) p->zero_grad();
  return max_rel;
}

}  // namespace cpulse
