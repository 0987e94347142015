#pragma once

#include <functional>
#include <vector>

#include "cryptopulse/optimizer.hpp"

namespace cpulse {

// Central finite differences against recorded gradients. `loss_fn` must run a
// deterministic forward+backward pass (dropout disabled), accumulate into the
// parameters' gradient slots, and return the loss. Returns the max over all
// coordinates of |analytic - fd| / max(1e-8, |analytic| + |fd|).
double grad_check(const std::function<double()>& loss_fn,
                  std::vector<Parameter*> params, double h = 1e-5);

}  // namespace cpulse
