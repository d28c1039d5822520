#include "nhfermion/core_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nhfermion/errors.hpp"

namespace nhf {

ModelParams make_params(double gamma) {
  if (!std::isfinite(gamma)) {
    throw DomainError("make_params: gamma must be finite");
  }
  const double root2 = std::numbers::sqrt2;
  ModelParams p;
  p.gamma = gamma;
  p.lambda_scale = std::sqrt(1.0 + 2.0 * gamma * gamma);
  p.alpha = std::atan(root2 * gamma) / root2;
  // (Lambda - 1) / (sqrt2 gamma) rewritten without the removable singularity
  // at gamma = 0.
  p.eta = root2 * gamma / (p.lambda_scale + 1.0);
  return p;
}

double mode_energy(const ModelParams& params, int k) {
  if (k < 1) {
    throw DomainError("mode_energy: level index must be >= 1, got " + std::to_string(k));
  }
  return params.lambda_scale * (4.0 * k - 3.0) / 4.0;
}

double filled_energy(const ModelParams& params, int count) {
  if (count < 0) {
    throw DomainError("filled_energy: negative particle count");
  }
  return params.lambda_scale * count * (2.0 * count - 1.0) / 4.0;
}

}  // namespace nhf
