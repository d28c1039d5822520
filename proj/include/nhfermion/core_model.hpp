#pragma once

namespace nhf {

/// Coupling constant together with the derived constants that every formula
/// of the model uses. Build it with make_params(); the fields are consistent
/// only when produced there.
struct ModelParams {
  double gamma = 0.0;
  /// sqrt(1 + 2 gamma^2); spacing of the single-particle ladder.
  double lambda_scale = 1.0;
  /// Rotation angle with cos(sqrt(2) alpha) = 1 / lambda_scale.
  double alpha = 0.0;
  /// Ratio of consecutive ground-vector components, |eta| < 1.
  double eta = 0.0;
};

/// Throws DomainError for non-finite gamma.
ModelParams make_params(double gamma);

/// Single-particle level lambda_k = lambda_scale * (4k - 3) / 4, k >= 1.
double mode_energy(const ModelParams& params, int k);

/// Total energy of the N lowest levels filled: lambda_scale * N (2N - 1) / 4.
double filled_energy(const ModelParams& params, int count);

}  // namespace nhf
