#pragma once

#include <string_view>

#include "nhfermion/core_model.hpp"

namespace nhf {

enum class Method { Exact, EulerMaclaurin };

std::string_view to_string(Method method);

/// Grand-canonical state of the free pseudo-fermion gas with levels
/// lambda_k = lambda_scale (4k - 3) / 4 at inverse temperature beta and
/// chemical potential mu.
struct ThermoPoint {
  double beta = 0.0;
  double mu = 0.0;
  /// -beta mu
  double zeta = 0.0;
  /// zeta - (3/4) lambda_scale beta
  double zeta_prime = 0.0;
  double log_z = 0.0;
  double energy = 0.0;
  double number = 0.0;
  double entropy = 0.0;
  Method method = Method::Exact;
  /// Modes summed explicitly (exact method only).
  long long modes = 0;
};

/// Default absolute tail bound for the exact sums.
inline constexpr double kDefaultTailTol = 1e-13;

/// Real dilogarithm Li2(x) for x <= 1. Throws DomainError for x > 1 or NaN.
double dilog(double x);

/// log Z = sum_k log(1 + exp(-beta lambda_k - zeta)), summed until the
/// geometric tail bound drops below tail_tol. Throws DomainError unless
/// beta > 0 and tail_tol > 0.
double exact_log_z(const ModelParams& params, double beta, double zeta,
                   double tail_tol = kDefaultTailTol);

/// N, E and S from the Fermi factors f_k = 1 / (exp(beta lambda_k + zeta) + 1)
/// with the same cutoff; S = beta (E - mu N) + log Z.
ThermoPoint exact_expectations(const ModelParams& params, double beta, double mu,
                               double tail_tol = kDefaultTailTol);

/// Entropy as -sum_k [f log f + (1 - f) log(1 - f)], an independent form of
/// the entropy of exact_expectations.
double exact_mode_entropy(const ModelParams& params, double beta, double mu,
                          double tail_tol = kDefaultTailTol);

/// Three-term Euler-Maclaurin approximation of log Z:
///   -Li2(-e^{-zeta'}) / (beta L) - log(1 + e^{-zeta'}) / 2
///   + beta L e^{-zeta'} / (12 (1 + e^{-zeta'}))
/// with L = lambda_scale. Valid at high temperature only. Throws DomainError
/// unless beta > 0.
double em_log_z(const ModelParams& params, double beta, double zeta);

/// E = -d em_log_z / d beta and N = -d em_log_z / d zeta in closed form,
/// S from the same identity as the exact method.
ThermoPoint em_expectations(const ModelParams& params, double beta, double mu);

ThermoPoint thermo_point(const ModelParams& params, double beta, double mu, Method method,
                         double tail_tol = kDefaultTailTol);

}  // namespace nhf
