#include "nhfermion/thermo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nhfermion/errors.hpp"

namespace nhf {

namespace {

constexpr double kPi2Over6 = std::numbers::pi * std::numbers::pi / 6.0;
constexpr long long kMaxModes = 200'000'000;

void require_beta(double beta, const char* who) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError(std::string(who) + ": beta must be positive and finite");
  }
}

void require_finite(double v, const char* who, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(who) + ": " + what + " must be finite");
  }
}

/// log(1 + e^{-x}) without overflow or cancellation.
double log1p_exp_neg(double x) {
  return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

/// 1 / (e^x + 1)
double fermi(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

/// Neumaier compensated sum.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double dilog_series(double x) {
  double term = x;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double contrib = term / (static_cast<double>(k) * k);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    term *= x;
  }
  return sum;
}

/// Li2(-e^{-z}), stable for z of either sign.
double dilog_neg_exp(double z) {
  if (z >= 0.0) return dilog(-std::exp(-z));
  // inversion with log(e^{-z}) = -z kept exact
  return -kPi2Over6 - 0.5 * z * z - dilog(-std::exp(z));
}

struct ModeSums {
  double log_z = 0.0;
  double number = 0.0;
  double energy = 0.0;
  double mode_entropy = 0.0;
  long long modes = 0;
};

ModeSums sum_modes(const ModelParams& params, double beta, double zeta, double tail_tol) {
  if (!(tail_tol > 0.0)) {
    throw DomainError("exact sums: tail tolerance must be positive");
  }
  const double spacing = beta * params.lambda_scale;
  // q = e^{-beta L}; the tail after mode K is bounded by geometric series in q
  const double one_minus_q = -std::expm1(-spacing);
  const double q = 1.0 - one_minus_q;
  KahanSum lz, n, e, s;
  ModeSums out;
  for (long long k = 1;; ++k) {
    if (k > kMaxModes) {
      throw NumericalError("exact sums: tail did not converge within " + std::to_string(kMaxModes) +
                           " modes (beta too small)");
    }
    const double lambda = params.lambda_scale * (4.0 * static_cast<double>(k) - 3.0) / 4.0;
    const double x = beta * lambda + zeta;
    const double l = log1p_exp_neg(x);
    const double f = fermi(x);
    lz.add(l);
    n.add(f);
    e.add(lambda * f);
    // -f log f - (1 - f) log(1 - f) = x f + log(1 + e^{-x})
    s.add(x * f + l);
    out.modes = k;
    if (x > 0.0) {
      const double head = std::exp(-x);
      const double tail_n = head * q / one_minus_q;
      const double tail_e =
          head * (lambda * q / one_minus_q + params.lambda_scale * q / (one_minus_q * one_minus_q));
      const double tail_s = (x + 1.0) * tail_n + beta * tail_e;
      if (tail_n < tail_tol && tail_e < tail_tol && tail_s < tail_tol) break;
    }
  }
  out.log_z = lz.value();
  out.number = n.value();
  out.energy = e.value();
  out.mode_entropy = s.value();
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Exact: return "exact";
    case Method::EulerMaclaurin: return "euler_maclaurin";
  }
  return "exact";
}

double dilog(double x) {
  if (std::isnan(x) || x > 1.0) {
    throw DomainError("dilog: argument must be <= 1 (real branch), got " + std::to_string(x));
  }
  if (x == 1.0) return kPi2Over6;
  if (std::abs(x) <= 0.5) return dilog_series(x);
  if (x > 0.5) {
    return kPi2Over6 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
  }
  if (x >= -1.0) {
    // Landen: x / (x - 1) lies in [1/3, 1/2]
    const double l = std::log1p(-x);
    return -dilog_series(x / (x - 1.0)) - 0.5 * l * l;
  }
  const double l = std::log(-x);
  return -kPi2Over6 - 0.5 * l * l - dilog(1.0 / x);
}

double exact_log_z(const ModelParams& params, double beta, double zeta, double tail_tol) {
  require_beta(beta, "exact_log_z");
  require_finite(zeta, "exact_log_z", "zeta");
  return sum_modes(params, beta, zeta, tail_tol).log_z;
}

ThermoPoint exact_expectations(const ModelParams& params, double beta, double mu, double tail_tol) {
  require_beta(beta, "exact_expectations");
  require_finite(mu, "exact_expectations", "mu");
  ThermoPoint p;
  p.beta = beta;
  p.mu = mu;
  p.zeta = -beta * mu;
  p.zeta_prime = p.zeta - 0.75 * params.lambda_scale * beta;
  const ModeSums s = sum_modes(params, beta, p.zeta, tail_tol);
  p.log_z = s.log_z;
  p.number = s.number;
  p.energy = s.energy;
  p.entropy = beta * (p.energy - mu * p.number) + p.log_z;
  p.method = Method::Exact;
  p.modes = s.modes;
  return p;
}

double exact_mode_entropy(const ModelParams& params, double beta, double mu, double tail_tol) {
  require_beta(beta, "exact_mode_entropy");
  require_finite(mu, "exact_mode_entropy", "mu");
  return sum_modes(params, beta, -beta * mu, tail_tol).mode_entropy;
}

double em_log_z(const ModelParams& params, double beta, double zeta) {
  require_beta(beta, "em_log_z");
  require_finite(zeta, "em_log_z", "zeta");
  const double a = beta * params.lambda_scale;
  const double zp = zeta - 0.75 * a;
  const double p = fermi(zp);
  return -dilog_neg_exp(zp) / a - 0.5 * log1p_exp_neg(zp) + a * p / 12.0;
}

ThermoPoint em_expectations(const ModelParams& params, double beta, double mu) {
  require_beta(beta, "em_expectations");
  require_finite(mu, "em_expectations", "mu");
  const double lam = params.lambda_scale;
  const double a = beta * lam;
  ThermoPoint t;
  t.beta = beta;
  t.mu = mu;
  t.zeta = -beta * mu;
  t.zeta_prime = t.zeta - 0.75 * a;
  const double zp = t.zeta_prime;
  const double p = fermi(zp);
  const double softplus = log1p_exp_neg(zp);
  const double li = dilog_neg_exp(zp);

  t.log_z = -li / a - 0.5 * softplus + a * p / 12.0;
  // dp/dzeta' = -p (1 - p); d Li2(-e^{-zeta'}) / dzeta' = log(1 + e^{-zeta'})
  t.number = softplus / a - 0.5 * p + a * p * (1.0 - p) / 12.0;
  // dzeta'/dbeta = -(3/4) L at fixed zeta
  t.energy = -lam * li / (a * a) - lam * p / 12.0 - 0.75 * lam * t.number;
  t.entropy = beta * (t.energy - mu * t.number) + t.log_z;
  t.method = Method::EulerMaclaurin;
  t.modes = 0;
  return t;
}

ThermoPoint thermo_point(const ModelParams& params, double beta, double mu, Method method,
                         double tail_tol) {
  return method == Method::Exact ? exact_expectations(params, beta, mu, tail_tol)
                                 : em_expectations(params, beta, mu);
}

}  // namespace nhf
