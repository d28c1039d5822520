#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhfermion/core_model.hpp"
#include "nhfermion/fock.hpp"
#include "nhfermion/thermo.hpp"

namespace nhf {

enum class CurveMode { FixedBeta, FixedMu };
enum class MethodSelection { Exact, EulerMaclaurin, Both };

std::string_view to_string(CurveMode mode);
std::string_view to_string(MethodSelection methods);
/// Accepts "exact", "euler_maclaurin" (or "em") and "both".
MethodSelection parse_method_selection(std::string_view text);

/// One curve in the (N, E) plane: beta fixed with mu swept, or the reverse.
struct CurveSpec {
  double gamma = 0.6;
  CurveMode mode = CurveMode::FixedBeta;
  double fixed_value = 0.0;
  std::vector<double> sweep;
  MethodSelection methods = MethodSelection::Exact;
};

/// Throws DomainError for an empty or non-monotone sweep, a non-finite fixed
/// value or a non-positive beta.
void validate(const CurveSpec& spec);

/// One record per sweep point and method (exact before Euler-Maclaurin).
/// Errors from the thermodynamics are rethrown annotated with (beta, mu).
std::vector<ThermoPoint> generate_curve(const CurveSpec& spec, double tail_tol = kDefaultTailTol);

struct BoundaryVertex {
  int number = 0;
  double energy = 0.0;
};

/// Lower boundary of the joint (N, E) range: vertices (n, L n (2n - 1) / 4),
/// n = 0..n_max. It is convex since consecutive slopes L (4n - 3) / 4 grow.
struct BoundaryPolyline {
  std::vector<BoundaryVertex> vertices;
};

/// Throws DomainError for n_max < 0.
BoundaryPolyline hull_boundary(const ModelParams& params, int n_max);

/// Piecewise-linear boundary energy at a real particle number. Throws
/// DomainError outside [0, n_max].
double boundary_energy(const BoundaryPolyline& boundary, double number);

struct ContainmentEntry {
  std::size_t index = 0;
  double margin = 0.0;
};

struct ContainmentReport {
  /// Margins E - boundary(N) of the exact points, by index into the input.
  std::vector<ContainmentEntry> margins;
  std::vector<ContainmentEntry> violations;
  double min_margin = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Checks E >= boundary(N) - tol for every exact point; Euler-Maclaurin
/// points are skipped. Throws DomainError if the boundary does not reach the
/// largest N.
ContainmentReport containment_check(const std::vector<ThermoPoint>& points,
                                    const BoundaryPolyline& boundary, double tol = 1e-9);

struct SweepRange {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

std::vector<double> linear_sweep(const SweepRange& range);
std::vector<double> geometric_sweep(const SweepRange& range);

/// Inputs of the figure. mu_list and mu_sweep are multiplied by lambda_scale
/// when mu_in_lambda_units is set.
struct FigureConfig {
  double gamma = 0.6;
  std::vector<double> beta_list;
  std::vector<double> mu_list;
  SweepRange mu_sweep;
  bool mu_in_lambda_units = false;
  /// Geometric beta sweep for the fixed-mu curves.
  SweepRange beta_sweep;
  /// Extra fixed-beta curve close to the boundary; skipped when count == 0.
  double probe_beta = 0.0;
  SweepRange probe_mu;
  /// Requested boundary size; raised automatically to cover every point.
  int n_max = 0;
  MethodSelection methods = MethodSelection::Both;
  /// Modes used for the raw joint-spectrum points in the JSON output.
  int joint_modes = 8;
  double tail_tol = kDefaultTailTol;
};

/// gamma = 3/5, beta in {0.001, 0.01, 0.02, 0.03, 0.04, 0.08, 0.2},
/// mu = L {-14.75, -9.75, -4.75, 0.25, 5.25, 10.25, 15.25}, dense mu sweep
/// of 201 points over [-15 L, 15 L], probe curve beta = 0.001 with
/// mu in [-6000, -4500].
FigureConfig default_figure_config();

/// Parses the JSON config. Required keys: gamma, beta_list, mu_list,
/// mu_sweep {min, max, count}, n_max, method. Optional: mu_units
/// ("absolute" | "lambda"), beta_sweep {min, max, count},
/// probe {beta, mu_min, mu_max, count}, joint_modes, tail_tol.
/// Unknown keys and invalid values throw DomainError.
FigureConfig parse_figure_config(const std::string& json_text);
FigureConfig load_figure_config(const std::string& path);
std::string figure_config_to_json(const FigureConfig& config);

struct Curve {
  std::string kind;  // "fixed_beta", "fixed_mu" or "probe"
  CurveSpec spec;
  std::vector<ThermoPoint> points;
};

struct FigureData {
  FigureConfig config;
  ModelParams params;
  std::vector<Curve> curves;
  BoundaryPolyline boundary;
  ContainmentReport containment;
  std::vector<JointSpectrumPoint> joint_points;
};

FigureData generate_figure(const FigureConfig& config);

inline constexpr const char* kCsvHeader =
    "method,gamma,beta,mu,zeta_prime,log_z,energy,number,entropy";

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& out, const FigureData& data);
void write_json(std::ostream& out, const FigureData& data);

}  // namespace nhf
