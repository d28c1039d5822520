#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nhfermion/core_model.hpp"
#include "nhfermion/errors.hpp"
#include "nhfermion/figure.hpp"
#include "nhfermion/operator_algebra.hpp"
#include "nhfermion/thermo.hpp"
#include "nhfermion/verification.hpp"

namespace {

int report(const nhf::CriterionResult& r) {
  std::cout << nhf::format_result(r) << '\n';
  return r.passed ? 0 : 1;
}

int run_spectrum(double gamma, int truncation, int count, const std::string& method) {
  const nhf::ModelParams p = nhf::make_params(gamma);
  const auto m = method == "dense" ? nhf::SpectrumMethod::Dense : nhf::SpectrumMethod::Refined;
  const std::vector<double> ev = nhf::dense_spectrum(p, truncation, count, m);
  std::cout << "n,eigenvalue,analytic,relative_error\n";
  for (int n = 1; n <= count; ++n) {
    const double exact = nhf::mode_energy(p, n);
    const double v = ev[static_cast<std::size_t>(n - 1)];
    std::cout << n << ',' << nhf::format_double(v) << ',' << nhf::format_double(exact) << ','
              << nhf::format_double(std::abs(v - exact) / exact) << '\n';
  }
  return 0;
}

int run_thermo(double gamma, double beta, double mu, const std::string& method, double tail_tol) {
  const nhf::ModelParams p = nhf::make_params(gamma);
  const nhf::MethodSelection sel = nhf::parse_method_selection(method);
  std::vector<nhf::ThermoPoint> points;
  if (sel != nhf::MethodSelection::EulerMaclaurin) {
    points.push_back(nhf::exact_expectations(p, beta, mu, tail_tol));
  }
  if (sel != nhf::MethodSelection::Exact) points.push_back(nhf::em_expectations(p, beta, mu));
  std::cout << nhf::kCsvHeader << '\n';
  for (const nhf::ThermoPoint& t : points) {
    std::cout << nhf::to_string(t.method) << ',' << nhf::format_double(gamma) << ','
              << nhf::format_double(t.beta) << ',' << nhf::format_double(t.mu) << ','
              << nhf::format_double(t.zeta_prime) << ',' << nhf::format_double(t.log_z) << ','
              << nhf::format_double(t.energy) << ',' << nhf::format_double(t.number) << ','
              << nhf::format_double(t.entropy) << '\n';
  }
  return 0;
}

int run_figure(const std::string& config_path, const std::string& out_path,
               const std::string& format) {
  const nhf::FigureConfig config =
      config_path.empty() ? nhf::default_figure_config() : nhf::load_figure_config(config_path);
  const nhf::FigureData data = nhf::generate_figure(config);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw nhf::DomainError("figure: cannot open '" + out_path + "' for writing");
  if (format == "csv") {
    nhf::write_csv(out, data);
  } else {
    nhf::write_json(out, data);
  }
  out.close();
  if (!out) throw nhf::NumericalError("figure: writing '" + out_path + "' failed");
  std::cerr << "figure: " << data.curves.size() << " curves, boundary up to N = "
            << data.boundary.vertices.back().number << ", containment "
            << (data.containment.passed ? "ok" : "VIOLATED") << " (min margin "
            << data.containment.min_margin << ")\n";
  return data.containment.passed ? 0 : 1;
}

int run_selfcheck() {
  bool ok = true;
  for (const nhf::CriterionResult& r : nhf::run_acceptance()) {
    std::cout << nhf::format_result(r) << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-fermion model: spectra, metric, Fock algebra and thermodynamics"};
  app.require_subcommand(1);
  int status = 0;

  double gamma = 0.6;
  int truncation = 60;
  int count = 8;
  std::string spectrum_method = "refined";
  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of the truncated Hamiltonian");
  spectrum->add_option("--gamma", gamma, "non-Hermitian coupling")->capture_default_str();
  spectrum->add_option("--truncation", truncation, "matrix size")->capture_default_str()
      ->check(CLI::Range(2, 4000));
  spectrum->add_option("--count", count, "number of levels")->capture_default_str()
      ->check(CLI::PositiveNumber);
  spectrum->add_option("--method", spectrum_method, "refined or dense")->capture_default_str()
      ->check(CLI::IsMember({"refined", "dense"}));
  spectrum->callback([&] { status = run_spectrum(gamma, truncation, count, spectrum_method); });

  double tol = 1e-8;
  auto* metric = app.add_subcommand("metric-check", "metric identities on the interior block");
  metric->add_option("--gamma", gamma)->capture_default_str();
  metric->add_option("--truncation", truncation)->capture_default_str()->check(CLI::Range(2, 400));
  metric->add_option("--tol", tol)->capture_default_str()->check(CLI::PositiveNumber);
  metric->callback([&] { status = report(nhf::check_metric(gamma, truncation, tol)); });

  int modes = 6;
  double fock_tol = 1e-10;
  auto* fock = app.add_subcommand("fock-check", "anticommutators and diagonal form in Fock space");
  fock->add_option("--gamma", gamma)->capture_default_str();
  fock->add_option("--modes", modes)->capture_default_str()->check(CLI::Range(1, 14));
  fock->add_option("--tol", fock_tol)->capture_default_str()->check(CLI::PositiveNumber);
  fock->callback([&] { status = report(nhf::check_fock(gamma, modes, fock_tol)); });

  double beta = 0.01;
  double mu = 0.0;
  std::string thermo_method = "both";
  double tail_tol = nhf::kDefaultTailTol;
  auto* thermo = app.add_subcommand("thermo", "grand-canonical averages at one (beta, mu)");
  thermo->add_option("--gamma", gamma)->capture_default_str();
  thermo->add_option("--beta", beta)->capture_default_str()->check(CLI::PositiveNumber);
  thermo->add_option("--mu", mu)->capture_default_str();
  thermo->add_option("--method", thermo_method, "exact, em or both")->capture_default_str()
      ->check(CLI::IsMember({"exact", "em", "euler_maclaurin", "both"}));
  thermo->add_option("--tail-tol", tail_tol, "bound on the truncated tail of the exact sums")
      ->capture_default_str()->check(CLI::PositiveNumber);
  thermo->callback([&] { status = run_thermo(gamma, beta, mu, thermo_method, tail_tol); });

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  auto* figure = app.add_subcommand("figure", "curves, boundary and containment report");
  figure->add_option("--config", config_path, "JSON config (built-in defaults if omitted)")
      ->check(CLI::ExistingFile);
  figure->add_option("--out", out_path, "output file")->required();
  figure->add_option("--format", format)->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  figure->callback([&] { status = run_figure(config_path, out_path, format); });

  auto* selfcheck = app.add_subcommand("selfcheck", "run every acceptance criterion");
  selfcheck->callback([&] { status = run_selfcheck(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return status;
}
