#include "nhfermion/figure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "nhfermion/errors.hpp"

namespace nhf {

using Json = nlohmann::ordered_json;

std::string_view to_string(CurveMode mode) {
  return mode == CurveMode::FixedBeta ? "fixed_beta" : "fixed_mu";
}

std::string_view to_string(MethodSelection methods) {
  switch (methods) {
    case MethodSelection::Exact: return "exact";
    case MethodSelection::EulerMaclaurin: return "euler_maclaurin";
    case MethodSelection::Both: return "both";
  }
  return "both";
}

MethodSelection parse_method_selection(std::string_view text) {
  if (text == "exact") return MethodSelection::Exact;
  if (text == "euler_maclaurin" || text == "em") return MethodSelection::EulerMaclaurin;
  if (text == "both") return MethodSelection::Both;
  throw DomainError("unknown method '" + std::string(text) +
                    "' (expected exact, euler_maclaurin, em or both)");
}

void validate(const CurveSpec& spec) {
  if (!std::isfinite(spec.gamma)) throw DomainError("curve: gamma must be finite");
  if (!std::isfinite(spec.fixed_value)) throw DomainError("curve: fixed value must be finite");
  if (spec.sweep.empty()) throw DomainError("curve: sweep is empty");
  const bool up = spec.sweep.size() < 2 || spec.sweep[1] > spec.sweep[0];
  for (std::size_t i = 0; i < spec.sweep.size(); ++i) {
    if (!std::isfinite(spec.sweep[i])) throw DomainError("curve: sweep values must be finite");
    if (i > 0 && (up ? !(spec.sweep[i] > spec.sweep[i - 1]) : !(spec.sweep[i] < spec.sweep[i - 1]))) {
      throw DomainError("curve: sweep must be strictly monotone");
    }
  }
  if (spec.mode == CurveMode::FixedBeta && !(spec.fixed_value > 0.0)) {
    throw DomainError("curve: fixed beta must be positive");
  }
  if (spec.mode == CurveMode::FixedMu &&
      !(std::min(spec.sweep.front(), spec.sweep.back()) > 0.0)) {
    throw DomainError("curve: swept beta values must be positive");
  }
}

std::vector<ThermoPoint> generate_curve(const CurveSpec& spec, double tail_tol) {
  validate(spec);
  const ModelParams params = make_params(spec.gamma);
  std::vector<Method> methods;
  if (spec.methods != MethodSelection::EulerMaclaurin) methods.push_back(Method::Exact);
  if (spec.methods != MethodSelection::Exact) methods.push_back(Method::EulerMaclaurin);

  std::vector<ThermoPoint> out;
  out.reserve(spec.sweep.size() * methods.size());
  for (double s : spec.sweep) {
    const double beta = spec.mode == CurveMode::FixedBeta ? spec.fixed_value : s;
    const double mu = spec.mode == CurveMode::FixedBeta ? s : spec.fixed_value;
    for (Method m : methods) {
      try {
        out.push_back(thermo_point(params, beta, mu, m, tail_tol));
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "curve point beta=" << format_double(beta) << ", mu=" << format_double(mu) << " ("
            << to_string(m) << "): " << e.what();
        throw NumericalError(msg.str());
      }
    }
  }
  return out;
}

BoundaryPolyline hull_boundary(const ModelParams& params, int n_max) {
  if (n_max < 0) throw DomainError("hull_boundary: n_max must be >= 0");
  BoundaryPolyline b;
  b.vertices.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) b.vertices.push_back({n, filled_energy(params, n)});
  return b;
}

double boundary_energy(const BoundaryPolyline& boundary, double number) {
  if (boundary.vertices.empty()) throw DomainError("boundary_energy: empty boundary");
  const double top = boundary.vertices.back().number;
  if (!(number >= 0.0) || number > top) {
    throw DomainError("boundary_energy: N = " + format_double(number) +
                      " outside the boundary range [0, " + format_double(top) + "]");
  }
  const std::size_t n = std::min(static_cast<std::size_t>(number), boundary.vertices.size() - 1);
  if (n + 1 >= boundary.vertices.size()) return boundary.vertices[n].energy;
  const double t = number - static_cast<double>(n);
  return (1.0 - t) * boundary.vertices[n].energy + t * boundary.vertices[n + 1].energy;
}

ContainmentReport containment_check(const std::vector<ThermoPoint>& points,
                                    const BoundaryPolyline& boundary, double tol) {
  ContainmentReport r;
  r.tolerance = tol;
  r.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ThermoPoint& p = points[i];
    if (p.method != Method::Exact) continue;
    const double margin = p.energy - boundary_energy(boundary, p.number);
    r.margins.push_back({i, margin});
    r.min_margin = std::min(r.min_margin, margin);
    if (!(margin >= -tol)) r.violations.push_back({i, margin});
  }
  if (r.margins.empty()) r.min_margin = 0.0;
  r.passed = r.violations.empty();
  return r;
}

std::vector<double> linear_sweep(const SweepRange& range) {
  if (range.count < 1 || !std::isfinite(range.min) || !std::isfinite(range.max)) {
    throw DomainError("sweep: need count >= 1 and finite bounds");
  }
  if (range.count == 1) return {range.min};
  if (!(range.max > range.min)) throw DomainError("sweep: max must exceed min");
  std::vector<double> v(static_cast<std::size_t>(range.count));
  for (int i = 0; i < range.count; ++i) {
    const double t = static_cast<double>(i) / (range.count - 1);
    v[static_cast<std::size_t>(i)] = (1.0 - t) * range.min + t * range.max;
  }
  v.back() = range.max;
  return v;
}

std::vector<double> geometric_sweep(const SweepRange& range) {
  if (!(range.min > 0.0)) throw DomainError("geometric sweep: bounds must be positive");
  SweepRange logs{std::log(range.min), std::log(range.max), range.count};
  std::vector<double> v = linear_sweep(logs);
  for (double& x : v) x = std::exp(x);
  v.front() = range.min;
  if (range.count > 1) v.back() = range.max;
  return v;
}

FigureConfig default_figure_config() {
  FigureConfig c;
  c.gamma = 0.6;
  c.beta_list = {0.001, 0.01, 0.02, 0.03, 0.04, 0.08, 0.2};
  c.mu_list = {-14.75, -9.75, -4.75, 0.25, 5.25, 10.25, 15.25};
  c.mu_sweep = {-15.0, 15.0, 201};
  c.mu_in_lambda_units = true;
  c.beta_sweep = {0.001, 0.2, 201};
  c.probe_beta = 0.001;
  c.probe_mu = {-6000.0, -4500.0, 151};
  c.n_max = 64;
  c.methods = MethodSelection::Both;
  c.joint_modes = 8;
  c.tail_tol = kDefaultTailTol;
  return c;
}

namespace {

double get_number(const Json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw DomainError(std::string(where) + ": missing key '" + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) throw DomainError(std::string(where) + ": '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw DomainError(std::string(where) + ": '" + key + "' must be finite");
  return d;
}

int get_int(const Json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw DomainError(std::string(where) + ": missing key '" + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_integer()) {
    throw DomainError(std::string(where) + ": '" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::vector<double> get_list(const Json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("config: missing key '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_array() || v.empty()) {
    throw DomainError(std::string("config: '") + key + "' must be a non-empty array");
  }
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) throw DomainError(std::string("config: '") + key + "' holds a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw DomainError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw DomainError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

SweepRange get_range(const Json& j, const char* where) {
  require_keys(j, {"min", "max", "count"}, where);
  return {get_number(j, "min", where), get_number(j, "max", where), get_int(j, "count", where)};
}

Json range_json(const SweepRange& r) { return Json{{"min", r.min}, {"max", r.max}, {"count", r.count}}; }

}  // namespace

FigureConfig parse_figure_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("config: invalid JSON: ") + e.what());
  }
  require_keys(j,
               {"gamma", "beta_list", "mu_list", "mu_sweep", "n_max", "method", "mu_units",
                "beta_sweep", "probe", "joint_modes", "tail_tol"},
               "config");
  FigureConfig c = default_figure_config();
  c.gamma = get_number(j, "gamma", "config");
  c.beta_list = get_list(j, "beta_list");
  c.mu_list = get_list(j, "mu_list");
  if (!j.contains("mu_sweep")) throw DomainError("config: missing key 'mu_sweep'");
  c.mu_sweep = get_range(j.at("mu_sweep"), "config.mu_sweep");
  c.n_max = get_int(j, "n_max", "config");
  if (!j.contains("method") || !j.at("method").is_string()) {
    throw DomainError("config: 'method' must be a string");
  }
  c.methods = parse_method_selection(j.at("method").get<std::string>());

  c.mu_in_lambda_units = false;
  if (j.contains("mu_units")) {
    const Json& u = j.at("mu_units");
    if (u == "lambda") {
      c.mu_in_lambda_units = true;
    } else if (u != "absolute") {
      throw DomainError("config: 'mu_units' must be \"absolute\" or \"lambda\"");
    }
  }
  if (j.contains("beta_sweep")) {
    c.beta_sweep = get_range(j.at("beta_sweep"), "config.beta_sweep");
  } else {
    const auto [lo, hi] = std::minmax_element(c.beta_list.begin(), c.beta_list.end());
    c.beta_sweep = {*lo, *hi, *lo < *hi ? 201 : 1};
  }
  c.probe_mu = {0.0, 0.0, 0};
  c.probe_beta = 0.0;
  if (j.contains("probe")) {
    const Json& p = j.at("probe");
    require_keys(p, {"beta", "mu_min", "mu_max", "count"}, "config.probe");
    c.probe_beta = get_number(p, "beta", "config.probe");
    c.probe_mu = {get_number(p, "mu_min", "config.probe"), get_number(p, "mu_max", "config.probe"),
                  get_int(p, "count", "config.probe")};
  }
  if (j.contains("joint_modes")) c.joint_modes = get_int(j, "joint_modes", "config");
  if (j.contains("tail_tol")) c.tail_tol = get_number(j, "tail_tol", "config");

  if (!std::isfinite(c.gamma)) throw DomainError("config: gamma must be finite");
  for (double b : c.beta_list) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("config: beta_list values must be > 0");
  }
  if (c.mu_sweep.count < 1) throw DomainError("config: mu_sweep.count must be >= 1");
  if (c.beta_sweep.count < 1 || !(c.beta_sweep.min > 0.0)) {
    throw DomainError("config: beta_sweep needs count >= 1 and min > 0");
  }
  if (c.probe_mu.count < 0) throw DomainError("config: probe.count must be >= 0");
  if (c.probe_mu.count > 0 && !(c.probe_beta > 0.0)) {
    throw DomainError("config: probe.beta must be > 0");
  }
  if (c.n_max < 0) throw DomainError("config: n_max must be >= 0");
  if (c.joint_modes < 0 || c.joint_modes > 16) {
    throw DomainError("config: joint_modes must lie in [0, 16]");
  }
  if (!(c.tail_tol > 0.0)) throw DomainError("config: tail_tol must be > 0");
  return c;
}

FigureConfig load_figure_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_figure_config(text.str());
}

std::string figure_config_to_json(const FigureConfig& c) {
  Json j;
  j["gamma"] = c.gamma;
  j["beta_list"] = c.beta_list;
  j["mu_list"] = c.mu_list;
  j["mu_sweep"] = range_json(c.mu_sweep);
  j["n_max"] = c.n_max;
  j["method"] = std::string(to_string(c.methods));
  j["mu_units"] = c.mu_in_lambda_units ? "lambda" : "absolute";
  j["beta_sweep"] = range_json(c.beta_sweep);
  if (c.probe_mu.count > 0) {
    j["probe"] = Json{{"beta", c.probe_beta},
                      {"mu_min", c.probe_mu.min},
                      {"mu_max", c.probe_mu.max},
                      {"count", c.probe_mu.count}};
  }
  j["joint_modes"] = c.joint_modes;
  j["tail_tol"] = c.tail_tol;
  return j.dump(2);
}

FigureData generate_figure(const FigureConfig& config) {
  FigureData data;
  data.config = config;
  data.params = make_params(config.gamma);
  const double unit = config.mu_in_lambda_units ? data.params.lambda_scale : 1.0;

  std::vector<double> mu_dense = linear_sweep(config.mu_sweep);
  for (double& m : mu_dense) m *= unit;
  const std::vector<double> beta_dense = geometric_sweep(config.beta_sweep);

  for (double beta : config.beta_list) {
    CurveSpec spec{config.gamma, CurveMode::FixedBeta, beta, mu_dense, config.methods};
    data.curves.push_back({"fixed_beta", spec, generate_curve(spec, config.tail_tol)});
  }
  for (double mu : config.mu_list) {
    CurveSpec spec{config.gamma, CurveMode::FixedMu, mu * unit, beta_dense, config.methods};
    data.curves.push_back({"fixed_mu", spec, generate_curve(spec, config.tail_tol)});
  }
  if (config.probe_mu.count > 0) {
    CurveSpec spec{config.gamma, CurveMode::FixedBeta, config.probe_beta,
                   linear_sweep(config.probe_mu), config.methods};
    data.curves.push_back({"probe", spec, generate_curve(spec, config.tail_tol)});
  }

  std::vector<ThermoPoint> all;
  double max_number = 0.0;
  for (const Curve& c : data.curves) {
    for (const ThermoPoint& p : c.points) {
      all.push_back(p);
      if (std::isfinite(p.number)) max_number = std::max(max_number, p.number);
    }
  }
  const int needed = static_cast<int>(std::ceil(max_number)) + 1;
  data.boundary = hull_boundary(data.params, std::max(config.n_max, needed));
  data.containment = containment_check(all, data.boundary);
  data.joint_points = joint_spectrum(data.params, config.joint_modes, config.joint_modes);
  return data;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const FigureData& data) {
  out << kCsvHeader << '\n';
  const std::string gamma = format_double(data.config.gamma);
  for (const Curve& c : data.curves) {
    for (const ThermoPoint& p : c.points) {
      out << to_string(p.method) << ',' << gamma << ',' << format_double(p.beta) << ','
          << format_double(p.mu) << ',' << format_double(p.zeta_prime) << ','
          << format_double(p.log_z) << ',' << format_double(p.energy) << ','
          << format_double(p.number) << ',' << format_double(p.entropy) << '\n';
    }
  }
}

void write_json(std::ostream& out, const FigureData& data) {
  Json j;
  j["config"] = Json::parse(figure_config_to_json(data.config));
  j["lambda_scale"] = data.params.lambda_scale;
  Json curves = Json::array();
  for (const Curve& c : data.curves) {
    Json jc;
    jc["kind"] = c.kind;
    jc["mode"] = std::string(to_string(c.spec.mode));
    jc["fixed_value"] = c.spec.fixed_value;
    Json pts = Json::array();
    for (const ThermoPoint& p : c.points) {
      pts.push_back(Json{{"method", std::string(to_string(p.method))},
                         {"beta", p.beta},
                         {"mu", p.mu},
                         {"zeta_prime", p.zeta_prime},
                         {"log_z", p.log_z},
                         {"energy", p.energy},
                         {"number", p.number},
                         {"entropy", p.entropy}});
    }
    jc["points"] = std::move(pts);
    curves.push_back(std::move(jc));
  }
  j["curves"] = std::move(curves);
  Json boundary = Json::array();
  for (const BoundaryVertex& v : data.boundary.vertices) {
    boundary.push_back(Json{{"number", v.number}, {"energy", v.energy}});
  }
  j["boundary"] = std::move(boundary);
  Json violations = Json::array();
  for (const ContainmentEntry& e : data.containment.violations) {
    violations.push_back(Json{{"index", e.index}, {"margin", e.margin}});
  }
  j["containment"] = Json{{"passed", data.containment.passed},
                          {"tolerance", data.containment.tolerance},
                          {"min_margin", data.containment.min_margin},
                          {"checked", data.containment.margins.size()},
                          {"violations", std::move(violations)}};
  Json joint = Json::array();
  for (const JointSpectrumPoint& p : data.joint_points) {
    joint.push_back(Json{{"number", p.number}, {"energy", p.energy}, {"occupation", p.occupation}});
  }
  j["joint_spectrum"] = std::move(joint);
  out << j.dump(2) << '\n';
}

}  // namespace nhf
