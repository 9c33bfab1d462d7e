#include "reactopt/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace reactopt {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "mode",        "scenario",   "output_dir", "seed",     "snapshot_interval",
    "nx",          "ny",         "nr",         "ntheta",   "r_in",
    "r_out",       "n",          "r_source",   "r_sink",   "k11",
    "k12",         "k21",        "k22",        "k_s",      "k12_factor",
    "k21_factor",  "u1_star",    "u2_star",    "alpha",    "beta",
    "d_chi",       "d_u",        "dt",         "v",        "tol",
    "max_steps",   "perturbation", "coupled",  "adapt_dt", "chi",
    "grid_points", "xi_max",     "n_1d",       "sweep",
};

const std::set<std::string> kSweepKeys = {"k11", "k22", "k_s",   "alpha",
                                          "beta", "d_chi", "d_u", "v"};

double get_positive(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const double v = j.at(key).get<double>();
  if (!(v > 0.0)) {
    throw std::invalid_argument("config key '" + key + "' must be positive");
  }
  return v;
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "solve") return Mode::Solve;
  if (s == "optimize") return Mode::Optimize;
  if (s == "relaxed-map") return Mode::RelaxedMap;
  if (s == "validate1d") return Mode::Validate1d;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

Scenario parse_scenario(const std::string& s) {
  if (s == "square") return Scenario::Square;
  if (s == "annulus") return Scenario::Annulus;
  if (s == "periodic") return Scenario::Periodic;
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Solve:
      return "solve";
    case Mode::Optimize:
      return "optimize";
    case Mode::RelaxedMap:
      return "relaxed-map";
    case Mode::Validate1d:
      return "validate1d";
  }
  return "?";
}

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Square:
      return "square";
    case Scenario::Annulus:
      return "annulus";
    case Scenario::Periodic:
      return "periodic";
  }
  return "?";
}

RunConfig load_run_config_text(const std::string& json_text) {
  const json j = json::parse(json_text);
  if (!j.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (kKnownKeys.count(key) == 0) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }

  RunConfig c;
  if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("scenario")) {
    c.scenario = parse_scenario(j.at("scenario").get<std::string>());
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("seed")) c.seed = j.at("seed").get<unsigned>();
  if (j.contains("snapshot_interval")) {
    c.snapshot_interval = j.at("snapshot_interval").get<int>();
  }

  if (j.contains("nx")) c.nx = j.at("nx").get<int>();
  if (j.contains("ny")) c.ny = j.at("ny").get<int>();
  if (j.contains("nr")) c.nr = j.at("nr").get<int>();
  if (j.contains("ntheta")) c.ntheta = j.at("ntheta").get<int>();
  c.r_in = get_positive(j, "r_in", c.r_in);
  c.r_out = get_positive(j, "r_out", c.r_out);
  if (j.contains("n")) c.n = j.at("n").get<int>();
  c.r_source = get_positive(j, "r_source", c.r_source);
  c.r_sink = get_positive(j, "r_sink", c.r_sink);

  c.params.k11 = get_positive(j, "k11", c.params.k11);
  c.params.k22 = get_positive(j, "k22", c.params.k22);
  c.params.k_s = get_positive(j, "k_s", c.params.k_s);
  if (j.contains("k12_factor")) {
    if (j.contains("k12")) {
      throw std::invalid_argument("give either k12 or k12_factor, not both");
    }
    c.k12_factor = get_positive(j, "k12_factor", 0.0);
  } else {
    c.params.k12 = get_positive(j, "k12", c.params.k12);
  }
  if (j.contains("k21_factor")) {
    if (j.contains("k21")) {
      throw std::invalid_argument("give either k21 or k21_factor, not both");
    }
    c.k21_factor = get_positive(j, "k21_factor", 0.0);
  } else {
    c.params.k21 = get_positive(j, "k21", c.params.k21);
  }
  if (j.contains("u1_star")) c.params.u1_star = j.at("u1_star").get<double>();
  if (j.contains("u2_star")) c.params.u2_star = j.at("u2_star").get<double>();

  c.pf.alpha = get_positive(j, "alpha", c.pf.alpha);
  c.pf.beta = get_positive(j, "beta", c.pf.beta);
  c.pf.d_chi = get_positive(j, "d_chi", c.pf.d_chi);
  c.pf.d_u = get_positive(j, "d_u", c.pf.d_u);
  c.pf.dt = get_positive(j, "dt", c.pf.dt);
  c.pf.v = get_positive(j, "v", c.pf.v);
  if (!(c.pf.v < 1.0)) {
    throw std::invalid_argument("config key 'v' must lie in (0,1)");
  }
  c.pf.tol = get_positive(j, "tol", c.pf.tol);
  if (j.contains("max_steps")) c.pf.max_steps = j.at("max_steps").get<int>();
  if (j.contains("perturbation")) {
    c.perturbation = j.at("perturbation").get<double>();
    if (c.perturbation < 0.0) {
      throw std::invalid_argument("config key 'perturbation' must be >= 0");
    }
  }
  if (j.contains("coupled")) c.coupled = j.at("coupled").get<bool>();
  if (j.contains("adapt_dt")) c.adapt_dt = j.at("adapt_dt").get<bool>();

  if (j.contains("chi")) {
    const json& cj = j.at("chi");
    if (cj.is_number()) {
      c.chi.kind = ChiSource::Kind::Constant;
      c.chi.constant = cj.get<double>();
      if (c.chi.constant < 0.0 || c.chi.constant > 1.0) {
        throw std::invalid_argument("constant chi must lie in [0,1]");
      }
    } else if (cj.is_object() && cj.contains("csv") && cj.size() == 1) {
      c.chi.kind = ChiSource::Kind::Csv;
      c.chi.path = cj.at("csv").get<std::string>();
    } else if (cj.is_object() && cj.contains("vtk") && cj.size() == 1) {
      c.chi.kind = ChiSource::Kind::Vtk;
      c.chi.path = cj.at("vtk").get<std::string>();
    } else {
      throw std::invalid_argument(
          "chi must be a number, {\"csv\": path} or {\"vtk\": path}");
    }
  }

  if (j.contains("grid_points")) c.grid_points = j.at("grid_points").get<int>();
  if (c.grid_points < 2) {
    throw std::invalid_argument("grid_points must be >= 2");
  }
  c.xi_max = get_positive(j, "xi_max", c.xi_max);
  if (j.contains("n_1d")) c.n_1d = j.at("n_1d").get<int>();

  if (j.contains("sweep")) {
    const json& sj = j.at("sweep");
    if (!sj.is_object()) {
      throw std::invalid_argument("sweep must map parameter names to arrays");
    }
    for (const auto& [key, values] : sj.items()) {
      if (kSweepKeys.count(key) == 0) {
        throw std::invalid_argument("unknown sweep key '" + key + "'");
      }
      std::vector<double> vals = values.get<std::vector<double>>();
      if (vals.empty()) {
        throw std::invalid_argument("sweep key '" + key + "' has no values");
      }
      c.sweep[key] = std::move(vals);
    }
  }
  return c;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return load_run_config_text(text);
}

Mesh build_scenario_mesh(const RunConfig& config) {
  switch (config.scenario) {
    case Scenario::Square:
      return build_rectangle(config.nx, config.ny);
    case Scenario::Annulus:
      return build_annulus(config.nr, config.ntheta, config.r_in, config.r_out);
    case Scenario::Periodic:
      return build_periodic_cell(config.n, config.r_source, config.r_sink);
  }
  throw std::logic_error("unreachable");
}

ModelParams resolve_params(const RunConfig& config) {
  ModelParams p = config.params;
  if (config.k12_factor) p.k12 = *config.k12_factor * p.k11;
  if (config.k21_factor) p.k21 = *config.k21_factor * p.k22;
  return p;
}

}  // namespace reactopt
