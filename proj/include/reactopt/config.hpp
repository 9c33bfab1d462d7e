#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reactopt/mesh.hpp"
#include "reactopt/optimizer.hpp"
#include "reactopt/types.hpp"

namespace reactopt {

enum class Mode { Solve, Optimize, RelaxedMap, Validate1d };
enum class Scenario { Square, Annulus, Periodic };

Mode parse_mode(const std::string& s);
Scenario parse_scenario(const std::string& s);
const char* to_string(Mode m);
const char* to_string(Scenario s);

/// Where the design comes from in solve mode: a constant, an image-like
/// CSV grid resampled onto the mesh, or a chi field from a prior VTK.
struct ChiSource {
  enum class Kind { Constant, Csv, Vtk };
  Kind kind = Kind::Constant;
  double constant = 0.5;
  std::string path;
};

/// One JSON document drives every mode; the physical keys carry the
/// same names as the model symbols (k11, k12, k21, k22, k_s, alpha,
/// beta, d_chi, d_u, v). Unknown keys are rejected.
struct RunConfig {
  Mode mode = Mode::Solve;
  Scenario scenario = Scenario::Square;
  std::string output_dir = "out";
  unsigned seed = 0;
  int snapshot_interval = 0;

  int nx = 64, ny = 64;                       // square
  int nr = 32, ntheta = 128;                  // annulus
  double r_in = 0.2, r_out = 1.0;
  int n = 64;                                 // periodic cell
  double r_source = 0.15, r_sink = 0.15;

  ModelParams params;
  // k12 = k12_factor * k11 (and likewise k21 from k22) when given;
  // mutually exclusive with the absolute keys.
  std::optional<double> k12_factor;
  std::optional<double> k21_factor;

  PhaseFieldParams pf;
  double perturbation = 1e-3;
  bool coupled = false;
  bool adapt_dt = true;

  ChiSource chi;

  int grid_points = 201;  // relaxed-map
  double xi_max = 2.0;

  int n_1d = 1024;  // validate1d

  // Cross-product parameter sweep for optimize mode; keys iterate in
  // sorted order.
  std::map<std::string, std::vector<double>> sweep;
};

RunConfig load_run_config_text(const std::string& json_text);
RunConfig load_run_config_file(const std::string& path);

Mesh build_scenario_mesh(const RunConfig& config);

/// Applies the factor-linked off-diagonal conductivities.
ModelParams resolve_params(const RunConfig& config);

}  // namespace reactopt
