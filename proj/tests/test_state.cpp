#include "reactopt/state.hpp"

#include <cmath>
#include <map>
#include <random>

#include <doctest.h>

#include "support/oracles.hpp"

using namespace reactopt;

namespace {

DesignField constant_field(const Mesh& m, double value) {
  return DesignField{std::vector<double>(m.dof_count(), value)};
}

ModelParams paper_params() {
  ModelParams p;
  p.k11 = 1.0;
  p.k22 = 1.0;
  p.k12 = 1e-6;
  p.k21 = 1e-6;
  p.k_s = 100.0;
  return p;
}

// Closed-form flux of the uniform-mixture problem on [0,1]: both
// conductivities k, reaction weight q = k_s chi (1-chi), u1(0) = 1,
// u2(1) = 0, natural otherwise. The y-invariant 2D square problem has
// the same solution.
double uniform_mixture_flux(double k, double q) {
  const double m = std::sqrt(2.0 * q / k);
  const double denom = m + 2.0 * (1.0 + std::cosh(m)) / std::sinh(m);
  return 2.0 * k * m / denom;
}

}  // namespace

TEST_CASE("solve_state: pure phases decouple the species") {
  const Mesh mesh = build_rectangle(24, 24);
  const ModelParams params = paper_params();
  for (const double pure : {0.0, 1.0}) {
    const StateField s = solve_state(mesh, constant_field(mesh, pure), params);
    for (double v : s.u1) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    for (double v : s.u2) CHECK(std::abs(v) < 1e-9);
    const EnergyReport rep =
        energy_report(mesh, constant_field(mesh, pure), s, params, 1.0, 2e-5);
    CHECK(std::abs(rep.j1_in) < 1e-10);
    CHECK(std::abs(rep.j2_out) < 1e-10);
    CHECK(std::abs(rep.transport_energy) < 1e-12);
    CHECK(rep.reaction_energy == 0.0);
    CHECK(std::abs(rep.objective) < 1e-10);
  }
}

TEST_CASE("solve_state: Dirichlet values held exactly") {
  const Mesh mesh = build_rectangle(16, 16);
  const ModelParams params = paper_params();
  const StateField s = solve_state(mesh, constant_field(mesh, 0.5), params);
  for (int d : mesh.dirichlet_dofs(BoundaryTag::Source1)) CHECK(s.u1[d] == 1.0);
  for (int d : mesh.dirichlet_dofs(BoundaryTag::Sink2)) CHECK(s.u2[d] == 0.0);
}

TEST_CASE("solve_state: uniform mixture conserves flux and matches 1D") {
  const Mesh mesh = build_rectangle(48, 48);
  const ModelParams params = paper_params();
  const DesignField chi = constant_field(mesh, 0.5);
  const StateField s = solve_state(mesh, chi, params);
  const EnergyReport rep = energy_report(mesh, chi, s, params, 1.0, 2e-5);

  CHECK(std::abs(rep.j1_in - rep.total_reaction) <=
        0.02 * std::abs(rep.total_reaction));
  CHECK(std::abs(rep.j2_out - rep.total_reaction) <=
        0.02 * std::abs(rep.total_reaction));
  CHECK(std::abs(rep.j1_in - rep.j2_out) <= 0.02 * std::abs(rep.total_reaction));

  const double k = 0.5 * (params.k11 + params.k12);
  const double j_exact = uniform_mixture_flux(k, params.k_s * 0.25);
  CHECK(rep.j1_in == doctest::Approx(j_exact).epsilon(1e-2));
}

TEST_CASE("solve_state: unique solution from different starting vectors") {
  const Mesh mesh = build_rectangle(20, 20);
  const ModelParams params = paper_params();
  const DesignField chi = constant_field(mesh, 0.5);

  const StateField a = solve_state(mesh, chi, params);
  StateField start;
  start.u1.assign(mesh.dof_count(), 0.25);
  start.u2.assign(mesh.dof_count(), 0.75);
  StateSolveOptions opts;
  opts.initial = &start;
  const StateField b = solve_state(mesh, chi, params, opts);
  for (int i = 0; i < mesh.dof_count(); ++i) {
    CHECK(std::abs(a.u1[i] - b.u1[i]) < 1e-8);
    CHECK(std::abs(a.u2[i] - b.u2[i]) < 1e-8);
  }
}

TEST_CASE("solve_state: maximum principle at default resolution") {
  const Mesh mesh = build_rectangle(64, 64);
  const ModelParams params = paper_params();
  DesignField chi;
  chi.chi.resize(mesh.dof_count());
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Vec2 p = mesh.nodes[i];
    chi.chi[mesh.dof_of(i)] = std::clamp(
        1.5 - 3.0 * p.x + 0.2 * std::sin(6.28318530717958647 * p.y), 0.0, 1.0);
  }
  const StateField s = solve_state(mesh, chi, params);
  for (int i = 0; i < mesh.dof_count(); ++i) {
    CHECK(s.u1[i] >= -1e-6);
    CHECK(s.u1[i] <= 1.0 + 1e-6);
    CHECK(s.u2[i] >= -1e-6);
    CHECK(s.u2[i] <= 1.0 + 1e-6);
  }
}

TEST_CASE("solve_state: rejects an empty Dirichlet set") {
  Mesh mesh = build_rectangle(4, 4);
  for (auto& be : mesh.boundary_edges) {
    if (be.tag == BoundaryTag::Sink2) be.tag = BoundaryTag::Insulated;
  }
  mesh.finalize();
  CHECK_THROWS_AS(solve_state(mesh, constant_field(mesh, 0.5), paper_params()),
                  std::invalid_argument);
}

TEST_CASE("relax_state: the direct solution is a fixed point") {
  const Mesh mesh = build_rectangle(16, 16);
  const ModelParams params = paper_params();
  const DesignField chi = constant_field(mesh, 0.5);
  const StateField fixed = solve_state(mesh, chi, params);
  const StateField stepped = relax_state(mesh, chi, params, fixed, 1e-4, 1, 2e-3);
  for (int i = 0; i < mesh.dof_count(); ++i) {
    CHECK(std::abs(stepped.u1[i] - fixed.u1[i]) < 1e-10);
    CHECK(std::abs(stepped.u2[i] - fixed.u2[i]) < 1e-10);
  }
}

TEST_CASE("relax_state: heat-equation decay to the constant state") {
  const Mesh mesh = build_rectangle(12, 12);
  ModelParams params = paper_params();
  params.k12 = 1.0;  // keep species 1 diffusive in the chi = 0 phase
  params.k21 = 1.0;
  const DesignField chi = constant_field(mesh, 0.0);

  StateField state0;
  state0.u1.resize(mesh.dof_count());
  state0.u2.assign(mesh.dof_count(), 0.0);
  std::mt19937 rng(5);
  for (double& v : state0.u1) v = oracles::uniform(rng, 0.0, 1.0);
  for (int d : mesh.dirichlet_dofs(BoundaryTag::Source1)) state0.u1[d] = 1.0;

  const StateField s = relax_state(mesh, chi, params, state0, 0.05, 80, 2e-3);
  for (double v : s.u1) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("relax_state: converges to solve_state") {
  const Mesh mesh = build_rectangle(24, 24);
  ModelParams params = paper_params();
  params.k_s = 10.0;  // explicit coupling limits the stable step
  const DesignField chi = constant_field(mesh, 0.5);

  StateField state0;
  state0.u1.assign(mesh.dof_count(), 1.0);
  state0.u2.assign(mesh.dof_count(), 0.0);
  const StateField relaxed = relax_state(mesh, chi, params, state0, 2e-4, 500, 2e-3);
  const StateField direct = solve_state(mesh, chi, params);
  for (int i = 0; i < mesh.dof_count(); ++i) {
    CHECK(std::abs(relaxed.u1[i] - direct.u1[i]) < 1e-6);
    CHECK(std::abs(relaxed.u2[i] - direct.u2[i]) < 1e-6);
  }
}

TEST_CASE("relax_state: detects divergence of the explicit coupling") {
  const Mesh mesh = build_rectangle(12, 12);
  const ModelParams params = paper_params();  // k_s = 100
  const DesignField chi = constant_field(mesh, 0.5);
  StateField state0;
  state0.u1.assign(mesh.dof_count(), 1.0);
  state0.u2.assign(mesh.dof_count(), 0.0);
  CHECK_THROWS_AS(relax_state(mesh, chi, params, state0, 0.5, 400, 2e-3),
                  NonConvergence);
}

TEST_CASE("annulus: rotationally symmetric concentrations") {
  const int ntheta = 64;
  const Mesh mesh = build_annulus(8, ntheta, 0.2, 1.0);
  const ModelParams params = paper_params();
  const StateField s = solve_state(mesh, constant_field(mesh, 0.5), params);
  // Nodes are ordered ring by ring.
  for (int ring = 0; ring <= 8; ++ring) {
    double mean = 0.0, var = 0.0;
    for (int j = 0; j < ntheta; ++j) mean += s.u1[mesh.dof_of(ring * ntheta + j)];
    mean /= ntheta;
    for (int j = 0; j < ntheta; ++j) {
      const double d = s.u1[mesh.dof_of(ring * ntheta + j)] - mean;
      var += d * d;
    }
    CHECK(var / ntheta <= 1e-8);
  }
}

TEST_CASE("periodic cell: source/sink point symmetry of the state") {
  const Mesh mesh = build_periodic_cell(64, 0.15, 0.15);
  const ModelParams params = paper_params();
  const StateField s = solve_state(mesh, constant_field(mesh, 0.5), params);

  std::map<std::pair<long, long>, int> dof_at;
  auto key = [](double x, double y) {
    auto wrap = [](double t) {
      t = std::fmod(t, 1.0);
      if (t < 0.0) t += 1.0;
      return std::lround(t * 1e9) % 1000000000L;
    };
    return std::make_pair(wrap(x), wrap(y));
  };
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    dof_at[key(mesh.nodes[i].x, mesh.nodes[i].y)] = mesh.dof_of(i);
  }
  double worst = 0.0;
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Vec2 p = mesh.nodes[i];
    const auto it = dof_at.find(key(0.5 - p.x, 0.5 - p.y));
    REQUIRE(it != dof_at.end());
    const double residual = s.u1[mesh.dof_of(i)] + s.u2[it->second] -
                            (params.u1_star + params.u2_star);
    worst = std::max(worst, std::abs(residual));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("energy_report: conservation identity on a mixed design") {
  const Mesh mesh = build_rectangle(32, 32);
  const ModelParams params = paper_params();
  DesignField chi;
  chi.chi.resize(mesh.dof_count());
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    chi.chi[mesh.dof_of(i)] =
        std::clamp(1.25 - 1.5 * mesh.nodes[i].x, 0.0, 1.0);
  }
  const StateField s = solve_state(mesh, chi, params);
  const EnergyReport rep = energy_report(mesh, chi, s, params, 1.0, 2e-5);
  CHECK(rep.total_reaction > 0.0);
  CHECK(std::abs(rep.j1_in - rep.total_reaction) <= 0.02 * rep.total_reaction);
  CHECK(std::abs(rep.j1_in - rep.j2_out) <= 0.02 * rep.total_reaction);
  CHECK(rep.transport_energy > 0.0);
  CHECK(rep.reaction_energy > 0.0);
  CHECK(rep.phase_field_energy ==
        doctest::Approx(rep.phase_field_well + rep.phase_field_gradient));
  CHECK(rep.objective == doctest::Approx(rep.j1_in));  // u2* = 0
}
