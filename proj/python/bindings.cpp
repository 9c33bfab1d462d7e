// pybind11 module exposing the core operations: mesh builders, state
// solves, energy reports, the relaxed-density analytics, the design
// optimizer, and the 1D validation solvers.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "reactopt/config.hpp"
#include "reactopt/io.hpp"
#include "reactopt/mesh.hpp"
#include "reactopt/optimizer.hpp"
#include "reactopt/relaxed.hpp"
#include "reactopt/runner.hpp"
#include "reactopt/state.hpp"
#include "reactopt/validation1d.hpp"

namespace py = pybind11;
using namespace reactopt;

namespace {

using DenseArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const std::vector<double>& v) {
  // Explicit allocate-and-copy; the (count, pointer) constructor is
  // unreliable on older pybind11 releases.
  py::array_t<double> out(
      std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  std::memcpy(out.request().ptr, v.data(), v.size() * sizeof(double));
  return out;
}

std::vector<double> from_array(const DenseArray& a) {
  const auto buf = a.request();
  const double* data = static_cast<const double*>(buf.ptr);
  return std::vector<double>(data, data + buf.size);
}

py::array_t<double> node_coordinates(const Mesh& m) {
  py::array_t<double> out({static_cast<py::ssize_t>(m.nodes.size()),
                           static_cast<py::ssize_t>(2)});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < r.shape(0); ++i) {
    r(i, 0) = m.nodes[i].x;
    r(i, 1) = m.nodes[i].y;
  }
  return out;
}

py::array_t<int> element_array(const Mesh& m) {
  py::array_t<int> out({static_cast<py::ssize_t>(m.elements.size()),
                        static_cast<py::ssize_t>(3)});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < r.shape(0); ++i) {
    for (int k = 0; k < 3; ++k) r(i, k) = m.elements[i][k];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-species reactor transport and design optimization core";

  py::register_exception<NonConvergence>(m, "NonConvergenceError");
  py::register_exception<DegenerateReaction>(m, "DegenerateReactionError");

  py::enum_<BoundaryTag>(m, "BoundaryTag")
      .value("Source1", BoundaryTag::Source1)
      .value("Sink2", BoundaryTag::Sink2)
      .value("Insulated", BoundaryTag::Insulated);

  py::enum_<Region>(m, "Region")
      .value("R0", Region::R0)
      .value("R", Region::R)
      .value("R1", Region::R1);

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("num_nodes",
                             [](const Mesh& me) { return me.nodes.size(); })
      .def_property_readonly("num_elements",
                             [](const Mesh& me) { return me.elements.size(); })
      .def_property_readonly("dof_count", &Mesh::dof_count)
      .def_property_readonly("total_area", &Mesh::total_area)
      .def("nodes", &node_coordinates)
      .def("elements", &element_array)
      .def("dof_of", &Mesh::dof_of)
      .def("dirichlet_dofs", &Mesh::dirichlet_dofs)
      .def("lumped_dof_areas",
           [](const Mesh& me) { return to_array(me.lumped_dof_areas()); });

  m.def("build_rectangle", &build_rectangle, py::arg("nx"), py::arg("ny"));
  m.def("build_annulus", &build_annulus, py::arg("nr"), py::arg("ntheta"),
        py::arg("r_in"), py::arg("r_out"));
  m.def("build_periodic_cell", &build_periodic_cell, py::arg("n"),
        py::arg("r_source"), py::arg("r_sink"));

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("k11", &ModelParams::k11)
      .def_readwrite("k12", &ModelParams::k12)
      .def_readwrite("k21", &ModelParams::k21)
      .def_readwrite("k22", &ModelParams::k22)
      .def_readwrite("k_s", &ModelParams::k_s)
      .def_readwrite("u1_star", &ModelParams::u1_star)
      .def_readwrite("u2_star", &ModelParams::u2_star)
      .def_readwrite("lambda_", &ModelParams::lambda);

  py::class_<PhaseFieldParams>(m, "PhaseFieldParams")
      .def(py::init<>())
      .def_readwrite("alpha", &PhaseFieldParams::alpha)
      .def_readwrite("beta", &PhaseFieldParams::beta)
      .def_readwrite("d_chi", &PhaseFieldParams::d_chi)
      .def_readwrite("d_u", &PhaseFieldParams::d_u)
      .def_readwrite("dt", &PhaseFieldParams::dt)
      .def_readwrite("v", &PhaseFieldParams::v)
      .def_readwrite("tol", &PhaseFieldParams::tol)
      .def_readwrite("max_steps", &PhaseFieldParams::max_steps);

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("transport_energy", &EnergyReport::transport_energy)
      .def_readonly("reaction_energy", &EnergyReport::reaction_energy)
      .def_readonly("phase_field_energy", &EnergyReport::phase_field_energy)
      .def_readonly("phase_field_well", &EnergyReport::phase_field_well)
      .def_readonly("phase_field_gradient", &EnergyReport::phase_field_gradient)
      .def_readonly("j1_in", &EnergyReport::j1_in)
      .def_readonly("j2_out", &EnergyReport::j2_out)
      .def_readonly("total_reaction", &EnergyReport::total_reaction)
      .def_readonly("objective", &EnergyReport::objective);

  m.def(
      "solve_state",
      [](const Mesh& mesh, const DenseArray& chi,
         const ModelParams& params, double rtol) {
        DesignField d{from_array(chi)};
        StateSolveOptions opts;
        opts.rtol = rtol;
        const StateField s = solve_state(mesh, d, params, opts);
        return py::make_tuple(to_array(s.u1), to_array(s.u2));
      },
      py::arg("mesh"), py::arg("chi"), py::arg("params"),
      py::arg("rtol") = 1e-10);

  m.def(
      "energy_report",
      [](const Mesh& mesh, const DenseArray& chi,
         const DenseArray& u1, const DenseArray& u2,
         const ModelParams& params, double alpha, double beta) {
        DesignField d{from_array(chi)};
        StateField s{from_array(u1), from_array(u2)};
        return energy_report(mesh, d, s, params, alpha, beta);
      },
      py::arg("mesh"), py::arg("chi"), py::arg("u1"), py::arg("u2"),
      py::arg("params"), py::arg("alpha") = 1.0, py::arg("beta") = 2e-5);

  py::class_<HistoryEntry>(m, "HistoryEntry")
      .def_readonly("step", &HistoryEntry::step)
      .def_readonly("residual", &HistoryEntry::residual)
      .def_readonly("functional", &HistoryEntry::functional)
      .def_readonly("lambda_", &HistoryEntry::lambda)
      .def_readonly("dt", &HistoryEntry::dt);

  py::class_<DesignResult>(m, "DesignResult")
      .def_property_readonly(
          "chi", [](const DesignResult& r) { return to_array(r.chi.chi); })
      .def_property_readonly(
          "u1", [](const DesignResult& r) { return to_array(r.state.u1); })
      .def_property_readonly(
          "u2", [](const DesignResult& r) { return to_array(r.state.u2); })
      .def_readonly("report", &DesignResult::report)
      .def_readonly("history", &DesignResult::history)
      .def_readonly("converged", &DesignResult::converged)
      .def_readonly("steps", &DesignResult::steps);

  m.def(
      "optimize",
      [](const Mesh& mesh, const ModelParams& params,
         const PhaseFieldParams& pf, double perturbation, unsigned seed,
         bool adapt_dt, bool coupled) {
        RunOptions opts;
        opts.perturbation = perturbation;
        opts.seed = seed;
        opts.adapt_dt = adapt_dt;
        opts.coupled = coupled;
        return run_optimization(mesh, params, pf, opts);
      },
      py::arg("mesh"), py::arg("params"), py::arg("pf"),
      py::arg("perturbation") = 1e-3, py::arg("seed") = 0,
      py::arg("adapt_dt") = true, py::arg("coupled") = false);

  m.def("project_volume",
        [](const Mesh& mesh, const DenseArray& chi, double v) {
          const ProjectionResult r = project_volume(mesh, DesignField{from_array(chi)}, v);
          return py::make_tuple(to_array(r.field.chi), r.shift);
        });
  m.def("interface_position",
        [](const Mesh& mesh, const DenseArray& chi) {
          return interface_position(mesh, DesignField{from_array(chi)});
        });
  m.def("double_well", &double_well);
  m.def("double_well_derivative", &double_well_derivative);

  py::class_<RelaxedPoint>(m, "RelaxedPoint")
      .def(py::init([](double v1, double v2, std::pair<double, double> xi1,
                       std::pair<double, double> xi2, double lambda) {
             return RelaxedPoint{v1, v2, {xi1.first, xi1.second},
                                 {xi2.first, xi2.second}, lambda};
           }),
           py::arg("v1"), py::arg("v2"),
           py::arg("xi1") = std::pair<double, double>{0.0, 0.0},
           py::arg("xi2") = std::pair<double, double>{0.0, 0.0},
           py::arg("lambda_") = 0.0);

  m.def("W_pointwise", &W_pointwise);
  m.def("chi_star", &chi_star);
  m.def("region_classify", &region_classify);
  m.def("W_bar", [](const ModelParams& p, const RelaxedPoint& q) {
    const WbarValue w = W_bar(p, q);
    return py::make_tuple(w.value, w.region);
  });
  m.def("verify_identities", &verify_identities);

  m.def(
      "wbar_map",
      [](const ModelParams& params, double v1, double v2, double lambda,
         int grid_points, double xi_max) {
        const WbarGrid g = wbar_map(params, v1, v2, lambda,
                                    {grid_points, xi_max});
        py::array_t<double> wbar({grid_points, grid_points});
        py::array_t<int> region({grid_points, grid_points});
        auto wr = wbar.mutable_unchecked<2>();
        auto rr = region.mutable_unchecked<2>();
        for (int j = 0; j < grid_points; ++j) {
          for (int i = 0; i < grid_points; ++i) {
            wr(j, i) = g.wbar[j * grid_points + i];
            rr(j, i) = static_cast<int>(g.region[j * grid_points + i]);
          }
        }
        return py::make_tuple(wbar, region);
      },
      py::arg("params"), py::arg("v1"), py::arg("v2"), py::arg("lambda_") = 0.0,
      py::arg("grid_points") = 201, py::arg("xi_max") = 2.0);

  py::class_<Profile1D> profile(m, "Profile1D");
  py::enum_<Profile1D::Kind>(profile, "Kind")
      .value("Step", Profile1D::Kind::Step)
      .value("Ramp", Profile1D::Kind::Ramp)
      .value("Constant", Profile1D::Kind::Constant);
  profile.def(py::init<>())
      .def_readwrite("n", &Profile1D::n)
      .def_readwrite("kind", &Profile1D::kind)
      .def_readwrite("s", &Profile1D::s)
      .def_readwrite("w", &Profile1D::w)
      .def_readwrite("value", &Profile1D::value)
      .def_readwrite("params", &Profile1D::params)
      .def("chi_at", &Profile1D::chi_at)
      .def("kappa_eff", &Profile1D::kappa_eff);

  py::class_<Diffuse1DResult>(m, "Diffuse1DResult")
      .def_readonly("flux_in", &Diffuse1DResult::flux_in)
      .def_readonly("flux_out", &Diffuse1DResult::flux_out)
      .def_readonly("ubar1", &Diffuse1DResult::ubar1)
      .def_readonly("ubar2", &Diffuse1DResult::ubar2);

  m.def("sharp_flux_analytic", &sharp_flux_analytic, py::arg("K1"),
        py::arg("K2"), py::arg("k_s"), py::arg("s"), py::arg("u1_star") = 1.0,
        py::arg("u2_star") = 0.0);
  m.def("diffuse_flux_1d", &diffuse_flux_1d);
  m.def("flux_condition_residual", &flux_condition_residual);

  m.def("write_vtk",
        [](const std::string& path, const Mesh& mesh,
           const std::map<std::string, DenseArray>& fields) {
          std::vector<std::vector<double>> storage;
          storage.reserve(fields.size());
          std::vector<NamedField> named;
          for (const auto& [name, arr] : fields) {
            storage.push_back(from_array(arr));
            named.emplace_back(name, &storage.back());
          }
          write_vtk(path, mesh, named);
        });

  m.def("run_config_command", [](const std::string& json_text) {
    return run_command(load_run_config_text(json_text));
  });
}
