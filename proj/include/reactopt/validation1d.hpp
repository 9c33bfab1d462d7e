#pragma once

#include <vector>

#include "reactopt/types.hpp"

namespace reactopt {

/// One-dimensional design profile on [0,1]: a sharp step, a linear ramp
/// of width w centered at s (both dropping from 1 on the left to 0 on
/// the right), or a constant mixture.
struct Profile1D {
  enum class Kind { Step, Ramp, Constant };

  int n = 1024;  // node count
  Kind kind = Kind::Ramp;
  double s = 0.5;
  double w = 0.02;
  double value = 0.5;  // Constant only
  ModelParams params;

  double chi_at(double x) const;
  std::vector<double> nodal_chi() const;

  /// Effective interfacial conductance k_s int chi(1-chi) dx, evaluated
  /// analytically: k_s w/6 for a ramp, 0 for a step, k_s c(1-c) for a
  /// constant.
  double kappa_eff() const;
};

/// Exact series-resistance flux of the sharp-interface system:
/// J = (u1* - u2*) / (s/K1 + (1-s)/K2 + 1/k_s).
double sharp_flux_analytic(double K1, double K2, double k_s, double s,
                           double u1_star, double u2_star);

struct Diffuse1DResult {
  double flux_in = 0.0;   // consistent flux at x = 0 (species 1)
  double flux_out = 0.0;  // consistent flux at x = 1 (species 2)
  double ubar1 = 0.0;     // u1 at the left ramp edge
  double ubar2 = 0.0;     // u2 at the right ramp edge
};

/// P1 solve of the coupled two-species system on [0,1] with the
/// profile's design: u1(0) = u1*, u2(1) = u2*, natural elsewhere. The
/// reaction weight chi(1-chi) is interpolated from its nodal values, so
/// a sharp step carries no reaction anywhere and the flux vanishes.
Diffuse1DResult diffuse_flux_1d(const Profile1D& profile);

/// |J - kappa_eff (ubar1 - ubar2)| / J for a ramp profile; shrinks as
/// the ramp narrows at fixed kappa_eff.
double flux_condition_residual(const Profile1D& profile);

}  // namespace reactopt
