#include "reactopt/validation1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reactopt/fem.hpp"

namespace reactopt {

double Profile1D::chi_at(double x) const {
  switch (kind) {
    case Kind::Step:
      return x < s ? 1.0 : 0.0;
    case Kind::Ramp:
      return std::clamp(0.5 - (x - s) / w, 0.0, 1.0);
    case Kind::Constant:
      return value;
  }
  return 0.0;
}

std::vector<double> Profile1D::nodal_chi() const {
  std::vector<double> chi(n);
  const double h = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) chi[i] = chi_at(i * h);
  return chi;
}

double Profile1D::kappa_eff() const {
  switch (kind) {
    case Kind::Step:
      return 0.0;
    case Kind::Ramp:
      return params.k_s * w / 6.0;
    case Kind::Constant:
      return params.k_s * value * (1.0 - value);
  }
  return 0.0;
}

double sharp_flux_analytic(double K1, double K2, double k_s, double s,
                           double u1_star, double u2_star) {
  if (!(K1 > 0.0) || !(K2 > 0.0) || !(k_s > 0.0) || !(s > 0.0 && s < 1.0)) {
    throw std::invalid_argument(
        "sharp_flux_analytic requires positive K1, K2, k_s and s in (0,1)");
  }
  return (u1_star - u2_star) / (s / K1 + (1.0 - s) / K2 + 1.0 / k_s);
}

Diffuse1DResult diffuse_flux_1d(const Profile1D& profile) {
  const int n = profile.n;
  if (n < 3) throw std::invalid_argument("diffuse_flux_1d requires n >= 3");
  if (profile.kind == Profile1D::Kind::Ramp &&
      !(profile.s - 0.5 * profile.w > 0.0 && profile.s + 0.5 * profile.w < 1.0)) {
    throw std::invalid_argument("ramp must lie strictly inside (0,1)");
  }
  const ModelParams& pp = profile.params;
  const double h = 1.0 / (n - 1);
  const std::vector<double> chi = profile.nodal_chi();

  // Nodal reaction weight, interpolated inside elements; a sharp nodal
  // step therefore produces an identically zero coupling matrix.
  std::vector<double> wnode(n);
  for (int i = 0; i < n; ++i) wnode[i] = pp.k_s * chi[i] * (1.0 - chi[i]);

  // Coupled block system, species 1 on dofs [0,n), species 2 on [n,2n).
  std::vector<SparseOperator::Triplet> trip;
  trip.reserve(16 * n);
  for (int e = 0; e + 1 < n; ++e) {
    const double cm = profile.chi_at((e + 0.5) * h);
    const double k1 = pp.k11 * cm + pp.k12 * (1.0 - cm);
    const double k2 = pp.k21 * cm + pp.k22 * (1.0 - cm);
    const double wa = wnode[e], wb = wnode[e + 1];
    const double c00 = h * (wa / 4.0 + wb / 12.0);
    const double c01 = h * (wa + wb) / 12.0;
    const double c11 = h * (wa / 12.0 + wb / 4.0);
    for (int sp = 0; sp < 2; ++sp) {
      const int off = sp * n;
      const double k = sp == 0 ? k1 : k2;
      trip.push_back({off + e, off + e, k / h + c00});
      trip.push_back({off + e + 1, off + e + 1, k / h + c11});
      trip.push_back({off + e, off + e + 1, -k / h + c01});
      trip.push_back({off + e + 1, off + e, -k / h + c01});
    }
    // Coupling: -C acting on the other species.
    const int o1 = 0, o2 = n;
    trip.push_back({o1 + e, o2 + e, -c00});
    trip.push_back({o1 + e + 1, o2 + e + 1, -c11});
    trip.push_back({o1 + e, o2 + e + 1, -c01});
    trip.push_back({o1 + e + 1, o2 + e, -c01});
    trip.push_back({o2 + e, o1 + e, -c00});
    trip.push_back({o2 + e + 1, o1 + e + 1, -c11});
    trip.push_back({o2 + e, o1 + e + 1, -c01});
    trip.push_back({o2 + e + 1, o1 + e, -c01});
  }
  const SparseOperator A =
      SparseOperator::from_triplets(2 * n, std::move(trip), true);

  const std::vector<int> fixed = {0, 2 * n - 1};
  const std::vector<double> fixed_vals = {pp.u1_star, pp.u2_star};
  std::vector<double> rhs(2 * n, 0.0);
  std::vector<double> guess(2 * n);
  std::fill(guess.begin(), guess.begin() + n, pp.u1_star);
  std::fill(guess.begin() + n, guess.end(), pp.u2_star);
  CgOptions opts;
  opts.rtol = 1e-12;
  opts.initial = guess;
  const std::vector<double> u = solve_spd_constrained(A, rhs, fixed, fixed_vals, opts);

  const std::vector<double> residual = A.multiply(u);
  Diffuse1DResult out;
  out.flux_in = residual[0];
  out.flux_out = -residual[2 * n - 1];

  auto interp = [&](int offset, double x) {
    const double t = std::clamp(x, 0.0, 1.0) / h;
    const int i = std::min(static_cast<int>(t), n - 2);
    const double f = t - i;
    return (1.0 - f) * u[offset + i] + f * u[offset + i + 1];
  };
  const double edge =
      profile.kind == Profile1D::Kind::Ramp ? 0.5 * profile.w : 0.0;
  out.ubar1 = interp(0, profile.s - edge);
  out.ubar2 = interp(n, profile.s + edge);
  return out;
}

double flux_condition_residual(const Profile1D& profile) {
  if (profile.kind != Profile1D::Kind::Ramp) {
    throw std::invalid_argument("flux_condition_residual requires a ramp profile");
  }
  const Diffuse1DResult r = diffuse_flux_1d(profile);
  const double kappa = profile.kappa_eff();
  return std::abs(r.flux_in - kappa * (r.ubar1 - r.ubar2)) / r.flux_in;
}

}  // namespace reactopt
