#include "reactopt/relaxed.hpp"

namespace reactopt {

const char* to_string(Region r) {
  switch (r) {
    case Region::R0:
      return "R0";
    case Region::R:
      return "R";
    case Region::R1:
      return "R1";
  }
  return "?";
}

double reaction_curvature(const ModelParams& params, const RelaxedPoint& p) {
  const double dv = p.v1 - p.v2;
  return params.k_s * dv * dv;
}

double gradient_contrast(const ModelParams& params, const RelaxedPoint& p) {
  return (params.k11 - params.k12) * dot(p.xi1, p.xi1) +
         (params.k21 - params.k22) * dot(p.xi2, p.xi2);
}

double W_pointwise(const ModelParams& params, const RelaxedPoint& p,
                   double chi) {
  const double k1 = chi * params.k11 + (1.0 - chi) * params.k12;
  const double k2 = chi * params.k21 + (1.0 - chi) * params.k22;
  const double kv = reaction_curvature(params, p);
  return 0.5 * (k1 * dot(p.xi1, p.xi1) + k2 * dot(p.xi2, p.xi2)) +
         0.5 * chi * (1.0 - chi) * kv - p.lambda * chi;
}

double chi_star(const ModelParams& params, const RelaxedPoint& p) {
  const double kv = reaction_curvature(params, p);
  if (kv == 0.0) {
    throw DegenerateReaction(
        "chi_star undefined: k_s (v1 - v2)^2 == 0 makes W linear in chi");
  }
  return (gradient_contrast(params, p) + kv - 2.0 * p.lambda) / (2.0 * kv);
}

Region region_classify(const ModelParams& params, const RelaxedPoint& p) {
  const double kv = reaction_curvature(params, p);
  const double t = gradient_contrast(params, p) - 2.0 * p.lambda;
  if (kv == 0.0) return t > 0.0 ? Region::R1 : Region::R0;
  if (t <= -kv) return Region::R0;
  if (t >= kv) return Region::R1;
  return Region::R;
}

WbarValue W_bar(const ModelParams& params, const RelaxedPoint& p) {
  const Region region = region_classify(params, p);
  double chi = 0.0;
  switch (region) {
    case Region::R0:
      chi = 0.0;
      break;
    case Region::R1:
      chi = 1.0;
      break;
    case Region::R:
      chi = chi_star(params, p);
      break;
  }
  return {W_pointwise(params, p, chi), region};
}

double W_bar_closed_form(const ModelParams& params, const RelaxedPoint& p) {
  const double kv = reaction_curvature(params, p);
  const double s = gradient_contrast(params, p);
  const double x1 = dot(p.xi1, p.xi1), x2 = dot(p.xi2, p.xi2);
  const double mid =
      2.0 * (x1 * (kv * (params.k11 + params.k12) - 2.0 * p.lambda * (params.k11 - params.k12)) +
             x2 * (kv * (params.k21 + params.k22) - 2.0 * p.lambda * (params.k21 - params.k22)));
  const double tail = kv - 2.0 * p.lambda;
  return (s * s + mid + tail * tail) / (8.0 * kv);
}

std::array<double, 3> verify_identities(const ModelParams& params,
                                        const RelaxedPoint& p) {
  const double kv = reaction_curvature(params, p);
  if (!(kv > 0.0)) {
    throw DegenerateReaction("verify_identities requires k_v > 0");
  }
  const double cs = chi_star(params, p);
  const double w_star = W_pointwise(params, p, cs);
  const double w0 = W_pointwise(params, p, 0.0);
  const double w1 = W_pointwise(params, p, 1.0);
  const double s = gradient_contrast(params, p);
  return {
      w_star - w0 - 0.5 * kv * cs * cs,
      w_star - w1 - 0.5 * kv * (cs - 1.0) * (cs - 1.0),
      w1 - w0 - 0.5 * (s - 2.0 * p.lambda),
  };
}

WbarGrid wbar_map(const ModelParams& params, double v1, double v2,
                  double lambda, const WbarMapOptions& options) {
  WbarGrid grid;
  grid.grid_points = options.grid_points;
  grid.xi_max = options.xi_max;
  const int n = options.grid_points;
  grid.xi1.reserve(static_cast<size_t>(n) * n);
  grid.xi2.reserve(static_cast<size_t>(n) * n);
  grid.wbar.reserve(static_cast<size_t>(n) * n);
  grid.region.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    const double x2 = options.xi_max * j / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double x1 = options.xi_max * i / (n - 1);
      RelaxedPoint p{v1, v2, {x1, 0.0}, {x2, 0.0}, lambda};
      const WbarValue w = W_bar(params, p);
      grid.xi1.push_back(x1);
      grid.xi2.push_back(x2);
      grid.wbar.push_back(w.value);
      grid.region.push_back(w.region);
    }
  }
  return grid;
}

}  // namespace reactopt
