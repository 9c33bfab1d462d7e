#pragma once

#include <array>
#include <vector>

#include "reactopt/types.hpp"

namespace reactopt {

/// Evaluation point of the pointwise design density: concentration pair
/// v, gradient pair xi, and the volume multiplier lambda. The material
/// constants come from ModelParams.
struct RelaxedPoint {
  double v1 = 0.0;
  double v2 = 0.0;
  Vec2 xi1{};
  Vec2 xi2{};
  double lambda = 0.0;
};

enum class Region { R0, R, R1 };

const char* to_string(Region r);

/// k_v = k_s (v1 - v2)^2, the curvature of the density in chi.
double reaction_curvature(const ModelParams& params, const RelaxedPoint& p);

/// S = sum_i (k_i1 - k_i2) |xi_i|^2.
double gradient_contrast(const ModelParams& params, const RelaxedPoint& p);

/// W(v, xi, chi) = 1/2 sum_i (chi k_i1 + (1-chi) k_i2)|xi_i|^2
///               + 1/2 chi (1-chi) k_v - lambda chi.
double W_pointwise(const ModelParams& params, const RelaxedPoint& p,
                   double chi);

/// Unclamped stationary point chi* = (S + k_v - 2 lambda) / (2 k_v).
/// Throws DegenerateReaction when k_v == 0.
double chi_star(const ModelParams& params, const RelaxedPoint& p);

/// R0: S - 2 lambda <= -k_v;  R: strict interior;  R1: >= k_v.
/// For k_v == 0 the density is linear in chi and the sign of
/// S - 2 lambda decides (ties fall to R0).
Region region_classify(const ModelParams& params, const RelaxedPoint& p);

struct WbarValue {
  double value = 0.0;
  Region region = Region::R0;
};

/// Pointwise maximum over chi in [0,1]: W evaluated at the classified
/// maximizer (0, 1, or chi*), so the value shares the arithmetic path
/// of the candidate maximum.
WbarValue W_bar(const ModelParams& params, const RelaxedPoint& p);

/// Closed-form mixed-region value
/// [S^2 + 2 sum_i |xi_i|^2 (k_v (k_i1 + k_i2) - 2 lambda dk_i)
///      + (k_v - 2 lambda)^2] / (8 k_v);
/// agrees with W_pointwise(p, chi*) to round-off.
double W_bar_closed_form(const ModelParams& params, const RelaxedPoint& p);

/// Residuals of the three comparison identities
///   (i)   W(chi*) - W(0) - (k_v/2) chi*^2
///   (ii)  W(chi*) - W(1) - (k_v/2) (chi* - 1)^2
///   (iii) W(1) - W(0) - 1/2 (S - 2 lambda).
/// Requires k_v > 0.
std::array<double, 3> verify_identities(const ModelParams& params,
                                        const RelaxedPoint& p);

struct WbarMapOptions {
  int grid_points = 201;
  double xi_max = 2.0;
};

/// Cartesian grid over (|xi1|, |xi2|) in [0, xi_max]^2, row-major with
/// xi1 varying fastest.
struct WbarGrid {
  int grid_points = 0;
  double xi_max = 0.0;
  std::vector<double> xi1, xi2, wbar;
  std::vector<Region> region;
};

WbarGrid wbar_map(const ModelParams& params, double v1, double v2,
                  double lambda, const WbarMapOptions& options = {});

}  // namespace reactopt
