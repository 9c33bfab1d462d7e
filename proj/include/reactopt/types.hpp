#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace reactopt {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Physical parameters of the two-species transport problem.
///
/// k11, k22 are the preferred-material diffusivities, k12, k21 the
/// off-material ones (regime k11, k22 >> k12, k21 > 0). k_s is the
/// interfacial reaction rate. u1_star / u2_star are the prescribed
/// concentrations on the source and sink boundaries. lambda is the
/// volume multiplier; it only enters the pointwise relaxed-density
/// evaluations and reporting, never the constrained solves.
struct ModelParams {
  double k11 = 1.0;
  double k12 = 1e-6;
  double k21 = 1e-6;
  double k22 = 1.0;
  double k_s = 1e2;
  double u1_star = 1.0;
  double u2_star = 0.0;
  double lambda = 0.0;
};

/// Nodal design field (volume fraction of material 1), one value per
/// mesh degree of freedom, in [0,1].
struct DesignField {
  std::vector<double> chi;
};

/// Iterative solver failed to reach the requested tolerance.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

/// v1 == v2 makes the pointwise density linear in chi; the stationary
/// point chi* is undefined.
class DegenerateReaction : public std::runtime_error {
 public:
  explicit DegenerateReaction(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace reactopt
