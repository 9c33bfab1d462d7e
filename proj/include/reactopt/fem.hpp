#pragma once

#include <array>
#include <span>
#include <vector>

#include "reactopt/mesh.hpp"
#include "reactopt/types.hpp"

namespace reactopt {

/// Piecewise-constant per-element scalar field (e.g. a conductivity
/// evaluated from the element-average design value).
struct CoefficientField {
  std::vector<double> per_element;
};

/// k_mat1 * mean(chi) + k_mat2 * (1 - mean(chi)) per element.
CoefficientField conductivity_field(const Mesh& mesh, const DesignField& chi,
                                    double k_mat1, double k_mat2);

/// Compressed-row sparse matrix over mesh dofs.
class SparseOperator {
 public:
  struct Triplet {
    int row;
    int col;
    double value;
  };

  SparseOperator() = default;
  static SparseOperator from_triplets(int dim, std::vector<Triplet> triplets,
                                      bool symmetric);

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<double> diagonal() const;
  double coeff(int row, int col) const;
  double row_sum(int row) const;

  int dim() const { return dim_; }
  std::size_t nnz() const { return col_.size(); }
  bool symmetric() const { return symmetric_; }

  void scale(double s);
  /// this += alpha * diag(d).
  void add_diagonal(std::span<const double> d, double alpha);

 private:
  int dim_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
  bool symmetric_ = false;
};

/// P1 geometry of one triangle: dof indices, area, and the constant
/// basis gradients grad(phi_a) = (gx[a], gy[a]).
struct P1Element {
  std::array<int, 3> dofs;
  double area;
  std::array<double, 3> gx;
  std::array<double, 3> gy;
};

P1Element p1_element(const Mesh& mesh, int e);

/// Standard P1 stiffness matrix with per-element coefficient.
/// Symmetric; row sums vanish before boundary conditions.
SparseOperator assemble_stiffness(const Mesh& mesh,
                                  const CoefficientField& coeff);

/// Mass-like coupling matrix C with weight k_s * chi * (1 - chi), chi
/// interpolated at the three edge midpoints (quadrature exact for the
/// quadratic weight). The coupled operator applies +C(u1-u2) to species
/// 1 and -C(u1-u2) to species 2.
SparseOperator assemble_reaction(const Mesh& mesh, const DesignField& chi,
                                 double k_s);

struct CgOptions {
  double rtol = 1e-10;
  int max_iter = 0;  // 0 -> 20 * dimension
  std::span<const double> initial{};
};

/// Jacobi-preconditioned conjugate gradients; deterministic for fixed
/// inputs. Throws NonConvergence with the achieved residual.
std::vector<double> solve_spd(const SparseOperator& op,
                              std::span<const double> rhs,
                              const CgOptions& options = {});

/// Same, with the listed dofs held at prescribed values (matrix-free
/// constraint masking; op itself is not modified).
std::vector<double> solve_spd_constrained(const SparseOperator& op,
                                          std::span<const double> rhs,
                                          std::span<const int> fixed_dofs,
                                          std::span<const double> fixed_values,
                                          const CgOptions& options = {});

/// Variationally consistent boundary flux: sum over the tag's Dirichlet
/// dofs of the unconstrained residual op*u - rhs. Sign convention is
/// inward flux through the tagged boundary.
double boundary_flux(const Mesh& mesh, std::span<const double> u,
                     const SparseOperator& op, std::span<const double> rhs,
                     BoundaryTag tag);

namespace detail {

/// Conjugate gradients on y = apply(x) with diagonal preconditioner
/// inv_diag; iterates only the unmasked components (mask[i] != 0 means
/// the dof is fixed and excluded). Returns the achieved relative
/// residual and iteration count through the out-parameters.
template <class ApplyFn>
bool cg_core(int n, ApplyFn&& apply, std::span<const double> b,
             std::span<const double> inv_diag, std::span<const char> mask,
             std::vector<double>& x, double rtol, int max_iter,
             double& achieved, int& iterations) {
  std::vector<double> r(n), z(n), p(n), ap(n);

  // Reference norm of the lifted right-hand side b - A x_D (x_D keeps
  // only the fixed entries), so warm starts do not skew the stopping
  // criterion.
  double bnorm2 = 0.0;
  if (mask.empty()) {
    for (int i = 0; i < n; ++i) bnorm2 += b[i] * b[i];
  } else {
    std::vector<double> xd(n, 0.0);
    for (int i = 0; i < n; ++i) {
      if (mask[i]) xd[i] = x[i];
    }
    apply(xd, ap);
    for (int i = 0; i < n; ++i) {
      if (mask[i]) continue;
      const double v = b[i] - ap[i];
      bnorm2 += v * v;
    }
  }

  apply(x, ap);
  for (int i = 0; i < n; ++i) {
    r[i] = (!mask.empty() && mask[i]) ? 0.0 : b[i] - ap[i];
  }
  const double btol = rtol * std::sqrt(bnorm2);
  double rnorm2 = 0.0;
  for (int i = 0; i < n; ++i) rnorm2 += r[i] * r[i];
  if (bnorm2 == 0.0 || std::sqrt(rnorm2) <= btol) {
    achieved = bnorm2 == 0.0 ? 0.0 : std::sqrt(rnorm2 / bnorm2);
    iterations = 0;
    if (bnorm2 == 0.0) {
      for (int i = 0; i < n; ++i) {
        if (mask.empty() || !mask[i]) x[i] = 0.0;
      }
    }
    return true;
  }

  double rz = 0.0;
  for (int i = 0; i < n; ++i) {
    z[i] = r[i] * inv_diag[i];
    rz += r[i] * z[i];
    p[i] = z[i];
  }
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, ap);
    double pap = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!mask.empty() && mask[i]) ap[i] = 0.0;
      pap += p[i] * ap[i];
    }
    const double alpha = rz / pap;
    rnorm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rnorm2 += r[i] * r[i];
    }
    if (std::sqrt(rnorm2) <= btol) {
      achieved = std::sqrt(rnorm2 / bnorm2);
      iterations = it;
      return true;
    }
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] = r[i] * inv_diag[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  achieved = std::sqrt(rnorm2 / bnorm2);
  iterations = max_iter;
  return false;
}

}  // namespace detail

}  // namespace reactopt
