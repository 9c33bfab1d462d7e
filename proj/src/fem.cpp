#include "reactopt/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace reactopt {

CoefficientField conductivity_field(const Mesh& mesh, const DesignField& chi,
                                    double k_mat1, double k_mat2) {
  CoefficientField f;
  f.per_element.resize(mesh.elements.size());
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& el = mesh.elements[e];
    const double mean = (chi.chi[mesh.dof_of(el[0])] + chi.chi[mesh.dof_of(el[1])] +
                         chi.chi[mesh.dof_of(el[2])]) /
                        3.0;
    f.per_element[e] = k_mat1 * mean + k_mat2 * (1.0 - mean);
  }
  return f;
}

SparseOperator SparseOperator::from_triplets(int dim,
                                             std::vector<Triplet> triplets,
                                             bool symmetric) {
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  SparseOperator op;
  op.dim_ = dim;
  op.symmetric_ = symmetric;
  op.row_ptr_.assign(1, 0);
  op.row_ptr_.reserve(dim + 1);
  int current_row = 0;
  for (size_t i = 0; i < triplets.size();) {
    const int r = triplets[i].row, c = triplets[i].col;
    double v = 0.0;
    while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
      v += triplets[i].value;
      ++i;
    }
    while (current_row < r) {
      op.row_ptr_.push_back(static_cast<int>(op.col_.size()));
      ++current_row;
    }
    op.col_.push_back(c);
    op.val_.push_back(v);
  }
  while (current_row < dim) {
    op.row_ptr_.push_back(static_cast<int>(op.col_.size()));
    ++current_row;
  }
  return op;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += val_[k] * x[col_[k]];
    y[r] = s;
  }
}

std::vector<double> SparseOperator::multiply(std::span<const double> x) const {
  std::vector<double> y(dim_);
  apply(x, y);
  return y;
}

std::vector<double> SparseOperator::diagonal() const {
  std::vector<double> d(dim_, 0.0);
  for (int r = 0; r < dim_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_[k] == r) d[r] = val_[k];
    }
  }
  return d;
}

double SparseOperator::coeff(int row, int col) const {
  for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) {
    if (col_[k] == col) return val_[k];
  }
  return 0.0;
}

double SparseOperator::row_sum(int row) const {
  double s = 0.0;
  for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) s += val_[k];
  return s;
}

void SparseOperator::scale(double s) {
  for (double& v : val_) v *= s;
}

void SparseOperator::add_diagonal(std::span<const double> d, double alpha) {
  for (int r = 0; r < dim_; ++r) {
    bool found = false;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_[k] == r) {
        val_[k] += alpha * d[r];
        found = true;
      }
    }
    if (!found) {
      throw std::logic_error("add_diagonal: missing structural diagonal entry");
    }
  }
}

P1Element p1_element(const Mesh& mesh, int e) {
  const auto& el = mesh.elements[e];
  const Vec2 p0 = mesh.nodes[el[0]], p1 = mesh.nodes[el[1]], p2 = mesh.nodes[el[2]];
  P1Element out;
  out.dofs = {mesh.dof_of(el[0]), mesh.dof_of(el[1]), mesh.dof_of(el[2])};
  out.area = mesh.element_area(e);
  const double inv2a = 1.0 / (2.0 * out.area);
  out.gx = {(p1.y - p2.y) * inv2a, (p2.y - p0.y) * inv2a, (p0.y - p1.y) * inv2a};
  out.gy = {(p2.x - p1.x) * inv2a, (p0.x - p2.x) * inv2a, (p1.x - p0.x) * inv2a};
  return out;
}

SparseOperator assemble_stiffness(const Mesh& mesh,
                                  const CoefficientField& coeff) {
  if (coeff.per_element.size() != mesh.elements.size()) {
    throw std::invalid_argument("coefficient field size mismatch");
  }
  std::vector<SparseOperator::Triplet> trip;
  trip.reserve(9 * mesh.elements.size());
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const double c = coeff.per_element[e];
    if (!(c > 0.0)) {
      throw std::invalid_argument("diffusivity must be strictly positive");
    }
    const P1Element el = p1_element(mesh, static_cast<int>(e));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double v =
            c * el.area * (el.gx[a] * el.gx[b] + el.gy[a] * el.gy[b]);
        trip.push_back({el.dofs[a], el.dofs[b], v});
      }
    }
  }
  return SparseOperator::from_triplets(mesh.dof_count(), std::move(trip), true);
}

SparseOperator assemble_reaction(const Mesh& mesh, const DesignField& chi,
                                 double k_s) {
  constexpr double slack = 1e-12;
  for (double c : chi.chi) {
    if (c < -slack || c > 1.0 + slack) {
      throw std::invalid_argument("design value outside [0,1]: " +
                                  std::to_string(c));
    }
  }
  std::vector<SparseOperator::Triplet> trip;
  trip.reserve(9 * mesh.elements.size());
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    const P1Element el = p1_element(mesh, static_cast<int>(e));
    const double wq = el.area / 3.0;
    // Edge midpoints (a,b): phi_a = phi_b = 1/2, opposite phi = 0.
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3;
      const double cq =
          0.5 * (chi.chi[el.dofs[a]] + chi.chi[el.dofs[b]]);
      const double w = k_s * cq * (1.0 - cq) * wq * 0.25;
      trip.push_back({el.dofs[a], el.dofs[a], w});
      trip.push_back({el.dofs[b], el.dofs[b], w});
      trip.push_back({el.dofs[a], el.dofs[b], w});
      trip.push_back({el.dofs[b], el.dofs[a], w});
    }
  }
  return SparseOperator::from_triplets(mesh.dof_count(), std::move(trip), true);
}

std::vector<double> solve_spd(const SparseOperator& op,
                              std::span<const double> rhs,
                              const CgOptions& options) {
  return solve_spd_constrained(op, rhs, {}, {}, options);
}

std::vector<double> solve_spd_constrained(const SparseOperator& op,
                                          std::span<const double> rhs,
                                          std::span<const int> fixed_dofs,
                                          std::span<const double> fixed_values,
                                          const CgOptions& options) {
  const int n = op.dim();
  std::vector<double> x(n, 0.0);
  if (!options.initial.empty()) {
    if (static_cast<int>(options.initial.size()) != n) {
      throw std::invalid_argument("initial guess size mismatch");
    }
    std::copy(options.initial.begin(), options.initial.end(), x.begin());
  }
  std::vector<char> mask;
  if (!fixed_dofs.empty()) {
    mask.assign(n, 0);
    for (size_t i = 0; i < fixed_dofs.size(); ++i) {
      mask[fixed_dofs[i]] = 1;
      x[fixed_dofs[i]] = fixed_values[i];
    }
  }
  std::vector<double> inv_diag(n, 1.0);
  const std::vector<double> diag = op.diagonal();
  for (int i = 0; i < n; ++i) {
    if (diag[i] > 0.0) inv_diag[i] = 1.0 / diag[i];
  }
  const int max_iter = options.max_iter > 0 ? options.max_iter : 20 * n;
  double achieved = 0.0;
  int iterations = 0;
  const bool ok = detail::cg_core(
      n, [&](std::span<const double> in, std::span<double> out) { op.apply(in, out); },
      rhs, inv_diag, mask, x, options.rtol, max_iter, achieved, iterations);
  if (!ok) {
    throw NonConvergence("conjugate gradients stalled at relative residual " +
                             std::to_string(achieved) + " after " +
                             std::to_string(iterations) + " iterations",
                         achieved, iterations);
  }
  return x;
}

double boundary_flux(const Mesh& mesh, std::span<const double> u,
                     const SparseOperator& op, std::span<const double> rhs,
                     BoundaryTag tag) {
  const std::vector<int> dofs = mesh.dirichlet_dofs(tag);
  if (dofs.empty()) {
    throw std::invalid_argument(std::string("boundary_flux: no Dirichlet nodes tagged ") +
                                to_string(tag));
  }
  const std::vector<double> au = op.multiply(u);
  double flux = 0.0;
  for (int d : dofs) flux += au[d] - (rhs.empty() ? 0.0 : rhs[d]);
  return flux;
}

}  // namespace reactopt
