#pragma once

#include <array>
#include <vector>

#include "reactopt/types.hpp"

namespace reactopt {

enum class BoundaryTag { Source1, Sink2, Insulated };

const char* to_string(BoundaryTag tag);

struct BoundaryEdge {
  int a = -1;
  int b = -1;
  BoundaryTag tag = BoundaryTag::Insulated;
};

/// Identifies the slave node with the master node; the pair shares one
/// degree of freedom in every assembled system.
struct PeriodicPair {
  int master = -1;
  int slave = -1;
};

/// Immutable after finalize(); safe to share read-only across threads.
///
/// Elements are counterclockwise node-index triples. Fields (design,
/// state) live on degrees of freedom: one dof per node, except that
/// periodically identified node groups share a single dof.
class Mesh {
 public:
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> elements;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<PeriodicPair> periodic_pairs;

  /// Builds the node->dof map, caches element areas and lumped dof
  /// areas, and validates the construction invariants (positive areas,
  /// each boundary edge adjacent to exactly one element, exhaustive
  /// single tags). Throws std::invalid_argument on violation.
  void finalize();

  int dof_count() const { return n_dofs_; }
  int dof_of(int node) const { return node_dof_[node]; }
  double element_area(int e) const { return areas_[e]; }
  double total_area() const { return total_area_; }

  /// Row-sum of the P1 mass matrix per dof; also the weights of the
  /// area-weighted nodal mean.
  const std::vector<double>& lumped_dof_areas() const { return lumped_; }

  /// Sorted unique dofs of the nodes on edges carrying `tag`.
  /// Empty when no edge carries the tag.
  std::vector<int> dirichlet_dofs(BoundaryTag tag) const;

  bool finalized() const { return !node_dof_.empty(); }

 private:
  std::vector<int> node_dof_;
  std::vector<double> areas_;
  std::vector<double> lumped_;
  double total_area_ = 0.0;
  int n_dofs_ = 0;
};

double triangle_area(Vec2 p0, Vec2 p1, Vec2 p2);

/// Structured criss-cross grid on the unit square, nx-by-ny cells.
/// Left face Source1, right face Sink2, top and bottom Insulated.
Mesh build_rectangle(int nx, int ny);

/// Polar structured grid on the annulus r_in < r < r_out, periodic in
/// theta by construction (ntheta distinct angular nodes, no seam).
/// Inner circle Source1, outer circle Sink2.
Mesh build_annulus(int nr, int ntheta, double r_in, double r_out);

/// Unit cell, fully periodic in both directions, n-by-n cells.
/// Elements whose centroid falls inside the corner quarter-disks
/// (radius r_source) or the center disk (radius r_sink) are removed;
/// the exposed staircase boundaries are tagged Source1 / Sink2.
Mesh build_periodic_cell(int n, double r_source, double r_sink);

}  // namespace reactopt
