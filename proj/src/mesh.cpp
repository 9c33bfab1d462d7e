#include "reactopt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace reactopt {

namespace {

constexpr double kPi = 3.14159265358979323846;

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

const char* to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Source1:
      return "Source1";
    case BoundaryTag::Sink2:
      return "Sink2";
    case BoundaryTag::Insulated:
      return "Insulated";
  }
  return "?";
}

double triangle_area(Vec2 p0, Vec2 p1, Vec2 p2) {
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

void Mesh::finalize() {
  const int n_nodes = static_cast<int>(nodes.size());

  // Union periodically identified nodes, then number the group roots.
  std::vector<int> parent(n_nodes);
  std::iota(parent.begin(), parent.end(), 0);
  for (const PeriodicPair& p : periodic_pairs) {
    if (p.master < 0 || p.master >= n_nodes || p.slave < 0 ||
        p.slave >= n_nodes) {
      throw std::invalid_argument("periodic pair references invalid node");
    }
    parent[find_root(parent, p.slave)] = find_root(parent, p.master);
  }
  node_dof_.assign(n_nodes, -1);
  n_dofs_ = 0;
  for (int i = 0; i < n_nodes; ++i) {
    const int r = find_root(parent, i);
    if (node_dof_[r] < 0) node_dof_[r] = n_dofs_++;
    node_dof_[i] = node_dof_[r];
  }

  areas_.resize(elements.size());
  total_area_ = 0.0;
  for (size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    const double a = triangle_area(nodes[el[0]], nodes[el[1]], nodes[el[2]]);
    if (!(a > 0.0)) {
      throw std::invalid_argument("element " + std::to_string(e) +
                                  " has non-positive signed area");
    }
    areas_[e] = a;
    total_area_ += a;
  }

  lumped_.assign(n_dofs_, 0.0);
  for (size_t e = 0; e < elements.size(); ++e) {
    for (int v : elements[e]) lumped_[node_dof_[v]] += areas_[e] / 3.0;
  }

  // Every boundary edge must be adjacent to exactly one element (in dof
  // space, so periodic wrap edges are interior), carry exactly one tag,
  // and the listed set must be exhaustive.
  std::map<std::pair<int, int>, int> edge_count;
  auto key = [&](int a, int b) {
    int da = node_dof_[a], db = node_dof_[b];
    return std::make_pair(std::min(da, db), std::max(da, db));
  };
  for (const auto& el : elements) {
    for (int k = 0; k < 3; ++k) edge_count[key(el[k], el[(k + 1) % 3])]++;
  }
  std::set<std::pair<int, int>> tagged;
  for (const BoundaryEdge& be : boundary_edges) {
    const auto k = key(be.a, be.b);
    auto it = edge_count.find(k);
    if (it == edge_count.end() || it->second != 1) {
      throw std::invalid_argument(
          "tagged boundary edge is not adjacent to exactly one element");
    }
    if (!tagged.insert(k).second) {
      throw std::invalid_argument("boundary edge tagged more than once");
    }
  }
  for (const auto& [k, c] : edge_count) {
    if (c == 1 && tagged.count(k) == 0) {
      throw std::invalid_argument("boundary edge without a tag");
    }
    if (c > 2) {
      throw std::invalid_argument("edge shared by more than two elements");
    }
  }
}

std::vector<int> Mesh::dirichlet_dofs(BoundaryTag tag) const {
  std::vector<int> dofs;
  for (const BoundaryEdge& be : boundary_edges) {
    if (be.tag != tag) continue;
    dofs.push_back(node_dof_[be.a]);
    dofs.push_back(node_dof_[be.b]);
  }
  std::sort(dofs.begin(), dofs.end());
  dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());
  return dofs;
}

Mesh build_rectangle(int nx, int ny) {
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument("build_rectangle requires nx, ny >= 2");
  }
  Mesh m;
  const double hx = 1.0 / nx, hy = 1.0 / ny;
  auto node = [&](int i, int j) { return j * (nx + 1) + i; };
  m.nodes.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) m.nodes.push_back({i * hx, j * hy});
  }
  m.elements.reserve(2 * static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n00 = node(i, j), n10 = node(i + 1, j);
      const int n01 = node(i, j + 1), n11 = node(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        m.elements.push_back({n00, n10, n11});
        m.elements.push_back({n00, n11, n01});
      } else {
        m.elements.push_back({n00, n10, n01});
        m.elements.push_back({n10, n11, n01});
      }
    }
  }
  for (int j = 0; j < ny; ++j) {
    m.boundary_edges.push_back({node(0, j), node(0, j + 1), BoundaryTag::Source1});
    m.boundary_edges.push_back({node(nx, j), node(nx, j + 1), BoundaryTag::Sink2});
  }
  for (int i = 0; i < nx; ++i) {
    m.boundary_edges.push_back({node(i, 0), node(i + 1, 0), BoundaryTag::Insulated});
    m.boundary_edges.push_back({node(i, ny), node(i + 1, ny), BoundaryTag::Insulated});
  }
  m.finalize();
  return m;
}

Mesh build_annulus(int nr, int ntheta, double r_in, double r_out) {
  if (!(r_in > 0.0) || !(r_out > r_in)) {
    throw std::invalid_argument("build_annulus requires 0 < r_in < r_out");
  }
  if (nr < 1 || ntheta < 8) {
    throw std::invalid_argument("build_annulus requires nr >= 1, ntheta >= 8");
  }
  Mesh m;
  // ntheta distinct angles; connectivity wraps, so the assembled system
  // has no seam duplication by construction.
  auto node = [&](int i, int j) { return i * ntheta + (j % ntheta); };
  m.nodes.reserve(static_cast<size_t>(nr + 1) * ntheta);
  for (int i = 0; i <= nr; ++i) {
    const double r = r_in + (r_out - r_in) * i / nr;
    for (int j = 0; j < ntheta; ++j) {
      const double th = 2.0 * kPi * j / ntheta;
      m.nodes.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  // Split direction alternates per ring but not per column: rotation by
  // one angular step is then an exact mesh symmetry, so rotationally
  // symmetric data yields ring-constant discrete solutions.
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < ntheta; ++j) {
      const int n00 = node(i, j), n10 = node(i + 1, j);
      const int n11 = node(i + 1, j + 1), n01 = node(i, j + 1);
      if (i % 2 == 0) {
        m.elements.push_back({n00, n10, n11});
        m.elements.push_back({n00, n11, n01});
      } else {
        m.elements.push_back({n00, n10, n01});
        m.elements.push_back({n10, n11, n01});
      }
    }
  }
  for (int j = 0; j < ntheta; ++j) {
    m.boundary_edges.push_back({node(0, j), node(0, j + 1), BoundaryTag::Source1});
    m.boundary_edges.push_back({node(nr, j), node(nr, j + 1), BoundaryTag::Sink2});
  }
  m.finalize();
  return m;
}

Mesh build_periodic_cell(int n, double r_source, double r_sink) {
  if (!(r_source > 0.0) || !(r_sink > 0.0) || r_source + r_sink >= 0.5) {
    throw std::invalid_argument(
        "build_periodic_cell requires r_source, r_sink > 0 with "
        "r_source + r_sink < 0.5");
  }
  if (n < 16) {
    throw std::invalid_argument("build_periodic_cell requires n >= 16");
  }
  if (r_source * n < 4.0 || r_sink * n < 4.0) {
    throw std::invalid_argument(
        "build_periodic_cell: grid too coarse, need >= 4 cells across each "
        "disk radius");
  }

  const double h = 1.0 / n;
  auto node = [&](int i, int j) { return j * (n + 1) + i; };

  std::vector<Vec2> all_nodes;
  all_nodes.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) all_nodes.push_back({i * h, j * h});
  }

  const std::array<Vec2, 4> corners = {
      Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, Vec2{1.0, 1.0}};
  const Vec2 center{0.5, 0.5};
  auto near_corner = [&](Vec2 p) {
    for (Vec2 c : corners) {
      if (norm(p - c) < r_source) return true;
    }
    return false;
  };

  // kind: 0 kept, 1 removed into a source disk, 2 removed into the sink.
  struct Tri {
    std::array<int, 3> v;
    int kind;
  };
  std::vector<Tri> tris;
  tris.reserve(2 * static_cast<size_t>(n) * n);
  auto classify = [&](const std::array<int, 3>& v) {
    const Vec2 c = (1.0 / 3.0) * (all_nodes[v[0]] + all_nodes[v[1]] + all_nodes[v[2]]);
    if (near_corner(c)) return 1;
    if (norm(c - center) < r_sink) return 2;
    return 0;
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int n00 = node(i, j), n10 = node(i + 1, j);
      const int n11 = node(i + 1, j + 1), n01 = node(i, j + 1);
      std::array<std::array<int, 3>, 2> split;
      if ((i + j) % 2 == 0) {
        split = {{{n00, n10, n11}, {n00, n11, n01}}};
      } else {
        split = {{{n00, n10, n01}, {n10, n11, n01}}};
      }
      for (const auto& v : split) tris.push_back({v, classify(v)});
    }
  }

  // Periodic identification on the full grid (right->left, top->bottom).
  std::vector<int> group(all_nodes.size());
  std::iota(group.begin(), group.end(), 0);
  for (int j = 0; j <= n; ++j) group[node(n, j)] = node(0, j % n);
  for (int i = 0; i <= n; ++i) group[node(i, n)] = group[node(i % n, 0)];

  // Staircase boundary: edges shared (in group space) by exactly one
  // kept and one removed element take the removed side's tag.
  std::map<std::pair<int, int>, std::pair<int, int>> edge_info;  // {kept, removed-kind}
  auto key = [&](int a, int b) {
    int ga = group[a], gb = group[b];
    return std::make_pair(std::min(ga, gb), std::max(ga, gb));
  };
  for (const Tri& t : tris) {
    for (int k = 0; k < 3; ++k) {
      auto& info = edge_info[key(t.v[k], t.v[(k + 1) % 3])];
      if (t.kind == 0) {
        info.first++;
      } else {
        info.second = t.kind;
      }
    }
  }

  Mesh m;
  std::vector<int> remap(all_nodes.size(), -1);
  auto use_node = [&](int v) {
    if (remap[v] < 0) {
      remap[v] = static_cast<int>(m.nodes.size());
      m.nodes.push_back(all_nodes[v]);
    }
    return remap[v];
  };
  for (const Tri& t : tris) {
    if (t.kind != 0) continue;
    m.elements.push_back({use_node(t.v[0]), use_node(t.v[1]), use_node(t.v[2])});
  }
  for (const Tri& t : tris) {
    if (t.kind != 0) continue;
    for (int k = 0; k < 3; ++k) {
      const int a = t.v[k], b = t.v[(k + 1) % 3];
      const auto& info = edge_info.at(key(a, b));
      if (info.first == 1 && info.second != 0) {
        m.boundary_edges.push_back(
            {remap[a], remap[b],
             info.second == 1 ? BoundaryTag::Source1 : BoundaryTag::Sink2});
      }
    }
  }
  for (size_t v = 0; v < all_nodes.size(); ++v) {
    if (remap[v] < 0 || group[v] == static_cast<int>(v)) continue;
    if (remap[group[v]] < 0) {
      // The master landed entirely inside a removed disk while the slave
      // survived; promote the slave to carry the dof alone.
      continue;
    }
    m.periodic_pairs.push_back({remap[group[v]], remap[v]});
  }
  m.finalize();
  if (m.dirichlet_dofs(BoundaryTag::Source1).empty() ||
      m.dirichlet_dofs(BoundaryTag::Sink2).empty()) {
    throw std::invalid_argument(
        "build_periodic_cell: a disk removed no elements; increase n or radii");
  }
  return m;
}

}  // namespace reactopt
