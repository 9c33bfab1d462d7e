#include "reactopt/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace reactopt {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<NamedField>& point_fields) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# vtk DataFile Version 3.0\n";
  out << "reactopt field export\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.nodes.size() << " double\n";
  for (const Vec2& p : mesh.nodes) {
    out << format_float(p.x) << ' ' << format_float(p.y) << " 0\n";
  }
  out << "CELLS " << mesh.elements.size() << ' ' << 4 * mesh.elements.size()
      << '\n';
  for (const auto& el : mesh.elements) {
    out << "3 " << el[0] << ' ' << el[1] << ' ' << el[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.elements.size() << '\n';
  for (size_t e = 0; e < mesh.elements.size(); ++e) out << "5\n";
  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.nodes.size() << '\n';
    for (const auto& [name, values] : point_fields) {
      out << "SCALARS " << name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (size_t i = 0; i < mesh.nodes.size(); ++i) {
        out << format_float((*values)[mesh.dof_of(static_cast<int>(i))]) << '\n';
      }
    }
  }
}

std::vector<double> read_vtk_point_scalars(const std::string& path,
                                           const std::string& name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  size_t n_points = 0;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "POINT_DATA") {
      ss >> n_points;
      break;
    }
  }
  if (n_points == 0) {
    throw std::runtime_error(path + ": no POINT_DATA section");
  }
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string word, field;
    ss >> word >> field;
    if (word == "SCALARS" && field == name) {
      std::getline(in, line);  // LOOKUP_TABLE
      std::vector<double> values(n_points);
      for (size_t i = 0; i < n_points; ++i) {
        if (!(in >> values[i])) {
          throw std::runtime_error(path + ": truncated SCALARS " + name);
        }
      }
      return values;
    }
  }
  throw std::runtime_error(path + ": SCALARS " + name + " not found");
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << format_float(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

void write_wbar_csv(const std::string& path, const WbarGrid& grid) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "xi1,xi2,wbar,region\n";
  for (size_t i = 0; i < grid.wbar.size(); ++i) {
    out << format_float(grid.xi1[i]) << ',' << format_float(grid.xi2[i]) << ','
        << format_float(grid.wbar[i]) << ',' << to_string(grid.region[i])
        << '\n';
  }
}

GridImage read_csv_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  GridImage img;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      img.values.push_back(std::stod(cell));
      ++cols;
    }
    if (img.cols == 0) {
      img.cols = cols;
    } else if (cols != img.cols) {
      throw std::runtime_error(path + ": ragged CSV grid");
    }
    ++img.rows;
  }
  if (img.rows < 2 || img.cols < 2) {
    throw std::runtime_error(path + ": grid must be at least 2x2");
  }
  return img;
}

std::vector<double> sample_grid_on_mesh(const GridImage& image, const Mesh& mesh) {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Vec2& p : mesh.nodes) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  std::vector<double> dof_values(mesh.dof_count(), 0.0);
  for (size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Vec2& p = mesh.nodes[i];
    const double fx = (p.x - xmin) / (xmax - xmin) * (image.cols - 1);
    // Image rows run top-down.
    const double fy = (ymax - p.y) / (ymax - ymin) * (image.rows - 1);
    const int ix = std::clamp(static_cast<int>(fx), 0, image.cols - 2);
    const int iy = std::clamp(static_cast<int>(fy), 0, image.rows - 2);
    const double ax = std::clamp(fx - ix, 0.0, 1.0);
    const double ay = std::clamp(fy - iy, 0.0, 1.0);
    auto at = [&](int r, int c) { return image.values[r * image.cols + c]; };
    const double v = (1 - ax) * (1 - ay) * at(iy, ix) +
                     ax * (1 - ay) * at(iy, ix + 1) +
                     (1 - ax) * ay * at(iy + 1, ix) +
                     ax * ay * at(iy + 1, ix + 1);
    dof_values[mesh.dof_of(static_cast<int>(i))] = v;
  }
  return dof_values;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

}  // namespace reactopt
