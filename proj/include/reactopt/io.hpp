#pragma once

#include <string>
#include <utility>
#include <vector>

#include "reactopt/mesh.hpp"
#include "reactopt/relaxed.hpp"

namespace reactopt {

/// %.9g formatting shared by every writer so that identical runs emit
/// byte-identical files.
std::string format_float(double v);

/// Named per-dof scalar field; the writers expand it to nodes.
using NamedField = std::pair<std::string, const std::vector<double>*>;

/// Legacy ASCII VTK unstructured grid (triangle cell type 5) with the
/// given point-data scalars.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<NamedField>& point_fields);

/// Reads back a POINT_DATA SCALARS array from a legacy VTK file written
/// by write_vtk (or compatible); returns one value per point.
std::vector<double> read_vtk_point_scalars(const std::string& path,
                                           const std::string& name);

/// One header line, comma separated, each cell formatted with
/// format_float.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_wbar_csv(const std::string& path, const WbarGrid& grid);

/// Rows-by-cols grid of values read from CSV (no header), image layout:
/// first row is the top of the domain.
struct GridImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major
};

GridImage read_csv_grid(const std::string& path);

/// Bilinear sample of the image over the mesh bounding box, evaluated
/// at every node and reduced to dofs.
std::vector<double> sample_grid_on_mesh(const GridImage& image, const Mesh& mesh);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace reactopt
