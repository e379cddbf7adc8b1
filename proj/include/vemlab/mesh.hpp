#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace vemlab {

using Point = Eigen::Vector2d;

/// Raised for malformed or geometrically invalid meshes. `cell()` is -1 when
/// the problem is not attributable to a single cell.
class MeshError : public std::runtime_error {
public:
  MeshError(const std::string& what, long cell = -1)
      : std::runtime_error(what), cell_(cell) {}
  long cell() const noexcept { return cell_; }

private:
  long cell_;
};

struct BoundaryEdge {
  std::size_t cell;
  std::size_t local_edge;  // edge from ring[local_edge] to ring[local_edge + 1]
};

/// Polygonal mesh stored as counter-clockwise vertex rings.
///
/// Edge adjacency is not stored; it is derived by `finalize()`, which also
/// checks orientation and edge manifoldness.
struct PolyMesh {
  std::vector<Point> vertices;
  std::vector<std::vector<std::size_t>> cells;
  std::vector<bool> boundary_vertex_flags;
  std::vector<BoundaryEdge> boundary_edges;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_cells() const { return cells.size(); }
  std::size_t num_edges() const;

  /// Validates the rings and derives boundary edges and boundary vertex
  /// flags. Throws MeshError naming the offending cell.
  void finalize();
};

struct EdgeGeometry {
  Point start;
  Point end;
  std::size_t start_id;  // global vertex indices
  std::size_t end_id;
  double length;
  Point normal;  // outward unit normal
  /// True when the canonical direction (lower global id first) runs against
  /// the ring direction.
  bool reversed;
};

struct ElementGeometry {
  std::vector<Point> vertices;
  std::vector<std::size_t> vertex_ids;
  Point centroid;
  double area;
  double diameter;
  std::vector<EdgeGeometry> edges;

  std::size_t num_vertices() const { return vertices.size(); }
  double perimeter() const;
};

/// Geometry of a standalone polygon; vertex ids are 0..n-1.
ElementGeometry polygon_geometry(const std::vector<Point>& ring);
ElementGeometry element_geometry(const PolyMesh& mesh, std::size_t cell);

double signed_area(const std::vector<Point>& ring);
bool point_in_polygon(const std::vector<Point>& ring, const Point& x);

struct RegularityReport {
  std::vector<double> rho;          // kernel inradius / h_E, 0 if not star-shaped
  std::vector<double> edge_ratio;   // min |e| / h_E
  std::vector<std::size_t> not_star_shaped;
  double min_rho = 0.0;
  double min_edge_ratio = 0.0;
};

/// Radius of the largest disk contained in the kernel of the polygon
/// (intersection of the inner half-planes of all edges), with its centre.
/// Returns radius 0 when the kernel has empty interior.
std::pair<double, Point> kernel_inradius(const ElementGeometry& geom);

RegularityReport regularity_report(const PolyMesh& mesh);

PolyMesh load_mesh(const std::filesystem::path& path);
void save_mesh(const PolyMesh& mesh, const std::filesystem::path& path);

/// JSON text form used by load_mesh/save_mesh.
PolyMesh mesh_from_json(const std::string& text);
std::string mesh_to_json(const PolyMesh& mesh);

}  // namespace vemlab
