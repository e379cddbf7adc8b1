#include "vemlab/mesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>
#include <utility>

namespace vemlab {

namespace {

std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

double signed_area(const std::vector<Point>& ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

bool point_in_polygon(const std::vector<Point>& ring, const Point& x) {
  // Crossing-number test; points exactly on an edge count as inside.
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    const Point ab = b - a;
    const Point ax = x - a;
    const double cross = ab.x() * ax.y() - ab.y() * ax.x();
    if (std::abs(cross) <= 1e-14 * ab.norm() && ax.dot(x - b) <= 0.0) return true;
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * ab.x() / ab.y();
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

std::size_t PolyMesh::num_edges() const {
  std::map<std::pair<std::size_t, std::size_t>, int> seen;
  for (const auto& ring : cells)
    for (std::size_t i = 0; i < ring.size(); ++i)
      seen[edge_key(ring[i], ring[(i + 1) % ring.size()])] = 1;
  return seen.size();
}

void PolyMesh::finalize() {
  struct Incidence {
    std::size_t cell;
    std::size_t local;
    bool forward;  // ring runs from the lower to the higher vertex id
  };
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Incidence>> edges;

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& ring = cells[c];
    if (ring.size() < 3)
      throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices", static_cast<long>(c));
    std::vector<std::size_t> sorted = ring;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw MeshError("cell " + std::to_string(c) + " repeats a vertex", static_cast<long>(c));
    std::vector<Point> pts;
    pts.reserve(ring.size());
    for (std::size_t v : ring) {
      if (v >= vertices.size())
        throw MeshError("cell " + std::to_string(c) + " references missing vertex " + std::to_string(v),
                        static_cast<long>(c));
      pts.push_back(vertices[v]);
    }
    if (!(signed_area(pts) > 0.0))
      throw MeshError("cell " + std::to_string(c) + " is not counter-clockwise (signed area <= 0)",
                      static_cast<long>(c));
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t a = ring[i];
      const std::size_t b = ring[(i + 1) % ring.size()];
      edges[edge_key(a, b)].push_back({c, i, a < b});
    }
  }

  boundary_edges.clear();
  std::vector<bool> derived_flags(vertices.size(), false);
  for (const auto& [key, inc] : edges) {
    if (inc.size() == 1) {
      boundary_edges.push_back({inc[0].cell, inc[0].local});
      derived_flags[key.first] = true;
      derived_flags[key.second] = true;
    } else if (inc.size() == 2) {
      if (inc[0].forward == inc[1].forward)
        throw MeshError("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                            ") has the same orientation in cells " + std::to_string(inc[0].cell) +
                            " and " + std::to_string(inc[1].cell),
                        static_cast<long>(inc[1].cell));
    } else {
      throw MeshError("non-manifold edge (" + std::to_string(key.first) + "," +
                          std::to_string(key.second) + ") shared by " + std::to_string(inc.size()) +
                          " cells",
                      static_cast<long>(inc[2].cell));
    }
  }
  std::sort(boundary_edges.begin(), boundary_edges.end(), [](const BoundaryEdge& l, const BoundaryEdge& r) {
    return std::tie(l.cell, l.local_edge) < std::tie(r.cell, r.local_edge);
  });

  if (boundary_vertex_flags.size() == vertices.size()) {
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (derived_flags[v] && !boundary_vertex_flags[v])
        throw MeshError("vertex " + std::to_string(v) + " lies on a boundary edge but is not flagged as boundary");
  } else {
    boundary_vertex_flags = std::move(derived_flags);
  }
}

double ElementGeometry::perimeter() const {
  double p = 0.0;
  for (const auto& e : edges) p += e.length;
  return p;
}

namespace {

ElementGeometry make_geometry(std::vector<Point> ring, std::vector<std::size_t> ids) {
  ElementGeometry g;
  const std::size_t n = ring.size();
  g.area = signed_area(ring);
  if (!(g.area > 0.0)) throw MeshError("degenerate or clockwise cell (area <= 0)");

  // Area centroid from the shoelace decomposition, shifted to the first
  // vertex to limit cancellation.
  const Point origin = ring[0];
  Point c = Point::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = ring[i] - origin;
    const Point q = ring[(i + 1) % n] - origin;
    const double w = p.x() * q.y() - q.x() * p.y();
    c += w * (p + q);
  }
  g.centroid = origin + c / (6.0 * g.area);

  g.diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.diameter = std::max(g.diameter, (ring[i] - ring[j]).norm());

  g.edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    EdgeGeometry e;
    e.start = ring[i];
    e.end = ring[j];
    e.start_id = ids[i];
    e.end_id = ids[j];
    const Point d = e.end - e.start;
    e.length = d.norm();
    e.normal = Point(d.y(), -d.x()) / e.length;
    e.reversed = e.start_id > e.end_id;
    g.edges.push_back(e);
  }
  g.vertices = std::move(ring);
  g.vertex_ids = std::move(ids);
  return g;
}

}  // namespace

ElementGeometry polygon_geometry(const std::vector<Point>& ring) {
  std::vector<std::size_t> ids(ring.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return make_geometry(ring, std::move(ids));
}

ElementGeometry element_geometry(const PolyMesh& mesh, std::size_t cell) {
  const auto& ring = mesh.cells.at(cell);
  std::vector<Point> pts;
  pts.reserve(ring.size());
  for (std::size_t v : ring) pts.push_back(mesh.vertices[v]);
  try {
    return make_geometry(std::move(pts), ring);
  } catch (const MeshError& err) {
    throw MeshError("cell " + std::to_string(cell) + ": " + err.what(), static_cast<long>(cell));
  }
}

std::pair<double, Point> kernel_inradius(const ElementGeometry& geom) {
  // Linear program  max r  s.t.  n_i . c + r <= n_i . a_i  for every edge.
  // The feasible set is bounded, so the optimum sits where three
  // constraints are active; polygons are small enough to enumerate triples.
  const std::size_t m = geom.edges.size();
  std::vector<Eigen::Vector3d> rows(m);
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& e = geom.edges[i];
    rows[i] = Eigen::Vector3d(e.normal.x(), e.normal.y(), 1.0);
    rhs[i] = e.normal.dot(e.start);
  }
  const double tol = 1e-12 * geom.diameter;
  double best = 0.0;
  Point centre = geom.centroid;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c) {
        Eigen::Matrix3d sys;
        sys.row(0) = rows[a];
        sys.row(1) = rows[b];
        sys.row(2) = rows[c];
        if (std::abs(sys.determinant()) < 1e-12) continue;
        const Eigen::Vector3d sol = sys.partialPivLu().solve(Eigen::Vector3d(rhs[a], rhs[b], rhs[c]));
        if (sol.z() <= best) continue;
        bool feasible = true;
        for (std::size_t i = 0; i < m && feasible; ++i) feasible = rows[i].dot(sol) <= rhs[i] + tol;
        if (feasible) {
          best = sol.z();
          centre = Point(sol.x(), sol.y());
        }
      }
  return {best, centre};
}

RegularityReport regularity_report(const PolyMesh& mesh) {
  RegularityReport rep;
  rep.rho.resize(mesh.num_cells());
  rep.edge_ratio.resize(mesh.num_cells());
  rep.min_rho = std::numeric_limits<double>::infinity();
  rep.min_edge_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const ElementGeometry g = element_geometry(mesh, c);
    const double r = kernel_inradius(g).first;
    rep.rho[c] = r / g.diameter;
    if (rep.rho[c] <= 0.0) rep.not_star_shaped.push_back(c);
    double min_edge = std::numeric_limits<double>::infinity();
    for (const auto& e : g.edges) min_edge = std::min(min_edge, e.length);
    rep.edge_ratio[c] = min_edge / g.diameter;
    rep.min_rho = std::min(rep.min_rho, rep.rho[c]);
    rep.min_edge_ratio = std::min(rep.min_edge_ratio, rep.edge_ratio[c]);
  }
  return rep;
}

PolyMesh mesh_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw MeshError(std::string("mesh JSON parse failure: ") + err.what());
  }
  PolyMesh mesh;
  try {
    for (const auto& v : doc.at("vertices")) {
      if (v.size() != 2) throw MeshError("vertex entries must be [x, y]");
      mesh.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    }
    for (const auto& c : doc.at("cells")) mesh.cells.push_back(c.get<std::vector<std::size_t>>());
    if (doc.contains("boundary_vertices")) {
      mesh.boundary_vertex_flags.assign(mesh.vertices.size(), false);
      for (const auto& v : doc.at("boundary_vertices")) {
        const auto idx = v.get<std::size_t>();
        if (idx >= mesh.vertices.size()) throw MeshError("boundary vertex index out of range");
        mesh.boundary_vertex_flags[idx] = true;
      }
    }
  } catch (const nlohmann::json::exception& err) {
    throw MeshError(std::string("mesh JSON schema violation: ") + err.what());
  }
  mesh.finalize();
  return mesh;
}

std::string mesh_to_json(const PolyMesh& mesh) {
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (const auto& p : mesh.vertices) doc["vertices"].push_back({p.x(), p.y()});
  doc["cells"] = mesh.cells;
  std::vector<std::size_t> boundary;
  for (std::size_t v = 0; v < mesh.boundary_vertex_flags.size(); ++v)
    if (mesh.boundary_vertex_flags[v]) boundary.push_back(v);
  doc["boundary_vertices"] = boundary;
  return doc.dump();
}

PolyMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return mesh_from_json(buf.str());
}

void save_mesh(const PolyMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path.string());
  out << mesh_to_json(mesh) << '\n';
  if (!out) throw std::runtime_error("write failure on " + path.string());
}

}  // namespace vemlab
