#include "oracles.hpp"
#include "vemlab/mesh.hpp"
#include "vemlab/mesh_gen.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace vemlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / ("vemlab_test_" + name); }

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  auto orient = [](const Point& p, const Point& q, const Point& r) {
    return (q - p).x() * (r - p).y() - (q - p).y() * (r - p).x();
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 * o2 < 0.0 && o3 * o4 < 0.0;
}

}  // namespace

TEST_CASE("load_mesh reads a single unit square") {
  const auto path = temp_file("single.json");
  write_text(path, R"({"vertices": [[0,0],[1,0],[1,1],[0,1]], "cells": [[0,1,2,3]]})");
  const PolyMesh m = load_mesh(path);
  CHECK(m.num_cells() == 1);
  CHECK(m.boundary_edges.size() == 4);
  for (bool b : m.boundary_vertex_flags) CHECK(b);
}

TEST_CASE("load_mesh rejects a clockwise ring and names the cell") {
  const auto path = temp_file("reversed.json");
  write_text(path, R"({"vertices": [[0,0],[1,0],[1,1],[0,1]], "cells": [[3,2,1,0]]})");
  try {
    (void)load_mesh(path);
    FAIL("expected MeshError");
  } catch (const MeshError& e) {
    CHECK(e.cell() == 0);
    CHECK(std::string(e.what()).find("cell 0") != std::string::npos);
  }
}

TEST_CASE("load_mesh reports parse failures and non-manifold edges") {
  CHECK_THROWS_AS(mesh_from_json("{not json"), MeshError);
  CHECK_THROWS_AS(mesh_from_json(R"({"vertices": [[0,0]]})"), MeshError);
  // Three triangles on the edge (0,1).
  const std::string fan = R"({"vertices": [[0,0],[1,0],[0.5,1],[0.5,-1],[0.5,2]],
                              "cells": [[0,1,2],[1,0,3],[0,1,4]]})";
  CHECK_THROWS_AS(mesh_from_json(fan), MeshError);
  // Same orientation on a shared edge.
  const std::string twisted = R"({"vertices": [[0,0],[1,0],[1,1],[0,1],[2,0],[2,1]],
                                  "cells": [[0,1,2,3],[1,4,5,2],[0,1,2]]})";
  CHECK_THROWS_AS(mesh_from_json(twisted), MeshError);
}

TEST_CASE("5x5 square mesh file has 25 cells, 36 vertices, 20 boundary edges") {
  const auto path = temp_file("grid5.json");
  save_mesh(square_mesh(5), path);
  const PolyMesh m = load_mesh(path);
  CHECK(m.num_cells() == 25);
  CHECK(m.num_vertices() == 36);
  CHECK(m.boundary_edges.size() == 20);
  CHECK(m.num_edges() == 60);
}

TEST_CASE("save/load round-trip is bit-exact") {
  for (const PolyMesh& m : {square_mesh(5), voronoi_from_seeds(random_seeds(100, 3))}) {
    const auto path = temp_file("roundtrip.json");
    save_mesh(m, path);
    const PolyMesh back = load_mesh(path);
    REQUIRE(back.num_vertices() == m.num_vertices());
    for (std::size_t i = 0; i < m.num_vertices(); ++i) {
      CHECK(back.vertices[i].x() == m.vertices[i].x());
      CHECK(back.vertices[i].y() == m.vertices[i].y());
    }
    CHECK(back.cells == m.cells);
    CHECK(back.boundary_vertex_flags == m.boundary_vertex_flags);
  }
}

TEST_CASE("save_mesh to an unwritable path throws") {
  CHECK_THROWS(save_mesh(square_mesh(1), "/nonexistent-dir/for/sure/mesh.json"));
}

TEST_CASE("element_geometry of simple cells") {
  const ElementGeometry sq = element_geometry(square_mesh(1), 0);
  CHECK(sq.area == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sq.centroid.x() == doctest::Approx(0.5));
  CHECK(sq.centroid.y() == doctest::Approx(0.5));
  CHECK(sq.diameter == doctest::Approx(std::sqrt(2.0)));

  const ElementGeometry tri = polygon_geometry({{0, 0}, {1, 0}, {0, 1}});
  CHECK(tri.area == doctest::Approx(0.5));
  CHECK(tri.centroid.x() == doctest::Approx(1.0 / 3.0));
  CHECK(tri.centroid.y() == doctest::Approx(1.0 / 3.0));
  CHECK(tri.edges[0].normal.y() == doctest::Approx(-1.0));

  CHECK_THROWS_AS(polygon_geometry({{0, 0}, {1, 0}, {2, 0}}), MeshError);
}

TEST_CASE("closed-polygon identity sum |e| n = 0 on Voronoi cells") {
  const PolyMesh m = voronoi_from_seeds(random_seeds(100, 11));
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const ElementGeometry g = element_geometry(m, c);
    Point s = Point::Zero();
    for (const auto& e : g.edges) s += e.length * e.normal;
    CHECK(s.norm() < 1e-12);
    // h_E is the largest vertex-to-vertex distance.
    double h = 0.0;
    for (const auto& p : g.vertices)
      for (const auto& q : g.vertices) h = std::max(h, (p - q).norm());
    CHECK(g.diameter == h);
  }
}

TEST_CASE("cell areas add up to the unit square on every family") {
  const std::vector<PolyMesh> meshes{square_mesh(7), concave_mesh(6), voronoi_from_seeds(random_seeds(150, 5)),
                                     lloyd_relax(random_seeds(80, 5), 30).mesh};
  for (const auto& m : meshes) {
    double total = 0.0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) total += element_geometry(m, c).area;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("regularity of the unit square") {
  const RegularityReport rep = regularity_report(square_mesh(1));
  CHECK(rep.rho[0] == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.edge_ratio[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(rep.not_star_shaped.empty());
}

TEST_CASE("concave cells are star-shaped: kernel centre sees every vertex") {
  const PolyMesh m = concave_mesh(3);
  const RegularityReport rep = regularity_report(m);
  CHECK(rep.not_star_shaped.empty());
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    CHECK(rep.rho[c] > 0.0);
    const ElementGeometry g = element_geometry(m, c);
    const auto [radius, centre] = kernel_inradius(g);
    CHECK(radius > 0.0);
    // Visibility oracle: no segment centre -> vertex properly crosses an edge.
    for (const auto& v : g.vertices)
      for (const auto& e : g.edges) CHECK_FALSE(segments_cross(centre, v, e.start, e.end));
  }
}

TEST_CASE("a non-star-shaped polygon is flagged, not rejected") {
  // Comb with two deep teeth: no point sees both tooth tips.
  PolyMesh m;
  m.vertices = {{0, 0}, {1, 0}, {1, 1}, {0.9, 1}, {0.9, 0.1}, {0.1, 0.1}, {0.1, 1}, {0, 1}};
  m.cells = {{0, 1, 2, 3, 4, 5, 6, 7}};
  m.finalize();
  const RegularityReport rep = regularity_report(m);
  CHECK(rep.rho[0] == 0.0);
  CHECK(rep.not_star_shaped.size() == 1);
}

TEST_CASE("Lloyd relaxation improves the minimum edge ratio") {
  const auto seeds = random_seeds(100, 21);
  const RegularityReport raw = regularity_report(voronoi_from_seeds(seeds));
  const RegularityReport cvt = regularity_report(lloyd_relax(seeds, 100).mesh);
  CHECK(cvt.min_edge_ratio > raw.min_edge_ratio);
}

TEST_CASE("point_in_polygon") {
  const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(point_in_polygon(sq, {0.5, 0.5}));
  CHECK(point_in_polygon(sq, {1.0, 0.5}));
  CHECK_FALSE(point_in_polygon(sq, {1.5, 0.5}));
}
