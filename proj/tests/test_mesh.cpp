#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "crossfv/mesh.hpp"

using namespace crossfv;

namespace {

constexpr double kPi = std::numbers::pi;

double orthogonality_residual(const Mesh& mesh) {
  double worst = 0.0;
  for (const Edge& e : mesh.edges) {
    if (e.kind != EdgeKind::interior) continue;
    if (mesh.dimension == 1) continue;
    const Vec2 t = (1.0 / e.measure) * (e.p1 - e.p0);
    const Vec2 d = mesh.cells[e.cell_l].center - mesh.cells[e.cell_k].center;
    worst = std::max(worst, std::abs(dot(t, d)) / norm(d));
  }
  return worst;  // sin of the angle deviation; equals the angle at this scale
}

void check_core_invariants(const Mesh& mesh) {
  double sum = 0.0;
  for (const Cell& c : mesh.cells) {
    REQUIRE(c.measure > 0.0);
    sum += c.measure;
    for (int eid : c.edge_ids) {
      const Edge& e = mesh.edges[eid];
      REQUIRE((e.cell_k == c.id || e.cell_l == c.id));
    }
  }
  REQUIRE_THAT(sum, Catch::Matchers::WithinRel(mesh.domain_measure, 1e-12));

  for (const Edge& e : mesh.edges) {
    REQUIRE(e.transmissibility == e.measure / e.distance);
    REQUIRE(e.distance > 0.0);
    if (e.kind == EdgeKind::interior && mesh.dimension == 2) {
      // m(sigma) d(x_K, x_L) = 2 m(T_{K,sigma})
      REQUIRE_THAT(e.measure * e.distance,
                   Catch::Matchers::WithinRel(2.0 * e.dual_measure, 1e-12));
      // Transmissibility is the same computed from either incident cell.
      const double dk = detail::point_edge_distance(mesh, e.cell_k, e);
      const double dl = detail::point_edge_distance(mesh, e.cell_l, e);
      REQUIRE_THAT(e.measure / (dk + dl),
                   Catch::Matchers::WithinRel(e.transmissibility, 1e-12));
    }
  }
  REQUIRE(orthogonality_residual(mesh) < 1e-10);
  REQUIRE(mesh.zeta > 0.0);
  REQUIRE(mesh.zeta <= 1.0);
}

// Rows of equilateral triangles tile a rhombus exactly; the resulting mesh
// is strictly Delaunay with machine-accurate orthogonality.
Mesh equilateral_rhombus_mesh(int n, int m, double a) {
  const double s = 0.5 * std::sqrt(3.0) * a;
  std::vector<Vec2> verts;
  auto vid = [n](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= n; ++j)
      verts.push_back({(j + 0.5 * i) * a, i * s});
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      tris.push_back({vid(i, j), vid(i, j + 1), vid(i + 1, j)});
      tris.push_back({vid(i, j + 1), vid(i + 1, j + 1), vid(i + 1, j)});
    }
  }
  return import_triangulation(verts, tris);
}

}  // namespace

TEST_CASE("interval mesh basics") {
  const Mesh m = build_interval_mesh(-kPi, kPi, 2);
  REQUIRE(m.n_cells() == 2);
  REQUIRE_THAT(m.cells[0].measure, Catch::Matchers::WithinRel(kPi, 1e-15));
  int interior = 0;
  for (const Edge& e : m.edges)
    if (e.kind == EdgeKind::interior) {
      ++interior;
      REQUIRE_THAT(e.transmissibility, Catch::Matchers::WithinRel(1.0 / kPi, 1e-15));
    }
  REQUIRE(interior == 1);
  check_core_invariants(m);
}

TEST_CASE("interval mesh uniform spacing") {
  const Mesh m = build_interval_mesh(0.0, 1.0, 40);
  REQUIRE(m.n_cells() == 40);
  int interior = 0;
  for (const Edge& e : m.edges)
    if (e.kind == EdgeKind::interior) {
      ++interior;
      REQUIRE_THAT(e.transmissibility, Catch::Matchers::WithinRel(40.0, 1e-13));
    }
  REQUIRE(interior == 39);
  check_core_invariants(m);
}

TEST_CASE("interval mesh at reference resolution") {
  const Mesh m = build_interval_mesh(0.0, 1.0, 5120);
  REQUIRE(m.n_cells() == 5120);
  check_core_invariants(m);
}

TEST_CASE("interval mesh rejects bad input") {
  REQUIRE_THROWS_AS(build_interval_mesh(1.0, 0.0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(build_interval_mesh(0.0, 0.0, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(build_interval_mesh(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("rectangle mesh 2x2") {
  const Mesh m = build_rectangle_mesh(0, 1, 0, 1, 2, 2);
  REQUIRE(m.n_cells() == 4);
  int interior = 0;
  for (const Edge& e : m.edges) {
    if (e.kind != EdgeKind::interior) continue;
    ++interior;
    REQUIRE_THAT(e.transmissibility, Catch::Matchers::WithinRel(1.0, 1e-15));
  }
  REQUIRE(interior == 4);
  for (const Cell& c : m.cells)
    REQUIRE_THAT(c.measure, Catch::Matchers::WithinRel(0.25, 1e-15));
  check_core_invariants(m);
}

TEST_CASE("rectangle mesh partitions the unit square") {
  const Mesh m = build_rectangle_mesh(0, 1, 0, 1, 10, 10);
  double sum = 0.0;
  for (const Cell& c : m.cells) sum += c.measure;
  REQUIRE_THAT(sum, Catch::Matchers::WithinRel(1.0, 1e-13));
  check_core_invariants(m);
}

TEST_CASE("rectangle mesh anisotropic cells") {
  const Mesh m = build_rectangle_mesh(0, 1, 0, 2, 2, 4);
  for (const Edge& e : m.edges) {
    if (e.kind != EdgeKind::interior) continue;
    if (std::abs(e.normal_from_k.x) == 1.0) {  // vertical edge
      REQUIRE_THAT(e.transmissibility, Catch::Matchers::WithinRel(1.0, 1e-15));
    }
  }
  check_core_invariants(m);
}

TEST_CASE("rectangle mesh rejects degenerate range") {
  REQUIRE_THROWS_AS(build_rectangle_mesh(0, 0, 0, 1, 2, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(build_rectangle_mesh(0, 1, 1, 0, 2, 2), std::invalid_argument);
}

TEST_CASE("right-triangle split of the square is rejected") {
  // Circumcenters of both halves coincide at the hypotenuse midpoint.
  const std::vector<Vec2> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<std::array<int, 3>> t{{0, 1, 2}, {0, 2, 3}};
  REQUIRE_THROWS_AS(import_triangulation(v, t), MeshError);
}

TEST_CASE("equilateral grid is accepted with tiny orthogonality residual") {
  const Mesh m = equilateral_rhombus_mesh(4, 4, 0.25);
  REQUIRE(m.n_cells() == 32);
  REQUIRE(orthogonality_residual(m) < 1e-10);
  REQUIRE_THAT(m.zeta, Catch::Matchers::WithinRel(0.5, 1e-12));
  check_core_invariants(m);
}

TEST_CASE("3584-triangle unit square mesh imports cleanly") {
  const Mesh m = load_triangulation_file(
      std::string(CROSSFV_SOURCE_DIR) + "/data/meshes/unit_square_3584.txt");
  REQUIRE(m.n_cells() == 3584);
  REQUIRE_THAT(m.domain_measure, Catch::Matchers::WithinRel(1.0, 1e-12));
  check_core_invariants(m);
}

TEST_CASE("56-triangle unit square mesh imports cleanly") {
  const Mesh m = load_triangulation_file(
      std::string(CROSSFV_SOURCE_DIR) + "/data/meshes/unit_square_56.txt");
  REQUIRE(m.n_cells() == 56);
  check_core_invariants(m);
}

TEST_CASE("degenerate triangle is rejected") {
  const std::vector<Vec2> v{{0, 0}, {1, 0}, {2, 0}, {0.5, 1}};
  const std::vector<std::array<int, 3>> t{{0, 1, 2}, {0, 1, 3}};
  REQUIRE_THROWS_AS(import_triangulation(v, t), MeshError);
}

TEST_CASE("non-conforming triangulation is rejected") {
  const std::vector<Vec2> v{{0, 0}, {1, 0}, {0.5, 0.8}, {0.5, -0.8}, {0.6, -1.5}};
  const std::vector<std::array<int, 3>> t{{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
  REQUIRE_THROWS_AS(import_triangulation(v, t), MeshError);
}

TEST_CASE("regularity constant of uniform meshes is one half") {
  REQUIRE_THAT(regularity_zeta(build_interval_mesh(0, 1, 8)),
               Catch::Matchers::WithinRel(0.5, 1e-14));
  REQUIRE_THAT(regularity_zeta(build_rectangle_mesh(0, 1, 0, 1, 4, 4)),
               Catch::Matchers::WithinRel(0.5, 1e-14));
}

TEST_CASE("single-cell fallback has regularity one") {
  Mesh m;
  m.dimension = 1;
  m.domain_measure = 1.0;
  Cell c;
  c.id = 0;
  c.center = {0.5, 0.0};
  c.measure = 1.0;
  c.vertices = {{0.0, 0.0}, {1.0, 0.0}};
  m.cells.push_back(c);
  for (int side = 0; side < 2; ++side) {
    Edge e;
    e.id = side;
    e.kind = EdgeKind::boundary;
    e.cell_k = 0;
    e.measure = 1.0;
    e.distance = 0.5;
    e.transmissibility = 2.0;
    e.normal_from_k = {side == 0 ? -1.0 : 1.0, 0.0};
    e.p0 = e.p1 = {side == 0 ? 0.0 : 1.0, 0.0};
    m.cells[0].edge_ids.push_back(e.id);
    m.edges.push_back(e);
  }
  REQUIRE_THAT(regularity_zeta(m), Catch::Matchers::WithinRel(1.0, 1e-14));
}

TEST_CASE("regularity constant is scale invariant") {
  const Mesh small = equilateral_rhombus_mesh(3, 5, 0.1);
  const Mesh large = equilateral_rhombus_mesh(3, 5, 173.0);
  REQUIRE_THAT(regularity_zeta(small),
               Catch::Matchers::WithinRel(regularity_zeta(large), 1e-12));
}

TEST_CASE("mesh summary export") {
  const Mesh m = build_interval_mesh(0, 1, 3);
  std::ostringstream cells, edges;
  write_mesh_summary(m, cells, edges);
  REQUIRE(cells.str().starts_with("id,center_x,center_y,measure\n0,"));
  REQUIRE(edges.str().find("interior") != std::string::npos);
  REQUIRE(edges.str().find("boundary") != std::string::npos);
}

TEST_CASE("triangulation file parser rejects bad headers") {
  std::istringstream bad("2 0\n0 0\n1 1\n");
  REQUIRE_THROWS_AS(read_triangulation(bad), MeshError);
}
