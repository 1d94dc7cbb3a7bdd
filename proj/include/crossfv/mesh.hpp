#pragma once

// Admissible finite-volume meshes: 1D intervals, 2D structured rectangles,
// and 2D triangulations with circumcenter cell points. Two-point flux
// consistency requires the segment between neighboring cell points to be
// orthogonal to their shared edge; every builder either guarantees this by
// construction or rejects the input.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crossfv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshError : Error {
  using Error::Error;
};

struct Vec2 {
  double x{0.0};
  double y{0.0};
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class EdgeKind { interior, boundary };

/// Control volume. `vertices` stores the cell polygon (CCW) in 2D and the
/// two interval endpoints in 1D; it feeds quadrature and VTK output.
struct Cell {
  int id{-1};
  Vec2 center{};
  double measure{0.0};
  std::vector<int> edge_ids;
  std::vector<Vec2> vertices;
};

/// Edge between two cells (interior) or a cell and the boundary.
/// transmissibility == measure / distance always holds as stored.
struct Edge {
  int id{-1};
  EdgeKind kind{EdgeKind::boundary};
  int cell_k{-1};
  int cell_l{-1};  // -1 for boundary edges
  double measure{1.0};
  double distance{0.0};
  double transmissibility{0.0};
  Vec2 normal_from_k{};
  double dual_measure{0.0};  // diamond (interior) / triangle (boundary) area
  Vec2 p0{};                 // endpoints, 2D only
  Vec2 p1{};
};

struct Mesh {
  int dimension{0};
  std::vector<Cell> cells;
  std::vector<Edge> edges;
  double zeta{0.0};
  double domain_measure{0.0};

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
};

namespace detail {

// Distance from cell point to the edge, along the outward normal. For
// admissible meshes this is the orthogonal distance d(x_K, sigma).
inline double point_edge_distance(const Mesh& mesh, int cell, const Edge& e) {
  if (mesh.dimension == 1) {
    return std::abs(mesh.cells[cell].center.x - e.p0.x);
  }
  Vec2 n = e.normal_from_k;
  if (cell == e.cell_l) n = -1.0 * n;
  return dot(e.p0 - mesh.cells[cell].center, n);
}

inline void finalize_zeta(Mesh& mesh) {
  double zeta = std::numeric_limits<double>::infinity();
  for (const Edge& e : mesh.edges) {
    const double dk = point_edge_distance(mesh, e.cell_k, e);
    zeta = std::min(zeta, dk / e.distance);
    if (e.kind == EdgeKind::interior) {
      const double dl = point_edge_distance(mesh, e.cell_l, e);
      zeta = std::min(zeta, dl / e.distance);
    }
  }
  mesh.zeta = zeta;
}

inline void check_partition(const Mesh& mesh) {
  double sum = 0.0;
  for (const Cell& c : mesh.cells) sum += c.measure;
  if (std::abs(sum - mesh.domain_measure) >
      1e-12 * std::abs(mesh.domain_measure)) {
    throw MeshError("cell measures do not partition the domain");
  }
}

}  // namespace detail

/// Uniform 1D mesh of (a, b). Edges carry m(sigma) = 1 so tau = 1/d_sigma
/// and the interior stencil is the standard three-point one.
inline Mesh build_interval_mesh(double a, double b, int n_cells) {
  if (!(a < b)) throw std::invalid_argument("interval mesh: need a < b");
  if (n_cells < 2) throw std::invalid_argument("interval mesh: need n_cells >= 2");

  Mesh mesh;
  mesh.dimension = 1;
  mesh.domain_measure = b - a;
  const double h = (b - a) / n_cells;

  mesh.cells.resize(n_cells);
  for (int i = 0; i < n_cells; ++i) {
    Cell& c = mesh.cells[i];
    c.id = i;
    const double x0 = a + i * h;
    c.center = {x0 + 0.5 * h, 0.0};
    c.measure = h;
    c.vertices = {{x0, 0.0}, {x0 + h, 0.0}};
  }

  auto add_edge = [&mesh](EdgeKind kind, int k, int l, double d, double xpos,
                          double nx) {
    Edge e;
    e.id = mesh.n_edges();
    e.kind = kind;
    e.cell_k = k;
    e.cell_l = l;
    e.measure = 1.0;
    e.distance = d;
    e.transmissibility = e.measure / e.distance;
    e.normal_from_k = {nx, 0.0};
    e.dual_measure = 0.5 * e.measure * e.distance;
    e.p0 = e.p1 = {xpos, 0.0};
    mesh.cells[k].edge_ids.push_back(e.id);
    if (l >= 0) mesh.cells[l].edge_ids.push_back(e.id);
    mesh.edges.push_back(e);
  };

  add_edge(EdgeKind::boundary, 0, -1, 0.5 * h, a, -1.0);
  for (int i = 0; i + 1 < n_cells; ++i)
    add_edge(EdgeKind::interior, i, i + 1, h, a + (i + 1) * h, 1.0);
  add_edge(EdgeKind::boundary, n_cells - 1, -1, 0.5 * h, b, 1.0);

  detail::finalize_zeta(mesh);
  detail::check_partition(mesh);
  return mesh;
}

/// Structured rectangle mesh of (x0,x1) x (y0,y1) with cell points at
/// centroids; center segments are orthogonal to the shared edges by
/// construction.
inline Mesh build_rectangle_mesh(double x0, double x1, double y0, double y1,
                                 int nx, int ny) {
  if (!(x0 < x1) || !(y0 < y1))
    throw std::invalid_argument("rectangle mesh: degenerate range");
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("rectangle mesh: need nx, ny >= 2");

  Mesh mesh;
  mesh.dimension = 2;
  mesh.domain_measure = (x1 - x0) * (y1 - y0);
  const double dx = (x1 - x0) / nx;
  const double dy = (y1 - y0) / ny;

  mesh.cells.resize(static_cast<size_t>(nx) * ny);
  auto cid = [nx](int ix, int iy) { return iy * nx + ix; };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Cell& c = mesh.cells[cid(ix, iy)];
      c.id = cid(ix, iy);
      const double cx0 = x0 + ix * dx, cy0 = y0 + iy * dy;
      c.center = {cx0 + 0.5 * dx, cy0 + 0.5 * dy};
      c.measure = dx * dy;
      c.vertices = {{cx0, cy0}, {cx0 + dx, cy0}, {cx0 + dx, cy0 + dy}, {cx0, cy0 + dy}};
    }
  }

  auto add_edge = [&mesh](EdgeKind kind, int k, int l, double m, double d,
                          Vec2 n, Vec2 p0, Vec2 p1) {
    Edge e;
    e.id = mesh.n_edges();
    e.kind = kind;
    e.cell_k = k;
    e.cell_l = l;
    e.measure = m;
    e.distance = d;
    e.transmissibility = m / d;
    e.normal_from_k = n;
    e.dual_measure = 0.5 * m * d;
    e.p0 = p0;
    e.p1 = p1;
    mesh.cells[k].edge_ids.push_back(e.id);
    if (l >= 0) mesh.cells[l].edge_ids.push_back(e.id);
    mesh.edges.push_back(e);
  };

  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double ex = x0 + (ix + 1) * dx;  // right edge of (ix, iy)
      const double ey0 = y0 + iy * dy;
      if (ix + 1 < nx) {
        add_edge(EdgeKind::interior, cid(ix, iy), cid(ix + 1, iy), dy, dx,
                 {1.0, 0.0}, {ex, ey0}, {ex, ey0 + dy});
      }
      const double fy = y0 + (iy + 1) * dy;  // top edge of (ix, iy)
      const double fx0 = x0 + ix * dx;
      if (iy + 1 < ny) {
        add_edge(EdgeKind::interior, cid(ix, iy), cid(ix, iy + 1), dx, dy,
                 {0.0, 1.0}, {fx0, fy}, {fx0 + dx, fy});
      }
    }
  }
  for (int iy = 0; iy < ny; ++iy) {
    add_edge(EdgeKind::boundary, cid(0, iy), -1, dy, 0.5 * dx, {-1.0, 0.0},
             {x0, y0 + iy * dy}, {x0, y0 + (iy + 1) * dy});
    add_edge(EdgeKind::boundary, cid(nx - 1, iy), -1, dy, 0.5 * dx, {1.0, 0.0},
             {x1, y0 + iy * dy}, {x1, y0 + (iy + 1) * dy});
  }
  for (int ix = 0; ix < nx; ++ix) {
    add_edge(EdgeKind::boundary, cid(ix, 0), -1, dx, 0.5 * dy, {0.0, -1.0},
             {x0 + ix * dx, y0}, {x0 + (ix + 1) * dx, y0});
    add_edge(EdgeKind::boundary, cid(ix, ny - 1), -1, dx, 0.5 * dy, {0.0, 1.0},
             {x0 + ix * dx, y1}, {x0 + (ix + 1) * dx, y1});
  }

  detail::finalize_zeta(mesh);
  detail::check_partition(mesh);
  return mesh;
}

/// Conforming triangulation import. Cell points are circumcenters, which
/// makes center segments orthogonal to shared edges; adjacencies where the
/// circumcenter-based distance is nonpositive (non-Delaunay or obtuse
/// inversions) are rejected instead of repaired.
inline Mesh import_triangulation(const std::vector<Vec2>& vertices,
                                 const std::vector<std::array<int, 3>>& triangles) {
  if (vertices.size() < 3 || triangles.empty())
    throw MeshError("triangulation: empty input");

  const int nv = static_cast<int>(vertices.size());
  Mesh mesh;
  mesh.dimension = 2;
  mesh.cells.resize(triangles.size());

  double scale = 0.0;
  for (const Vec2& v : vertices) scale = std::max(scale, norm(v));
  if (scale == 0.0) scale = 1.0;

  double total = 0.0;
  for (size_t t = 0; t < triangles.size(); ++t) {
    std::array<int, 3> tri = triangles[t];
    for (int v : tri)
      if (v < 0 || v >= nv) throw MeshError("triangulation: vertex index out of range");
    Vec2 a = vertices[tri[0]], b = vertices[tri[1]], c = vertices[tri[2]];
    double area2 = cross(b - a, c - a);
    if (area2 < 0.0) {  // orient CCW
      std::swap(tri[1], tri[2]);
      std::swap(b, c);
      area2 = -area2;
    }
    if (area2 <= 1e-14 * scale * scale)
      throw MeshError("triangulation: degenerate (collinear) triangle " + std::to_string(t));

    // Circumcenter from the perpendicular-bisector linear system.
    const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
    Vec2 cc{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
            (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};

    Cell& cell = mesh.cells[t];
    cell.id = static_cast<int>(t);
    cell.center = cc;
    cell.measure = 0.5 * area2;
    cell.vertices = {a, b, c};
    total += cell.measure;
  }
  mesh.domain_measure = total;

  // Collect shared edges by sorted vertex pair.
  std::map<std::pair<int, int>, std::vector<int>> edge_map;
  for (size_t t = 0; t < triangles.size(); ++t) {
    const std::array<int, 3>& ids = triangles[t];
    for (int j = 0; j < 3; ++j) {
      auto key = std::minmax(ids[j], ids[(j + 1) % 3]);
      edge_map[{key.first, key.second}].push_back(static_cast<int>(t));
    }
  }

  const double dist_tol = 1e-12 * scale;
  for (auto& [key, inc] : edge_map) {
    if (inc.size() > 2)
      throw MeshError("triangulation: non-conforming edge shared by >2 triangles");
    Edge e;
    e.id = mesh.n_edges();
    e.p0 = vertices[key.first];
    e.p1 = vertices[key.second];
    e.measure = norm(e.p1 - e.p0);
    const Vec2 tangent = (1.0 / e.measure) * (e.p1 - e.p0);

    if (inc.size() == 2) {
      e.kind = EdgeKind::interior;
      e.cell_k = inc[0];
      e.cell_l = inc[1];
      const Vec2 xk = mesh.cells[e.cell_k].center;
      const Vec2 xl = mesh.cells[e.cell_l].center;
      e.distance = norm(xl - xk);
      if (e.distance <= dist_tol)
        throw MeshError("triangulation: non-Delaunay adjacency (coincident circumcenters)");
      e.normal_from_k = (1.0 / e.distance) * (xl - xk);
      // Orthogonality of the center segment to the edge.
      if (std::abs(dot(e.normal_from_k, tangent)) > 1e-10)
        throw MeshError("triangulation: admissibility violated (center segment not orthogonal to edge)");
      // Both circumcenters must lie on their own side of the edge.
      const double dk = dot(e.p0 - xk, e.normal_from_k);
      const double dl = dot(xl - e.p0, e.normal_from_k);
      if (dk <= dist_tol || dl <= dist_tol)
        throw MeshError("triangulation: non-Delaunay adjacency (inverted circumcenter distance)");
    } else {
      e.kind = EdgeKind::boundary;
      e.cell_k = inc[0];
      e.cell_l = -1;
      const Vec2 xk = mesh.cells[e.cell_k].center;
      Vec2 n{tangent.y, -tangent.x};
      if (dot(n, e.p0 - xk) < 0.0) n = -1.0 * n;
      e.normal_from_k = n;
      e.distance = dot(e.p0 - xk, n);
      if (e.distance <= dist_tol)
        throw MeshError("triangulation: admissibility violated (circumcenter on or outside a boundary edge)");
    }
    e.transmissibility = e.measure / e.distance;
    e.dual_measure = 0.5 * e.measure * e.distance;
    mesh.cells[e.cell_k].edge_ids.push_back(e.id);
    if (e.cell_l >= 0) mesh.cells[e.cell_l].edge_ids.push_back(e.id);
    mesh.edges.push_back(e);
  }

  for (const Cell& c : mesh.cells)
    if (c.edge_ids.size() != 3)
      throw MeshError("triangulation: non-conforming cell incidence");

  detail::finalize_zeta(mesh);
  if (mesh.zeta <= 0.0)
    throw MeshError("triangulation: admissibility violated (zero regularity constant)");
  detail::check_partition(mesh);
  return mesh;
}

/// Minimum over cells and their edges of d(x_K, sigma) / d_sigma.
inline double regularity_zeta(const Mesh& mesh) {
  double zeta = std::numeric_limits<double>::infinity();
  for (const Edge& e : mesh.edges) {
    zeta = std::min(zeta, detail::point_edge_distance(mesh, e.cell_k, e) / e.distance);
    if (e.kind == EdgeKind::interior)
      zeta = std::min(zeta, detail::point_edge_distance(mesh, e.cell_l, e) / e.distance);
  }
  return zeta;
}

/// Plain-text triangulation format: header "nv nt", nv lines "x y",
/// nt lines "i j k" (0-based).
inline Mesh read_triangulation(std::istream& in) {
  int nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1)
    throw MeshError("triangulation file: bad header");
  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i)
    if (!(in >> vertices[i].x >> vertices[i].y))
      throw MeshError("triangulation file: truncated vertex list");
  std::vector<std::array<int, 3>> triangles(nt);
  for (int t = 0; t < nt; ++t)
    if (!(in >> triangles[t][0] >> triangles[t][1] >> triangles[t][2]))
      throw MeshError("triangulation file: truncated triangle list");
  return import_triangulation(vertices, triangles);
}

inline Mesh load_triangulation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file: " + path);
  return read_triangulation(in);
}

/// CSV summary: one file per entity kind.
inline void write_mesh_summary(const Mesh& mesh, std::ostream& cells_csv,
                               std::ostream& edges_csv) {
  cells_csv << "id,center_x,center_y,measure\n";
  for (const Cell& c : mesh.cells) {
    std::ostringstream row;
    row.precision(17);
    row << c.id << ',' << c.center.x << ',' << c.center.y << ',' << c.measure << '\n';
    cells_csv << row.str();
  }
  edges_csv << "id,kind,tau\n";
  for (const Edge& e : mesh.edges) {
    std::ostringstream row;
    row.precision(17);
    row << e.id << ',' << (e.kind == EdgeKind::interior ? "interior" : "boundary")
        << ',' << e.transmissibility << '\n';
    edges_csv << row.str();
  }
}

}  // namespace crossfv
