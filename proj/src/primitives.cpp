#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "mrmom/mesh.hpp"
#include "mrmom/quadrature.hpp"

namespace mrmom {

namespace {

// Barycentric coordinates of `p` in triangle (a, b, c), snapped to exact
// dyadic halves; midpoint refinement chains stay exact in double precision.
Eigen::Vector3d barycentric(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                            const Eigen::Vector3d& c,
                            const Eigen::Vector3d& p) {
  const Eigen::Vector3d e0 = b - a, e1 = c - a, d = p - a;
  const double d00 = e0.dot(e0), d01 = e0.dot(e1), d11 = e1.dot(e1);
  const double dp0 = d.dot(e0), dp1 = d.dot(e1);
  const double det = d00 * d11 - d01 * d01;
  double v = (d11 * dp0 - d01 * dp1) / det;
  double w = (d00 * dp1 - d01 * dp0) / det;
  auto snap = [](double x) {
    for (double q : {0.0, 0.5, 1.0})
      if (std::abs(x - q) < 1e-9) return q;
    return x;
  };
  v = snap(v);
  w = snap(w);
  return {1.0 - v - w, v, w};
}

Eigen::Matrix3d bary_link(const LevelMesh& parent_mesh, int parent,
                          const Eigen::Vector3d& c0, const Eigen::Vector3d& c1,
                          const Eigen::Vector3d& c2) {
  const auto& pt = parent_mesh.triangles[parent];
  const Eigen::Vector3d& a = parent_mesh.vertices[pt[0]];
  const Eigen::Vector3d& b = parent_mesh.vertices[pt[1]];
  const Eigen::Vector3d& c = parent_mesh.vertices[pt[2]];
  Eigen::Matrix3d m;
  m.col(0) = barycentric(a, b, c, c0);
  m.col(1) = barycentric(a, b, c, c1);
  m.col(2) = barycentric(a, b, c, c2);
  return m;
}

LevelMesh to_level(const TriMesh& m) { return {m.vertices, m.triangles}; }

// ---- cube -------------------------------------------------------------

// Structured cube surface with `m` divisions per edge; every grid cell is
// split along the same local diagonal so that halving the grid nests the
// triangles exactly 4-to-1.
TriMesh cube_grid(double size, int m) {
  TriMesh mesh;
  const double step = size / m;
  std::map<std::tuple<int, int, int>, int> vert_ids;
  auto vertex = [&](int i, int j, int k) {
    auto it = vert_ids.find({i, j, k});
    if (it != vert_ids.end()) return it->second;
    const int id = mesh.num_vertices();
    vert_ids[{i, j, k}] = id;
    mesh.vertices.emplace_back(-size / 2 + i * step, -size / 2 + j * step,
                               -size / 2 + k * step);
    return id;
  };

  struct Face {
    Eigen::Vector3i origin, du, dv;
  };
  // du x dv points outward for each face
  const std::vector<Face> faces = {
      {{0, 0, m}, {1, 0, 0}, {0, 1, 0}},   // +z
      {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}},   // -z
      {{m, 0, 0}, {0, 1, 0}, {0, 0, 1}},   // +x
      {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}},   // -x
      {{0, m, 0}, {0, 0, 1}, {1, 0, 0}},   // +y
      {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}},   // -y
  };
  for (const auto& f : faces) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        auto at = [&](int da, int db) {
          const Eigen::Vector3i p = f.origin + (a + da) * f.du + (b + db) * f.dv;
          return vertex(p.x(), p.y(), p.z());
        };
        const int p00 = at(0, 0), p10 = at(1, 0), p11 = at(1, 1), p01 = at(0, 1);
        mesh.triangles.push_back({p00, p10, p11});  // below the diagonal
        mesh.triangles.push_back({p00, p11, p01});  // above the diagonal
      }
    }
  }
  return mesh;
}

// ---- icosphere --------------------------------------------------------

TriMesh icosahedron(double radius) {
  TriMesh m;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::vector<Eigen::Vector3d> raw = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& v : raw) m.vertices.push_back(v.normalized() * radius);
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                 {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                 {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                 {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

}  // namespace

TriMesh refine_uniform(const TriMesh& mesh, double radius) {
  if (mesh.nesting) {
    for (const auto& l : mesh.nesting->links.empty()
                             ? std::vector<ChildLink>{}
                             : mesh.nesting->links.back())
      if (l.green)
        throw std::runtime_error(
            "refine_uniform: mesh contains green closure triangles, which are "
            "terminal");
  }
  TriMesh out;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoints;
  auto midpoint = [&](int a, int b) {
    const auto k = std::minmax(a, b);
    auto it = midpoints.find({k.first, k.second});
    if (it != midpoints.end()) return it->second;
    const int id = out.num_vertices();
    Eigen::Vector3d p = (mesh.vertices[a] + mesh.vertices[b]) / 2.0;
    if (radius > 0) p = p.normalized() * radius;
    out.vertices.push_back(p);
    midpoints[{k.first, k.second}] = id;
    return id;
  };

  const LevelMesh parent_level = to_level(mesh);
  std::vector<ChildLink> links;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const int a = midpoint(tri[0], tri[1]);
    const int b = midpoint(tri[1], tri[2]);
    const int c = midpoint(tri[2], tri[0]);
    const std::array<std::array<int, 3>, 4> kids = {{
        {tri[0], a, c}, {tri[1], b, a}, {tri[2], c, b}, {a, b, c}}};
    for (const auto& kid : kids) {
      out.triangles.push_back(kid);
      ChildLink link;
      link.parent = t;
      link.bary = bary_link(parent_level, t, out.vertices[kid[0]],
                            out.vertices[kid[1]], out.vertices[kid[2]]);
      // For projected spheres the parametric (pre-projection) placement is
      // the exact dyadic one; record it rather than the projected fit.
      links.push_back(link);
      if (!mesh.labels.empty())
        out.labels.push_back(mesh.labels[t]);
    }
  }
  // Midpoint children have exact dyadic placement by construction; overwrite
  // the fitted coordinates with the exact values (identical for flat parents,
  // and the correct parametric map for projected vertices).
  {
    const Eigen::Vector3d e0(1, 0, 0), e1(0, 1, 0), e2(0, 0, 1);
    const Eigen::Vector3d m01 = (e0 + e1) / 2, m12 = (e1 + e2) / 2,
                          m20 = (e2 + e0) / 2;
    auto cols = [](const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                   const Eigen::Vector3d& z) {
      Eigen::Matrix3d m;
      m.col(0) = x; m.col(1) = y; m.col(2) = z;
      return m;
    };
    const std::array<Eigen::Matrix3d, 4> exact = {
        cols(e0, m01, m20), cols(e1, m12, m01), cols(e2, m20, m12),
        cols(m01, m12, m20)};
    for (size_t i = 0; i < links.size(); ++i) links[i].bary = exact[i % 4];
  }

  if (mesh.nesting) {
    out.nesting = mesh.nesting;
  } else {
    out.nesting = NestingRecord{};
  }
  out.nesting->levels.push_back(parent_level);
  out.nesting->links.push_back(std::move(links));
  return out;
}

TriMesh generate_primitive(PrimitiveShape shape, double size, double target_h,
                           int max_triangles) {
  if (size <= 0 || target_h <= 0)
    throw std::invalid_argument("generate_primitive: size and target_h must "
                                "be positive");
  if (shape == PrimitiveShape::Cube) {
    int m = std::max(1, static_cast<int>(std::lround(size / target_h)));
    if (12LL * m * m > max_triangles)
      throw std::runtime_error("generate_primitive: target_h too small for "
                               "the triangle budget");
    // dyadic chain down to the odd base grid
    int levels = 0;
    int base = m;
    while (base % 2 == 0) {
      base /= 2;
      ++levels;
    }
    TriMesh mesh = cube_grid(size, base);
    repair_orientation(mesh);
    for (int l = 0; l < levels; ++l) mesh = refine_uniform(mesh);
    validate_mesh(mesh);
    return mesh;
  }
  // Sphere: subdivided icosahedron, edge length shrinks by 2 per level.
  const double icosa_edge = size * 4.0 / std::sqrt(10.0 + 2.0 * std::sqrt(5.0));
  int levels = 0;
  double h = icosa_edge;
  while (h > target_h * 1.5 && levels < 10) {
    h /= 2;
    ++levels;
  }
  if (20LL << (2 * levels) > max_triangles)
    throw std::runtime_error("generate_primitive: target_h too small for the "
                             "triangle budget");
  TriMesh mesh = icosahedron(size);
  repair_orientation(mesh);
  for (int l = 0; l < levels; ++l) mesh = refine_uniform(mesh, size);
  validate_mesh(mesh);
  return mesh;
}

TriMesh make_icosphere(double radius, int subdivisions) {
  if (radius <= 0 || subdivisions < 0)
    throw std::invalid_argument("make_icosphere: bad radius or subdivisions");
  TriMesh mesh = icosahedron(radius);
  repair_orientation(mesh);
  for (int l = 0; l < subdivisions; ++l) mesh = refine_uniform(mesh, radius);
  validate_mesh(mesh);
  return mesh;
}

TriMesh make_torus(double major_radius, double minor_radius,
                   int segments_major, int segments_minor) {
  TriMesh m;
  const int nu = segments_major, nv = segments_minor;
  for (int i = 0; i < nu; ++i) {
    const double u = 2 * M_PI * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = 2 * M_PI * j / nv;
      const double w = major_radius + minor_radius * std::cos(v);
      m.vertices.emplace_back(w * std::cos(u), w * std::sin(u),
                              minor_radius * std::sin(v));
    }
  }
  auto id = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  repair_orientation(m);
  validate_mesh(m);
  return m;
}

TriMesh make_genus2(double scale) {
  // Voxel slab, 5x3x1 cells with two through-holes; the boundary surface is
  // a closed orientable genus-2 mesh.
  auto solid = [](int x, int y, int z) {
    if (x < 0 || x >= 5 || y < 0 || y >= 3 || z < 0 || z >= 1) return false;
    if (y == 1 && (x == 1 || x == 3)) return false;
    return true;
  };
  TriMesh m;
  std::map<std::tuple<int, int, int>, int> ids;
  auto vert = [&](int x, int y, int z) {
    auto it = ids.find({x, y, z});
    if (it != ids.end()) return it->second;
    const int id = m.num_vertices();
    ids[{x, y, z}] = id;
    m.vertices.emplace_back(scale * x, scale * y, scale * z);
    return id;
  };
  const int dirs[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                          {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 1; ++z) {
        if (!solid(x, y, z)) continue;
        for (const auto& d : dirs) {
          if (solid(x + d[0], y + d[1], z + d[2])) continue;
          // Face between the solid cell and the empty neighbor; orientation
          // is made consistent and outward by repair_orientation below.
          const Eigen::Vector3i n(d[0], d[1], d[2]);
          const Eigen::Vector3i u = n.x() != 0 ? Eigen::Vector3i(0, 1, 0)
                                               : Eigen::Vector3i(1, 0, 0);
          const Eigen::Vector3i v = n.x() == 0 && n.y() == 0
                                        ? Eigen::Vector3i(0, 1, 0)
                                        : Eigen::Vector3i(0, 0, 1);
          const Eigen::Vector3i base(x + (d[0] > 0), y + (d[1] > 0),
                                     z + (d[2] > 0));
          auto corner = [&](int a, int b) {
            const Eigen::Vector3i p = base + a * u + b * v;
            return vert(p.x(), p.y(), p.z());
          };
          m.triangles.push_back({corner(0, 0), corner(1, 0), corner(1, 1)});
          m.triangles.push_back({corner(0, 0), corner(1, 1), corner(0, 1)});
        }
      }
  repair_orientation(m);
  validate_mesh(m);
  return m;
}

}  // namespace mrmom
