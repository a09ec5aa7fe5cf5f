#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mrmom {

// Link from a triangle to its parent one level up.  `bary` column c holds
// the barycentric coordinates, in the parent, of the child's vertex c; for
// midpoint splits these are exact dyadic values, so parametric maps between
// levels are exact in double precision.
struct ChildLink {
  int parent = -1;
  Eigen::Matrix3d bary = Eigen::Matrix3d::Identity();
  bool green = false;  // conformity bisection; terminal, never split again
};

struct LevelMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
};

// Refinement history: levels[0] is the coarsest mesh, followed by the
// intermediate meshes; the finest level lives in the owning TriMesh.
// links[l][t] describes triangle t of level l+1 (with level levels.size()
// meaning the owning mesh) in terms of level l.
struct NestingRecord {
  std::vector<LevelMesh> levels;
  std::vector<std::vector<ChildLink>> links;

  // Number of meshes in the chain including the finest one.
  int depth() const { return static_cast<int>(levels.size()) + 1; }
};

struct TriMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> labels;  // optional per-triangle region tags
  std::optional<NestingRecord> nesting;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
};

// One RWG degree of freedom per interior edge.  The plus triangle is the one
// that traverses (v0, v1) in its stored vertex order; positive current flows
// from plus to minus.
struct InteriorEdge {
  int v0 = -1, v1 = -1;
  int tri_plus = -1, tri_minus = -1;
  double length = 0.0;
};

struct BoundaryEdge {
  int v0 = -1, v1 = -1;
  int tri = -1;
};

struct EdgeConnectivity {
  std::vector<InteriorEdge> interior;
  std::vector<BoundaryEdge> boundary;
  // interior edge ids incident to each vertex
  std::vector<std::vector<int>> vertex_edges;
  // per triangle: interior edge ids (-1 for boundary) and +1/-1 for the
  // plus/minus side, indexed by the local edge opposite vertex k,
  // i.e. local edge k joins vertices (k+1)%3 and (k+2)%3
  std::vector<std::array<int, 3>> tri_edges;
  std::vector<std::array<int, 3>> tri_signs;
  bool closed = false;

  int num_dofs() const { return static_cast<int>(interior.size()); }
};

struct MeshStats {
  int vertices = 0, edges = 0, triangles = 0;
  double h_min = 0, h_max = 0;     // edge lengths, meters
  double area_min = 0, area_max = 0;
  double area_total = 0;
  bool closed = false;
  int euler_characteristic = 0;
  int genus = 0;  // summed over closed connected components
  int components = 0;
};

// Builds edge connectivity.  Throws std::runtime_error on non-manifold
// input (an edge shared by more than two triangles).
EdgeConnectivity build_connectivity(const TriMesh& mesh);

// Makes triangle orientation globally consistent by breadth-first
// propagation, flipping where needed; closed components are oriented
// outward (positive enclosed volume).  Throws on non-orientable input.
void repair_orientation(TriMesh& mesh);

MeshStats mesh_stats(const TriMesh& mesh);

// Degenerate-triangle guard used by readers and generators.
constexpr double kDegenerateAreaThreshold = 1e-14;  // square meters

// Throws std::runtime_error if the mesh has invalid indices, duplicate or
// degenerate triangles.
void validate_mesh(const TriMesh& mesh);

// ---- primitives -----------------------------------------------------------

enum class PrimitiveShape { Cube, Sphere };

// Cube: `size` is the edge length; the surface is a structured grid with
// round(size / target_h) divisions per edge and a nesting record over the
// dyadic chain of divisor grids.  Sphere: `size` is the radius; projected
// icosahedron subdivision with the subdivision chain as nesting record.
// `max_triangles` guards against accidental memory blow-up.
TriMesh generate_primitive(PrimitiveShape shape, double size, double target_h,
                           int max_triangles = 2'000'000);

// Icosahedron projected onto the sphere of `radius`, subdivided a fixed
// number of times (20 * 4^subdivisions triangles, nesting record included).
TriMesh make_icosphere(double radius, int subdivisions);

// Extra closed test shapes (no nesting record).
TriMesh make_torus(double major_radius, double minor_radius, int segments_major,
                   int segments_minor);
// Closed genus-2 surface built from a voxel solid with two through-holes.
TriMesh make_genus2(double scale = 1.0);

// ---- region refinement ----------------------------------------------------

// Geometric predicate marking the region to refine.
using RegionPredicate = std::function<bool(const Eigen::Vector3d&)>;

// Spherical cap on a sphere centered at the origin: points whose direction
// is within `angle_rad` of `axis`.
RegionPredicate cap_region(const Eigen::Vector3d& axis, double angle_rad);

// Refines every triangle intersecting the region `levels` times (4-way
// midpoint splits), closing hanging nodes after each pass with bisection
// ("green") triangles.  Green triangles are terminal: a pass that would
// need to split one throws; refine with a shrinking region sequence
// instead.  Extends the nesting record by `levels` entries.  When
// radius > 0, newly created vertices are re-projected onto the sphere of
// that radius (used for sphere meshes).
TriMesh refine_region(const TriMesh& mesh, const RegionPredicate& region,
                      int levels, double radius = 0.0);

// Refine every triangle once (no closure needed).
TriMesh refine_uniform(const TriMesh& mesh, double radius = 0.0);

// ---- I/O -------------------------------------------------------------------

// Reads Gmsh ASCII v2.2 (.msh) or OFF based on extension/content.  Runs
// orientation repair and validation; physical tags become labels.
TriMesh load_mesh(const std::string& path);
void save_mesh(const TriMesh& mesh, const std::string& path);

}  // namespace mrmom
