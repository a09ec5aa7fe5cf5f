#include <Eigen/SVD>

#include "doctest.h"
#include "mrmom/hierarchy.hpp"
#include "mrmom/operators.hpp"
#include "mrmom/solvers.hpp"

using namespace mrmom;

namespace {

int count_kind(const MrBasis& b, MrKind k) {
  int c = 0;
  for (MrKind kk : b.kind) c += kk == k;
  return c;
}

// Net flux out of every triangle must vanish for a divergence-free column.
double max_triangle_divergence(const TriMesh& mesh,
                               const EdgeConnectivity& conn,
                               const Eigen::SparseMatrix<double>& Q, int col) {
  Eigen::VectorXd c = Q.col(col);
  double worst = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    double s = 0;
    for (int k = 0; k < 3; ++k) {
      const int e = conn.tri_edges[t][k];
      if (e >= 0)
        s += conn.tri_signs[t][k] * conn.interior[e].length * c(e);
    }
    worst = std::max(worst, std::abs(s));
  }
  return worst / std::max(1.0, c.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("cycle counts follow the surface topology") {
  {
    const TriMesh sphere = make_icosphere(1.0, 2);
    const EdgeConnectivity conn = build_connectivity(sphere);
    const MrBasis b =
        build_mr_basis(sphere, conn, 0, LoopVariant::kPointLoops);
    CHECK(count_kind(b, MrKind::kVertexLoop) == sphere.num_vertices() - 1);
    CHECK(count_kind(b, MrKind::kGlobalLoop) == 0);
  }
  {
    const TriMesh torus = make_torus(1.0, 0.3, 16, 8);
    const EdgeConnectivity conn = build_connectivity(torus);
    const MrBasis b = build_mr_basis(torus, conn, 0, LoopVariant::kPointLoops);
    CHECK(count_kind(b, MrKind::kVertexLoop) == torus.num_vertices() - 1);
    CHECK(count_kind(b, MrKind::kGlobalLoop) == 2);
  }
  {
    const TriMesh g2 = make_genus2();
    const EdgeConnectivity conn = build_connectivity(g2);
    const MrBasis b = build_mr_basis(g2, conn, 0, LoopVariant::kPointLoops);
    CHECK(count_kind(b, MrKind::kGlobalLoop) == 4);
    CHECK(count_kind(b, MrKind::kVertexLoop) == g2.num_vertices() - 1);
  }
}

TEST_CASE("an open surface is rejected") {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  m.triangles = {{0, 1, 2}, {1, 3, 2}};
  const EdgeConnectivity conn = build_connectivity(m);
  CHECK_THROWS_AS(build_mr_basis(m, conn, 0), std::runtime_error);
}

TEST_CASE("column bookkeeping spans the hierarchy") {
  const TriMesh cube = generate_primitive(PrimitiveShape::Cube, 1.0, 0.25);
  const EdgeConnectivity conn = build_connectivity(cube);
  for (LoopVariant variant :
       {LoopVariant::kHierarchicalLoops, LoopVariant::kPointLoops}) {
    const MrBasis b = build_mr_basis(cube, conn, 0, variant);
    CHECK(b.Q.rows() == conn.num_dofs());
    CHECK(b.Q.cols() == conn.num_dofs());
    CHECK(b.stop_level == 0);
    CHECK(b.num_levels == 3);  // 1/h chain 1, 2, 4
    int total = 0;
    for (int l = 0; l < b.num_levels; ++l)
      total += static_cast<int>(b.columns_at(l).size());
    CHECK(total == conn.num_dofs());
    CHECK_FALSE(b.columns_at(0).empty());
    for (int lvl : b.level) {
      CHECK(lvl >= 0);
      CHECK(lvl < b.num_levels);
    }
  }
  // clamped stop level
  const MrBasis deep = build_mr_basis(cube, conn, 99);
  CHECK(deep.stop_level == 2);
}

TEST_CASE("every cycle column is divergence free on every triangle") {
  const TriMesh sphere = make_icosphere(0.5, 2);  // curvature-snapped levels
  const EdgeConnectivity conn = build_connectivity(sphere);
  for (LoopVariant variant :
       {LoopVariant::kHierarchicalLoops, LoopVariant::kPointLoops}) {
    const MrBasis b = build_mr_basis(sphere, conn, 0, variant);
    for (int j = 0; j < b.Q.cols(); ++j) {
      if (b.kind[j] != MrKind::kVertexLoop && b.kind[j] != MrKind::kGlobalLoop)
        continue;
      CHECK(max_triangle_divergence(sphere, conn, b.Q, j) < 1e-12);
    }
  }
}

TEST_CASE("cycle columns are annihilated by the charge block") {
  const TriMesh cube = generate_primitive(PrimitiveShape::Cube, 1.0, 0.5);
  const EdgeConnectivity conn = build_connectivity(cube);
  const Medium med = free_space(1e6);
  const EfieParts parts = assemble_efie_parts(cube, conn, med);
  const double zs_norm = parts.scalar_part.norm();
  for (LoopVariant variant :
       {LoopVariant::kHierarchicalLoops, LoopVariant::kPointLoops}) {
    const MrBasis b = build_mr_basis(cube, conn, 0, variant);
    const Eigen::MatrixXd Qd(b.Q);
    for (int j = 0; j < b.Q.cols(); ++j) {
      if (b.kind[j] != MrKind::kVertexLoop && b.kind[j] != MrKind::kGlobalLoop)
        continue;
      const Eigen::VectorXcd r =
          parts.scalar_part * Qd.col(j).cast<Complex>();
      CHECK(r.norm() <= 1e-12 * zs_norm * Qd.col(j).norm());
    }
  }
}

TEST_CASE("change of basis is well separated from singularity") {
  const TriMesh cube = generate_primitive(PrimitiveShape::Cube, 1.0, 0.5);
  const EdgeConnectivity conn = build_connectivity(cube);
  for (LoopVariant variant :
       {LoopVariant::kHierarchicalLoops, LoopVariant::kPointLoops}) {
    const MrBasis b = build_mr_basis(cube, conn, 0, variant);
    const Eigen::MatrixXd Qd(b.Q);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Qd);
    CHECK(svd.singularValues().minCoeff() >
          1e-10 * svd.singularValues().maxCoeff());
  }
}

TEST_CASE("diagonal rescale normalizes the transformed diagonal") {
  const TriMesh cube = generate_primitive(PrimitiveShape::Cube, 1.0, 0.5);
  const EdgeConnectivity conn = build_connectivity(cube);
  const Medium med = free_space(1e6);
  const Eigen::MatrixXcd Z = assemble_efie(cube, conn, med);
  const MrBasis b = build_mr_basis(cube, conn, 0);
  const MrTransformed t = apply_mr(Z, b.Q);
  for (int i = 0; i < t.matrix.rows(); ++i)
    CHECK(std::abs(t.matrix(i, i) - Complex(1, 0)) < 1e-12);
  // rescale magnitudes match the plain diagonal magnitudes
  const Eigen::SparseMatrix<Complex> Qc = b.Q.cast<Complex>();
  const Eigen::MatrixXcd M = Qc.transpose() * Z * Qc;
  for (int i = 0; i < M.rows(); ++i)
    CHECK(std::abs(t.scale(i)) ==
          doctest::Approx(1.0 / std::sqrt(std::abs(M(i, i)))).epsilon(1e-10));
}

TEST_CASE("transformed solve recovers the plain solution") {
  const TriMesh cube = generate_primitive(PrimitiveShape::Cube, 1.0, 0.5);
  const EdgeConnectivity conn = build_connectivity(cube);
  const Medium med = free_space(1e6);
  const PlaneWave pw = make_plane_wave({0, 0, 1}, {1, 0, 0});
  const Eigen::MatrixXcd C = assemble_cfie(cube, conn, med);
  const Eigen::VectorXcd rhs = assemble_cfie_rhs(cube, conn, pw, med);
  const Eigen::VectorXcd x_plain = direct_solve(C, rhs);
  for (LoopVariant variant :
       {LoopVariant::kHierarchicalLoops, LoopVariant::kPointLoops}) {
    const MrBasis b = build_mr_basis(cube, conn, 0, variant);
    const MrTransformed t = apply_mr(C, b.Q);
    const Eigen::VectorXcd y =
        direct_solve(t.matrix, mr_rhs(b.Q, t.scale, rhs));
    const Eigen::VectorXcd x = mr_recover(b.Q, t.scale, y);
    CHECK((x - x_plain).norm() < 1e-8 * x_plain.norm());
  }
}

TEST_CASE("stop level rule picks the coarsest electrically fine mesh") {
  const TriMesh cube = generate_primitive(PrimitiveShape::Cube, 1.0, 0.25);
  const HierarchyLevels levels = build_levels(cube);
  REQUIRE(levels.depth() == 3);
  // level h_max: 1/h = 1, 2, 4 -> sqrt(2), sqrt(2)/2, sqrt(2)/4
  StopRule rule;
  Medium med = free_space(1.0);
  auto freq_for_lambda = [&](double lam) { return med.speed() / lam; };
  med.frequency = freq_for_lambda(8 * 1.5);  // all levels qualify
  CHECK(choose_stop_level(levels, med, rule) == 0);
  med.frequency = freq_for_lambda(8 * 0.8);  // only levels 1, 2
  CHECK(choose_stop_level(levels, med, rule) == 1);
  med.frequency = freq_for_lambda(8 * 0.01);  // none: fall to finest
  CHECK(choose_stop_level(levels, med, rule) == 2);
  rule.fixed_index = 1;
  med.frequency = freq_for_lambda(8 * 1.5);
  CHECK(choose_stop_level(levels, med, rule) == 1);
}

TEST_CASE("levels rebuild the nesting chain") {
  const TriMesh sphere = make_icosphere(1.0, 2);
  const HierarchyLevels levels = build_levels(sphere);
  CHECK(levels.depth() == 3);
  CHECK(levels.meshes[0].num_triangles() == 20);
  CHECK(levels.meshes[1].num_triangles() == 80);
  CHECK(levels.meshes[2].num_triangles() == 320);
  // ancestor maps: every finest triangle descends from its level-0 ancestor
  for (int t = 0; t < 320; ++t) {
    const int anc = levels.ancestor[0][t];
    REQUIRE(anc >= 0);
    REQUIRE(anc < 20);
    const auto& desc = levels.descendants[0][anc];
    CHECK(std::find(desc.begin(), desc.end(), t) != desc.end());
  }
}
