#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "mrmom/farfield.hpp"
#include "mrmom/operators.hpp"
#include "mrmom/quadrature.hpp"

using namespace mrmom;

namespace {

TriMesh tetrahedron(double scale = 1.0) {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (auto& v : m.vertices) v *= scale;
  m.triangles = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  repair_orientation(m);
  return m;
}

// Two edge functions on separate triangle pairs, far apart and differently
// oriented, so every pair of source/test triangles is smooth.
TriMesh distant_dipoles() {
  TriMesh m;
  m.vertices = {{0, 0, 0},    {1, 0, 0},     {0.2, 0.9, 0},  {0.8, -0.7, 0},
                {4, 0.3, 0.5}, {4.6, 1.1, 0.9}, {3.7, 1.0, 1.2}, {4.9, 0.2, 0.1}};
  m.triangles = {{0, 1, 2}, {1, 0, 3}, {4, 5, 6}, {5, 4, 7}};
  return m;
}

Eigen::Vector3d row_point(const TriQuadrature& q, int i) {
  return q.points.row(i).transpose();
}

// Brute tensor quadrature of the two mixed-potential blocks for one entry.
void brute_efie_entry(const TriMesh& mesh, const EdgeConnectivity& conn,
                      double k, int m_dof, int n_dof, Complex* vector_block,
                      Complex* scalar_block) {
  const TriQuadratureRule& rule = composite_rule(tri_rule(6), 2);
  Complex vec = 0, sca = 0;
  for (int tm = 0; tm < mesh.num_triangles(); ++tm)
    for (int tn = 0; tn < mesh.num_triangles(); ++tn) {
      std::array<TriDof, 3> dm, dn;
      const int cm = collect_tri_dofs(mesh, conn, tm, dm);
      const int cn = collect_tri_dofs(mesh, conn, tn, dn);
      const TriDof* fm = nullptr;
      const TriDof* fn = nullptr;
      for (int i = 0; i < cm; ++i)
        if (dm[i].dof == m_dof) fm = &dm[i];
      for (int i = 0; i < cn; ++i)
        if (dn[i].dof == n_dof) fn = &dn[i];
      if (!fm || !fn) continue;

      const auto& t1 = mesh.triangles[tm];
      const auto& t2 = mesh.triangles[tn];
      const double area_m = triangle_area(mesh.vertices[t1[0]],
                                          mesh.vertices[t1[1]],
                                          mesh.vertices[t1[2]]);
      const double area_n = triangle_area(mesh.vertices[t2[0]],
                                          mesh.vertices[t2[1]],
                                          mesh.vertices[t2[2]]);
      const TriQuadrature qm = map_rule(rule, mesh.vertices[t1[0]],
                                        mesh.vertices[t1[1]],
                                        mesh.vertices[t1[2]]);
      const TriQuadrature qn = map_rule(rule, mesh.vertices[t2[0]],
                                        mesh.vertices[t2[1]],
                                        mesh.vertices[t2[2]]);
      const double fac_m = fm->sign * fm->length / (2.0 * area_m);
      const double fac_n = fn->sign * fn->length / (2.0 * area_n);
      for (int i = 0; i < qm.size(); ++i)
        for (int j = 0; j < qn.size(); ++j) {
          const Eigen::Vector3d r = row_point(qm, i), rp = row_point(qn, j);
          const Complex g = green(k, (r - rp).norm());
          const double w = qm.weights(i) * qn.weights(j);
          vec += w * g * fac_m * fac_n *
                 (r - fm->free_vertex).dot(rp - fn->free_vertex);
          sca += w * g * (2 * fac_m) * (2 * fac_n);
        }
    }
  *vector_block = vec;
  *scalar_block = sca;
}

}  // namespace

TEST_CASE("mixed-potential blocks match brute quadrature on a smooth pair") {
  const TriMesh mesh = distant_dipoles();
  const EdgeConnectivity conn = build_connectivity(mesh);
  REQUIRE(conn.num_dofs() == 2);
  const Medium med = free_space(1e6);

  const EfieParts parts = assemble_efie_parts(mesh, conn, med);
  Complex vec, sca;
  brute_efie_entry(mesh, conn, med.wavenumber(), 0, 1, &vec, &sca);
  CHECK(std::abs(parts.vector_part(0, 1) - vec) < 1e-8 * std::abs(vec));
  CHECK(std::abs(parts.scalar_part(0, 1) - sca) < 1e-8 * std::abs(sca));

  // combination carries the frequency weights
  const Eigen::MatrixXcd Z = combine_efie(parts, med);
  const Complex want = Complex(0, med.omega() * med.mu) * vec +
                       sca / Complex(0, med.omega() * med.eps);
  CHECK(std::abs(Z(0, 1) - want) < 1e-8 * std::abs(want));
}

TEST_CASE("operator entries are invariant under rigid motion") {
  const TriMesh base = tetrahedron();
  TriMesh moved = base;
  Eigen::Matrix3d R =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized())
          .toRotationMatrix();
  for (auto& v : moved.vertices) v = R * v + Eigen::Vector3d(5, -2, 1);
  const EdgeConnectivity ca = build_connectivity(base);
  const EdgeConnectivity cb = build_connectivity(moved);
  const Medium med = free_space(50e6);
  const Eigen::MatrixXcd Za = assemble_efie(base, ca, med);
  const Eigen::MatrixXcd Zb = assemble_efie(moved, cb, med);
  CHECK((Za - Zb).norm() < 1e-12 * Za.norm());
  const Eigen::MatrixXcd Ba = assemble_mfie(base, ca, med);
  const Eigen::MatrixXcd Bb = assemble_mfie(moved, cb, med);
  CHECK((Ba - Bb).norm() < 1e-12 * Ba.norm());
}

TEST_CASE("electric operator is complex symmetric") {
  const TriMesh mesh = make_icosphere(0.5, 1);
  const EdgeConnectivity conn = build_connectivity(mesh);
  const Eigen::MatrixXcd Z = assemble_efie(mesh, conn, free_space(300e6));
  CHECK((Z - Z.transpose()).norm() < 1e-12 * Z.norm());
}

TEST_CASE("edge-function Gram matrix: exact quadrature and positivity") {
  const TriMesh mesh = tetrahedron(0.37);
  const EdgeConnectivity conn = build_connectivity(mesh);
  const Eigen::MatrixXd G = assemble_gram(mesh, conn);
  REQUIRE(G.rows() == 6);

  // degree-2 integrand, so a degree-2 rule is exact
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(6, 6);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<TriDof, 3> dofs;
    const int c = collect_tri_dofs(mesh, conn, t, dofs);
    const auto& tri = mesh.triangles[t];
    const double area = triangle_area(mesh.vertices[tri[0]],
                                      mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    const TriQuadrature q = map_rule(tri_rule(2), mesh.vertices[tri[0]],
                                     mesh.vertices[tri[1]],
                                     mesh.vertices[tri[2]]);
    for (int a = 0; a < c; ++a)
      for (int b = 0; b < c; ++b) {
        double s = 0;
        for (int i = 0; i < q.size(); ++i) {
          const Eigen::Vector3d r = row_point(q, i);
          s += q.weights(i) * (r - dofs[a].free_vertex)
                                  .dot(r - dofs[b].free_vertex);
        }
        want(dofs[a].dof, dofs[b].dof) +=
            dofs[a].sign * dofs[b].sign * dofs[a].length * dofs[b].length /
            (4.0 * area * area) * s;
      }
  }
  CHECK((G - want).norm() < 1e-13 * want.norm());

  CHECK((G - G.transpose()).norm() < 1e-14 * G.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  CHECK(es.eigenvalues().minCoeff() > 0);
}

TEST_CASE("coplanar pair: rotated kernel vanishes, magnetic operator = G/2") {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0.3, 0.8, 0}, {0.7, -0.9, 0}};
  m.triangles = {{0, 1, 2}, {1, 0, 3}};
  const EdgeConnectivity conn = build_connectivity(m);
  const Medium med = free_space(200e6);
  const Eigen::MatrixXcd B = assemble_mfie(m, conn, med);
  const Eigen::MatrixXd G = assemble_gram(m, conn);
  CHECK((B - Complex(0.5, 0) * G).norm() <= 1e-14 * G.norm());
}

TEST_CASE("static limit: sphere current is 1.5 times the tangential field") {
  const TriMesh mesh = make_icosphere(1.0, 2);
  const EdgeConnectivity conn = build_connectivity(mesh);
  const Medium med = free_space(1.0);  // radius/wavelength ~ 3e-9
  const PlaneWave pw = make_plane_wave({0, 0, 1}, {1, 0, 0});
  const Eigen::MatrixXcd B = assemble_mfie(mesh, conn, med);
  const Eigen::VectorXcd h = mfie_rhs(mesh, conn, pw, med);
  const Eigen::VectorXcd x = B.partialPivLu().solve(h);

  double num = 0, den = 0;
  const Eigen::Vector3cd H0 =
      pw.magnetic(Eigen::Vector3d::Zero(), med);  // constant at this k
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<TriDof, 3> dofs;
    const int c = collect_tri_dofs(mesh, conn, t, dofs);
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector3d centroid = (mesh.vertices[tri[0]] +
                                      mesh.vertices[tri[1]] +
                                      mesh.vertices[tri[2]]) / 3.0;
    const double area = triangle_area(mesh.vertices[tri[0]],
                                      mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    Eigen::Vector3cd J = Eigen::Vector3cd::Zero();
    for (int a = 0; a < c; ++a)
      J += x(dofs[a].dof) * dofs[a].sign * dofs[a].length / (2.0 * area) *
           (centroid - dofs[a].free_vertex).cast<Complex>();
    const Eigen::Vector3d n = centroid.normalized();
    const Eigen::Vector3cd want =
        1.5 * (n.cross(H0.real()).cast<Complex>() +
               Complex(0, 1) * n.cross(H0.imag()).cast<Complex>());
    num += area * (J - want).squaredNorm();
    den += area * want.squaredNorm();
  }
  CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("static magnetic spectrum fills [1/3, 2/3] on the sphere") {
  // Eigenfunctions of the static rotated kernel on the sphere are the two
  // vector-harmonic families with eigenvalues +-1/(2(2n+1)); the whole
  // operator G/2 - K therefore has its extreme eigenvalues at 1/2 -+ 1/6.
  const TriMesh mesh = make_icosphere(1.0, 1);
  const EdgeConnectivity conn = build_connectivity(mesh);
  const Medium med = free_space(1.0);
  const Eigen::MatrixXcd B = assemble_mfie(mesh, conn, med);
  const Eigen::MatrixXd G = assemble_gram(mesh, conn);
  CHECK(B.imag().norm() < 1e-6 * B.real().norm());

  const Eigen::MatrixXd M = G.lu().solve(B.real());
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::VectorXcd ev = es.eigenvalues();
  CHECK(ev.imag().cwiseAbs().maxCoeff() < 1e-8);
  const Eigen::VectorXd re = ev.real();
  CHECK(re.minCoeff() == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  CHECK(re.maxCoeff() == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  int near_lo = 0, near_hi = 0;
  for (int i = 0; i < re.size(); ++i) {
    if (std::abs(re(i) - 1.0 / 3.0) < 0.02) ++near_lo;
    if (std::abs(re(i) - 2.0 / 3.0) < 0.02) ++near_hi;
  }
  // n = 1 harmonics are threefold degenerate in each family
  CHECK(near_lo >= 3);
  CHECK(near_hi >= 3);
}

TEST_CASE("plane-wave structure and excitation projections") {
  CHECK_THROWS(make_plane_wave({0, 0, 1}, {0, 0.6, 0.8}));
  const PlaneWave pw = make_plane_wave({0, 0, 1}, {2, 0, 0}, 3.0);
  CHECK(pw.polarization.norm() == doctest::Approx(1.0));
  const Medium med = free_space(30e6);
  const Eigen::Vector3d r(0.3, -0.2, 1.7);
  const Eigen::Vector3cd E = pw.electric(r, med);
  const Eigen::Vector3cd H = pw.magnetic(r, med);
  // H = dir x E / eta, componentwise since dir is real
  Eigen::Vector3cd want;
  const Eigen::Vector3d d = pw.direction;
  want = (d.cross(E.real()) + Complex(0, 1) * d.cross(E.imag())) /
         med.impedance();
  CHECK((H - want).norm() < 1e-14 * H.norm());
  CHECK(std::abs(E.norm() - 3.0) < 1e-12);
  // phase advance along the propagation direction
  const Eigen::Vector3cd E0 = pw.electric(Eigen::Vector3d::Zero(), med);
  const double kz = med.wavenumber() * d.dot(r);
  CHECK(std::abs(E(0) - E0(0) * std::exp(Complex(0, -kz))) < 1e-12);

  // projection of the incident field onto the edge functions
  const TriMesh mesh = tetrahedron(0.3);
  const EdgeConnectivity conn = build_connectivity(mesh);
  const Eigen::VectorXcd v = efie_rhs(mesh, conn, pw, med);
  const TriQuadratureRule& rule = composite_rule(tri_rule(6), 2);
  Eigen::VectorXcd want_v = Eigen::VectorXcd::Zero(conn.num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<TriDof, 3> dofs;
    const int c = collect_tri_dofs(mesh, conn, t, dofs);
    const auto& tri = mesh.triangles[t];
    const double area = triangle_area(mesh.vertices[tri[0]],
                                      mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    const TriQuadrature q = map_rule(rule, mesh.vertices[tri[0]],
                                     mesh.vertices[tri[1]],
                                     mesh.vertices[tri[2]]);
    for (int i = 0; i < q.size(); ++i) {
      const Eigen::Vector3d rr = row_point(q, i);
      const Eigen::Vector3cd Ei = pw.electric(rr, med);
      for (int a = 0; a < c; ++a)
        want_v(dofs[a].dof) +=
            q.weights(i) * dofs[a].sign * dofs[a].length / (2.0 * area) *
            (rr - dofs[a].free_vertex).cast<Complex>().dot(Ei);
    }
  }
  CHECK((v - want_v).norm() < 1e-10 * want_v.norm());
}

TEST_CASE("combined equation keeps pure electric rows on open parts") {
  const TriMesh open_mesh = distant_dipoles();
  const EdgeConnectivity oc = build_connectivity(open_mesh);
  const auto rows = efie_only_rows(open_mesh, oc);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]);
  CHECK(rows[1]);
  const Medium med = free_space(1e6);
  const Eigen::MatrixXcd Z = assemble_efie(open_mesh, oc, med);
  const Eigen::MatrixXcd B = Eigen::MatrixXcd::Ones(2, 2);  // must be ignored
  const Eigen::MatrixXcd C = cfie_combine(Z, B, med, rows, 0.5);
  CHECK((C - Z / med.impedance()).norm() < 1e-15 * Z.norm());

  const TriMesh sphere = make_icosphere(1.0, 1);
  const EdgeConnectivity sc = build_connectivity(sphere);
  const auto srows = efie_only_rows(sphere, sc);
  for (bool f : srows) CHECK_FALSE(f);
}

TEST_CASE("combined operator blends the two field equations row-wise") {
  const TriMesh mesh = make_icosphere(1.0, 1);
  const EdgeConnectivity conn = build_connectivity(mesh);
  const Medium med = free_space(200e6);
  const Eigen::MatrixXcd Z = assemble_efie(mesh, conn, med);
  const Eigen::MatrixXcd B = assemble_mfie(mesh, conn, med);
  const auto rows = efie_only_rows(mesh, conn);
  const double alpha = 0.3;
  const Eigen::MatrixXcd C = cfie_combine(Z, B, med, rows, alpha);
  const Eigen::MatrixXcd want = Z / med.impedance() + alpha * B;
  CHECK((C - want).norm() < 1e-14 * want.norm());
  const Eigen::MatrixXcd C2 = assemble_cfie(mesh, conn, med, alpha);
  CHECK((C2 - want).norm() < 1e-14 * want.norm());
}
