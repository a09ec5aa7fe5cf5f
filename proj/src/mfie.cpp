#include "mrmom/operators.hpp"
#include "mrmom/quadrature.hpp"
#include "mrmom/singular.hpp"
#include "assembly_detail.hpp"

namespace mrmom {

namespace {

using detail::TriGeom;

// Moments of the rotated-gradient kernel over a triangle pair.  With
// u = r - r', w(R) = -(1+jkR) e^{-jkR} / (4 pi R^3) and n the (constant)
// outer-triangle normal, the tested kernel for edge functions with free
// vertices p_m, p_n expands via a x (b x c) = b(a.c) - c(a.b) into terms the
// eight moments below reconstruct:
//   Lam_m . (n x (grad_r g x Lam_n)) / (c_m c_n)
//     = w [ ((r-p_m).u)(n.(r'-p_n)) - ((r-p_m).(r'-p_n))(n.u) ]
struct RotMoments {
  Complex m1{0, 0}, m2{0, 0}, a{0, 0}, ds{0, 0};
  Eigen::Vector3cd m3 = Eigen::Vector3cd::Zero();
  Eigen::Vector3cd m4 = Eigen::Vector3cd::Zero();
  Eigen::Vector3cd b = Eigen::Vector3cd::Zero();
  Eigen::Vector3cd c = Eigen::Vector3cd::Zero();
};

void accumulate(const TriQuadrature& qp, const TriQuadrature& qq,
                const Eigen::Vector3d& n, double k, RotMoments& m) {
  for (int i = 0; i < qp.size(); ++i) {
    const Eigen::Vector3d r = qp.points.row(i).transpose();
    for (int j = 0; j < qq.size(); ++j) {
      const Eigen::Vector3d rp = qq.points.row(j).transpose();
      const Eigen::Vector3d u = r - rp;
      const double R = u.norm();
      const Complex w = -(Complex(1, k * R)) * std::exp(Complex(0, -k * R)) /
                        (4.0 * kPi * R * R * R) * qp.weights[i] *
                        qq.weights[j];
      const double ru = r.dot(u);
      const double nu = n.dot(u);
      const double nrp = n.dot(rp);
      m.m1 += w * ru * nrp;
      m.m2 += w * ru;
      m.m3 += (w * nrp) * u;
      m.m4 += w * u;
      m.a += w * r.dot(rp) * nu;
      m.b += (w * nu) * rp;
      m.c += (w * nu) * r;
      m.ds += w * nu;
    }
  }
}

}  // namespace

Eigen::MatrixXcd assemble_mfie(const TriMesh& mesh,
                               const EdgeConnectivity& conn, const Medium& med,
                               const AssemblyOptions& opts) {
  const int nt = mesh.num_triangles();
  const double k = med.wavenumber();
  const TriQuadratureRule& far_rule = tri_rule(opts.far_degree);
  const TriQuadratureRule& near_rule = tri_rule(opts.near_degree);

  struct TriCache {
    TriGeom geom;
    TriQuadrature far_q;
    std::array<TriDof, 3> dofs;
    int ndofs = 0;
  };
  std::vector<TriCache> cache(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    cache[t].geom = detail::make_geom(mesh.vertices[tri[0]],
                                      mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    cache[t].far_q = detail::map_rule(far_rule, cache[t].geom);
    cache[t].ndofs = collect_tri_dofs(mesh, conn, t, cache[t].dofs);
  }

  Eigen::MatrixXcd op = 0.5 * assemble_gram(mesh, conn).cast<Complex>();

  for (int p = 0; p < nt; ++p) {
    const TriCache& cp = cache[p];
    if (cp.ndofs == 0) continue;
    const Eigen::Vector3d& nrm = cp.geom.normal;
    for (int q = 0; q < nt; ++q) {
      if (q == p) continue;  // coplanar rotated kernel vanishes identically
      const TriCache& cq = cache[q];
      if (cq.ndofs == 0) continue;

      RotMoments m;
      const int shared = shared_vertices(mesh.triangles[p], mesh.triangles[q]);
      if (shared == 0 && detail::separated(cp.geom, cq.geom, opts.near_ratio)) {
        accumulate(cp.far_q, cq.far_q, nrm, k, m);
      } else {
        // touching pairs keep an integrable 1/R^2 concentration along the
        // shared boundary; one extra subdivision level over the regular
        // near treatment localizes it
        const int depth = shared > 0 ? opts.max_depth + 1 : opts.max_depth;
        detail::for_each_subpair(
            cp.geom, cq.geom, opts.near_ratio, depth,
            [&](const TriGeom& sp, const TriGeom& sq, bool limit) {
              const TriQuadratureRule& rule = limit ? near_rule : far_rule;
              accumulate(detail::map_rule(rule, sp),
                         detail::map_rule(rule, sq), nrm, k, m);
            });
      }

      for (int ai = 0; ai < cp.ndofs; ++ai)
        for (int bi = 0; bi < cq.ndofs; ++bi) {
          const TriDof& da = cp.dofs[ai];
          const TriDof& db = cq.dofs[bi];
          const Eigen::Vector3cd pm = da.free_vertex.cast<Complex>();
          const Eigen::Vector3cd pn = db.free_vertex.cast<Complex>();
          const double npn = nrm.dot(db.free_vertex);
          const Complex term1 =
              m.m1 - m.m2 * npn - pm.dot(m.m3) + pm.dot(m.m4) * npn;
          const Complex term2 = m.a - pm.dot(m.b) - pn.dot(m.c) +
                                da.free_vertex.dot(db.free_vertex) * m.ds;
          const double cc = da.sign * db.sign * da.length * db.length /
                            (4.0 * cp.geom.area * cq.geom.area);
          op(da.dof, db.dof) -= cc * (term1 - term2);
        }
    }
  }
  return op;
}

Eigen::VectorXcd mfie_rhs(const TriMesh& mesh, const EdgeConnectivity& conn,
                          const PlaneWave& pw, const Medium& med,
                          const AssemblyOptions& opts) {
  const TriQuadratureRule rule =
      composite_rule(tri_rule(opts.rhs_degree), opts.rhs_levels);
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(conn.num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    std::array<TriDof, 3> dofs;
    const int nd = collect_tri_dofs(mesh, conn, t, dofs);
    if (nd == 0) continue;
    const auto& tri = mesh.triangles[t];
    const auto g = detail::make_geom(mesh.vertices[tri[0]],
                                     mesh.vertices[tri[1]],
                                     mesh.vertices[tri[2]]);
    const TriQuadrature q = detail::map_rule(rule, g);
    for (int i = 0; i < q.size(); ++i) {
      const Eigen::Vector3d r = q.points.row(i).transpose();
      // Eigen's cross() conjugates complex operands, so split n x H into
      // real and imaginary parts instead of casting.
      const Eigen::Vector3cd hv = pw.magnetic(r, med);
      const Eigen::Vector3cd nxh =
          g.normal.cross(hv.real().eval()).cast<Complex>() +
          Complex(0, 1) * g.normal.cross(hv.imag().eval()).cast<Complex>();
      for (int a = 0; a < nd; ++a) {
        const Eigen::Vector3d lam = dofs[a].sign * dofs[a].length /
                                    (2.0 * g.area) *
                                    (r - dofs[a].free_vertex);
        h(dofs[a].dof) += q.weights[i] * lam.cast<Complex>().dot(nxh);
      }
    }
  }
  return h;
}

}  // namespace mrmom
