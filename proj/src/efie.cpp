#include "mrmom/operators.hpp"
#include "mrmom/quadrature.hpp"
#include "mrmom/singular.hpp"
#include "assembly_detail.hpp"

namespace mrmom {

namespace {

using detail::TriGeom;

// Kernel moments over a triangle pair, enough to reconstruct every edge-pair
// entry:  a0 = ∬g,  ar = ∬ r g,  arp = ∬ r' g,  adot = ∬ (r.r') g.
struct PairMoments {
  Complex a0{0, 0};
  Eigen::Vector3cd ar = Eigen::Vector3cd::Zero();
  Eigen::Vector3cd arp = Eigen::Vector3cd::Zero();
  Complex adot{0, 0};

  void add(double w, const Eigen::Vector3d& r, const Eigen::Vector3d& rp,
           Complex kernel) {
    const Complex wk = w * kernel;
    a0 += wk;
    ar += wk * r;
    arp += wk * rp;
    adot += wk * r.dot(rp);
  }
  PairMoments& operator+=(const PairMoments& o) {
    a0 += o.a0;
    ar += o.ar;
    arp += o.arp;
    adot += o.adot;
    return *this;
  }
  // moments of the same pair with the roles of r and r' exchanged
  PairMoments swapped() const { return {a0, arp, ar, adot}; }
};

PairMoments average(const PairMoments& a, const PairMoments& b) {
  return {0.5 * (a.a0 + b.a0), 0.5 * (a.ar + b.ar), 0.5 * (a.arp + b.arp),
          0.5 * (a.adot + b.adot)};
}

// full kernel, tensor rule
void accumulate_plain(const TriQuadrature& qp, const TriQuadrature& qq,
                      double k, PairMoments& m) {
  for (int i = 0; i < qp.size(); ++i) {
    const Eigen::Vector3d r = qp.points.row(i).transpose();
    for (int j = 0; j < qq.size(); ++j) {
      const Eigen::Vector3d rp = qq.points.row(j).transpose();
      const double R = (r - rp).norm();
      m.add(qp.weights[i] * qq.weights[j], r, rp, green(k, R));
    }
  }
}

// Touching pair with outer integral over `outer`: the 1/R part of the kernel
// is integrated in closed form over `inner`, the remainder
// (exp(-jkR)-1)/(4 pi R) numerically (bounded, value -jk/(4 pi) at R=0).
PairMoments accumulate_extracted(const TriGeom& outer, const TriGeom& inner,
                                 double k, const TriQuadratureRule& rule) {
  PairMoments m;
  const TriQuadrature qo = detail::map_rule(rule, outer);
  const TriQuadrature qi = detail::map_rule(rule, inner);
  constexpr double inv4pi = 1.0 / (4.0 * kPi);
  for (int i = 0; i < qo.size(); ++i) {
    const Eigen::Vector3d r = qo.points.row(i).transpose();
    const double w = qo.weights[i];

    const StaticMoments st =
        static_moments(inner.v[0], inner.v[1], inner.v[2], r);
    const double s0 = inv4pi * st.inv_r;
    const Eigen::Vector3d s1 = inv4pi * st.r_inv_r();
    m.a0 += w * s0;
    m.ar += (w * s0) * r.cast<Complex>();
    m.arp += w * s1.cast<Complex>();
    m.adot += w * r.dot(s1);

    for (int j = 0; j < qi.size(); ++j) {
      const Eigen::Vector3d rp = qi.points.row(j).transpose();
      const double R = (r - rp).norm();
      const Complex smooth =
          R < 1e-14 * inner.diam
              ? Complex(0, -k * inv4pi)
              : (std::exp(Complex(0, -k * R)) - 1.0) * inv4pi / R;
      m.add(w * qi.weights[j], r, rp, smooth);
    }
  }
  return m;
}

struct TriCache {
  TriGeom geom;
  TriQuadrature far_q;
  std::array<TriDof, 3> dofs;
  int ndofs = 0;
};

}  // namespace

EfieParts assemble_efie_parts(const TriMesh& mesh,
                              const EdgeConnectivity& conn, const Medium& med,
                              const AssemblyOptions& opts) {
  const int n = conn.num_dofs();
  const int nt = mesh.num_triangles();
  const double k = med.wavenumber();
  const TriQuadratureRule& far_rule = tri_rule(opts.far_degree);
  const TriQuadratureRule& near_rule = tri_rule(opts.near_degree);

  std::vector<TriCache> cache(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    cache[t].geom = detail::make_geom(mesh.vertices[tri[0]],
                                      mesh.vertices[tri[1]],
                                      mesh.vertices[tri[2]]);
    cache[t].far_q = detail::map_rule(far_rule, cache[t].geom);
    cache[t].ndofs = collect_tri_dofs(mesh, conn, t, cache[t].dofs);
  }

  EfieParts parts;
  parts.vector_part = Eigen::MatrixXcd::Zero(n, n);
  parts.scalar_part = Eigen::MatrixXcd::Zero(n, n);

  auto scatter = [&](int p, int q, const PairMoments& m) {
    const TriCache& cp = cache[p];
    const TriCache& cq = cache[q];
    for (int a = 0; a < cp.ndofs; ++a)
      for (int b = 0; b < cq.ndofs; ++b) {
        const TriDof& da = cp.dofs[a];
        const TriDof& db = cq.dofs[b];
        const double ss = da.sign * db.sign * da.length * db.length /
                          (cp.geom.area * cq.geom.area);
        const Complex dot = m.adot - db.free_vertex.cast<Complex>().dot(m.ar) -
                            da.free_vertex.cast<Complex>().dot(m.arp) +
                            da.free_vertex.dot(db.free_vertex) * m.a0;
        parts.vector_part(da.dof, db.dof) += 0.25 * ss * dot;
        parts.scalar_part(da.dof, db.dof) += ss * m.a0;
      }
  };

  for (int p = 0; p < nt; ++p) {
    for (int q = p; q < nt; ++q) {
      const TriCache& cp = cache[p];
      const TriCache& cq = cache[q];
      if (cp.ndofs == 0 && cq.ndofs == 0) continue;

      PairMoments m;
      const int shared = shared_vertices(mesh.triangles[p], mesh.triangles[q]);
      if (p == q) {
        m = accumulate_extracted(cp.geom, cq.geom, k, near_rule);
        // ∬rg and ∬r'g agree analytically on the self pair but are computed
        // by different routes; restoring the identity keeps Z symmetric
        const Eigen::Vector3cd sym = 0.5 * (m.ar + m.arp);
        m.ar = sym;
        m.arp = sym;
      } else if (shared > 0) {
        // evaluate both orientations and average; keeps the operator
        // complex symmetric to rounding
        const PairMoments fwd =
            accumulate_extracted(cp.geom, cq.geom, k, near_rule);
        const PairMoments rev =
            accumulate_extracted(cq.geom, cp.geom, k, near_rule);
        m = average(fwd, rev.swapped());
      } else if (detail::separated(cp.geom, cq.geom, opts.near_ratio)) {
        accumulate_plain(cp.far_q, cq.far_q, k, m);
      } else {
        detail::for_each_subpair(
            cp.geom, cq.geom, opts.near_ratio, opts.max_depth,
            [&](const TriGeom& sp, const TriGeom& sq, bool limit) {
              const TriQuadratureRule& rule = limit ? near_rule : far_rule;
              accumulate_plain(detail::map_rule(rule, sp),
                               detail::map_rule(rule, sq), k, m);
            });
      }

      scatter(p, q, m);
      if (q != p) scatter(q, p, m.swapped());
    }
  }
  return parts;
}

Eigen::MatrixXcd combine_efie(const EfieParts& parts, const Medium& med) {
  const Complex jw(0, med.omega());
  return jw * med.mu * parts.vector_part +
         (1.0 / (jw * med.eps)) * parts.scalar_part;
}

Eigen::MatrixXcd assemble_efie(const TriMesh& mesh,
                               const EdgeConnectivity& conn, const Medium& med,
                               const AssemblyOptions& opts) {
  return combine_efie(assemble_efie_parts(mesh, conn, med, opts), med);
}

Eigen::VectorXcd efie_rhs(const TriMesh& mesh, const EdgeConnectivity& conn,
                          const PlaneWave& pw, const Medium& med,
                          const AssemblyOptions& opts) {
  const TriQuadratureRule rule =
      composite_rule(tri_rule(opts.rhs_degree), opts.rhs_levels);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(conn.num_dofs());
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
      const Eigen::Vector3cd e = pw.electric(r, med);
      for (int a = 0; a < nd; ++a) {
        const Eigen::Vector3d lam = dofs[a].sign * dofs[a].length /
                                    (2.0 * g.area) *
                                    (r - dofs[a].free_vertex);
        v(dofs[a].dof) += q.weights[i] * lam.cast<Complex>().dot(e);
      }
    }
  }
  return v;
}

}  // namespace mrmom
