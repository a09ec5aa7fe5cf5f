#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "mrmom/excitation.hpp"
#include "mrmom/medium.hpp"
#include "mrmom/mesh.hpp"

namespace mrmom {

// Scalar free-space kernel exp(-j k R) / (4 pi R).
inline Complex green(double k, double R) {
  return std::exp(Complex(0, -k * R)) / (4.0 * kPi * R);
}

// Div-conforming edge function restricted to one triangle: value is
// sign * length/(2 area) * (r - free_vertex), divergence sign * length/area.
struct TriDof {
  int dof = -1;
  double sign = 0;
  Eigen::Vector3d free_vertex = Eigen::Vector3d::Zero();
  double length = 0;
};

// Collects the (up to three) edge functions supported on triangle t.
int collect_tri_dofs(const TriMesh& mesh, const EdgeConnectivity& conn, int t,
                     std::array<TriDof, 3>& out);

struct AssemblyOptions {
  int far_degree = 4;       // tensor rule for well-separated pairs
  int near_degree = 6;      // rule used on subdivided / extracted pieces
  double near_ratio = 2.0;  // gap below near_ratio * mean diameter -> subdivide
  int max_depth = 3;        // pair subdivision recursion limit
  int rhs_degree = 5;       // base rule for excitation projections
  int rhs_levels = 2;       // composite refinements of the rhs rule
};

// Mixed-potential pieces of the electric-field operator; the full operator is
// j*omega*mu * vector_part + 1/(j*omega*eps) * scalar_part.  Both blocks are
// complex symmetric.
struct EfieParts {
  Eigen::MatrixXcd vector_part;  // <Lam_m, ∫ g Lam_n>
  Eigen::MatrixXcd scalar_part;  // <div Lam_m, ∫ g div Lam_n>
};

EfieParts assemble_efie_parts(const TriMesh& mesh,
                              const EdgeConnectivity& conn, const Medium& med,
                              const AssemblyOptions& opts = {});
Eigen::MatrixXcd combine_efie(const EfieParts& parts, const Medium& med);
Eigen::MatrixXcd assemble_efie(const TriMesh& mesh,
                               const EdgeConnectivity& conn, const Medium& med,
                               const AssemblyOptions& opts = {});

// Magnetic-field operator G/2 - K for a closed PEC surface, where G is the
// edge-function Gram matrix and K[m,n] = <Lam_m, n x (grad_r g x Lam_n)>.
Eigen::MatrixXcd assemble_mfie(const TriMesh& mesh,
                               const EdgeConnectivity& conn, const Medium& med,
                               const AssemblyOptions& opts = {});

Eigen::MatrixXd assemble_gram(const TriMesh& mesh,
                              const EdgeConnectivity& conn);

// Tested excitations: <Lam_m, E_inc> and <Lam_m, n x H_inc>.
Eigen::VectorXcd efie_rhs(const TriMesh& mesh, const EdgeConnectivity& conn,
                          const PlaneWave& pw, const Medium& med,
                          const AssemblyOptions& opts = {});
Eigen::VectorXcd mfie_rhs(const TriMesh& mesh, const EdgeConnectivity& conn,
                          const PlaneWave& pw, const Medium& med,
                          const AssemblyOptions& opts = {});

// Rows whose edge touches an open (boundary-carrying) component keep the pure
// electric-field equation when combining.
std::vector<bool> efie_only_rows(const TriMesh& mesh,
                                 const EdgeConnectivity& conn);

// Row-wise combination (1/eta) Z + alpha B; rows flagged in efie_only use
// (1/eta) Z alone.  Same weights apply to the right-hand sides.
Eigen::MatrixXcd cfie_combine(const Eigen::MatrixXcd& Z,
                              const Eigen::MatrixXcd& B, const Medium& med,
                              const std::vector<bool>& efie_only,
                              double alpha = 0.5);
Eigen::VectorXcd cfie_rhs(const Eigen::VectorXcd& v, const Eigen::VectorXcd& h,
                          const Medium& med, const std::vector<bool>& efie_only,
                          double alpha = 0.5);

Eigen::MatrixXcd assemble_cfie(const TriMesh& mesh,
                               const EdgeConnectivity& conn, const Medium& med,
                               double alpha = 0.5,
                               const AssemblyOptions& opts = {});
Eigen::VectorXcd assemble_cfie_rhs(const TriMesh& mesh,
                                   const EdgeConnectivity& conn,
                                   const PlaneWave& pw, const Medium& med,
                                   double alpha = 0.5,
                                   const AssemblyOptions& opts = {});

}  // namespace mrmom
