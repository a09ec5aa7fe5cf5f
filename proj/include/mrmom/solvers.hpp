#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "mrmom/medium.hpp"

namespace mrmom {

// Left preconditioner interface: apply() returns M^{-1} r.
struct Preconditioner {
  virtual ~Preconditioner() = default;
  virtual Eigen::VectorXcd apply(const Eigen::VectorXcd& r) const = 0;
  virtual std::size_t memory_bytes() const = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<Preconditioner> identity_preconditioner(int n);
std::unique_ptr<Preconditioner> jacobi_preconditioner(
    const Eigen::MatrixXcd& A);
std::unique_ptr<Preconditioner> full_lu_preconditioner(
    const Eigen::MatrixXcd& A);
// Dense LU on the listed index block, Jacobi sweep on the complement.
std::unique_ptr<Preconditioner> block_lu_preconditioner(
    const Eigen::MatrixXcd& A, const std::vector<int>& block);
// Same block structure, but the block solve is an incomplete LU on the
// pattern of entries larger than rel_threshold times their row maximum.
std::unique_ptr<Preconditioner> block_ilu0_preconditioner(
    const Eigen::MatrixXcd& A, const std::vector<int>& block,
    double rel_threshold = 1e-3);

struct IterativeOptions {
  double tol = 1e-6;          // relative residual target
  int max_iterations = 1000;  // total matrix applications
  int restart = 200;          // Krylov cycle length
  const Preconditioner* precond = nullptr;
};

struct SolveReport {
  Eigen::VectorXcd x;
  // plain (unpreconditioned) relative residuals per iteration, [0] = 1; the
  // stopping test uses the same quantity so iteration counts are comparable
  // across preconditioners
  std::vector<double> history;
  int iterations = 0;
  bool converged = false;
  std::string reason;
  double final_residual = 0;  // residual of the returned x
};

// Restarted GMRES with modified Gram-Schmidt and Givens residual updates.
SolveReport gmres_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                        const IterativeOptions& opts = {});

SolveReport bicgstab_solve(const Eigen::MatrixXcd& A,
                           const Eigen::VectorXcd& b,
                           const IterativeOptions& opts = {});

// ---- direct / spectral helpers ----------------------------------------------

Eigen::VectorXcd direct_solve(const Eigen::MatrixXcd& A,
                              const Eigen::VectorXcd& b);

// 2-norm condition number from a full singular value decomposition.
double condition_number(const Eigen::MatrixXcd& A);

}  // namespace mrmom
