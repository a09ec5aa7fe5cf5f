#include "mrmom/solvers.hpp"

namespace mrmom {

SolveReport bicgstab_solve(const Eigen::MatrixXcd& A,
                           const Eigen::VectorXcd& b,
                           const IterativeOptions& opts) {
  auto prec = [&](const Eigen::VectorXcd& v) {
    return opts.precond ? opts.precond->apply(v) : v;
  };

  const int n = static_cast<int>(b.size());
  SolveReport rep;
  rep.x = Eigen::VectorXcd::Zero(n);
  rep.history.push_back(1.0);

  const double b_norm = b.norm();
  if (b_norm == 0) {
    rep.converged = true;
    rep.reason = "zero right-hand side";
    return rep;
  }

  // Recursions run on the preconditioned residual; the recorded history and
  // the stopping test use the plain residual of the current iterate so counts
  // stay comparable across preconditioners.
  auto plain_residual = [&](const Eigen::VectorXcd& x) {
    return (b - A * x).norm() / b_norm;
  };

  Eigen::VectorXcd r = prec(b);  // x0 = 0
  const Eigen::VectorXcd r0 = r;
  Eigen::VectorXcd p = r;
  Complex rho = r0.dot(r);

  while (rep.iterations < opts.max_iterations) {
    const Eigen::VectorXcd ap = prec(A * p);
    ++rep.iterations;
    const Complex denom = r0.dot(ap);
    if (std::abs(denom) == 0) {
      rep.reason = "breakdown: r0'Ap vanished";
      break;
    }
    const Complex alpha = rho / denom;
    const Eigen::VectorXcd s = r - alpha * ap;
    {
      const double half_res = plain_residual(rep.x + alpha * p);
      if (half_res <= opts.tol) {
        rep.x += alpha * p;
        rep.history.push_back(half_res);
        rep.converged = true;
        break;
      }
    }
    const Eigen::VectorXcd as = prec(A * s);
    ++rep.iterations;
    const double as2 = as.squaredNorm();
    if (as2 == 0) {
      rep.reason = "breakdown: As vanished";
      break;
    }
    const Complex omega = as.dot(s) / as2;
    rep.x += alpha * p + omega * s;
    r = s - omega * as;
    rep.history.push_back(plain_residual(rep.x));
    if (rep.history.back() <= opts.tol) {
      rep.converged = true;
      break;
    }
    const Complex rho_next = r0.dot(r);
    if (std::abs(rho_next) < 1e-300 || std::abs(omega) == 0) {
      rep.reason = "breakdown: stagnation of the shadow residual";
      break;
    }
    const Complex beta = (rho_next / rho) * (alpha / omega);
    rho = rho_next;
    p = r + beta * (p - omega * ap);
  }

  rep.final_residual = (b - A * rep.x).norm() / b_norm;
  if (rep.reason.empty())
    rep.reason = rep.converged ? "converged" : "max iterations";
  return rep;
}

}  // namespace mrmom
