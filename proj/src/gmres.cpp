#include "mrmom/solvers.hpp"

namespace mrmom {

namespace {

Eigen::VectorXcd precondition(const IterativeOptions& opts,
                              const Eigen::VectorXcd& r) {
  return opts.precond ? opts.precond->apply(r) : r;
}

}  // namespace

SolveReport gmres_solve(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                        const IterativeOptions& opts) {
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

  const int m = std::max(1, opts.restart);
  Eigen::MatrixXcd V(n, m + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
  Eigen::VectorXcd cs(m), sn(m), g(m + 1);

  // The Arnoldi space is built on the preconditioned operator, but stopping
  // and the recorded history use the plain residual of the reconstructed
  // iterate so counts stay comparable across preconditioners.
  int total_iters = 0;
  double true_res = 1.0;
  while (true) {
    Eigen::VectorXcd r = precondition(opts, b - A * rep.x);
    const double beta = r.norm();
    if (beta == 0) {
      rep.converged = true;
      break;
    }
    V.col(0) = r / beta;
    g.setZero();
    g(0) = beta;

    int j = 0;
    Eigen::VectorXcd candidate = rep.x;
    for (; j < m && total_iters < opts.max_iterations;) {
      Eigen::VectorXcd w = precondition(opts, A * V.col(j));
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);  // conjugated inner product
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      if (std::abs(H(j + 1, j)) > 0) V.col(j + 1) = w / H(j + 1, j);

      // apply stored rotations, then zero the new subdiagonal
      for (int i = 0; i < j; ++i) {
        const Complex t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
        H(i + 1, j) = -std::conj(sn(i)) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom =
          std::sqrt(std::norm(H(j, j)) + std::norm(H(j + 1, j)));
      if (denom == 0) {
        cs(j) = 1;
        sn(j) = 0;
      } else {
        cs(j) = std::abs(H(j, j)) / denom;
        const Complex phase = H(j, j) == Complex(0, 0)
                                  ? Complex(1, 0)
                                  : H(j, j) / std::abs(H(j, j));
        sn(j) = phase * std::conj(H(j + 1, j)) / denom;
      }
      const Complex t = cs(j) * H(j, j) + sn(j) * H(j + 1, j);
      H(j, j) = t;
      H(j + 1, j) = 0;
      g(j + 1) = -std::conj(sn(j)) * g(j);
      g(j) = cs(j) * g(j);

      ++j;
      ++total_iters;

      // back substitution for the current least-squares iterate
      Eigen::VectorXcd y(j);
      for (int i = j - 1; i >= 0; --i) {
        Complex s = g(i);
        for (int kk = i + 1; kk < j; ++kk) s -= H(i, kk) * y(kk);
        y(i) = s / H(i, i);
      }
      candidate = rep.x + V.leftCols(j) * y;
      true_res = (b - A * candidate).norm() / b_norm;
      rep.history.push_back(true_res);
      if (true_res <= opts.tol) break;
    }

    rep.x = candidate;
    if (true_res <= opts.tol) {
      rep.converged = true;
      break;
    }
    if (total_iters >= opts.max_iterations || j == 0) break;
  }

  rep.iterations = total_iters;
  rep.final_residual = (b - A * rep.x).norm() / b_norm;
  if (rep.reason.empty())
    rep.reason = rep.converged ? "converged" : "max iterations";
  return rep;
}

}  // namespace mrmom
