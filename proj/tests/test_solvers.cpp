#include <random>

#include "doctest.h"
#include "mrmom/solvers.hpp"

using namespace mrmom;

namespace {

// Reproducible dense test system with a controlled spectrum.
Eigen::MatrixXcd shifted_random(int n, double shift, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) A(i, j) = Complex(dist(gen), dist(gen));
  A /= std::sqrt(double(n));
  A += shift * Eigen::MatrixXcd::Identity(n, n);
  return A;
}

Eigen::VectorXcd ones(int n) { return Eigen::VectorXcd::Ones(n); }

}  // namespace

TEST_CASE("gmres solves a well-conditioned dense system") {
  const int n = 120;
  const Eigen::MatrixXcd A = shifted_random(n, 4.0, 11);
  const Eigen::VectorXcd b = ones(n);
  IterativeOptions opts;
  opts.tol = 1e-10;
  const SolveReport rep = gmres_solve(A, b, opts);
  CHECK(rep.converged);
  CHECK(rep.reason == "converged");
  CHECK((b - A * rep.x).norm() / b.norm() <= 1e-10);
  CHECK(rep.final_residual <= 1e-10);
  // history: starts at 1, ends at the stopping value, one entry per iteration
  REQUIRE(!rep.history.empty());
  CHECK(rep.history.front() == 1.0);
  CHECK(static_cast<int>(rep.history.size()) == rep.iterations + 1);
  CHECK(rep.history.back() <= 1e-10);
  // non-increasing residual within round-off (minimum-residual property)
  for (std::size_t i = 1; i < rep.history.size(); ++i)
    CHECK(rep.history[i] <= rep.history[i - 1] * (1 + 1e-12) + 1e-15);
}

TEST_CASE("restarted gmres still converges, just more slowly") {
  const int n = 120;
  const Eigen::MatrixXcd A = shifted_random(n, 2.2, 5);
  const Eigen::VectorXcd b = ones(n);
  IterativeOptions full, cycled;
  full.tol = cycled.tol = 1e-8;
  cycled.restart = 6;
  const SolveReport r1 = gmres_solve(A, b, full);
  const SolveReport r2 = gmres_solve(A, b, cycled);
  CHECK(r1.converged);
  CHECK(r2.converged);
  CHECK(r2.iterations >= r1.iterations);
  CHECK((b - A * r2.x).norm() / b.norm() <= 1e-8);
}

TEST_CASE("bicgstab agrees with the direct solution") {
  const int n = 100;
  const Eigen::MatrixXcd A = shifted_random(n, 4.0, 3);
  const Eigen::VectorXcd b = ones(n);
  IterativeOptions opts;
  opts.tol = 1e-9;
  const SolveReport rep = bicgstab_solve(A, b, opts);
  CHECK(rep.converged);
  CHECK(rep.final_residual <= 1e-9);
  const Eigen::VectorXcd xd = direct_solve(A, b);
  CHECK((rep.x - xd).norm() / xd.norm() < 1e-7);
}

TEST_CASE("solvers report non-convergence honestly") {
  const int n = 60;
  const Eigen::MatrixXcd A = shifted_random(n, 0.05, 7);  // nearly singular shift
  const Eigen::VectorXcd b = ones(n);
  IterativeOptions opts;
  opts.tol = 1e-14;
  opts.max_iterations = 3;
  const SolveReport rep = gmres_solve(A, b, opts);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(rep.reason == "max iterations");
}

TEST_CASE("zero right-hand side returns the zero solution") {
  const Eigen::MatrixXcd A = shifted_random(10, 3.0, 1);
  const SolveReport rep = gmres_solve(A, Eigen::VectorXcd::Zero(10), {});
  CHECK(rep.converged);
  CHECK(rep.x.norm() == 0);
}

TEST_CASE("full factorization preconditioner converges immediately") {
  const int n = 80;
  const Eigen::MatrixXcd A = shifted_random(n, 1.5, 9);
  const Eigen::VectorXcd b = ones(n);
  const auto M = full_lu_preconditioner(A);
  IterativeOptions opts;
  opts.tol = 1e-10;
  opts.precond = M.get();
  const SolveReport rep = gmres_solve(A, b, opts);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 2);
  CHECK(rep.final_residual <= 1e-10);
}

TEST_CASE("jacobi preconditioner applies the inverse diagonal") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3);
  A(0, 0) = Complex(2, 0);
  A(1, 1) = Complex(0, 4);
  A(2, 2) = Complex(1, -1);
  A(0, 2) = Complex(9, 9);  // off-diagonal must not matter
  const auto M = jacobi_preconditioner(A);
  Eigen::VectorXcd r(3);
  r << Complex(2, 0), Complex(0, 4), Complex(1, -1);
  const Eigen::VectorXcd got = M->apply(r);
  CHECK((got - Eigen::VectorXcd::Ones(3)).norm() < 1e-15);
}

TEST_CASE("block factorization is exact when the block covers everything") {
  const int n = 50;
  const Eigen::MatrixXcd A = shifted_random(n, 1.5, 13);
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  const auto M = block_lu_preconditioner(A, all);
  IterativeOptions opts;
  opts.tol = 1e-10;
  opts.precond = M.get();
  const SolveReport rep = gmres_solve(A, ones(n), opts);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 2);
}

TEST_CASE("partial block with diagonal complement is exact when decoupled") {
  // block-diagonal matrix: dense 4x4 block plus a diagonal tail
  const int n = 10;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  A.topLeftCorner(4, 4) = shifted_random(4, 2.0, 17);
  for (int i = 4; i < n; ++i) A(i, i) = Complex(1.0 + 0.1 * i, 0.3);
  const auto M = block_lu_preconditioner(A, {0, 1, 2, 3});
  IterativeOptions opts;
  opts.tol = 1e-12;
  opts.precond = M.get();
  const SolveReport rep = gmres_solve(A, ones(n), opts);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 2);
}

TEST_CASE("preconditioner memory accounting is ordered by coverage") {
  const int n = 64;
  const Eigen::MatrixXcd A = shifted_random(n, 2.0, 19);
  std::vector<int> half(n / 2);
  for (int i = 0; i < n / 2; ++i) half[i] = i;
  const auto id = identity_preconditioner(n);
  const auto jac = jacobi_preconditioner(A);
  const auto blk = block_lu_preconditioner(A, half);
  const auto full = full_lu_preconditioner(A);
  CHECK(id->memory_bytes() < jac->memory_bytes());
  CHECK(jac->memory_bytes() < blk->memory_bytes());
  CHECK(blk->memory_bytes() < full->memory_bytes());
  // a quarter of the unknowns -> about a sixteenth of the full factor bytes
  CHECK(blk->memory_bytes() < full->memory_bytes() / 2);
  CHECK_FALSE(id->name().empty());
  CHECK_FALSE(blk->name().empty());
}

TEST_CASE("sparsified block factorization stays a usable preconditioner") {
  // banded couplings well above the relative threshold, broadband noise well
  // below it: the incomplete factor keeps the band only
  const int n = 40;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = 1e-6 * Complex(u(rng), u(rng));
  for (int i = 0; i < n; ++i) {
    A(i, i) = Complex(3.0 + 0.05 * i, 0.4);
    if (i > 0) A(i, i - 1) += Complex(0.6, -0.1);
    if (i + 1 < n) A(i, i + 1) += Complex(-0.4, 0.2);
  }
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  const auto ilu = block_ilu0_preconditioner(A, all, 1e-3);
  const auto lu = block_lu_preconditioner(A, all);
  // the kept pattern is a tridiagonal sliver of the dense factorization
  CHECK(ilu->memory_bytes() < lu->memory_bytes() / 4);
  IterativeOptions opts;
  opts.tol = 1e-8;
  opts.precond = ilu.get();
  const SolveReport rep = gmres_solve(A, ones(n), opts);
  CHECK(rep.converged);
  // inexact factors: more than exact-LU's couple of steps, far less than plain
  const SolveReport plain = gmres_solve(A, ones(n), {});
  CHECK(rep.iterations <= plain.iterations);
}

TEST_CASE("condition number matches a known singular-value ratio") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) D(i, i) = Complex(0, i + 1.0);  // sv 1..5
  CHECK(condition_number(D) == doctest::Approx(5.0).epsilon(1e-12));
  // invariant under unitary mixing
  Eigen::MatrixXcd U = shifted_random(5, 0.0, 29);
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(U);
  U = qr.householderQ();
  CHECK(condition_number(U * D * U.adjoint()) ==
        doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("direct solve is accurate on an ill-conditioned system") {
  const int n = 40;
  Eigen::MatrixXcd A = shifted_random(n, 3.0, 31);
  A.col(1) = A.col(0) + 1e-6 * A.col(1);  // nearly dependent columns
  const Eigen::VectorXcd x_true = ones(n);
  const Eigen::VectorXcd b = A * x_true;
  const Eigen::VectorXcd x = direct_solve(A, b);
  CHECK((b - A * x).norm() / b.norm() < 1e-10);
}
