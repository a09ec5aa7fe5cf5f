#include <Eigen/LU>
#include <Eigen/SVD>

#include "mrmom/solvers.hpp"

namespace mrmom {

Eigen::VectorXcd direct_solve(const Eigen::MatrixXcd& A,
                              const Eigen::VectorXcd& b) {
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(b);
}

double condition_number(const Eigen::MatrixXcd& A) {
  Eigen::VectorXd sv;
  if (A.rows() <= 32) {
    sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(A).singularValues();
  } else {
    sv = Eigen::BDCSVD<Eigen::MatrixXcd>(A).singularValues();
  }
  const double smin = sv(sv.size() - 1);
  return smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace mrmom
