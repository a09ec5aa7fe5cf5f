#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mrmom/medium.hpp"

namespace mrmom {

// Little-endian binary container for dense complex operators and vectors.
// Layout: 8-byte magic, int64 rows, int64 cols, then column-major
// interleaved (re, im) doubles.  Throws std::runtime_error on shape or
// magic mismatch.
void save_operator(const Eigen::MatrixXcd& A, const std::string& path);
Eigen::MatrixXcd load_operator(const std::string& path);

void save_vector(const Eigen::VectorXcd& v, const std::string& path);
Eigen::VectorXcd load_vector(const std::string& path);

// Residual history as "iteration,relative_residual" CSV rows (iteration 0 is
// the starting residual 1).
void save_history_csv(const std::vector<double>& history,
                      const std::string& path);

}  // namespace mrmom
