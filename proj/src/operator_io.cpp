#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "mrmom/operator_io.hpp"

namespace mrmom {

namespace {

constexpr char kMatrixMagic[8] = {'m', 'r', 'm', 'o', 'm', 'Z', '0', '1'};
constexpr char kVectorMagic[8] = {'m', 'r', 'm', 'o', 'm', 'V', '0', '1'};

void write_blob(const char* magic, const Eigen::MatrixXcd& A,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(magic, 8);
  const std::int64_t rows = A.rows(), cols = A.cols();
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  out.write(reinterpret_cast<const char*>(A.data()),
            static_cast<std::streamsize>(sizeof(Complex) * A.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

Eigen::MatrixXcd read_blob(const char* magic, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  char head[8];
  in.read(head, 8);
  if (!in || std::memcmp(head, magic, 8) != 0)
    throw std::runtime_error("not a recognized operator file: " + path);
  std::int64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || rows < 0 || cols < 0 || rows * cols > (1LL << 32))
    throw std::runtime_error("corrupt operator header: " + path);
  Eigen::MatrixXcd A(rows, cols);
  in.read(reinterpret_cast<char*>(A.data()),
          static_cast<std::streamsize>(sizeof(Complex) * A.size()));
  if (!in) throw std::runtime_error("short read: " + path);
  return A;
}

}  // namespace

void save_operator(const Eigen::MatrixXcd& A, const std::string& path) {
  write_blob(kMatrixMagic, A, path);
}

Eigen::MatrixXcd load_operator(const std::string& path) {
  return read_blob(kMatrixMagic, path);
}

void save_vector(const Eigen::VectorXcd& v, const std::string& path) {
  write_blob(kVectorMagic, v, path);
}

Eigen::VectorXcd load_vector(const std::string& path) {
  const Eigen::MatrixXcd A = read_blob(kVectorMagic, path);
  if (A.cols() != 1)
    throw std::runtime_error("expected a single-column vector file: " + path);
  return A.col(0);
}

void save_history_csv(const std::vector<double>& history,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "iteration,relative_residual\n";
  out.precision(17);
  for (std::size_t i = 0; i < history.size(); ++i)
    out << i << ',' << history[i] << '\n';
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace mrmom
