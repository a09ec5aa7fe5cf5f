#include <Eigen/LU>
#include <algorithm>
#include <stdexcept>

#include "mrmom/solvers.hpp"

namespace mrmom {

namespace {

struct IdentityPrec final : Preconditioner {
  int n;
  explicit IdentityPrec(int n_) : n(n_) {}
  Eigen::VectorXcd apply(const Eigen::VectorXcd& r) const override {
    return r;
  }
  std::size_t memory_bytes() const override { return 0; }
  std::string name() const override { return "identity"; }
};

struct JacobiPrec final : Preconditioner {
  Eigen::VectorXcd inv_diag;
  explicit JacobiPrec(const Eigen::MatrixXcd& A)
      : inv_diag(A.diagonal().cwiseInverse()) {}
  Eigen::VectorXcd apply(const Eigen::VectorXcd& r) const override {
    return inv_diag.cwiseProduct(r);
  }
  std::size_t memory_bytes() const override {
    return sizeof(Complex) * inv_diag.size();
  }
  std::string name() const override { return "jacobi"; }
};

struct FullLuPrec final : Preconditioner {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  std::size_t n;
  explicit FullLuPrec(const Eigen::MatrixXcd& A)
      : lu(A), n(static_cast<std::size_t>(A.rows())) {}
  Eigen::VectorXcd apply(const Eigen::VectorXcd& r) const override {
    return lu.solve(r);
  }
  std::size_t memory_bytes() const override {
    return sizeof(Complex) * n * n;  // stored factors
  }
  std::string name() const override { return "full-lu"; }
};

// Shared plumbing for the two-block preconditioners: exact or incomplete
// solve on the selected index block, diagonal scaling elsewhere.
struct BlockBase : Preconditioner {
  std::vector<int> block;
  Eigen::VectorXcd inv_diag;  // complement entries only (0 inside block)

  void init_complement(const Eigen::MatrixXcd& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<bool> in_block(n, false);
    for (int i : block) in_block[i] = true;
    inv_diag = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i)
      if (!in_block[i]) inv_diag(i) = 1.0 / A(i, i);
  }

  template <typename Solve>
  Eigen::VectorXcd apply_with(const Eigen::VectorXcd& r,
                              const Solve& solve) const {
    Eigen::VectorXcd rb(block.size());
    for (size_t i = 0; i < block.size(); ++i) rb(i) = r(block[i]);
    const Eigen::VectorXcd xb = solve(rb);
    Eigen::VectorXcd out = inv_diag.cwiseProduct(r);
    for (size_t i = 0; i < block.size(); ++i) out(block[i]) = xb(i);
    return out;
  }
};

struct BlockLuPrec final : BlockBase {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;

  BlockLuPrec(const Eigen::MatrixXcd& A, std::vector<int> idx) {
    block = std::move(idx);
    Eigen::MatrixXcd sub(block.size(), block.size());
    for (size_t i = 0; i < block.size(); ++i)
      for (size_t j = 0; j < block.size(); ++j)
        sub(i, j) = A(block[i], block[j]);
    lu.compute(sub);
    init_complement(A);
  }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& r) const override {
    return apply_with(r, [&](const Eigen::VectorXcd& rb) {
      return lu.solve(rb).eval();
    });
  }
  std::size_t memory_bytes() const override {
    return sizeof(Complex) * block.size() * block.size() +
           sizeof(Complex) * inv_diag.size();
  }
  std::string name() const override { return "block-lu"; }
};

// Incomplete LU on the thresholded pattern of the block, ikj ordering, no
// fill-in.  Rows are kept sorted by column for the binary probes.
struct BlockIlu0Prec final : BlockBase {
  struct Entry {
    int col;
    Complex val;
  };
  std::vector<std::vector<Entry>> rows;

  BlockIlu0Prec(const Eigen::MatrixXcd& A, std::vector<int> idx,
                double rel_threshold) {
    block = std::move(idx);
    const int nb = static_cast<int>(block.size());
    rows.resize(nb);
    for (int i = 0; i < nb; ++i) {
      double row_max = 0;
      for (int j = 0; j < nb; ++j)
        row_max = std::max(row_max, std::abs(A(block[i], block[j])));
      const double cut = rel_threshold * row_max;
      for (int j = 0; j < nb; ++j) {
        const Complex v = A(block[i], block[j]);
        if (i == j || std::abs(v) >= cut) rows[i].push_back({j, v});
      }
    }

    auto find = [&](int i, int j) -> Complex* {
      auto it = std::lower_bound(
          rows[i].begin(), rows[i].end(), j,
          [](const Entry& e, int col) { return e.col < col; });
      return (it != rows[i].end() && it->col == j) ? &it->val : nullptr;
    };

    for (int i = 1; i < nb; ++i) {
      for (auto& eik : rows[i]) {
        const int k = eik.col;
        if (k >= i) break;
        const Complex* akk = find(k, k);
        if (!akk || std::abs(*akk) == 0)
          throw std::runtime_error("incomplete factorization hit a zero pivot");
        eik.val /= *akk;
        for (auto& eij : rows[i]) {
          if (eij.col <= k) continue;
          if (const Complex* akj = find(k, eij.col))
            eij.val -= eik.val * (*akj);
        }
      }
    }
    init_complement(A);
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& r) const override {
    return apply_with(r, [&](const Eigen::VectorXcd& rb) {
      const int nb = static_cast<int>(rb.size());
      Eigen::VectorXcd y(nb), x(nb);
      for (int i = 0; i < nb; ++i) {  // L y = r, unit diagonal
        Complex s = rb(i);
        for (const Entry& e : rows[i]) {
          if (e.col >= i) break;
          s -= e.val * y(e.col);
        }
        y(i) = s;
      }
      for (int i = nb - 1; i >= 0; --i) {  // U x = y
        Complex s = y(i);
        Complex diag(1, 0);
        for (const Entry& e : rows[i]) {
          if (e.col < i) continue;
          if (e.col == i)
            diag = e.val;
          else
            s -= e.val * x(e.col);
        }
        x(i) = s / diag;
      }
      return x;
    });
  }

  std::size_t memory_bytes() const override {
    std::size_t nnz = 0;
    for (const auto& row : rows) nnz += row.size();
    return nnz * (sizeof(Complex) + sizeof(int)) +
           sizeof(Complex) * inv_diag.size();
  }
  std::string name() const override { return "block-ilu0"; }
};

}  // namespace

std::unique_ptr<Preconditioner> identity_preconditioner(int n) {
  return std::make_unique<IdentityPrec>(n);
}

std::unique_ptr<Preconditioner> jacobi_preconditioner(
    const Eigen::MatrixXcd& A) {
  return std::make_unique<JacobiPrec>(A);
}

std::unique_ptr<Preconditioner> full_lu_preconditioner(
    const Eigen::MatrixXcd& A) {
  return std::make_unique<FullLuPrec>(A);
}

std::unique_ptr<Preconditioner> block_lu_preconditioner(
    const Eigen::MatrixXcd& A, const std::vector<int>& block) {
  return std::make_unique<BlockLuPrec>(A, block);
}

std::unique_ptr<Preconditioner> block_ilu0_preconditioner(
    const Eigen::MatrixXcd& A, const std::vector<int>& block,
    double rel_threshold) {
  return std::make_unique<BlockIlu0Prec>(A, block, rel_threshold);
}

}  // namespace mrmom
