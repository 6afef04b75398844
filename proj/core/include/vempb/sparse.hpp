#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <vector>

namespace vempb {

/// Square matrix in compressed sparse row storage. Column indices within a row are sorted.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;  ///< size n + 1
  std::vector<int> col;
  std::vector<double> val;

  std::size_t rows() const { return n; }
  std::size_t nnz() const { return val.size(); }

  /// Builds the pattern from per-row column lists (duplicates allowed); values are zero.
  static CsrMatrix from_pattern(std::size_t n, std::vector<std::vector<int>> columns);

  /// Position of (i, j) in `val`, or -1 if structurally zero.
  std::ptrdiff_t find(std::size_t i, int j) const;
  double coeff(std::size_t i, int j) const;

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXd to_dense() const;
  /// max |A_ij - A_ji| over the stored pattern (the pattern itself is assumed symmetric).
  double symmetry_defect() const;
  void set_zero();
};

/// Global linear system over vertex DoFs with a Dirichlet mask.
struct SparseSystem {
  CsrMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<bool> dirichlet;
};

/// Replaces constrained rows and columns by identity. The right-hand side of constrained
/// DoFs becomes the prescribed value (zero when `values` is empty) and the eliminated
/// columns are moved to the right-hand side, preserving symmetry.
void apply_dirichlet(SparseSystem& system, const std::optional<Eigen::VectorXd>& values = std::nullopt);

struct CgConfig {
  double tol = 1e-12;        ///< on ||r|| / ||b||
  std::size_t max_iter = 0;  ///< 0 selects 10 * n
};

struct CgResult {
  Eigen::VectorXd x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
/// Throws ConvergenceError if the tolerance is not met within max_iter.
CgResult cg_solve(const CsrMatrix& a, const Eigen::VectorXd& b, const CgConfig& config = {});

}  // namespace vempb
