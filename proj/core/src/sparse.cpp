#include "vempb/sparse.hpp"

#include "vempb/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vempb {

CsrMatrix CsrMatrix::from_pattern(std::size_t n, std::vector<std::vector<int>> columns) {
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = columns[i];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (int j : c) {
      if (j < 0 || static_cast<std::size_t>(j) >= n) throw Error("sparse pattern column index out of range");
    }
    m.row_ptr[i + 1] = m.row_ptr[i] + c.size();
  }
  m.col.reserve(m.row_ptr[n]);
  for (const auto& c : columns) m.col.insert(m.col.end(), c.begin(), c.end());
  m.val.assign(m.col.size(), 0.0);
  return m;
}

std::ptrdiff_t CsrMatrix::find(std::size_t i, int j) const {
  const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? it - col.begin() : -1;
}

double CsrMatrix::coeff(std::size_t i, int j) const {
  const auto k = find(i, j);
  return k < 0 ? 0.0 : val[static_cast<std::size_t>(k)];
}

void CsrMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[static_cast<Eigen::Index>(i)] = s;
  }
}

Eigen::VectorXd CsrMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::VectorXd CsrMatrix::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) d[static_cast<Eigen::Index>(i)] = coeff(i, static_cast<int>(i));
  return d;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) d(static_cast<Eigen::Index>(i), col[k]) = val[k];
  return d;
}

double CsrMatrix::symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      worst = std::max(worst, std::abs(val[k] - coeff(static_cast<std::size_t>(col[k]), static_cast<int>(i))));
  return worst;
}

void CsrMatrix::set_zero() { std::fill(val.begin(), val.end(), 0.0); }

void apply_dirichlet(SparseSystem& system, const std::optional<Eigen::VectorXd>& values) {
  CsrMatrix& a = system.matrix;
  const auto& mask = system.dirichlet;
  if (mask.size() != a.n || static_cast<std::size_t>(system.rhs.size()) != a.n) {
    throw Error("apply_dirichlet: mask, matrix and right-hand side sizes differ");
  }
  if (values && static_cast<std::size_t>(values->size()) != a.n) throw Error("apply_dirichlet: wrong value count");

  for (std::size_t i = 0; i < a.n; ++i) {
    if (mask[i]) continue;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int j = a.col[k];
      if (!mask[j]) continue;
      if (values) system.rhs[static_cast<Eigen::Index>(i)] -= a.val[k] * (*values)[j];
      a.val[k] = 0.0;
    }
  }
  for (std::size_t i = 0; i < a.n; ++i) {
    if (!mask[i]) continue;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) a.val[k] = a.col[k] == static_cast<int>(i) ? 1.0 : 0.0;
    if (a.find(i, static_cast<int>(i)) < 0) throw Error("apply_dirichlet: pattern lacks a diagonal entry");
    system.rhs[static_cast<Eigen::Index>(i)] = values ? (*values)[static_cast<Eigen::Index>(i)] : 0.0;
  }
}

CgResult cg_solve(const CsrMatrix& a, const Eigen::VectorXd& b, const CgConfig& config) {
  const auto n = static_cast<Eigen::Index>(a.n);
  if (b.size() != n) throw Error("cg_solve: right-hand side has the wrong size");
  const std::size_t max_iter = config.max_iter > 0 ? config.max_iter : 10 * std::max<std::size_t>(a.n, 1);

  CgResult result;
  result.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return result;

  Eigen::VectorXd inv_diag = a.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inv_diag[i] > 0.0)) throw Error("cg_solve: non-positive diagonal entry " + std::to_string(i));
    inv_diag[i] = 1.0 / inv_diag[i];
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd q(n);
  double rz = r.dot(z);
  double rnorm = bnorm;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    a.multiply(p, q);
    const double curvature = p.dot(q);
    if (!(curvature > 0.0)) {
      std::ostringstream msg;
      msg << "cg_solve: non-positive curvature " << curvature << " at iteration " << it;
      throw ConvergenceError(msg.str());
    }
    const double alpha = rz / curvature;
    result.x += alpha * p;
    r -= alpha * q;
    rnorm = r.norm();
    result.iterations = it;
    result.relative_residual = rnorm / bnorm;
    if (result.relative_residual <= config.tol) return result;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  std::ostringstream msg;
  msg << "cg_solve: no convergence in " << max_iter << " iterations (relative residual "
      << result.relative_residual << ")";
  throw ConvergenceError(msg.str());
}

}  // namespace vempb
