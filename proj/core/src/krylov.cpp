#include "rtm/krylov.hpp"

#include <cmath>
#include <vector>

namespace rtm::krylov {

GmresResult gmres(const LinearOperator& apply, const Vector& rhs, Vector& x, const GmresOptions& options) {
  const Eigen::Index n = rhs.size();
  GmresResult result;
  if (x.size() != n) x = Vector::Zero(n);
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    x.setZero();
    result.converged = true;
    return result;
  }

  const int m = options.restart;
  Eigen::MatrixXcd basis(n, m + 1);
  Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<Complex> sn(static_cast<std::size_t>(m));
  Eigen::VectorXcd g(m + 1);
  Vector w(n);

  while (result.iterations < options.max_iterations) {
    apply(x, w);
    Vector r = rhs - w;
    double beta = r.norm();
    result.relative_residual = beta / rhs_norm;
    if (result.relative_residual <= options.tolerance) {
      result.converged = true;
      return result;
    }
    basis.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    hess.setZero();

    int j = 0;
    for (; j < m && result.iterations < options.max_iterations; ++j) {
      ++result.iterations;
      apply(basis.col(j), w);
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = basis.col(i).dot(w);  // conjugates the left operand
        w -= hess(i, j) * basis.col(i);
      }
      hess(j + 1, j) = w.norm();
      if (std::abs(hess(j + 1, j)) > 0.0) basis.col(j + 1) = w / hess(j + 1, j).real();

      for (int i = 0; i < j; ++i) {
        const Complex a = hess(i, j);
        const Complex b = hess(i + 1, j);
        hess(i, j) = cs[i] * a + sn[i] * b;
        hess(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * b;
      }
      const Complex a = hess(j, j);
      const Complex b = hess(j + 1, j);
      const double denom = std::hypot(std::abs(a), std::abs(b));
      if (std::abs(a) == 0.0) {
        cs[j] = 0.0;
        sn[j] = 1.0;
      } else {
        cs[j] = std::abs(a) / denom;
        sn[j] = (a / std::abs(a)) * std::conj(b) / denom;
      }
      hess(j, j) = cs[j] * a + sn[j] * b;
      hess(j + 1, j) = 0.0;
      g(j + 1) = -std::conj(sn[j]) * g(j);
      g(j) = cs[j] * g(j);

      result.relative_residual = std::abs(g(j + 1)) / rhs_norm;
      if (result.relative_residual <= options.tolerance) {
        ++j;
        break;
      }
    }

    Eigen::VectorXcd y = hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += basis.leftCols(j) * y;
  }

  apply(x, w);
  result.relative_residual = (rhs - w).norm() / rhs_norm;
  result.converged = result.relative_residual <= options.tolerance;
  return result;
}

}  // namespace rtm::krylov
