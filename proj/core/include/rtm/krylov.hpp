#pragma once

#include <functional>

#include <Eigen/Dense>

#include "rtm/types.hpp"

namespace rtm::krylov {

using Vector = Eigen::VectorXcd;
using LinearOperator = std::function<void(const Vector& in, Vector& out)>;

struct GmresOptions {
  double tolerance = 1e-10;  // relative residual ||b - A x|| / ||b||
  int restart = 80;
  int max_iterations = 2000;
};

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
/// `x` holds the initial guess on entry and the solution on return.
GmresResult gmres(const LinearOperator& apply, const Vector& rhs, Vector& x, const GmresOptions& options = {});

}  // namespace rtm::krylov
