#pragma once

#include <functional>
#include <span>

namespace waves::krylov {

/// y ← A x for a matrix-free linear map.
using LinearMap = std::function<void(std::span<const double> x, std::span<double> y)>;

struct GmresOptions {
  double tol = 1e-12;  // on ‖b − A x‖ / ‖b‖
  int max_iterations = 400;
  int restart = 60;
};

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  // relative, recomputed explicitly at exit
  bool converged = false;
  bool stalled = false;  // a full restart cycle made no progress
};

/// Restarted GMRES with right preconditioning, so the monitored residual is
/// the true one. `x` holds the initial guess on entry.
GmresResult gmres(const LinearMap& apply, const LinearMap& precondition, std::span<const double> rhs,
                  std::span<double> x, const GmresOptions& options);

}  // namespace waves::krylov
