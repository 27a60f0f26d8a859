#include "waves/krylov.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace waves::krylov {
namespace {

using Vec = Eigen::VectorXd;

Eigen::Map<const Vec> view(std::span<const double> s) {
  return {s.data(), static_cast<Eigen::Index>(s.size())};
}

}  // namespace

GmresResult gmres(const LinearMap& apply, const LinearMap& precondition, std::span<const double> rhs,
                  std::span<double> x, const GmresOptions& options) {
  const auto n = static_cast<Eigen::Index>(rhs.size());
  GmresResult result;
  Eigen::Map<Vec> xv(x.data(), n);
  const double bnorm = view(rhs).norm();
  if (bnorm == 0.0) {
    xv.setZero();
    result.converged = true;
    return result;
  }

  const int m = std::max(1, options.restart);
  Vec r(n), w(n), z(n);
  std::vector<Vec> basis(static_cast<std::size_t>(m) + 1, Vec(n));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  Vec cs(m), sn(m), g(m + 1);

  auto residual = [&](Vec& out) {
    apply(std::span<const double>(xv.data(), x.size()), std::span<double>(out.data(), x.size()));
    out = view(rhs) - out;
  };

  residual(r);
  double beta = r.norm();
  result.residual = beta / bnorm;
  double cycle_start = result.residual;

  while (result.iterations < options.max_iterations) {
    if (result.residual <= options.tol) break;
    basis[0] = r / beta;
    g.setZero();
    g(0) = beta;
    int j = 0;
    for (; j < m && result.iterations < options.max_iterations; ++j) {
      ++result.iterations;
      precondition(std::span<const double>(basis[j].data(), x.size()), std::span<double>(z.data(), x.size()));
      apply(std::span<const double>(z.data(), x.size()), std::span<double>(w.data(), x.size()));
      // Modified Gram–Schmidt, one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const double hij = basis[i].dot(w);
          h(i, j) += hij;
          w -= hij * basis[i];
        }
      }
      h(j + 1, j) = w.norm();
      if (h(j + 1, j) > 0.0) basis[j + 1] = w / h(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * h(i, j) + sn(i) * h(i + 1, j);
        h(i + 1, j) = -sn(i) * h(i, j) + cs(i) * h(i + 1, j);
        h(i, j) = t;
      }
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      cs(j) = denom == 0.0 ? 1.0 : h(j, j) / denom;
      sn(j) = denom == 0.0 ? 0.0 : h(j + 1, j) / denom;
      h(j, j) = denom;
      h(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);
      if (std::abs(g(j + 1)) / bnorm <= options.tol || h(j, j) == 0.0) {
        ++j;
        break;
      }
    }
    // Solve the small triangular system and update x ← x + M⁻¹ V y.
    const Vec y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    Vec update = Vec::Zero(n);
    for (int i = 0; i < j; ++i) update += y(i) * basis[i];
    precondition(std::span<const double>(update.data(), x.size()), std::span<double>(z.data(), x.size()));
    xv += z;
    h.setZero();

    residual(r);
    beta = r.norm();
    result.residual = beta / bnorm;
    if (result.residual <= options.tol) break;
    if (result.residual > 0.99 * cycle_start) {
      result.stalled = true;
      break;
    }
    cycle_start = result.residual;
  }
  result.converged = result.residual <= options.tol;
  return result;
}

}  // namespace waves::krylov
