#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "waves/dn_operator.hpp"
#include "waves/fft.hpp"

namespace waves::dn {

/// Harmonic extension below y = η(x) down to a flat floor at y = −D, solved
/// in the flattened coordinate s = (y + D)/(η + D) ∈ [0, 1]. The floor is
/// impermeable (u_s = 0) in finite depth; in infinite depth it carries the
/// half-space condition u_s = h|D_x|u, since s = 0 is the level y = −D.
///
/// With h = η + D, ψ(x, y) = u(x, s) turns Δψ = 0 into
///
///   h²Δₓu − 2s h ∇h·∇ₓu_s + (1 + s²|∇h|²) u_ss + s(2|∇h|² − hΔh) u_s = 0,
///
/// with u = g at s = 1 and u_s = 0 at s = 0. Writing u = g + w (g constant
/// in s) leaves a homogeneous Dirichlet top for w. The surface flux is
///
///   G[η]g = (1 + |∇h|²) u_s / h − ∇h·∇g   at s = 1.
///
/// The system is solved by GMRES, left-preconditioned by the same operator
/// with coefficients replaced by their x-averages, which decouples into one
/// small Chebyshev boundary-value problem per wavenumber.
class MappedEllipticSolver {
 public:
  MappedEllipticSolver(const SurfaceField& eta, const FluidConfig& cfg, const MappedElliptic& params);

  /// Raw flux ∇ψ·N (not mean-projected) and the solve report. Throws
  /// SolverStalled if GMRES stops short of the tolerance.
  std::pair<SurfaceField, EllipticSolveReport> solve(const SurfaceField& g) const;

  double depth() const noexcept { return depth_; }
  int vertical_points() const noexcept { return points_; }

 private:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  void apply_operator(const double* w, double* out) const;
  void apply_preconditioner(const double* r, double* out) const;
  Eigen::VectorXd half_space_flux(const double* values) const;  // |D_x| on one level

  PeriodicGrid grid_;
  MappedElliptic params_;
  double depth_;
  bool half_space_;
  int points_;
  std::size_t columns_;       // grid points
  std::size_t half_columns_;  // half-spectrum size

  Eigen::VectorXd s_;             // s_j, j = 0 (surface) … P−1 (floor)
  Eigen::MatrixXd ds_;            // d/ds on the Lobatto nodes
  Eigen::VectorXd h_;             // η + D
  Eigen::VectorXd h2_;            // h²
  std::vector<Eigen::VectorXd> cross_;  // −2h ∂_i h
  std::vector<Eigen::VectorXd> dh_;     // ∂_i h
  Eigen::VectorXd grad2_;         // |∇h|²
  Eigen::VectorXd lower_;         // 2|∇h|² − hΔh

  std::vector<double> k2_;        // |k|² per half-spectrum index
  std::vector<std::array<double, 2>> ik_;  // k_i, zero on Nyquist
  std::vector<int> block_of_;     // half index → factorization index
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> blocks_;

  spectral::BatchedRealFft fft_;
};

}  // namespace waves::dn
