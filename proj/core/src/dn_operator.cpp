#include "waves/dn_operator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "dn_backends.hpp"
#include "waves/error.hpp"
#include "waves/krylov.hpp"

namespace waves::dn {
namespace {

// Real Fourier basis: for each ±k pair one cosine and one sine column; a
// self-conjugate k (components 0 or n/2) contributes only its cosine.
struct BasisEntry {
  std::size_t index;  // full-layout coefficient index
  bool sine;
};

std::vector<BasisEntry> real_basis(const PeriodicGrid& grid) {
  std::vector<BasisEntry> basis;
  const auto n = static_cast<std::size_t>(grid.n());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t i0 = i % n;
    const std::size_t i1 = grid.dim() == 1 ? 0 : i / n;
    const std::size_t p0 = (n - i0) % n;
    const std::size_t p1 = (n - i1) % n;
    const std::size_t partner = p0 + n * p1;
    if (i < partner) {
      basis.push_back({i, false});
      basis.push_back({i, true});
    } else if (i == partner) {
      basis.push_back({i, false});
    }
  }
  return basis;
}

SurfaceField basis_field(const PeriodicGrid& grid, const BasisEntry& e) {
  std::vector<Complex> coeffs(grid.size(), Complex{});
  const auto n = static_cast<std::size_t>(grid.n());
  const std::size_t i0 = e.index % n;
  const std::size_t i1 = grid.dim() == 1 ? 0 : e.index / n;
  const std::size_t partner = (n - i0) % n + n * ((n - i1) % n);
  if (partner == e.index) {
    coeffs[e.index] = 1.0;
  } else if (!e.sine) {
    coeffs[e.index] = 0.5;
    coeffs[partner] = 0.5;
  } else {
    // sin(k·x) = (e^{ik·x} − e^{−ik·x}) / 2i
    coeffs[e.index] = Complex(0.0, -0.5);
    coeffs[partner] = Complex(0.0, 0.5);
  }
  return SurfaceField::from_coefficients(grid, std::move(coeffs));
}

double basis_coordinate(const SurfaceField& f, const BasisEntry& e) {
  const auto& grid = f.grid();
  const auto n = static_cast<std::size_t>(grid.n());
  const std::size_t i0 = e.index % n;
  const std::size_t i1 = grid.dim() == 1 ? 0 : e.index / n;
  const std::size_t partner = (n - i0) % n + n * ((n - i1) % n);
  const Complex c = f.coeff(e.index);
  if (partner == e.index) return c.real();
  return e.sine ? -2.0 * c.imag() : 2.0 * c.real();
}

class FrozenOperator final : public DnOperator {
 public:
  explicit FrozenOperator(const DnOperator& op)
      : DnOperator(op.surface(), op.config()), basis_(real_basis(op.surface().grid())) {
    const auto& grid = op.surface().grid();
    const auto size = static_cast<Eigen::Index>(grid.size());
    matrix_.resize(size, static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t c = 0; c < basis_.size(); ++c) {
      const auto image = op.apply(basis_field(grid, basis_[c]));
      matrix_.col(static_cast<Eigen::Index>(c)) =
          Eigen::Map<const Eigen::VectorXd>(image.values().data(), size);
    }
  }

  SurfaceField apply(const SurfaceField& g) const override {
    Eigen::VectorXd coords(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t c = 0; c < basis_.size(); ++c) coords(static_cast<Eigen::Index>(c)) = basis_coordinate(g, basis_[c]);
    const Eigen::VectorXd out = matrix_ * coords;
    return SurfaceField::from_values(g.grid(), std::vector<double>(out.data(), out.data() + out.size()))
        .without_mean();
  }

 private:
  std::vector<BasisEntry> basis_;
  Eigen::MatrixXd matrix_;
};

}  // namespace

std::unique_ptr<DnOperator> make_dn_operator(const SurfaceField& eta, const FluidConfig& cfg,
                                             const DnBackend& backend) {
  validate(backend);
  if (eta.grid().dim() != cfg.dim) raise(ErrorCode::kInvalidArgument, "grid dimension differs from FluidConfig.dim");
  if (std::holds_alternative<FlatSymbol>(backend)) return detail::make_flat_operator(eta, cfg);
  if (const auto* cs = std::get_if<CraigSulem>(&backend)) return detail::make_craig_sulem_operator(eta, cfg, *cs);
  return detail::make_elliptic_operator(eta, cfg, std::get<MappedElliptic>(backend));
}

SurfaceField dn_apply(const SurfaceField& eta, const SurfaceField& g, const FluidConfig& cfg,
                      const DnBackend& backend) {
  return make_dn_operator(eta, cfg, backend)->apply(g);
}

std::unique_ptr<DnOperator> freeze(const DnOperator& op) { return std::make_unique<FrozenOperator>(op); }

SurfaceField dn_inverse(const DnOperator& op, const SurfaceField& h, double tol,
                        const SurfaceField* initial_guess, InverseReport* report, int max_iterations) {
  const auto& grid = h.grid();
  const double norm = std::sqrt(spectral::inner_product(h, h));
  if (std::abs(h.mean()) > 1e-10 * std::max(norm, 1e-300)) {
    std::ostringstream os;
    os << "right-hand side has mean " << h.mean();
    raise(ErrorCode::kMeanNotZero, os.str());
  }
  const auto rhs_field = h.without_mean();
  const auto& cfg = op.config();

  auto to_field = [&grid](std::span<const double> x) {
    return SurfaceField::from_values(grid, std::vector<double>(x.begin(), x.end()));
  };
  krylov::LinearMap apply = [&](std::span<const double> x, std::span<double> y) {
    const auto out = op.apply(to_field(x));
    std::copy(out.values().begin(), out.values().end(), y.begin());
  };
  krylov::LinearMap precondition = [&](std::span<const double> x, std::span<double> y) {
    const auto f = to_field(x);
    std::vector<Complex> coeffs(f.coeffs().begin(), f.coeffs().end());
    coeffs[0] = 0.0;
    for (std::size_t i = 1; i < coeffs.size(); ++i) coeffs[i] /= flat_symbol(cfg, grid.wavevector(i));
    const auto out = SurfaceField::from_coefficients(grid, std::move(coeffs)).without_mean();
    std::copy(out.values().begin(), out.values().end(), y.begin());
  };

  std::vector<double> x(grid.size(), 0.0);
  if (initial_guess != nullptr) {
    const auto guess = initial_guess->without_mean();
    std::copy(guess.values().begin(), guess.values().end(), x.begin());
  }
  krylov::GmresOptions options;
  options.tol = tol;
  options.max_iterations = max_iterations;
  options.restart = 80;
  const auto result = krylov::gmres(apply, precondition, rhs_field.values(), x, options);
  if (report != nullptr) *report = {result.iterations, result.residual};
  if (!result.converged) {
    std::ostringstream os;
    os << "dn_inverse reached relative residual " << result.residual << " after " << result.iterations
       << " iterations";
    raise(ErrorCode::kNoConvergence, os.str());
  }
  return to_field(x).without_mean();
}

SurfaceField dn_inverse(const SurfaceField& eta, const SurfaceField& h, const FluidConfig& cfg,
                        const DnBackend& backend, double tol) {
  const auto op = make_dn_operator(eta, cfg, backend);
  return dn_inverse(*op, h, tol);
}

}  // namespace waves::dn
