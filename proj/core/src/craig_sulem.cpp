#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "dn_backends.hpp"
#include "waves/error.hpp"
#include "waves/spectral.hpp"

namespace waves::dn {
namespace {

// Expansion G[η] = Σ_j G_j(η), derived from the traces of the bottom-adapted
// harmonics cosh(|k|(y+b))e^{ik·x}. With A_m the multiplier |k|^m·c_m,
// c_m = 1 for even m and tanh(b|k|) for odd m (1 in infinite depth):
//
//   G_0 = A_1,
//   G_j g = −∇·((η^j/j!) ∇A_{j−1}g) − Σ_{m=1}^{j} G_{j−m}((η^m/m!) A_m g).
class CraigSulemOperator final : public DnOperator {
 public:
  CraigSulemOperator(const SurfaceField& eta, const FluidConfig& cfg, const CraigSulem& params)
      : DnOperator(eta, cfg), params_(params) {
    check_admissible(eta, cfg);
    powers_.push_back(SurfaceField::constant(eta.grid(), 1.0));
    for (int m = 1; m <= params.order; ++m) {
      powers_.push_back(
          spectral::dealias((1.0 / m) * multiply(powers_.back(), eta), params.dealias));
    }
  }

  SurfaceField apply(const SurfaceField& g) const override { return series(g, nullptr).without_mean(); }

  /// Sum of the series; `term_norms` (if given) receives ‖G_j g‖_{L²}.
  SurfaceField series(const SurfaceField& g, std::vector<double>* term_norms) const {
    SurfaceField total(g.grid());
    int growth_streak = 0;
    double previous = 0.0;
    for (int j = 0; j <= params_.order; ++j) {
      const auto term = term_of_order(j, g);
      const double norm = spectral::l2_norm(term);
      if (term_norms != nullptr) term_norms->push_back(norm);
      if (j > 0 && norm > previous && norm > 1e-14 * spectral::l2_norm(g)) {
        if (++growth_streak >= 3) {
          std::ostringstream os;
          os << "series terms grew for 3 consecutive orders (|G_" << j << " g| = " << norm << ")";
          raise(ErrorCode::kSeriesDiverging, os.str());
        }
      } else {
        growth_streak = 0;
      }
      previous = norm;
      total = total + term;
    }
    return total;
  }

 private:
  SurfaceField multiplier_a(int m, const SurfaceField& f) const {
    const auto& cfg = config();
    const bool finite = cfg.is_finite();
    const double b = cfg.nominal_depth();
    return spectral::apply_multiplier(f, [&](const Wavevector& k) {
      const double km = std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
      if (m == 0) return Complex(1.0);
      double c = 1.0;
      if ((m % 2) == 1 && finite) c = std::tanh(b * km);
      return Complex(std::pow(km, m) * c);
    });
  }

  SurfaceField product(const SurfaceField& a, const SurfaceField& b) const {
    return spectral::dealias(multiply(a, b), params_.dealias);
  }

  // TODO: the recursion re-expands lower orders on fresh inputs, so cost
  // doubles per order (fine for M ≤ 8); the transposed recursion is O(M²).
  SurfaceField term_of_order(int j, const SurfaceField& f) const {
    if (j == 0) return multiplier_a(1, f);
    const auto grad = spectral::gradient(multiplier_a(j - 1, f));
    SurfaceField div(f.grid());
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const MultiIndex e = i == 0 ? MultiIndex{1, 0} : MultiIndex{0, 1};
      div = div + spectral::derivative(product(powers_[static_cast<std::size_t>(j)], grad[i]), e);
    }
    SurfaceField result = -div;
    for (int m = 1; m <= j; ++m) {
      const auto inner = product(powers_[static_cast<std::size_t>(m)], multiplier_a(m, f));
      result = result - term_of_order(j - m, inner);
    }
    return result;
  }

  CraigSulem params_;
  std::vector<SurfaceField> powers_;  // η^m / m!
};

class FlatOperator final : public DnOperator {
 public:
  FlatOperator(const SurfaceField& eta, const FluidConfig& cfg) : DnOperator(eta, cfg) {}
  SurfaceField apply(const SurfaceField& g) const override { return dn_flat(g, config()); }
};

}  // namespace

SurfaceField dn_craig_sulem(const SurfaceField& eta, const SurfaceField& g, const FluidConfig& cfg,
                            const CraigSulem& params) {
  validate(params);
  return CraigSulemOperator(eta, cfg, params).apply(g);
}

namespace detail {

std::unique_ptr<DnOperator> make_flat_operator(const SurfaceField& eta, const FluidConfig& cfg) {
  return std::make_unique<FlatOperator>(eta, cfg);
}

std::unique_ptr<DnOperator> make_craig_sulem_operator(const SurfaceField& eta, const FluidConfig& cfg,
                                                      const CraigSulem& params) {
  return std::make_unique<CraigSulemOperator>(eta, cfg, params);
}

}  // namespace detail
}  // namespace waves::dn
