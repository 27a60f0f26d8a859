#include <cmath>
#include <sstream>

#include "waves/dn_operator.hpp"
#include "waves/error.hpp"

namespace waves::dn {

FluidConfig FluidConfig::finite(double b, int dim) {
  if (!(b > 0.0)) raise(ErrorCode::kInvalidArgument, "finite depth requires b > 0");
  return FluidConfig{FiniteDepth{b}, 0.1 * b, dim};
}

FluidConfig FluidConfig::infinite(double layer_depth, int dim) {
  if (!(layer_depth > 0.0)) raise(ErrorCode::kInvalidArgument, "layer depth must be positive");
  return FluidConfig{InfiniteDepth{layer_depth}, 0.1, dim};
}

double FluidConfig::nominal_depth() const noexcept {
  if (const auto* f = std::get_if<FiniteDepth>(&depth)) return f->b;
  return std::get<InfiniteDepth>(depth).layer_depth;
}

void validate(const DnBackend& backend) {
  if (const auto* cs = std::get_if<CraigSulem>(&backend)) {
    if (cs->order < 0 || cs->order > 8) raise(ErrorCode::kInvalidArgument, "Craig-Sulem order must be in [0, 8]");
  } else if (const auto* me = std::get_if<MappedElliptic>(&backend)) {
    if (me->vertical_points < 16) raise(ErrorCode::kInvalidArgument, "mapped elliptic needs >= 16 vertical points");
    if (!(me->solver_tol >= 1e-14 && me->solver_tol <= 1e-6)) {
      raise(ErrorCode::kInvalidArgument, "mapped elliptic tolerance must lie in [1e-14, 1e-6]");
    }
    if (me->max_iterations < 1) raise(ErrorCode::kInvalidArgument, "max_iterations must be positive");
  }
}

std::string describe(const DnBackend& backend) {
  std::ostringstream os;
  if (std::holds_alternative<FlatSymbol>(backend)) {
    os << "flat-symbol";
  } else if (const auto* cs = std::get_if<CraigSulem>(&backend)) {
    os << "craig-sulem(M=" << cs->order << ")";
  } else {
    const auto& me = std::get<MappedElliptic>(backend);
    os << "mapped-elliptic(points=" << me.vertical_points << ", tol=" << me.solver_tol << ")";
  }
  return os.str();
}

double flat_symbol(const FluidConfig& cfg, const Wavevector& k) {
  const double km = std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
  if (const auto* f = std::get_if<FiniteDepth>(&cfg.depth)) return km * std::tanh(f->b * km);
  return km;
}

void check_admissible(const SurfaceField& eta, const FluidConfig& cfg) {
  if (!std::isfinite(eta.max_abs())) raise(ErrorCode::kInvalidArgument, "surface has non-finite samples");
  if (const auto* f = std::get_if<FiniteDepth>(&cfg.depth)) {
    const double gap = eta.min_value() + f->b;
    if (gap < cfg.separation_margin) {
      std::ostringstream os;
      os << "inf(eta + b) = " << gap << " < separation margin " << cfg.separation_margin;
      raise(ErrorCode::kSeparationViolated, os.str());
    }
  }
}

double effective_depth(const SurfaceField& eta, const FluidConfig& cfg) {
  if (const auto* f = std::get_if<FiniteDepth>(&cfg.depth)) return f->b;
  const auto& inf = std::get<InfiniteDepth>(cfg.depth);
  return eta.max_abs() + inf.layer_depth;
}

SurfaceField dn_flat(const SurfaceField& g, const FluidConfig& cfg) {
  std::vector<Complex> coeffs(g.coeffs().begin(), g.coeffs().end());
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= flat_symbol(cfg, g.grid().wavevector(i));
  coeffs[0] = 0.0;
  return SurfaceField::from_coefficients(g.grid(), std::move(coeffs)).without_mean();
}

}  // namespace waves::dn
