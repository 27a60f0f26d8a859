#pragma once

#include <memory>

#include "waves/dn_operator.hpp"

namespace waves::dn::detail {

std::unique_ptr<DnOperator> make_flat_operator(const SurfaceField& eta, const FluidConfig& cfg);
std::unique_ptr<DnOperator> make_craig_sulem_operator(const SurfaceField& eta, const FluidConfig& cfg,
                                                      const CraigSulem& params);
std::unique_ptr<DnOperator> make_elliptic_operator(const SurfaceField& eta, const FluidConfig& cfg,
                                                   const MappedElliptic& params);

}  // namespace waves::dn::detail
