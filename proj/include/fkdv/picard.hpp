#pragma once

#include "fkdv/solver.hpp"

namespace fkdv {

/// Number of tau panels in the Duhamel quadrature.
inline constexpr int kPicardPanels = 64;

/// Fixed-point iterate of the Duhamel map on [0, t], run in the interaction
/// picture v(tau) = exp(-tau L) u_hat(tau) with a fourth-order cumulative rule.
/// Zero iterations returns the linear propagator. Uses cfg.alpha, cfg.dealias.
Field picard_oracle(const Field& u0, const SimConfig& cfg, double t, int iterations,
                    int panels = kPicardPanels);

}  // namespace fkdv
