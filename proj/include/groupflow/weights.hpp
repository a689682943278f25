#pragma once

#include <cmath>

#include "groupflow/error.hpp"

namespace groupflow {

/// Slope of the dispersion balance sigmoid, per meter.
inline constexpr double kBalanceSharpness = 6.0;

/// The six utility coefficients plus the dispersion threshold delta.
/// This is the entire tunable surface of the model.
struct Weights {
    double kappa_g = 12.0;  // goal attraction
    double kappa_ob = 5.0;  // obstacle repulsion
    double kappa_s = 4.0;   // proxemic distance keeping
    double kappa_c = 12.0;  // group cohesion
    double kappa_d = 3.0;   // direction inertia
    double kappa_ov = 0.0;  // counter-flow overlap (unused in uni-directional runs)
    double delta = 0.7;     // dispersion threshold, meters

    void validate() const {
        const double all[] = {kappa_g, kappa_ob, kappa_s, kappa_c, kappa_d, kappa_ov, delta};
        for (double v : all) {
            if (!std::isfinite(v) || v < 0.0)
                throw Error("invalid-weights", "coefficients must be finite and >= 0");
        }
    }
};

/// Sigmoid gate in [0,1]: ~0 for a compact group, 0.5 at dispersion == delta,
/// ~1 once the group has fragmented.
inline double balance_gate(double dispersion_m, double delta_m) {
    return 1.0 / (1.0 + std::exp(-kBalanceSharpness * (dispersion_m - delta_m)));
}

/// Adapts the weights of a grouped agent to the instantaneous group
/// dispersion: cohesion scales with the gate while goal attraction and
/// inertia are inhibited by it. All other coefficients pass through.
inline Weights balance_weights(const Weights& base, double dispersion_m) {
    const double b = balance_gate(dispersion_m, base.delta);
    Weights eff = base;
    eff.kappa_c = base.kappa_c * b;
    eff.kappa_g = base.kappa_g * (1.0 - b);
    eff.kappa_d = base.kappa_d * (1.0 - b);
    return eff;
}

} // namespace groupflow
