#pragma once

#include "oval/common.hpp"
#include "oval/geometry.hpp"

namespace oval {

/// Outgoing collision state: boundary point (tangent angle phi, reduced to
/// [0, 2*pi)) and the angle alpha in (0, pi) between the boundary tangent and
/// the outgoing ray. Construction rejects tangent directions.
struct PhaseState {
    PhaseState() = default;
    PhaseState(double phi_, double alpha_) : phi(wrap_angle(phi_)), alpha(alpha_) {
        if (!(alpha > 0.0 && alpha < pi) || !std::isfinite(phi_))
            throw std::invalid_argument("PhaseState: need 0 < alpha < pi");
    }
    double phi = 0.0;
    double alpha = 0.5 * pi;
};

/// Margin around {0, pi} inside which a direction counts as grazing.
inline constexpr double grazing_guard = 1e-8;

/// Result of one bounce, keeping the unreduced parameter of the new point so
/// callers can accumulate a lift (phi_raw - s0.phi lies in (0, 2*pi)).
struct StepResult {
    PhaseState state;
    double phi_raw = 0.0;
    double chord = 0.0;
};

/// One bounce of the elastic billiard map. Throws GrazingError when the
/// outgoing or arriving ray is within `guard` of tangency, NumericalError if
/// the impact search fails to converge.
StepResult billiard_step_full(const OvalTable& table, const PhaseState& s0,
                              double guard = grazing_guard);

inline PhaseState billiard_step(const OvalTable& table, const PhaseState& s0,
                                double guard = grazing_guard) {
    return billiard_step_full(table, s0, guard).state;
}

/// Inverse bounce, realized through the time-reversal symmetry
/// (phi, alpha) -> (phi, pi - alpha) conjugating the map to its inverse.
PhaseState billiard_inverse(const OvalTable& table, const PhaseState& s1,
                            double guard = grazing_guard);

/// Derivative of the billiard map along the transition s0 -> s1 = B(s0),
/// in (phi, alpha) coordinates at both ends.
Mat2 billiard_derivative(const OvalTable& table, const PhaseState& s0,
                         const PhaseState& s1);

/// Density of the invariant measure R(phi) sin(alpha) d(phi) d(alpha).
double measure_density(const OvalTable& table, const PhaseState& s);

}  // namespace oval
