#pragma once

#include "oval/classical.hpp"
#include "oval/common.hpp"
#include "oval/geometry.hpp"

namespace oval {

/// Rotational curve alpha = g(phi) in the open cylinder, the candidate
/// attractor of the dissipative reflection laws. Two families are supported:
/// horizontal lines alpha = beta0 (invariant for tables whose caustic
/// structure makes that line invariant, e.g. circles and the resonant lines
/// of cosine-profile tables) and level sets of the elliptic first integral.
class InvariantCurve {
  public:
    enum class Kind { ConstantLine, EllipseLevel };
    enum class Branch { Lower, Upper };

    /// alpha = beta0, with 0 < beta0 < pi.
    static InvariantCurve constant_line(double beta0);

    /// Branch of the level set F(phi, alpha) = F0 of the elliptic integral,
    /// 0 < F0 < 1 (rotational regime), |e| < 1. Lower branch lies in
    /// (0, pi/2), upper in (pi/2, pi).
    static InvariantCurve ellipse_level(double level, double eccentricity,
                                        Branch branch = Branch::Lower);

    Kind kind() const { return kind_; }
    Branch branch() const { return branch_; }
    double beta0() const { return beta0_; }
    double level() const { return level_; }
    double eccentricity() const { return ecc_; }

    /// Fiber coordinate g(phi) of the curve, in (0, pi).
    double g(double phi) const;

    /// d g / d phi.
    double g_slope(double phi) const;

  private:
    InvariantCurve() = default;
    Kind kind_ = Kind::ConstantLine;
    Branch branch_ = Branch::Lower;
    double beta0_ = 0.5 * pi;
    double level_ = 0.0;
    double ecc_ = 0.0;
};

/// First integral of the elliptic billiard in (phi, alpha) coordinates for
/// the semi-minor-axis-1 normalization. Constant along orbits; rotational
/// level sets have 0 < F < 1.
double ellipse_first_integral(double eccentricity, double phi, double alpha);

/// Per-transition quantities entering the cone estimates for one bounce
/// s0 -> s1 across a curve alpha = g(phi). The combinations l0, l1, l01
/// measure the chord against the curve's caustic tangent lengths.
struct TransitionQuantities {
    double chord = 0.0;
    double w0 = 0.0;  // R(phi0) sin(alpha0)
    double w1 = 0.0;  // R(phi1) sin(alpha1)
    double g0_slope = 0.0;
    double g1_slope = 0.0;
    double l0 = 0.0;   // L (1 + g'(phi0)) - w0
    double l1 = 0.0;   // L (1 - g'(phi1)) - w1
    double l01 = 0.0;  // L (1 + g'(phi0)) (1 - g'(phi1)) - (1 - g'(phi1)) w0 - (1 + g'(phi0)) w1
};

/// Quantities for the transition that starts at s0; the endpoint is computed
/// with the elastic map.
TransitionQuantities transition_quantities(const OvalTable& table,
                                           const InvariantCurve& curve,
                                           const PhaseState& s0);

/// Same, for an already-computed endpoint s1 = B(s0).
TransitionQuantities transition_quantities(const OvalTable& table,
                                           const InvariantCurve& curve,
                                           const PhaseState& s0,
                                           const PhaseState& s1);

/// Defect of the caustic focusing relation
///   w0 / (1 + g'(phi0)) + w1 / (1 - g'(phi1)) - L
/// along the transition starting on the curve at phi0. Vanishes exactly when
/// the curve is invariant, so it doubles as an invariance diagnostic.
double caustic_residual(const OvalTable& table, const InvariantCurve& curve, double phi0);

/// Uniform lower bound for the ratio l0/l1 over transitions starting on the
/// curve, entering the contraction threshold 1 - lower_bound. Closed forms
/// exist for the supported invariant pairs (circle/line -> 1, cosine/line ->
/// min R / max R, ellipse/level -> the quartic expression in e and F0);
/// other combinations fall back to a sampled estimate times a 0.999 safety
/// factor, which is only a diagnostic.
double lower_bound_l(const OvalTable& table, const InvariantCurve& curve);

/// Sampled fallback for lower_bound_l: min of l0/l1 over transitions started
/// at `samples` equispaced base points on the curve.
double sampled_lower_bound_l(const OvalTable& table, const InvariantCurve& curve,
                             int samples = 10000);

/// Height of the invariant resonant line of the cosine-profile table with
/// harmonic n: the root of n tan(beta) = tan(n beta) in ((n-2) pi / (2n), pi/2)
/// closest to pi/2. Throws NumericalError if no root is found.
double solve_beta0(int harmonic);

}  // namespace oval
