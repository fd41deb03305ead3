#include "oval/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oval {

InvariantCurve InvariantCurve::constant_line(double beta0) {
    if (!(beta0 > 0.0 && beta0 < pi))
        throw std::invalid_argument("constant_line: need 0 < beta0 < pi");
    InvariantCurve c;
    c.kind_ = Kind::ConstantLine;
    c.beta0_ = beta0;
    return c;
}

InvariantCurve InvariantCurve::ellipse_level(double level, double eccentricity,
                                             Branch branch) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("ellipse_level: rotational levels need 0 < F0 < 1");
    if (!(std::abs(eccentricity) < 1.0))
        throw std::invalid_argument("ellipse_level: need |e| < 1");
    InvariantCurve c;
    c.kind_ = Kind::EllipseLevel;
    c.branch_ = branch;
    c.level_ = level;
    c.ecc_ = eccentricity;
    return c;
}

double InvariantCurve::g(double phi) const {
    if (kind_ == Kind::ConstantLine) return beta0_;
    const double cp = std::cos(phi);
    const double q = level_ + (1.0 - level_) * ecc_ * ecc_ * cp * cp;
    const double lower = std::acos(std::sqrt(q));
    return branch_ == Branch::Lower ? lower : pi - lower;
}

double InvariantCurve::g_slope(double phi) const {
    if (kind_ == Kind::ConstantLine) return 0.0;
    // Implicit differentiation of cos^2(alpha) = F0 + (1-F0) e^2 cos^2(phi).
    const double s2a = std::sin(2.0 * g(phi));
    const double num = (1.0 - level_) * ecc_ * ecc_ * std::sin(2.0 * phi);
    if (s2a == 0.0) {
        if (num == 0.0) return 0.0;
        throw std::domain_error("g_slope: level set degenerates at this phi");
    }
    return num / s2a;
}

double ellipse_first_integral(double eccentricity, double phi, double alpha) {
    const double e2 = eccentricity * eccentricity;
    const double ca = std::cos(alpha), cp = std::cos(phi);
    return (ca * ca - e2 * cp * cp) / (1.0 - e2 * cp * cp);
}

TransitionQuantities transition_quantities(const OvalTable& table,
                                           const InvariantCurve& curve,
                                           const PhaseState& s0,
                                           const PhaseState& s1) {
    TransitionQuantities q;
    q.chord = table.chord_length(s0.phi, s1.phi);
    q.w0 = table.radius_of_curvature(s0.phi) * std::sin(s0.alpha);
    q.w1 = table.radius_of_curvature(s1.phi) * std::sin(s1.alpha);
    q.g0_slope = curve.g_slope(s0.phi);
    q.g1_slope = curve.g_slope(s1.phi);
    const double fwd = 1.0 + q.g0_slope;   // caustic weight at departure
    const double bwd = 1.0 - q.g1_slope;   // caustic weight at arrival
    q.l0 = q.chord * fwd - q.w0;
    q.l1 = q.chord * bwd - q.w1;
    q.l01 = q.chord * fwd * bwd - bwd * q.w0 - fwd * q.w1;
    return q;
}

TransitionQuantities transition_quantities(const OvalTable& table,
                                           const InvariantCurve& curve,
                                           const PhaseState& s0) {
    return transition_quantities(table, curve, s0, billiard_step(table, s0));
}

double caustic_residual(const OvalTable& table, const InvariantCurve& curve, double phi0) {
    const PhaseState s0(phi0, curve.g(phi0));
    const PhaseState s1 = billiard_step(table, s0);
    const double w0 = table.radius_of_curvature(s0.phi) * std::sin(s0.alpha);
    const double w1 = table.radius_of_curvature(s1.phi) * std::sin(s1.alpha);
    const double chord = table.chord_length(s0.phi, s1.phi);
    return w0 / (1.0 + curve.g_slope(s0.phi)) + w1 / (1.0 - curve.g_slope(s1.phi)) - chord;
}

double sampled_lower_bound_l(const OvalTable& table, const InvariantCurve& curve,
                             int samples) {
    if (samples < 1) throw std::invalid_argument("sampled_lower_bound_l: samples >= 1");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double phi0 = i * two_pi / samples;
        const auto q = transition_quantities(table, curve, PhaseState(phi0, curve.g(phi0)));
        if (q.l1 > 0.0) best = std::min(best, q.l0 / q.l1);
    }
    if (!std::isfinite(best))
        throw NumericalError("sampled_lower_bound_l: no transition had l1 > 0");
    return best;
}

double lower_bound_l(const OvalTable& table, const InvariantCurve& curve) {
    using TK = OvalTable::Kind;
    using CK = InvariantCurve::Kind;
    if (table.kind() == TK::Circle && curve.kind() == CK::ConstantLine) return 1.0;
    if (table.kind() == TK::CosineRadius && curve.kind() == CK::ConstantLine)
        return table.min_curvature_radius() / table.max_curvature_radius();
    if (table.kind() == TK::Ellipse && curve.kind() == CK::EllipseLevel) {
        if (std::abs(table.eccentricity() - curve.eccentricity()) > 1e-12)
            throw std::invalid_argument(
                "lower_bound_l: curve eccentricity does not match the table");
        const double e2 = table.eccentricity() * table.eccentricity();
        const double k = (1.0 - curve.level()) * e2;
        const double ratio = (1.0 - k) / (1.0 + k);
        return (1.0 - e2) * (1.0 - e2) * ratio * ratio;
    }
    // Mismatched pairs have no closed form and generally no invariance; the
    // sampled estimate is a diagnostic only.
    return 0.999 * sampled_lower_bound_l(table, curve);
}

namespace {

double line_defect(int n, double beta) { return n * std::tan(beta) - std::tan(n * beta); }

// Bisection on a sign-change bracket of the defect, poles excluded upstream.
double bisect_defect(int n, double lo, double hi, double flo) {
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = line_defect(n, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double solve_beta0(int harmonic) {
    if (harmonic < 4) throw std::invalid_argument("solve_beta0: harmonic must be >= 4");
    const int n = harmonic;
    const double lo_end = (n - 2) * pi / (2.0 * n);
    const double hi_end = 0.5 * pi;

    // Split the search interval at the poles of tan(n beta), then scan each
    // piece for sign changes of n tan(beta) - tan(n beta).
    std::vector<double> cuts{lo_end};
    for (int k = 0;; ++k) {
        const double pole = (2 * k + 1) * pi / (2.0 * n);
        if (pole >= hi_end) break;
        if (pole > lo_end) cuts.push_back(pole);
    }
    cuts.push_back(hi_end);

    std::vector<double> roots;
    const double margin = 1e-9;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double a = cuts[seg] + margin;
        const double b = cuts[seg + 1] - margin;
        if (!(b > a)) continue;
        const int grid = 4096;
        double prev = a, fprev = line_defect(n, prev);
        for (int i = 1; i <= grid; ++i) {
            const double x = a + (b - a) * i / grid;
            const double fx = line_defect(n, x);
            if (fx == 0.0)
                roots.push_back(x);
            else if ((fx > 0.0) != (fprev > 0.0))
                roots.push_back(bisect_defect(n, prev, x, fprev));
            prev = x;
            fprev = fx;
        }
    }
    if (roots.empty())
        throw NumericalError("solve_beta0: no root of the resonance condition found");
    // The invariant line the cosine tables carry corresponds to the root
    // closest to pi/2 from below.
    return *std::max_element(roots.begin(), roots.end());
}

}  // namespace oval
