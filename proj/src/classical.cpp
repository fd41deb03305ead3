#include "oval/classical.hpp"

#include <cmath>
#include <string>

namespace oval {
namespace {

constexpr double refine_width_tol = 1e-13;
constexpr int coarse_samples = 64;

std::string state_str(double phi, double alpha) {
    return "(phi=" + std::to_string(phi) + ", alpha=" + std::to_string(alpha) + ")";
}

// Signed area test for the chord construction: positive while the boundary
// point at parameter psi lies left of the outgoing ray. Along one full turn
// from the departure point the sign is + on the arc before the impact and -
// after it, so the impact parameter is the unique interior sign change.
struct ChordCross {
    const OvalTable& table;
    Vec2 p0;
    Vec2 dir;
    double operator()(double psi) const { return cross(table.point_at(psi) - p0, dir); }
};

// False position with Illinois damping on a bracket c(lo) >= 0 >= c(hi).
// have_lo marks whether clo is an actual sample; the left end may start at
// the departure parameter where the sign is known only as a one-sided limit.
// A bisection step every fourth iteration bounds the worst case.
double refine_impact(const ChordCross& c, double lo, double hi, bool have_lo,
                     double clo, double chi) {
    if (chi > 0.0)
        throw NumericalError("impact search: bracket lost the sign change");
    while (!have_lo && hi - lo > refine_width_tol) {
        const double m = 0.5 * (lo + hi);
        const double cm = c(m);
        if (cm > 0.0) {
            lo = m;
            clo = cm;
            have_lo = true;
        } else {
            hi = m;
            chi = cm;
        }
    }
    int side = 0;
    for (int iter = 0; iter < 200 && hi - lo > refine_width_tol; ++iter) {
        double x;
        if ((iter & 3) == 3 || chi == clo) {
            x = 0.5 * (lo + hi);
        } else {
            x = (lo * chi - hi * clo) / (chi - clo);
            const double margin = 1e-3 * (hi - lo);
            if (!(x >= lo + margin && x <= hi - margin)) x = 0.5 * (lo + hi);
        }
        const double cx = c(x);
        if (cx > 0.0) {
            lo = x;
            clo = cx;
            if (side == -1) chi *= 0.5;
            side = -1;
        } else if (cx < 0.0) {
            hi = x;
            chi = cx;
            if (side == +1) clo *= 0.5;
            side = +1;
        } else {
            return x;
        }
    }
    if (hi - lo > 1e-10)
        throw NumericalError("impact search failed to converge");
    return 0.5 * (lo + hi);
}

}  // namespace

StepResult billiard_step_full(const OvalTable& table, const PhaseState& s0, double guard) {
    if (!(s0.alpha >= guard && s0.alpha <= pi - guard))
        throw GrazingError("billiard_step: outgoing ray grazes the boundary at " +
                           state_str(s0.phi, s0.alpha));
    const double phi0 = s0.phi;
    const double theta = phi0 + s0.alpha;
    const Vec2 p0 = table.point_at(phi0);
    const Vec2 dir{std::cos(theta), std::sin(theta)};
    const ChordCross c{table, p0, dir};

    double psi1 = -1.0;  // impact parameter, searched in (phi0, phi0 + 2*pi)

    // Local bracket around the constant-curvature guess. Any bracket strictly
    // inside the period with the right signs contains the impact, so failure
    // here only means falling back to the global scan.
    {
        const double ug = 2.0 * s0.alpha;
        const double lo = std::max(ug - 0.5, 1e-6);
        const double hi = std::min(ug + 0.5, two_pi - 1e-6);
        if (lo < hi) {
            const double clo = c(phi0 + lo);
            if (clo > 0.0) {
                const double chi = c(phi0 + hi);
                if (chi < 0.0)
                    psi1 = refine_impact(c, phi0 + lo, phi0 + hi, true, clo, chi);
            }
        }
    }
    if (psi1 < 0.0) {
        const double step = two_pi / coarse_samples;
        double lo = phi0, clo = 0.0;
        bool have_lo = false;
        for (int k = 1; k < coarse_samples && psi1 < 0.0; ++k) {
            const double psi = phi0 + k * step;
            const double ck = c(psi);
            if (ck <= 0.0)
                psi1 = refine_impact(c, lo, psi, have_lo, clo, ck);
            else {
                lo = psi;
                clo = ck;
                have_lo = true;
            }
        }
        if (psi1 < 0.0) {
            const double hi = phi0 + two_pi - 1e-9;
            psi1 = refine_impact(c, lo, hi, have_lo, clo, c(hi));
        }
    }

    double r = std::fmod(theta - psi1, pi);  // r = pi - alpha1
    if (r < 0.0) r += pi;
    if (r < guard || r > pi - guard)
        throw GrazingError("billiard_step: arriving ray grazes the boundary near " +
                           state_str(wrap_angle(psi1), pi - r));

    StepResult out;
    out.state = PhaseState(psi1, pi - r);
    out.phi_raw = psi1;
    out.chord = norm(table.point_at(psi1) - p0);
    return out;
}

PhaseState billiard_inverse(const OvalTable& table, const PhaseState& s1, double guard) {
    const PhaseState reversed{s1.phi, pi - s1.alpha};
    const PhaseState image = billiard_step(table, reversed, guard);
    return {image.phi, pi - image.alpha};
}

Mat2 billiard_derivative(const OvalTable& table, const PhaseState& s0, const PhaseState& s1) {
    const double L = table.chord_length(s0.phi, s1.phi);
    const double w0 = table.radius_of_curvature(s0.phi) * std::sin(s0.alpha);
    const double w1 = table.radius_of_curvature(s1.phi) * std::sin(s1.alpha);
    return {(L - w0) / w1, L / w1, (L - w0 - w1) / w1, (L - w1) / w1};
}

double measure_density(const OvalTable& table, const PhaseState& s) {
    return table.radius_of_curvature(s.phi) * std::sin(s.alpha);
}

}  // namespace oval
