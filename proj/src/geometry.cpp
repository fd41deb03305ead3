#include "oval/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace oval {

OvalTable OvalTable::circle(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("circle: radius must be positive");
    OvalTable t;
    t.kind_ = Kind::Circle;
    t.radius_ = radius;
    return t;
}

OvalTable OvalTable::ellipse(double eccentricity) {
    if (!(std::abs(eccentricity) < 1.0))
        throw std::invalid_argument("ellipse: |e| must be < 1");
    OvalTable t;
    t.kind_ = Kind::Ellipse;
    t.ecc_ = eccentricity;
    t.semi_major_ = 1.0 / std::sqrt(1.0 - eccentricity * eccentricity);
    return t;
}

OvalTable OvalTable::cosine_radius(double amplitude, int harmonic) {
    if (!(std::abs(amplitude) < 1.0))
        throw std::invalid_argument("cosine table: |a| must be < 1 to keep R > 0");
    if (harmonic < 4)
        throw std::invalid_argument("cosine table: harmonic must be >= 4");
    OvalTable t;
    t.kind_ = Kind::CosineRadius;
    t.amp_ = amplitude;
    t.harmonic_ = harmonic;
    const double np = harmonic + 1.0, nm = harmonic - 1.0;
    t.cos_offset_ = 0.5 * amplitude * (1.0 / np - 1.0 / nm);
    return t;
}

namespace {

// The ellipse is traced as (A cos t, 1 + sin t); the tangent angle phi of that
// point satisfies (cos phi, sin phi) || (-A sin t, cos t). Inverting gives
// cos t = sin(phi)/h and sin t = -cos(phi)/(A h) with h normalizing the pair.
struct EllipseParam {
    double ct, st;
};

EllipseParam ellipse_param(double semi_major, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double cx = s;
    const double sx = -c / semi_major;
    const double h = std::hypot(cx, sx);
    return {cx / h, sx / h};
}

}  // namespace

Vec2 OvalTable::point_at(double phi) const {
    switch (kind_) {
        case Kind::Circle:
            return {radius_ * std::sin(phi), radius_ * (1.0 - std::cos(phi))};
        case Kind::Ellipse: {
            const auto p = ellipse_param(semi_major_, phi);
            return {semi_major_ * p.ct, 1.0 + p.st};
        }
        case Kind::CosineRadius: {
            // Antiderivative of R(t)(cos t, sin t) with R = 1 + a cos(n t),
            // shifted so the point at phi = 0 is the origin.
            const double np = harmonic_ + 1.0, nm = harmonic_ - 1.0;
            const double x = std::sin(phi) +
                             amp_ * (std::sin(np * phi) / (2.0 * np) +
                                     std::sin(nm * phi) / (2.0 * nm));
            const double y = (1.0 - std::cos(phi)) -
                             amp_ * (std::cos(np * phi) / (2.0 * np) -
                                     std::cos(nm * phi) / (2.0 * nm)) +
                             cos_offset_;
            return {x, y};
        }
    }
    throw std::logic_error("unreachable");
}

double OvalTable::radius_of_curvature(double phi) const {
    switch (kind_) {
        case Kind::Circle:
            return radius_;
        case Kind::Ellipse: {
            const auto p = ellipse_param(semi_major_, phi);
            const double q = semi_major_ * semi_major_ * p.st * p.st + p.ct * p.ct;
            return q * std::sqrt(q) / semi_major_;
        }
        case Kind::CosineRadius:
            return 1.0 + amp_ * std::cos(harmonic_ * phi);
    }
    throw std::logic_error("unreachable");
}

double OvalTable::chord_length(double phi0, double phi1) const {
    if (wrap_angle(phi0) == wrap_angle(phi1))
        throw std::invalid_argument("chord_length: parameters name the same point");
    return norm(point_at(phi1) - point_at(phi0));
}

double OvalTable::min_curvature_radius() const {
    switch (kind_) {
        case Kind::Circle:
            return radius_;
        case Kind::Ellipse:
            return std::sqrt(1.0 - ecc_ * ecc_);
        case Kind::CosineRadius:
            return 1.0 - std::abs(amp_);
    }
    throw std::logic_error("unreachable");
}

double OvalTable::max_curvature_radius() const {
    switch (kind_) {
        case Kind::Circle:
            return radius_;
        case Kind::Ellipse:
            return 1.0 / (1.0 - ecc_ * ecc_);
        case Kind::CosineRadius:
            return 1.0 + std::abs(amp_);
    }
    throw std::logic_error("unreachable");
}

double OvalTable::diameter() const {
    switch (kind_) {
        case Kind::Circle:
            return 2.0 * radius_;
        case Kind::Ellipse:
            return 2.0 * semi_major_;
        case Kind::CosineRadius:
            // Width across phi and phi+pi. The even-harmonic profile adds the
            // two curvature contributions in phase; odd harmonics cancel and
            // the curve has constant width 2.
            if (harmonic_ % 2 == 0) {
                const double n2 = static_cast<double>(harmonic_) * harmonic_;
                return 2.0 + 2.0 * std::abs(amp_) / (n2 - 1.0);
            }
            return 2.0;
    }
    throw std::logic_error("unreachable");
}

}  // namespace oval
