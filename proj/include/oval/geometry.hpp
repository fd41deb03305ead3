#pragma once

#include "oval/common.hpp"

namespace oval {

/// A strictly convex table boundary parameterized by the tangent angle phi:
/// the unit tangent at parameter phi is (cos phi, sin phi), and the boundary
/// point satisfies dGamma/dphi = R(phi) * (cos phi, sin phi) with R the radius
/// of curvature. All queries are 2*pi-periodic in phi and accept any real
/// argument. Gamma(0) = (0, 0) for every table.
class OvalTable {
  public:
    enum class Kind { Circle, Ellipse, CosineRadius };

    /// Circle of the given radius, radius > 0.
    static OvalTable circle(double radius);

    /// Ellipse with semi-minor axis 1 (vertical) and eccentricity e, |e| < 1.
    /// The semi-major axis 1/sqrt(1 - e^2) is horizontal.
    static OvalTable ellipse(double eccentricity);

    /// Table with radius of curvature R(phi) = 1 + a*cos(n*phi), |a| < 1,
    /// n >= 4 so the curve stays a simple strictly convex oval.
    static OvalTable cosine_radius(double amplitude, int harmonic);

    Kind kind() const { return kind_; }
    double radius() const { return radius_; }
    double eccentricity() const { return ecc_; }
    double amplitude() const { return amp_; }
    int harmonic() const { return harmonic_; }

    /// Boundary point at tangent angle phi.
    Vec2 point_at(double phi) const;

    /// Radius of curvature at phi, strictly positive.
    double radius_of_curvature(double phi) const;

    /// Euclidean chord length |Gamma(phi1) - Gamma(phi0)|.
    /// The two parameters must name distinct boundary points.
    double chord_length(double phi0, double phi1) const;

    double min_curvature_radius() const;
    double max_curvature_radius() const;
    double diameter() const;

  private:
    OvalTable() = default;
    Kind kind_ = Kind::Circle;
    double radius_ = 1.0;  // circle
    double ecc_ = 0.0;     // ellipse
    double amp_ = 0.0;     // cosine profile
    int harmonic_ = 0;
    // cached ellipse semi-major axis, cosine integration constant
    double semi_major_ = 1.0;
    double cos_offset_ = 0.0;
};

}  // namespace oval
