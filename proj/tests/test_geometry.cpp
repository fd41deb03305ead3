#include "oval/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oval/common.hpp"

using namespace oval;

namespace {

// Independent reconstruction of the boundary point: integrate the tangent
// field R(t)(cos t, sin t) from 0 to phi with composite Simpson quadrature.
// Uses none of the library's closed forms, only radius_of_curvature.
Vec2 quadrature_point(const OvalTable& table, double phi, int panels = 20000) {
    auto f = [&](double t) {
        double r = table.radius_of_curvature(t);
        return Vec2{r * std::cos(t), r * std::sin(t)};
    };
    double h = phi / panels;
    Vec2 acc{0.0, 0.0};
    for (int k = 0; k < panels; ++k) {
        double a = k * h;
        Vec2 fa = f(a), fm = f(a + 0.5 * h), fb = f(a + h);
        acc = acc + (h / 6.0) * (fa + 4.0 * fm + fb);
    }
    return acc;
}

double fd_radius(const OvalTable& table, double phi, double h = 1e-5) {
    Vec2 d = (1.0 / (2.0 * h)) * (table.point_at(phi + h) - table.point_at(phi - h));
    return norm(d);
}

}  // namespace

TEST_CASE("boundary point matches tangent-field quadrature") {
    std::vector<OvalTable> tables = {
        OvalTable::circle(1.0),
        OvalTable::circle(2.5),
        OvalTable::ellipse(0.35),
        OvalTable::ellipse(0.8),
        OvalTable::cosine_radius(0.01, 6),
        OvalTable::cosine_radius(0.2, 5),
    };
    for (const auto& table : tables) {
        for (double phi : {0.3, 1.0, pi / 2, 2.0, pi, 4.0, 5.5, two_pi - 0.1}) {
            CAPTURE(phi);
            Vec2 p = table.point_at(phi);
            Vec2 q = quadrature_point(table, phi);
            CHECK(std::abs(p.x - q.x) < 1e-10);
            CHECK(std::abs(p.y - q.y) < 1e-10);
        }
    }
}

TEST_CASE("boundary starts at the origin with horizontal tangent") {
    for (const auto& table :
         {OvalTable::circle(3.0), OvalTable::ellipse(0.5), OvalTable::cosine_radius(0.05, 4)}) {
        Vec2 p0 = table.point_at(0.0);
        CHECK(std::abs(p0.x) < 1e-12);
        CHECK(std::abs(p0.y) < 1e-12);
        double h = 1e-6;
        Vec2 d = (1.0 / (2.0 * h)) * (table.point_at(h) - table.point_at(two_pi - h));
        CHECK(d.x == doctest::Approx(table.radius_of_curvature(0.0)).epsilon(1e-6));
        CHECK(std::abs(d.y) < 1e-6);
    }
}

TEST_CASE("tangent direction is (cos phi, sin phi) and speed is the curvature radius") {
    for (const auto& table :
         {OvalTable::circle(1.7), OvalTable::ellipse(0.35), OvalTable::cosine_radius(0.01, 6)}) {
        for (double phi = 0.05; phi < two_pi; phi += 0.37) {
            double h = 1e-6;
            Vec2 d = (1.0 / (2.0 * h)) * (table.point_at(phi + h) - table.point_at(phi - h));
            double r = table.radius_of_curvature(phi);
            CHECK(norm(d) == doctest::Approx(r).epsilon(1e-7));
            CHECK(d.x == doctest::Approx(r * std::cos(phi)).epsilon(1e-6).scale(1.0));
            CHECK(d.y == doctest::Approx(r * std::sin(phi)).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("finite-difference speed equals radius_of_curvature") {
    for (const auto& table : {OvalTable::ellipse(0.6), OvalTable::cosine_radius(0.15, 5)}) {
        for (double phi = 0.1; phi < two_pi; phi += 0.5) {
            CHECK(fd_radius(table, phi) ==
                  doctest::Approx(table.radius_of_curvature(phi)).epsilon(1e-8));
        }
    }
}

TEST_CASE("circle closed forms") {
    double R = 1.75;
    OvalTable c = OvalTable::circle(R);
    for (double phi = 0.0; phi < two_pi; phi += 0.3) {
        Vec2 p = c.point_at(phi);
        CHECK(p.x == doctest::Approx(R * std::sin(phi)).epsilon(1e-14).scale(R));
        CHECK(p.y == doctest::Approx(R * (1.0 - std::cos(phi))).epsilon(1e-14).scale(R));
        CHECK(c.radius_of_curvature(phi) == R);
    }
    // chord between boundary points subtending parameter gap d is 2R |sin(d/2)|
    for (double a = 0.2; a < two_pi; a += 0.9) {
        for (double b = 0.1; b < two_pi; b += 0.7) {
            if (std::abs(angle_diff(a, b)) < 1e-6) continue;
            double want = 2.0 * R * std::abs(std::sin(0.5 * (b - a)));
            CHECK(c.chord_length(a, b) == doctest::Approx(want).epsilon(1e-13));
        }
    }
    CHECK(c.min_curvature_radius() == R);
    CHECK(c.max_curvature_radius() == R);
    CHECK(c.diameter() == doctest::Approx(2.0 * R).epsilon(1e-12));
}

TEST_CASE("ellipse curvature radius extremes") {
    double e = 0.35;
    OvalTable t = OvalTable::ellipse(e);
    double rmin = std::sqrt(1.0 - e * e);       // at the flat ends of the minor axis sweep
    double rmax = 1.0 / (1.0 - e * e);          // at the tips of the major axis
    CHECK(t.min_curvature_radius() == doctest::Approx(rmin).epsilon(1e-12));
    CHECK(t.max_curvature_radius() == doctest::Approx(rmax).epsilon(1e-12));
    CHECK(t.radius_of_curvature(pi / 2) == doctest::Approx(rmin).epsilon(1e-12));
    CHECK(t.radius_of_curvature(0.0) == doctest::Approx(rmax).epsilon(1e-12));
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k < 4096; ++k) {
        double r = t.radius_of_curvature(two_pi * k / 4096.0);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(lo >= rmin - 1e-8);
    CHECK(hi <= rmax + 1e-8);
    CHECK(lo == doctest::Approx(rmin).epsilon(1e-6));
    CHECK(hi == doctest::Approx(rmax).epsilon(1e-6));
}

TEST_CASE("ellipse closes after a full parameter sweep") {
    for (double e : {0.1, 0.35, 0.7, 0.95}) {
        OvalTable t = OvalTable::ellipse(e);
        Vec2 p = t.point_at(two_pi - 1e-12);
        CHECK(std::abs(p.x) < 1e-9);
        CHECK(std::abs(p.y) < 1e-9);
    }
}

TEST_CASE("cosine-radius profile and frozen boundary point") {
    double a = 0.01;
    int n = 6;
    OvalTable t = OvalTable::cosine_radius(a, n);
    for (double phi = 0.0; phi < two_pi; phi += 0.41) {
        CHECK(t.radius_of_curvature(phi) ==
              doctest::Approx(1.0 + a * std::cos(n * phi)).epsilon(1e-14));
    }
    // Value pinned against exact term-by-term antiderivatives evaluated at pi/2.
    Vec2 p = t.point_at(pi / 2);
    CHECK(p.x == doctest::Approx(1.0002857142857143).epsilon(1e-15));
    CHECK(p.y == doctest::Approx(0.9997142857142857).epsilon(1e-15));
    CHECK(t.min_curvature_radius() == doctest::Approx(1.0 - a).epsilon(1e-12));
    CHECK(t.max_curvature_radius() == doctest::Approx(1.0 + a).epsilon(1e-12));
}

TEST_CASE("cosine-radius closure for even and odd harmonics") {
    for (auto [a, n] : std::vector<std::pair<double, int>>{{0.01, 6}, {0.2, 5}, {0.1, 4}}) {
        OvalTable t = OvalTable::cosine_radius(a, n);
        Vec2 p = t.point_at(two_pi - 1e-12);
        CHECK(std::abs(p.x) < 1e-9);
        CHECK(std::abs(p.y) < 1e-9);
    }
}

TEST_CASE("diameter is the maximal chord") {
    for (const auto& table :
         {OvalTable::circle(1.3), OvalTable::ellipse(0.5), OvalTable::cosine_radius(0.05, 6)}) {
        double d = table.diameter();
        const int m = 512;
        std::vector<Vec2> pts(m);
        for (int i = 0; i < m; ++i) pts[i] = table.point_at(two_pi * i / m);
        double best = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) best = std::max(best, norm(pts[i] - pts[j]));
        CHECK(best <= d + 1e-9);
        CHECK(best == doctest::Approx(d).epsilon(1e-3));
    }
}

TEST_CASE("chord_length rejects coincident endpoints") {
    OvalTable t = OvalTable::ellipse(0.35);
    CHECK_THROWS_AS(t.chord_length(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(t.chord_length(0.5, 0.5 + two_pi), std::invalid_argument);
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(OvalTable::circle(0.0), std::invalid_argument);
    CHECK_THROWS_AS(OvalTable::circle(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(OvalTable::ellipse(1.0), std::invalid_argument);
    CHECK_THROWS_AS(OvalTable::ellipse(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(OvalTable::cosine_radius(1.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(OvalTable::cosine_radius(0.1, 3), std::invalid_argument);
    CHECK_THROWS_AS(OvalTable::cosine_radius(0.1, 0), std::invalid_argument);
    CHECK_NOTHROW(OvalTable::ellipse(0.0));
    CHECK_NOTHROW(OvalTable::ellipse(-0.2));
    CHECK_NOTHROW(OvalTable::cosine_radius(0.0, 6));
    CHECK_NOTHROW(OvalTable::cosine_radius(-0.3, 4));
}
