#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oval {

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double two_pi = 2.0 * pi;

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double a) {
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    // fmod of a negative value can round up to exactly two_pi
    if (r >= two_pi) r -= two_pi;
    return r;
}

/// Signed circular difference a - b reduced to (-pi, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, two_pi);
    if (d <= -pi) d += two_pi;
    if (d > pi) d -= two_pi;
    return d;
}

/// Distance between angles on the circle, in [0, pi].
inline double angle_dist(double a, double b) { return std::abs(angle_diff(a, b)); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// 2x2 real matrix, row major.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    double det() const { return a11 * a22 - a12 * a21; }
    double min_entry() const {
        return std::min(std::min(a11, a12), std::min(a21, a22));
    }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

inline Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
}

inline Mat2 inverse(const Mat2& m) {
    double d = m.det();
    if (d == 0.0) throw std::domain_error("Mat2: singular matrix");
    return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

/// Root finding or iteration failed to converge; message carries the state.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A ray met the boundary tangentially (or started tangent to it).
struct GrazingError : NumericalError {
    using NumericalError::NumericalError;
};

/// A perturbed-map fiber offset left the contraction law's domain.
struct StripEscapeError : NumericalError {
    StripEscapeError(const std::string& msg, double phi_, double alpha_, double offset_)
        : NumericalError(msg), phi(phi_), alpha(alpha_), offset(offset_) {}
    double phi;
    double alpha;
    double offset;
};

/// Malformed configuration input (file line or command-line flag).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Kernel execution policy for the grid-shaped computations. Serial runs are
/// the reference the parallel path is tested against.
enum class ExecMode { Serial, Parallel };

}  // namespace oval
