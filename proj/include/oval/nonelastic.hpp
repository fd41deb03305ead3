#pragma once

#include <string>
#include <vector>

#include "oval/classical.hpp"
#include "oval/common.hpp"
#include "oval/curves.hpp"
#include "oval/geometry.hpp"

namespace oval {

/// Fiber contraction law h: a C^2 strictly increasing function with h(0) = 0
/// and 0 < h'(0) < 1, applied to the offset from the invariant curve after
/// every bounce. Defined on a symmetric interval I = [-domain, +domain];
/// offsets outside I signal a strip escape in perturbed_step.
class ContractionLaw {
  public:
    enum class Kind { Linear, SmoothTanh };

    /// h(x) = mu * x with 0 < mu < 1. mu = 1 (the slap law collapsing
    /// everything onto the curve in one step) is rejected.
    static ContractionLaw linear(double mu);

    /// h(x) = s * tanh(mu * x / s): slope mu at 0, saturating at +-s. The
    /// genuinely nonlinear test law; s > 0.
    static ContractionLaw smooth_tanh(double mu, double saturation = 1.0);

    /// Same law restricted to |x| <= half_width.
    ContractionLaw with_domain(double half_width) const;

    Kind kind() const { return kind_; }
    double mu() const { return mu_; }
    double saturation() const { return sat_; }
    double slope_at_zero() const { return mu_; }
    double domain_halfwidth() const { return half_; }
    bool has_explicit_domain() const { return explicit_domain_; }

    /// h(x). Throws std::domain_error for x outside I.
    double apply(double x) const;

    /// h'(x). Throws std::domain_error for x outside I.
    double slope(double x) const;

    /// Formula extensions without the domain check, for certificate probes
    /// that must report containment failures instead of throwing.
    double apply_unchecked(double x) const;
    double slope_unchecked(double x) const;

  private:
    ContractionLaw() = default;
    Kind kind_ = Kind::Linear;
    double mu_ = 0.5;
    double sat_ = 1.0;
    double half_ = pi;
    bool explicit_domain_ = false;
};

/// One step of the dissipative map P: the elastic bounce followed by the
/// fiber contraction alpha -> alpha - h(alpha - g(phi)) toward the curve.
/// States on the curve are untouched by the contraction. Throws
/// StripEscapeError when the post-bounce offset leaves the law's domain.
PhaseState perturbed_step(const OvalTable& table, const InvariantCurve& curve,
                          const ContractionLaw& law, const PhaseState& s0,
                          double guard = grazing_guard);

/// As perturbed_step, keeping the unreduced parameter and chord of the
/// underlying bounce.
StepResult perturbed_step_full(const OvalTable& table, const InvariantCurve& curve,
                               const ContractionLaw& law, const PhaseState& s0,
                               double guard = grazing_guard);

/// Derivative of the perturbed map along s0 -> s1_pre, where s1_pre is the
/// unperturbed image billiard_step(s0): the contraction's triangular factor
/// times the elastic derivative. Uses the law's formula extension for the
/// slope so out-of-domain probes stay evaluable.
Mat2 perturbed_derivative(const OvalTable& table, const InvariantCurve& curve,
                          const ContractionLaw& law, const PhaseState& s0,
                          const PhaseState& s1_pre);

/// Derivative expressed in the cone bases u = (1, g' - delta), v = (1, g' + delta)
/// at departure and arrival: T1^{-1} * dp * T0. delta must be positive.
Mat2 cone_basis_matrix(const Mat2& dp, double g0_slope, double g1_slope, double delta);

/// The same matrix assembled from the transition lengths (l0, l1, l01) and
/// the contraction slope, as an independent closed form. Agreement of the two
/// routes is a cross-check on both.
Mat2 cone_basis_matrix_from_lengths(const TransitionQuantities& q, double delta,
                                    double h1_slope);

/// Strict positivity of all four entries, the one-step cone-invariance test.
bool positivity_check(const Mat2& m);

/// 1 - lower_bound_l: laws with h'(0) strictly above this contract the cone
/// field uniformly along the curve, making the curve locally attracting.
double contraction_threshold(const OvalTable& table, const InvariantCurve& curve);

/// Search controls for certify_strip.
struct CertifyOptions {
    double max_halfwidth = 0.25;  // radians, strip half-width cap
    double min_halfwidth = 1e-4;  // first width tried
    std::vector<double> delta_candidates;  // empty: log grid, 17 points in [1e-4, 0.5]
    int phi_samples = 256;
    int offset_samples = 33;
    // Evaluate the sampled search even when h'(0) is at or below the
    // sufficient threshold; the outcome is recorded either way.
    bool force_search = false;
    ExecMode exec = ExecMode::Parallel;
};

std::vector<double> default_delta_grid();

/// One sampled state of a certificate, with the smallest entry of its
/// cone-basis matrix at the certified (delta, halfwidth).
struct CertificateSample {
    double phi = 0.0;
    double offset = 0.0;
    double min_entry = 0.0;
};

/// Outcome of the strip search. pass holds exactly when min_entry > 0, i.e.
/// every sampled state in the strip passed positivity_check at the reported
/// delta. Positivity and domain containment are reported separately: the
/// containment flag says the post-bounce offsets stayed inside the law's
/// domain (defaulting to the searched fiber range).
struct SplittingCertificate {
    bool pass = false;
    double delta = 0.0;
    double halfwidth = 0.0;
    double min_entry = -1.0;
    long sample_count = 0;
    double threshold = 0.0;   // 1 - lower_bound_l for the pair
    bool threshold_ok = false;
    bool containment_ok = false;
    double max_abs_offset = 0.0;  // largest |alpha1 - g(phi1)| over the certified strip
    bool has_violation = false;
    PhaseState violating_state;
    std::string note;
    std::vector<CertificateSample> samples;  // per-sample entries at the certified (delta, w)
};

/// Search for the widest strip around the curve on which all four entries of
/// the cone-basis matrix stay strictly positive at every sampled state, over
/// a delta candidate grid. Width grows by doubling from min_halfwidth up to
/// max_halfwidth; the largest passing width wins. Failure is a value: the
/// certificate records the violating state or error instead of throwing.
SplittingCertificate certify_strip(const OvalTable& table, const InvariantCurve& curve,
                                   const ContractionLaw& law,
                                   const CertifyOptions& options = {});

}  // namespace oval
