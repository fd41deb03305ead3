#include "oval/nonelastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oval {

ContractionLaw ContractionLaw::linear(double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("ContractionLaw: need 0 < mu < 1");
    ContractionLaw h;
    h.kind_ = Kind::Linear;
    h.mu_ = mu;
    return h;
}

ContractionLaw ContractionLaw::smooth_tanh(double mu, double saturation) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::invalid_argument("ContractionLaw: need 0 < mu < 1");
    if (!(saturation > 0.0))
        throw std::invalid_argument("ContractionLaw: need saturation > 0");
    ContractionLaw h;
    h.kind_ = Kind::SmoothTanh;
    h.mu_ = mu;
    h.sat_ = saturation;
    return h;
}

ContractionLaw ContractionLaw::with_domain(double half_width) const {
    if (!(half_width > 0.0))
        throw std::invalid_argument("ContractionLaw: need positive domain half-width");
    ContractionLaw h = *this;
    h.half_ = half_width;
    h.explicit_domain_ = true;
    return h;
}

double ContractionLaw::apply_unchecked(double x) const {
    if (kind_ == Kind::Linear) return mu_ * x;
    return sat_ * std::tanh(mu_ * x / sat_);
}

double ContractionLaw::slope_unchecked(double x) const {
    if (kind_ == Kind::Linear) return mu_;
    const double t = std::tanh(mu_ * x / sat_);
    return mu_ * (1.0 - t * t);
}

double ContractionLaw::apply(double x) const {
    if (std::abs(x) > half_)
        throw std::domain_error("ContractionLaw: offset outside the law's domain");
    return apply_unchecked(x);
}

double ContractionLaw::slope(double x) const {
    if (std::abs(x) > half_)
        throw std::domain_error("ContractionLaw: offset outside the law's domain");
    return slope_unchecked(x);
}

StepResult perturbed_step_full(const OvalTable& table, const InvariantCurve& curve,
                               const ContractionLaw& law, const PhaseState& s0,
                               double guard) {
    StepResult r = billiard_step_full(table, s0, guard);
    const double x = r.state.alpha - curve.g(r.state.phi);
    if (std::abs(x) > law.domain_halfwidth())
        throw StripEscapeError("perturbed_step: fiber offset left the law's domain",
                               r.state.phi, r.state.alpha, x);
    // The contraction keeps alpha strictly between its old value and the
    // curve, so the result is always a valid state.
    r.state.alpha -= law.apply_unchecked(x);
    return r;
}

PhaseState perturbed_step(const OvalTable& table, const InvariantCurve& curve,
                          const ContractionLaw& law, const PhaseState& s0, double guard) {
    return perturbed_step_full(table, curve, law, s0, guard).state;
}

Mat2 perturbed_derivative(const OvalTable& table, const InvariantCurve& curve,
                          const ContractionLaw& law, const PhaseState& s0,
                          const PhaseState& s1_pre) {
    const Mat2 db = billiard_derivative(table, s0, s1_pre);
    const double gp1 = curve.g_slope(s1_pre.phi);
    const double hp1 = law.slope_unchecked(s1_pre.alpha - curve.g(s1_pre.phi));
    const Mat2 contraction{1.0, 0.0, hp1 * gp1, 1.0 - hp1};
    return contraction * db;
}

Mat2 cone_basis_matrix(const Mat2& dp, double g0_slope, double g1_slope, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("cone_basis_matrix: need delta > 0");
    const Mat2 t0{1.0, 1.0, g0_slope - delta, g0_slope + delta};
    const double inv = 1.0 / (2.0 * delta);
    const Mat2 t1_inv{inv * (g1_slope + delta), -inv, inv * (delta - g1_slope), inv};
    return t1_inv * (dp * t0);
}

Mat2 cone_basis_matrix_from_lengths(const TransitionQuantities& q, double delta,
                                    double h1_slope) {
    if (!(delta > 0.0)) throw std::domain_error("cone_basis_matrix: need delta > 0");
    const double pref = 1.0 / (2.0 * delta * q.w1);
    const double k = 1.0 - h1_slope;
    const double dm = delta * (q.l0 - delta * q.chord);
    const double dp = delta * (q.l0 + delta * q.chord);
    const double km = k * (delta * q.l1 - q.l01);
    const double kp = k * (delta * q.l1 + q.l01);
    return {pref * (dm + km), pref * (dp - kp), pref * (dm - km), pref * (dp + kp)};
}

bool positivity_check(const Mat2& m) { return m.min_entry() > 0.0; }

double contraction_threshold(const OvalTable& table, const InvariantCurve& curve) {
    return 1.0 - lower_bound_l(table, curve);
}

std::vector<double> default_delta_grid() {
    const double lo = 1e-4, hi = 0.5;
    const int count = 17;
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return grid;
}

namespace {

struct ProbeResult {
    bool ok = false;
    Mat2 dp;
    double g0_slope = 0.0;
    double g1_slope = 0.0;
    double post_offset = 0.0;
    double phi = 0.0;
    double offset = 0.0;
    double alpha = 0.0;
};

struct WidthEval {
    bool evaluable = false;  // every probe stepped cleanly
    bool pass = false;
    double delta = 0.0;
    double min_entry = -std::numeric_limits<double>::infinity();
    double max_abs_offset = 0.0;
    long bad_index = -1;
    std::string note;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

WidthEval evaluate_width(const OvalTable& table, const InvariantCurve& curve,
                         const ContractionLaw& law, double w,
                         const std::vector<double>& deltas, const CertifyOptions& opts,
                         std::vector<ProbeResult>& probes) {
    const int np = opts.phi_samples, no = opts.offset_samples;
    const long n = static_cast<long>(np) * no;
    probes.assign(n, ProbeResult{});
    const bool parallel = opts.exec == ExecMode::Parallel;

#pragma omp parallel for schedule(static) if (parallel)
    for (long idx = 0; idx < n; ++idx) {
        ProbeResult& pr = probes[idx];
        const long i = idx / no, j = idx % no;
        pr.phi = i * two_pi / np;
        pr.offset = no == 1 ? 0.0 : -w + j * (2.0 * w / (no - 1));
        pr.alpha = curve.g(pr.phi) + pr.offset;
        // exceptions must not cross the worker boundary; failure is data
        try {
            const PhaseState s0(pr.phi, pr.alpha);
            const PhaseState s1 = billiard_step(table, s0);
            pr.dp = perturbed_derivative(table, curve, law, s0, s1);
            pr.g0_slope = curve.g_slope(s0.phi);
            pr.g1_slope = curve.g_slope(s1.phi);
            pr.post_offset = s1.alpha - curve.g(s1.phi);
            pr.ok = true;
        } catch (const std::exception&) {
            pr.ok = false;
        }
    }

    WidthEval ev;
    for (long idx = 0; idx < n; ++idx) {
        if (!probes[idx].ok) {
            ev.bad_index = idx;
            ev.note = "state at phi=" + fmt(probes[idx].phi) +
                      " offset=" + fmt(probes[idx].offset) + " failed to step";
            return ev;
        }
        ev.max_abs_offset = std::max(ev.max_abs_offset, std::abs(probes[idx].post_offset));
    }
    ev.evaluable = true;

    for (double d : deltas) {
        double lo = std::numeric_limits<double>::infinity();
        long arg = -1;
        for (long idx = 0; idx < n; ++idx) {
            const ProbeResult& pr = probes[idx];
            const double m =
                cone_basis_matrix(pr.dp, pr.g0_slope, pr.g1_slope, d).min_entry();
            if (m < lo) {
                lo = m;
                arg = idx;
            }
        }
        if (lo > ev.min_entry) {
            ev.min_entry = lo;
            ev.delta = d;
            ev.bad_index = lo > 0.0 ? -1 : arg;
        }
    }
    ev.pass = ev.min_entry > 0.0;
    return ev;
}

}  // namespace

SplittingCertificate certify_strip(const OvalTable& table, const InvariantCurve& curve,
                                   const ContractionLaw& law, const CertifyOptions& opts) {
    if (opts.phi_samples < 1 || opts.offset_samples < 1)
        throw std::invalid_argument("certify_strip: need at least one sample each way");
    if (!(opts.min_halfwidth > 0.0) || !(opts.max_halfwidth >= opts.min_halfwidth))
        throw std::invalid_argument("certify_strip: bad strip widths");

    SplittingCertificate cert;
    cert.threshold = contraction_threshold(table, curve);
    cert.threshold_ok = law.slope_at_zero() > cert.threshold;
    if (!cert.threshold_ok && !opts.force_search) {
        cert.note = "h'(0) = " + fmt(law.slope_at_zero()) +
                    " is not above the sufficient threshold " + fmt(cert.threshold) +
                    "; not searched";
        return cert;
    }

    const std::vector<double> deltas =
        opts.delta_candidates.empty() ? default_delta_grid() : opts.delta_candidates;

    std::vector<ProbeResult> probes;
    bool have_pass = false;
    WidthEval best;
    double best_w = 0.0;
    double w = opts.min_halfwidth;
    while (true) {
        WidthEval ev = evaluate_width(table, curve, law, w, deltas, opts, probes);
        if (ev.evaluable && ev.pass) {
            have_pass = true;
            best = ev;
            best_w = w;
        } else {
            if (!have_pass) {
                cert.min_entry = ev.evaluable ? ev.min_entry : -1.0;
                cert.halfwidth = w;
                cert.delta = ev.delta;
                cert.sample_count = static_cast<long>(opts.phi_samples) * opts.offset_samples;
                cert.note = ev.evaluable
                                ? "no candidate delta made all entries positive"
                                : ev.note;
                if (ev.bad_index >= 0) {
                    const ProbeResult& pr = probes[ev.bad_index];
                    cert.has_violation = true;
                    if (pr.ok) cert.violating_state = PhaseState(pr.phi, pr.alpha);
                    cert.note += " (worst sample at phi=" + fmt(pr.phi) +
                                 ", offset=" + fmt(pr.offset) + ")";
                }
            } else {
                cert.note = "width " + fmt(w) + " failed; keeping the last passing width";
            }
            break;
        }
        if (w >= opts.max_halfwidth) break;
        w = std::min(2.0 * w, opts.max_halfwidth);
    }

    if (!have_pass) return cert;

    // Re-evaluate the winning width so the per-sample report matches the
    // returned (delta, w) exactly.
    WidthEval fin = evaluate_width(table, curve, law, best_w, {best.delta}, opts, probes);
    cert.pass = true;
    cert.delta = fin.delta;
    cert.halfwidth = best_w;
    cert.min_entry = fin.min_entry;
    cert.sample_count = static_cast<long>(opts.phi_samples) * opts.offset_samples;
    cert.max_abs_offset = fin.max_abs_offset;
    // Containment asks whether every pre-contraction fiber excursion stays
    // inside the law's domain (the strip's own fiber range when the law has
    // none), so h never sees an out-of-range offset. The slack absorbs
    // impact-solver noise at the exact boundary.
    const double domain =
        law.has_explicit_domain() ? law.domain_halfwidth() : best_w;
    cert.containment_ok = fin.max_abs_offset <= domain + 1e-9;
    cert.samples.reserve(probes.size());
    for (const ProbeResult& pr : probes)
        cert.samples.push_back(
            {pr.phi, pr.offset,
             cone_basis_matrix(pr.dp, pr.g0_slope, pr.g1_slope, fin.delta).min_entry()});
    return cert;
}

}  // namespace oval
