#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oval/classical.hpp"
#include "oval/common.hpp"
#include "oval/curves.hpp"
#include "oval/geometry.hpp"
#include "oval/nonelastic.hpp"

namespace oval {

/// A runnable dynamical system: the elastic map of a table, optionally
/// composed with a fiber contraction toward an invariant curve. The curve may
/// be present without a law (classical dynamics, curve used only as the
/// classification reference).
struct MapSystem {
    OvalTable table;
    std::optional<InvariantCurve> curve;
    std::optional<ContractionLaw> law;

    bool perturbed() const { return curve.has_value() && law.has_value(); }

    StepResult step_full(const PhaseState& s) const {
        if (perturbed()) return perturbed_step_full(table, *curve, *law, s);
        return billiard_step_full(table, s);
    }
    PhaseState step(const PhaseState& s) const { return step_full(s).state; }
};

/// Orbit with the unwrapped boundary parameter. The twist property keeps
/// consecutive lift differences inside (0, 2*pi). Escapes (grazing, solver
/// failure, strip exit) truncate the record instead of throwing.
struct OrbitRecord {
    std::vector<PhaseState> states;
    std::vector<double> lift;
    bool escaped = false;
    std::string escape_reason;
};

/// Iterate the system n >= 1 steps from s0 (or until escape).
OrbitRecord iterate(const MapSystem& system, const PhaseState& s0, long n);

/// Birkhoff average (lift_end - lift_0) / (2 pi (len-1)) of a non-escaped
/// record with at least 100 states. Throws NumericalError otherwise.
double rotation_number(const OrbitRecord& record);

enum class FateKind : unsigned char { ToCurve, PeriodicOther, Escaped, Undecided };

const char* fate_name(FateKind kind);

struct Fate {
    FateKind kind = FateKind::Undecided;
    int period = 0;  // >= 1 exactly for PeriodicOther
    long iterations_used = 0;
    double final_distance = 0.0;  // |alpha - g(phi)| at the deciding state
    PhaseState final_state;
};

struct ClassifyParams {
    long max_iter = 20000;
    double tol_curve = 1e-6;
    double tol_period = 1e-6;
    int window = 50;      // consecutive in-tolerance steps confirming ToCurve
    int period_cap = 64;  // largest period searched
};

/// Decide where the orbit of s0 ends up relative to the system's curve:
/// ToCurve once the offset stays under tol_curve for a full confirmation
/// window (iterations_used is the step the streak began), Escaped when
/// stepping fails. Otherwise the whole budget is spent first and the minimal
/// period p <= period_cap that holds at every index of a 2*period_cap tail is
/// reported as PeriodicOther(p); detecting periods only after the transient
/// has decayed keeps near-returns of slowly contracting spirals from posing
/// as the attractor's period. No sustained period means Undecided.
Fate classify_fate(const MapSystem& system, const PhaseState& s0,
                   const ClassifyParams& params = {});

/// Rectangle of initial conditions. The default alpha range stays clear of
/// the grazing guard bands near 0 and pi.
struct Region {
    double phi_min = 0.0;
    double phi_max = two_pi;
    double alpha_min = 0.05 * pi;
    double alpha_max = 0.95 * pi;
};

struct GridSize {
    int nphi = 256;
    int nalpha = 256;
};

/// Fates of every cell center of a region grid, row-major with phi fastest.
struct BasinGrid {
    Region region;
    GridSize size;
    std::vector<Fate> fates;
    double fraction_to_curve = 0.0;

    const Fate& at(int i, int j) const { return fates[static_cast<std::size_t>(j) * size.nphi + i]; }
    double phi_center(int i) const {
        return region.phi_min + (i + 0.5) * (region.phi_max - region.phi_min) / size.nphi;
    }
    double alpha_center(int j) const {
        return region.alpha_min + (j + 0.5) * (region.alpha_max - region.alpha_min) / size.nalpha;
    }
};

/// Classify every cell center. Cells are independent; the parallel path
/// writes disjoint cells and is bitwise identical to the serial reference.
BasinGrid basin_grid(const MapSystem& system, const Region& region, GridSize size,
                     const ClassifyParams& params = {},
                     ExecMode exec = ExecMode::Parallel);

}  // namespace oval
