#include "oval/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oval {

OrbitRecord iterate(const MapSystem& system, const PhaseState& s0, long n) {
    if (n < 1) throw std::invalid_argument("iterate: need n >= 1");
    OrbitRecord rec;
    rec.states.reserve(n + 1);
    rec.lift.reserve(n + 1);
    rec.states.push_back(s0);
    rec.lift.push_back(s0.phi);
    for (long k = 0; k < n; ++k) {
        try {
            const StepResult r = system.step_full(rec.states.back());
            rec.lift.push_back(rec.lift.back() + (r.phi_raw - rec.states.back().phi));
            rec.states.push_back(r.state);
        } catch (const NumericalError& e) {
            rec.escaped = true;
            rec.escape_reason = e.what();
            break;
        }
    }
    return rec;
}

double rotation_number(const OrbitRecord& record) {
    if (record.escaped)
        throw NumericalError("rotation_number: undefined for an escaped orbit");
    if (record.states.size() < 100)
        throw NumericalError("rotation_number: need at least 100 states");
    const double turns = record.lift.back() - record.lift.front();
    return turns / (two_pi * static_cast<double>(record.states.size() - 1));
}

const char* fate_name(FateKind kind) {
    switch (kind) {
        case FateKind::ToCurve: return "to_curve";
        case FateKind::PeriodicOther: return "periodic";
        case FateKind::Escaped: return "escaped";
        case FateKind::Undecided: return "undecided";
    }
    return "unknown";
}

Fate classify_fate(const MapSystem& system, const PhaseState& s0,
                   const ClassifyParams& p) {
    if (!system.curve.has_value())
        throw std::invalid_argument("classify_fate: the system needs a reference curve");
    if (p.max_iter < 1 || !(p.tol_curve > 0.0) || !(p.tol_period > 0.0) || p.window < 1)
        throw std::invalid_argument("classify_fate: parameters must be positive");
    if (p.period_cap < 1 || p.period_cap > 64)
        throw std::invalid_argument("classify_fate: period_cap out of range");

    const InvariantCurve& curve = *system.curve;
    PhaseState s = s0;
    long streak_start = 0;
    int streak = 0;

    // Burn the whole budget watching only for curve capture; any period
    // detected mid-transient would be a near-return of the decaying spiral,
    // not the attractor's period.
    for (long k = 0; k < p.max_iter; ++k) {
        const double dist = std::abs(s.alpha - curve.g(s.phi));
        if (dist < p.tol_curve) {
            if (streak == 0) streak_start = k;
            if (++streak >= p.window)
                return {FateKind::ToCurve, 0, streak_start, dist, s};
        } else {
            streak = 0;
        }
        try {
            s = system.step(s);
        } catch (const NumericalError&) {
            return {FateKind::Escaped, 0, k, dist, s};
        }
    }

    const double dist = std::abs(s.alpha - curve.g(s.phi));
    if (dist < p.tol_curve) return {FateKind::Undecided, 0, p.max_iter, dist, s};

    // The budget is spent and the orbit sits off the curve, presumably on its
    // limit set. A true period must hold at every tail index, which rules out
    // one-off near-returns.
    std::vector<PhaseState> tail;
    tail.reserve(2 * p.period_cap + 1);
    tail.push_back(s);
    for (int t = 0; t < 2 * p.period_cap; ++t) {
        try {
            s = system.step(s);
        } catch (const NumericalError&) {
            return {FateKind::Escaped, 0, p.max_iter + t, dist, s};
        }
        tail.push_back(s);
    }
    for (int q = 1; q <= p.period_cap; ++q) {
        bool sustained = true;
        for (std::size_t j = 0; j + q < tail.size(); ++j) {
            if (std::abs(tail[j + q].alpha - tail[j].alpha) >= p.tol_period ||
                angle_dist(tail[j + q].phi, tail[j].phi) >= p.tol_period) {
                sustained = false;
                break;
            }
        }
        if (sustained)
            return {FateKind::PeriodicOther, q, p.max_iter, dist, tail.front()};
    }
    return {FateKind::Undecided, 0, p.max_iter, dist, tail.front()};
}

BasinGrid basin_grid(const MapSystem& system, const Region& region, GridSize size,
                     const ClassifyParams& params, ExecMode exec) {
    if (size.nphi < 16 || size.nalpha < 16)
        throw std::invalid_argument("basin_grid: resolution must be at least 16x16");
    if (!(region.phi_max > region.phi_min) || !(region.alpha_max > region.alpha_min))
        throw std::invalid_argument("basin_grid: empty region");
    if (!system.curve.has_value())
        throw std::invalid_argument("basin_grid: the system needs a reference curve");
    if (params.max_iter < 1 || !(params.tol_curve > 0.0) || !(params.tol_period > 0.0) ||
        params.window < 1 || params.period_cap < 1 || params.period_cap >= 65)
        throw std::invalid_argument("basin_grid: bad classifier parameters");

    BasinGrid grid;
    grid.region = region;
    grid.size = size;
    const long total = static_cast<long>(size.nphi) * size.nalpha;
    grid.fates.resize(total);
    const bool parallel = exec == ExecMode::Parallel;

#pragma omp parallel for schedule(dynamic, 32) if (parallel)
    for (long idx = 0; idx < total; ++idx) {
        const int i = static_cast<int>(idx % size.nphi);
        const int j = static_cast<int>(idx / size.nphi);
        // cell-center start; out-of-cylinder centers count as escaped
        try {
            const PhaseState s0(grid.phi_center(i), grid.alpha_center(j));
            grid.fates[idx] = classify_fate(system, s0, params);
        } catch (const std::invalid_argument&) {
            Fate f;
            f.kind = FateKind::Escaped;
            grid.fates[idx] = f;
        }
    }

    long hits = 0;
    for (const Fate& f : grid.fates)
        if (f.kind == FateKind::ToCurve) ++hits;
    grid.fraction_to_curve = static_cast<double>(hits) / static_cast<double>(total);
    return grid;
}

}  // namespace oval
