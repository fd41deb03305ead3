#include "oval/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oval/common.hpp"
#include "oval/curves.hpp"
#include "oval/geometry.hpp"
#include "oval/nonelastic.hpp"

using namespace oval;

namespace {

MapSystem classical_circle() { return {OvalTable::circle(1.0), std::nullopt, std::nullopt}; }

MapSystem dissipative_circle(double beta0, double mu) {
    return {OvalTable::circle(1.0), InvariantCurve::constant_line(beta0),
            ContractionLaw::linear(mu)};
}

MapSystem dissipative_cosine(double mu) {
    return {OvalTable::cosine_radius(0.01, 6), InvariantCurve::constant_line(solve_beta0(6)),
            ContractionLaw::linear(mu)};
}

MapSystem dissipative_ellipse(double mu) {
    return {OvalTable::ellipse(0.35), InvariantCurve::ellipse_level(0.25, 0.35),
            ContractionLaw::linear(mu)};
}

}  // namespace

TEST_CASE("diameter orbit of the circle lifts by pi each bounce") {
    MapSystem sys = classical_circle();
    OrbitRecord rec = iterate(sys, PhaseState(0.4, 0.5 * pi), 20);
    REQUIRE(rec.states.size() == 21);
    REQUIRE(rec.lift.size() == 21);
    CHECK(!rec.escaped);
    for (int k = 0; k <= 20; ++k) {
        CHECK(rec.lift[k] == doctest::Approx(0.4 + k * pi).epsilon(1e-12));
        CHECK(rec.states[k].alpha == doctest::Approx(0.5 * pi).epsilon(1e-12));
        CHECK(angle_dist(rec.states[k].phi, wrap_angle(0.4 + k * pi)) < 1e-10);
    }
}

TEST_CASE("lift increments stay inside one turn") {
    MapSystem sys{OvalTable::ellipse(0.35), std::nullopt, std::nullopt};
    OrbitRecord rec = iterate(sys, PhaseState(1.0, 0.9), 300);
    CHECK(!rec.escaped);
    for (std::size_t k = 1; k < rec.lift.size(); ++k) {
        double gap = rec.lift[k] - rec.lift[k - 1];
        CHECK(gap > 0.0);
        CHECK(gap < two_pi);
        CHECK(wrap_angle(rec.lift[k]) == doctest::Approx(rec.states[k].phi).epsilon(1e-9));
    }
    CHECK_THROWS_AS(iterate(sys, PhaseState(1.0, 0.9), 0), std::invalid_argument);
}

TEST_CASE("escapes truncate the record and poison the rotation number") {
    MapSystem sys = dissipative_circle(0.5 * pi, 0.5);
    sys.law = sys.law->with_domain(0.05);
    // the first bounce leaves an offset of 0.3, outside the tiny domain
    OrbitRecord rec = iterate(sys, PhaseState(0.0, 0.5 * pi + 0.3), 50);
    CHECK(rec.escaped);
    CHECK(rec.states.size() == 1);
    CHECK(!rec.escape_reason.empty());
    CHECK_THROWS_AS(rotation_number(rec), NumericalError);

    OrbitRecord fine = iterate(classical_circle(), PhaseState(0.0, 1.0), 50);
    CHECK_THROWS_AS(rotation_number(fine), NumericalError);  // under 100 states
}

TEST_CASE("circle rotation numbers are alpha over pi") {
    MapSystem sys = classical_circle();
    for (double alpha : {0.5 * pi, 1.0, 0.3, 2.2}) {
        OrbitRecord rec = iterate(sys, PhaseState(0.0, alpha), 400);
        CHECK(rotation_number(rec) == doctest::Approx(alpha / pi).epsilon(1e-12));
    }
}

TEST_CASE("rotation number on the resonant line of the cosine table") {
    MapSystem sys{OvalTable::cosine_radius(0.01, 6), std::nullopt, std::nullopt};
    double b = solve_beta0(6);
    OrbitRecord rec = iterate(sys, PhaseState(0.3, b), 20000);
    CHECK(!rec.escaped);
    double rho = rotation_number(rec);
    // The line is invariant and far from the strongest resonances, so the
    // average advance stays within the profile amplitude of beta0 / pi.
    CHECK(std::abs(rho - b / pi) < 0.01);
}

TEST_CASE("straight-strip starts on the dissipative circle reach the line") {
    MapSystem sys = dissipative_circle(1.1, 0.5);
    Fate f = classify_fate(sys, PhaseState(0.2, 1.9));
    CHECK(f.kind == FateKind::ToCurve);
    CHECK(f.period == 0);
    CHECK(f.final_distance < 1e-6);
    // |alpha - beta0| shrinks from 0.8 by a factor 2 per bounce: the in-band
    // streak starts once 0.8 * 2^-k < 1e-6, k = 20.
    CHECK(f.iterations_used >= 18);
    CHECK(f.iterations_used <= 22);
}

TEST_CASE("starts on the curve classify immediately") {
    MapSystem sys = dissipative_ellipse(0.5);
    double phi = 1.7;
    Fate f = classify_fate(sys, PhaseState(phi, sys.curve->g(phi)));
    CHECK(f.kind == FateKind::ToCurve);
    CHECK(f.iterations_used == 0);
    CHECK(f.final_distance < 1e-9);
}

TEST_CASE("ellipse island start settles on the two-bounce orbit") {
    // The flattest boundary points carry the stable two-bounce chain; under
    // mild contraction it survives as an attractor away from the level curve.
    MapSystem sys = dissipative_ellipse(0.1);
    ClassifyParams p;
    p.max_iter = 4000;
    Fate f = classify_fate(sys, PhaseState(pi, 0.5 * pi), p);
    CHECK(f.kind == FateKind::PeriodicOther);
    CHECK(f.period == 2);
    CHECK(f.iterations_used == p.max_iter);
    CHECK(f.final_distance > 0.3);
}

TEST_CASE("weak contraction on the cosine table keeps a three-bounce attractor") {
    MapSystem sys = dissipative_cosine(0.004);
    ClassifyParams p;
    p.max_iter = 20000;
    Fate f = classify_fate(sys, PhaseState(0.1, 1.05), p);
    CHECK(f.kind == FateKind::PeriodicOther);
    CHECK(f.period == 3);
    CHECK(f.final_distance > 0.1);  // the pi/3 chain sits well below the line
}

TEST_CASE("strong contraction on the cosine table collapses onto the line") {
    MapSystem sys = dissipative_cosine(0.35);
    Fate f = classify_fate(sys, PhaseState(0.1, 1.05));
    CHECK(f.kind == FateKind::ToCurve);
}

TEST_CASE("classification is deterministic") {
    MapSystem sys = dissipative_cosine(0.1);
    Fate a = classify_fate(sys, PhaseState(2.2, 0.8));
    Fate b = classify_fate(sys, PhaseState(2.2, 0.8));
    CHECK(a.kind == b.kind);
    CHECK(a.period == b.period);
    CHECK(a.iterations_used == b.iterations_used);
    CHECK(a.final_distance == b.final_distance);
    CHECK(a.final_state.phi == b.final_state.phi);
    CHECK(a.final_state.alpha == b.final_state.alpha);
}

TEST_CASE("classifier input validation") {
    MapSystem no_curve = classical_circle();
    CHECK_THROWS_AS(classify_fate(no_curve, PhaseState(0.0, 1.0)), std::invalid_argument);
    MapSystem sys = dissipative_circle(1.0, 0.5);
    ClassifyParams bad;
    bad.max_iter = 0;
    CHECK_THROWS_AS(classify_fate(sys, PhaseState(0.0, 1.0), bad), std::invalid_argument);
    ClassifyParams cap;
    cap.period_cap = 65;
    CHECK_THROWS_AS(classify_fate(sys, PhaseState(0.0, 1.0), cap), std::invalid_argument);
}

TEST_CASE("fate names") {
    CHECK(std::string(fate_name(FateKind::ToCurve)) == "to_curve");
    CHECK(std::string(fate_name(FateKind::PeriodicOther)) == "periodic");
    CHECK(std::string(fate_name(FateKind::Escaped)) == "escaped");
    CHECK(std::string(fate_name(FateKind::Undecided)) == "undecided");
}

TEST_CASE("dissipative circle offsets decay geometrically") {
    double b = 1.3, mu = 0.5;
    MapSystem sys = dissipative_circle(b, mu);
    OrbitRecord rec = iterate(sys, PhaseState(0.0, b + 0.4), 50);
    REQUIRE(rec.states.size() == 51);
    for (int k = 0; k <= 50; ++k) {
        double want = 0.4 * std::pow(1.0 - mu, k);
        CHECK(std::abs(std::abs(rec.states[k].alpha - b) - want) < 1e-10);
    }
}

TEST_CASE("circle basin covers a straight strip") {
    MapSystem sys = dissipative_circle(1.2, 0.5);
    Region region{0.0, two_pi, 1.2 - 0.3, 1.2 + 0.3};
    BasinGrid grid = basin_grid(sys, region, {16, 16});
    CHECK(grid.fraction_to_curve == 1.0);
    for (const Fate& f : grid.fates) CHECK(f.kind == FateKind::ToCurve);
    CHECK(grid.fates.size() == 256U);
    // cell centers stay strictly inside the region
    CHECK(grid.phi_center(0) == doctest::Approx(two_pi / 32.0).epsilon(1e-12));
    CHECK(grid.alpha_center(0) == doctest::Approx(0.9 + 0.6 / 32.0).epsilon(1e-12));
}

TEST_CASE("serial and parallel basins agree cell by cell") {
    MapSystem sys = dissipative_cosine(0.1);
    Region region{0.0, two_pi, 0.3 * pi, 0.7 * pi};
    ClassifyParams p;
    p.max_iter = 400;
    BasinGrid a = basin_grid(sys, region, {16, 16}, p, ExecMode::Serial);
    BasinGrid b = basin_grid(sys, region, {16, 16}, p, ExecMode::Parallel);
    CHECK(a.fraction_to_curve == b.fraction_to_curve);
    REQUIRE(a.fates.size() == b.fates.size());
    for (std::size_t i = 0; i < a.fates.size(); ++i) {
        CHECK(a.fates[i].kind == b.fates[i].kind);
        CHECK(a.fates[i].period == b.fates[i].period);
        CHECK(a.fates[i].iterations_used == b.fates[i].iterations_used);
        CHECK(a.fates[i].final_state.phi == b.fates[i].final_state.phi);
    }
}

TEST_CASE("basin input validation") {
    MapSystem sys = dissipative_circle(1.0, 0.5);
    CHECK_THROWS_AS(basin_grid(sys, Region{}, {8, 16}), std::invalid_argument);
    CHECK_THROWS_AS(basin_grid(sys, Region{}, {16, 8}), std::invalid_argument);
    CHECK_THROWS_AS(basin_grid(sys, Region{1.0, 1.0, 0.5, 1.0}, {16, 16}),
                    std::invalid_argument);
    MapSystem no_curve = classical_circle();
    CHECK_THROWS_AS(basin_grid(no_curve, Region{}, {16, 16}), std::invalid_argument);
}

TEST_CASE("out-of-cylinder cells are marked escaped, not thrown") {
    MapSystem sys = dissipative_circle(1.0, 0.5);
    // alpha range pokes above pi, so the top rows cannot form valid states
    Region region{0.0, two_pi, 2.9, 3.3};
    BasinGrid grid = basin_grid(sys, region, {16, 16});
    bool any_escaped = false, any_fine = false;
    for (const Fate& f : grid.fates) {
        if (f.kind == FateKind::Escaped) any_escaped = true;
        if (f.kind == FateKind::ToCurve) any_fine = true;
    }
    CHECK(any_escaped);
    CHECK(any_fine);
}
