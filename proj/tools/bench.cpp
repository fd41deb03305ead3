// Timing harness for the two grid-shaped kernels, comparing the parallel
// path against the serial reference and checking they produce identical
// results. Pass --small for a quick consistency run (used by the test suite).

#include <chrono>
#include <cstring>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oval/analysis.hpp"

using namespace oval;
using clock_type = std::chrono::steady_clock;

namespace {

double run_timed(const char* label, ExecMode mode, double& out,
                 const MapSystem& sys, const Region& region, GridSize res,
                 BasinGrid& grid) {
    const auto t0 = clock_type::now();
    grid = basin_grid(sys, region, res, {}, mode);
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    out = grid.fraction_to_curve;
    std::cout << "  " << label << ": " << dt << " s (fraction " << out << ")\n";
    return dt;
}

}  // namespace

int main(int argc, char** argv) {
    const bool small = argc > 1 && std::strcmp(argv[1], "--small") == 0;
#ifdef _OPENMP
    std::cout << "workers: " << omp_get_max_threads() << "\n";
#else
    std::cout << "workers: 1 (built without OpenMP)\n";
#endif

    int failures = 0;

    {
        std::cout << "basin kernel (cosine table, linear law mu=0.4)\n";
        MapSystem sys{OvalTable::cosine_radius(0.01, 6),
                      InvariantCurve::constant_line(solve_beta0(6)),
                      ContractionLaw::linear(0.4)};
        const Region region{0.0, two_pi, 0.15 * pi, 0.85 * pi};
        const int r = small ? 24 : 128;
        const GridSize res{r, r};
        BasinGrid serial_grid, parallel_grid;
        double fs = 0.0, fp = 0.0;
        const double ts = run_timed("serial  ", ExecMode::Serial, fs, sys, region, res,
                                    serial_grid);
        const double tp = run_timed("parallel", ExecMode::Parallel, fp, sys, region, res,
                                    parallel_grid);
        bool same = fs == fp && serial_grid.fates.size() == parallel_grid.fates.size();
        for (std::size_t i = 0; same && i < serial_grid.fates.size(); ++i) {
            const Fate &a = serial_grid.fates[i], &b = parallel_grid.fates[i];
            same = a.kind == b.kind && a.period == b.period &&
                   a.iterations_used == b.iterations_used;
        }
        std::cout << "  speedup " << (tp > 0.0 ? ts / tp : 0.0) << "x, results "
                  << (same ? "identical" : "DIFFER") << "\n";
        if (!same) ++failures;
    }

    {
        std::cout << "certificate kernel (ellipse e=0.35, F0=0.25, mu=0.5)\n";
        const OvalTable table = OvalTable::ellipse(0.35);
        const InvariantCurve curve = InvariantCurve::ellipse_level(0.25, 0.35);
        const ContractionLaw law = ContractionLaw::linear(0.5);
        CertifyOptions opts;
        if (small) {
            opts.phi_samples = 64;
            opts.offset_samples = 9;
        }
        opts.exec = ExecMode::Serial;
        const auto t0 = clock_type::now();
        const SplittingCertificate a = certify_strip(table, curve, law, opts);
        const double ts = std::chrono::duration<double>(clock_type::now() - t0).count();
        opts.exec = ExecMode::Parallel;
        const auto t1 = clock_type::now();
        const SplittingCertificate b = certify_strip(table, curve, law, opts);
        const double tp = std::chrono::duration<double>(clock_type::now() - t1).count();
        const bool same = a.pass == b.pass && a.delta == b.delta &&
                          a.halfwidth == b.halfwidth && a.min_entry == b.min_entry;
        std::cout << "  serial   " << ts << " s\n  parallel " << tp << " s\n  speedup "
                  << (tp > 0.0 ? ts / tp : 0.0) << "x, results "
                  << (same ? "identical" : "DIFFER") << "\n";
        if (!same) ++failures;
    }

    return failures == 0 ? 0 : 1;
}
