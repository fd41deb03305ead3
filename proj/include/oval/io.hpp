#pragma once

#include <filesystem>
#include <string>

#include "oval/analysis.hpp"
#include "oval/geometry.hpp"
#include "oval/nonelastic.hpp"

namespace oval {

/// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Columns step, phi, alpha, lift, plus the conserved quantity F for ellipse
/// tables.
void write_orbit_csv(const std::filesystem::path& path, const OrbitRecord& record,
                     const OvalTable& table);

/// Columns i, j, phi, alpha, fate, period, iters; one row per grid cell.
void write_basin_csv(const std::filesystem::path& path, const BasinGrid& grid);

/// Binary 8-bit graymap (magic P5), width nphi, height nalpha, maxval 255.
/// Rows run from alpha_max down to alpha_min so the image has the plotting
/// orientation; ToCurve = 0 (black), PeriodicOther = 255 (white),
/// Escaped/Undecided = 128.
void write_basin_pgm(const std::filesystem::path& path, const BasinGrid& grid);

/// Plain-text key = value block describing a certificate.
std::string certificate_report(const SplittingCertificate& cert);

/// Columns phi, alpha_offset, min_entry: the per-sample minima at the
/// certified (delta, halfwidth).
void write_certificate_csv(const std::filesystem::path& path,
                           const SplittingCertificate& cert);

/// Columns phi, x, y tracing the table boundary (samples + closing point).
void write_outline_csv(const std::filesystem::path& path, const OvalTable& table,
                       int samples = 512);

}  // namespace oval
