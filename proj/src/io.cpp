#include "oval/io.hpp"

#include <cstdio>
#include <fstream>

#include "oval/curves.hpp"

namespace oval {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_orbit_csv(const std::filesystem::path& path, const OrbitRecord& record,
                     const OvalTable& table) {
    auto out = open_out(path);
    const bool with_f = table.kind() == OvalTable::Kind::Ellipse;
    out << (with_f ? "step,phi,alpha,lift,F\n" : "step,phi,alpha,lift\n");
    for (std::size_t k = 0; k < record.states.size(); ++k) {
        const PhaseState& s = record.states[k];
        out << k << ',' << format_double(s.phi) << ',' << format_double(s.alpha) << ','
            << format_double(record.lift[k]);
        if (with_f)
            out << ','
                << format_double(ellipse_first_integral(table.eccentricity(), s.phi, s.alpha));
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_basin_csv(const std::filesystem::path& path, const BasinGrid& grid) {
    auto out = open_out(path);
    out << "i,j,phi,alpha,fate,period,iters\n";
    for (int j = 0; j < grid.size.nalpha; ++j)
        for (int i = 0; i < grid.size.nphi; ++i) {
            const Fate& f = grid.at(i, j);
            out << i << ',' << j << ',' << format_double(grid.phi_center(i)) << ','
                << format_double(grid.alpha_center(j)) << ',' << fate_name(f.kind) << ','
                << f.period << ',' << f.iterations_used << '\n';
        }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_basin_pgm(const std::filesystem::path& path, const BasinGrid& grid) {
    auto out = open_out(path, true);
    out << "P5\n" << grid.size.nphi << ' ' << grid.size.nalpha << "\n255\n";
    std::string row(static_cast<std::size_t>(grid.size.nphi), '\0');
    for (int j = grid.size.nalpha - 1; j >= 0; --j) {
        for (int i = 0; i < grid.size.nphi; ++i) {
            const FateKind k = grid.at(i, j).kind;
            row[static_cast<std::size_t>(i)] =
                k == FateKind::ToCurve ? '\x00'
                : k == FateKind::PeriodicOther ? '\xff'
                                               : '\x80';
        }
        out.write(row.data(), row.size());
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string certificate_report(const SplittingCertificate& cert) {
    std::string r;
    r += "verdict = ";
    r += cert.pass ? "pass" : "fail";
    r += "\ndelta = " + format_double(cert.delta);
    r += "\nhalfwidth = " + format_double(cert.halfwidth);
    r += "\nmin_entry = " + format_double(cert.min_entry);
    r += "\nsample_count = " + std::to_string(cert.sample_count);
    r += "\nthreshold = " + format_double(cert.threshold);
    r += "\nthreshold_ok = ";
    r += cert.threshold_ok ? "true" : "false";
    r += "\ncontainment_ok = ";
    r += cert.containment_ok ? "true" : "false";
    r += "\nmax_abs_offset = " + format_double(cert.max_abs_offset);
    if (cert.has_violation) {
        r += "\nviolating_phi = " + format_double(cert.violating_state.phi);
        r += "\nviolating_alpha = " + format_double(cert.violating_state.alpha);
    }
    if (!cert.note.empty()) r += "\nnote = " + cert.note;
    r += "\n";
    return r;
}

void write_certificate_csv(const std::filesystem::path& path,
                           const SplittingCertificate& cert) {
    auto out = open_out(path);
    out << "phi,alpha_offset,min_entry\n";
    for (const CertificateSample& s : cert.samples)
        out << format_double(s.phi) << ',' << format_double(s.offset) << ','
            << format_double(s.min_entry) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_outline_csv(const std::filesystem::path& path, const OvalTable& table,
                       int samples) {
    if (samples < 3) throw std::invalid_argument("write_outline_csv: samples >= 3");
    auto out = open_out(path);
    out << "phi,x,y\n";
    for (int i = 0; i <= samples; ++i) {
        const double phi = i * two_pi / samples;
        const Vec2 p = table.point_at(phi);
        out << format_double(phi) << ',' << format_double(p.x) << ','
            << format_double(p.y) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace oval
