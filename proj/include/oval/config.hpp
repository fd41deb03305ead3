#pragma once

#include <string>
#include <utility>
#include <vector>

#include "oval/analysis.hpp"
#include "oval/common.hpp"
#include "oval/curves.hpp"
#include "oval/geometry.hpp"
#include "oval/nonelastic.hpp"

namespace oval {

/// Ordered key = value store backing experiment configuration. Values are
/// kept as text; typed accessors parse on demand and raise ConfigError with
/// the offending key in the message.
class ExperimentConfig {
  public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string* find(const std::string& key) const;
    const std::string& require(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Parse flat `key = value` lines; `#` starts a comment line. Malformed lines
/// raise ConfigError naming the line number.
ExperimentConfig parse_config_text(const std::string& text);

/// Re-parseable rendering, one `key = value` line per entry.
std::string echo_config(const ExperimentConfig& config);

// Spec-string builders. Grammar: a variant word followed by key=value
// parameters, e.g. "circle radius=1", "ellipse e=0.35",
// "cosine a=0.01 n=6"; "line beta0=<radians|auto>",
// "ellipse-level F0=0.25 branch=lower"; "linear mu=0.5",
// "tanh mu=0.5 sat=1" (laws accept an optional domain=<halfwidth>).
// All failures raise ConfigError quoting the offending input.
OvalTable make_table(const std::string& spec);
InvariantCurve make_curve(const std::string& spec, const OvalTable& table);
ContractionLaw make_law(const std::string& spec);

// Canonical renderings of built objects; parsing them back yields an
// equivalent object (beta0=auto comes back resolved).
std::string render_table(const OvalTable& table);
std::string render_curve(const InvariantCurve& curve);
std::string render_law(const ContractionLaw& law);

/// "phimin:phimax,alphamin:alphamax", radians.
Region parse_region(const std::string& text);
std::string render_region(const Region& region);

/// "256x256" (nphi x nalpha).
GridSize parse_resolution(const std::string& text);
std::string render_resolution(GridSize size);

/// Comma-separated doubles.
std::vector<double> parse_double_list(const std::string& text);

double parse_double_str(const std::string& text, const std::string& what);
long parse_long_str(const std::string& text, const std::string& what);
bool parse_bool_str(const std::string& text, const std::string& what);

}  // namespace oval
