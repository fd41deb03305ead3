#include "oval/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "oval/io.hpp"

namespace oval {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// key=value parameters after the variant word
std::map<std::string, std::string> spec_params(const std::vector<std::string>& tokens,
                                               const std::string& what) {
    std::map<std::string, std::string> kv;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == tokens[i].size())
            throw ConfigError(what + ": expected key=value, got '" + tokens[i] + "'");
        const std::string key = tokens[i].substr(0, eq);
        if (kv.count(key)) throw ConfigError(what + ": duplicate parameter '" + key + "'");
        kv[key] = tokens[i].substr(eq + 1);
    }
    return kv;
}

double take_double(std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& what) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(what + ": missing parameter '" + key + "'");
    const double v = parse_double_str(it->second, what + " " + key);
    kv.erase(it);
    return v;
}

double take_double_or(std::map<std::string, std::string>& kv, const std::string& key,
                      double fallback, const std::string& what) {
    return kv.count(key) ? take_double(kv, key, what) : fallback;
}

void expect_empty(const std::map<std::string, std::string>& kv, const std::string& what) {
    if (!kv.empty())
        throw ConfigError(what + ": unknown parameter '" + kv.begin()->first + "'");
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    for (auto& e : entries_)
        if (e.first == key) {
            e.second = value;
            return;
        }
    entries_.emplace_back(key, value);
}

bool ExperimentConfig::has(const std::string& key) const { return find(key) != nullptr; }

const std::string* ExperimentConfig::find(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.first == key) return &e.second;
    return nullptr;
}

const std::string& ExperimentConfig::require(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw ConfigError("missing required setting '" + key + "'");
    return *v;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    return v ? parse_double_str(*v, key) : fallback;
}

long ExperimentConfig::get_long(const std::string& key, long fallback) const {
    const std::string* v = find(key);
    return v ? parse_long_str(*v, key) : fallback;
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    const std::string* v = find(key);
    return v ? parse_bool_str(*v, key) : fallback;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (value.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty value for '" + key + "'");
        cfg.set(key, value);
    }
    return cfg;
}

std::string echo_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [key, value] : config.entries())
        out += key + " = " + value + "\n";
    return out;
}

OvalTable make_table(const std::string& spec) {
    const auto tokens = split_ws(spec);
    if (tokens.empty()) throw ConfigError("table: empty spec");
    auto kv = spec_params(tokens, "table " + tokens[0]);
    try {
        if (tokens[0] == "circle") {
            const double radius = take_double_or(kv, "radius", 1.0, "table circle");
            expect_empty(kv, "table circle");
            return OvalTable::circle(radius);
        }
        if (tokens[0] == "ellipse") {
            const double e = take_double(kv, "e", "table ellipse");
            expect_empty(kv, "table ellipse");
            return OvalTable::ellipse(e);
        }
        if (tokens[0] == "cosine") {
            const double a = take_double(kv, "a", "table cosine");
            const double n = take_double(kv, "n", "table cosine");
            expect_empty(kv, "table cosine");
            if (n != std::floor(n)) throw ConfigError("table cosine: n must be an integer");
            return OvalTable::cosine_radius(a, static_cast<int>(n));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("table '" + spec + "': " + e.what());
    }
    throw ConfigError("table: unknown variant '" + tokens[0] + "'");
}

InvariantCurve make_curve(const std::string& spec, const OvalTable& table) {
    const auto tokens = split_ws(spec);
    if (tokens.empty()) throw ConfigError("curve: empty spec");
    auto kv = spec_params(tokens, "curve " + tokens[0]);
    try {
        if (tokens[0] == "line") {
            const auto it = kv.find("beta0");
            if (it == kv.end()) throw ConfigError("curve line: missing parameter 'beta0'");
            double beta0;
            if (it->second == "auto") {
                if (table.kind() != OvalTable::Kind::CosineRadius)
                    throw ConfigError(
                        "curve line: beta0=auto needs a cosine table to solve against");
                beta0 = solve_beta0(table.harmonic());
            } else {
                beta0 = parse_double_str(it->second, "curve line beta0");
            }
            kv.erase(it);
            expect_empty(kv, "curve line");
            return InvariantCurve::constant_line(beta0);
        }
        if (tokens[0] == "ellipse-level") {
            if (table.kind() != OvalTable::Kind::Ellipse)
                throw ConfigError("curve ellipse-level: table must be an ellipse");
            const double level = take_double(kv, "F0", "curve ellipse-level");
            auto branch = InvariantCurve::Branch::Lower;
            if (const auto it = kv.find("branch"); it != kv.end()) {
                if (it->second == "lower")
                    branch = InvariantCurve::Branch::Lower;
                else if (it->second == "upper")
                    branch = InvariantCurve::Branch::Upper;
                else
                    throw ConfigError("curve ellipse-level: branch must be lower or upper");
                kv.erase(it);
            }
            expect_empty(kv, "curve ellipse-level");
            return InvariantCurve::ellipse_level(level, table.eccentricity(), branch);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("curve '" + spec + "': " + e.what());
    }
    throw ConfigError("curve: unknown variant '" + tokens[0] + "'");
}

ContractionLaw make_law(const std::string& spec) {
    const auto tokens = split_ws(spec);
    if (tokens.empty()) throw ConfigError("law: empty spec");
    auto kv = spec_params(tokens, "law " + tokens[0]);
    try {
        if (tokens[0] == "linear") {
            const double mu = take_double(kv, "mu", "law linear");
            const double domain = take_double_or(kv, "domain", 0.0, "law linear");
            expect_empty(kv, "law linear");
            ContractionLaw law = ContractionLaw::linear(mu);
            return domain > 0.0 ? law.with_domain(domain) : law;
        }
        if (tokens[0] == "tanh") {
            const double mu = take_double(kv, "mu", "law tanh");
            const double sat = take_double_or(kv, "sat", 1.0, "law tanh");
            const double domain = take_double_or(kv, "domain", 0.0, "law tanh");
            expect_empty(kv, "law tanh");
            ContractionLaw law = ContractionLaw::smooth_tanh(mu, sat);
            return domain > 0.0 ? law.with_domain(domain) : law;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("law '" + spec + "': " + e.what());
    }
    throw ConfigError("law: unknown variant '" + tokens[0] + "'");
}

std::string render_table(const OvalTable& table) {
    switch (table.kind()) {
        case OvalTable::Kind::Circle:
            return "circle radius=" + format_double(table.radius());
        case OvalTable::Kind::Ellipse:
            return "ellipse e=" + format_double(table.eccentricity());
        case OvalTable::Kind::CosineRadius:
            return "cosine a=" + format_double(table.amplitude()) +
                   " n=" + std::to_string(table.harmonic());
    }
    throw std::logic_error("unreachable");
}

std::string render_curve(const InvariantCurve& curve) {
    if (curve.kind() == InvariantCurve::Kind::ConstantLine)
        return "line beta0=" + format_double(curve.beta0());
    return "ellipse-level F0=" + format_double(curve.level()) + " branch=" +
           (curve.branch() == InvariantCurve::Branch::Lower ? "lower" : "upper");
}

std::string render_law(const ContractionLaw& law) {
    std::string out = law.kind() == ContractionLaw::Kind::Linear
                          ? "linear mu=" + format_double(law.mu())
                          : "tanh mu=" + format_double(law.mu()) +
                                " sat=" + format_double(law.saturation());
    if (law.has_explicit_domain()) out += " domain=" + format_double(law.domain_halfwidth());
    return out;
}

Region parse_region(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("region: expected 'phimin:phimax,alphamin:alphamax'");
    const auto parse_range = [&](const std::string& part, double& lo, double& hi) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            throw ConfigError("region: expected 'lo:hi' in '" + part + "'");
        lo = parse_double_str(trim(part.substr(0, colon)), "region");
        hi = parse_double_str(trim(part.substr(colon + 1)), "region");
        if (!(hi > lo)) throw ConfigError("region: empty range '" + part + "'");
    };
    Region r;
    parse_range(text.substr(0, comma), r.phi_min, r.phi_max);
    parse_range(text.substr(comma + 1), r.alpha_min, r.alpha_max);
    return r;
}

std::string render_region(const Region& region) {
    return format_double(region.phi_min) + ":" + format_double(region.phi_max) + "," +
           format_double(region.alpha_min) + ":" + format_double(region.alpha_max);
}

GridSize parse_resolution(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw ConfigError("res: expected '<nphi>x<nalpha>'");
    GridSize g;
    g.nphi = static_cast<int>(parse_long_str(trim(text.substr(0, x)), "res"));
    g.nalpha = static_cast<int>(parse_long_str(trim(text.substr(x + 1)), "res"));
    return g;
}

std::string render_resolution(GridSize size) {
    return std::to_string(size.nphi) + "x" + std::to_string(size.nalpha);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        out.push_back(parse_double_str(trim(item), "list item"));
    return out;
}

double parse_double_str(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v))
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": bad number '" + text + "'");
    }
}

long parse_long_str(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": bad integer '" + text + "'");
    }
}

bool parse_bool_str(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError(what + ": bad boolean '" + text + "' (use true/false)");
}

}  // namespace oval
