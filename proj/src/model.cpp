#include "crowsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace crowsim {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Resonant: return "Resonant";
        case Regime::OutOfBand: return "OutOfBand";
        case Regime::InBand: return "InBand";
    }
    return "?";
}

SystemConfig SystemConfig::normalized() const {
    SystemConfig c = *this;
    const double u = omega0;
    c.omega0 = 1.0;
    c.xi0 = xi0 / u;
    c.omega_c1 = omega_c1 / u;
    c.omega_c2 = omega_c2 / u;
    c.xi1 = xi1 / u;
    c.xi2 = xi2 / u;
    return c;
}

Regime SystemConfig::regime_of(double omega_c, double tol) const {
    const double d = std::abs(omega_c - omega0);
    if (d <= tol * omega0) return Regime::Resonant;
    if (d >= 2.0 * xi0) return Regime::OutOfBand;
    return Regime::InBand;
}

ValidationResult validate(const SystemConfig& cfg) {
    ValidationResult res;
    auto flag = [&res](const char* code, std::string msg) {
        res.issues.push_back({code, std::move(msg)});
    };

    if (!(cfg.omega0 > 0.0)) flag("nonpositive_omega0", "omega0 must be > 0");
    if (!(cfg.xi0 > 0.0)) flag("nonpositive_xi0", "xi0 must be > 0");
    if (!(cfg.omega_c1 > 0.0)) flag("nonpositive_omega_c1", "omega_c1 must be > 0");
    if (!(cfg.omega_c2 > 0.0)) flag("nonpositive_omega_c2", "omega_c2 must be > 0");
    if (cfg.xi1 < 0.0) flag("negative_xi1", "xi1 must be >= 0");
    if (cfg.xi2 < 0.0) flag("negative_xi2", "xi2 must be >= 0");
    if (cfg.n1 < 1) flag("bad_site_n1", "n1 must be >= 1");
    if (cfg.n2 < 1) flag("bad_site_n2", "n2 must be >= 1");
    if (cfg.n1 == cfg.n2) flag("equal_sites", "n1 and n2 must differ");
    if (cfg.r1 < 0.0) flag("negative_r1", "r1 must be >= 0");
    if (cfg.r2 < 0.0) flag("negative_r2", "r2 must be >= 0");

    if (res.ok()) {
        res.regime_cavity1 = cfg.regime1();
        res.regime_cavity2 = cfg.regime2();
    }
    return res;
}

void require_valid(const SystemConfig& cfg) {
    const ValidationResult res = validate(cfg);
    if (res.ok()) return;
    std::string msg = "invalid config:";
    for (const auto& i : res.issues) msg += " [" + i.code + "] " + i.message + ";";
    throw ConfigError(msg);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + v + "' as number");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-9) throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
    return i;
}

}  // namespace

void apply_override(RawConfig& raw, const std::string& key, const std::string& value) {
    SystemConfig& c = raw.system;
    if (key == "omega0") c.omega0 = parse_double(key, value);
    else if (key == "xi0") c.xi0 = parse_double(key, value);
    else if (key == "omega_c1") c.omega_c1 = parse_double(key, value);
    else if (key == "omega_c2") c.omega_c2 = parse_double(key, value);
    else if (key == "omega_c") { c.omega_c1 = c.omega_c2 = parse_double(key, value); }
    else if (key == "xi1") c.xi1 = parse_double(key, value);
    else if (key == "xi2") c.xi2 = parse_double(key, value);
    else if (key == "xi_c") { c.xi1 = c.xi2 = parse_double(key, value); }
    else if (key == "eta") { c.xi1 = c.xi2 = parse_double(key, value) * c.xi0; }
    else if (key == "n1") c.n1 = parse_int(key, value);
    else if (key == "n2") c.n2 = parse_int(key, value);
    else if (key == "r1") c.r1 = parse_double(key, value);
    else if (key == "r2") c.r2 = parse_double(key, value);
    else if (key == "r") { c.r1 = c.r2 = parse_double(key, value); }
    else if (key == "dt") raw.dt = parse_double(key, value);
    else if (key == "t_max" || key == "tmax") raw.t_max = parse_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

RawConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RawConfig raw;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        apply_override(raw, key, value);
    }
    return raw;
}

}  // namespace crowsim
