// model.hpp — Shared value types: system configuration, time grid, 2x2 complex matrices

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace crowsim {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using cplx = std::complex<double>;

// ------------------------------- errors -------------------------------------

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    double achieved{0.0};  // best estimate reached before giving up
    ConvergenceError(const std::string& msg, double got)
        : std::runtime_error(msg), achieved(got) {}
};

struct NumericalError : std::runtime_error {
    long last_good_index{-1};
    NumericalError(const std::string& msg, long idx = -1)
        : std::runtime_error(msg), last_good_index(idx) {}
};

struct PhysicalityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --------------------------- matrix predicates -------------------------------

inline bool is_finite(const Mat2& m) {
    return m.allFinite();
}

inline bool is_hermitian(const Mat2& m, double tol = 1e-10) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_symmetric(const Mat2& m, double tol = 1e-10) {
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_identity(const Mat2& m, double tol = 1e-10) {
    return (m - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

// Largest singular value of a 2x2 complex matrix (closed form).
inline double max_singular_value(const Mat2& m) {
    const Mat2 a = m.adjoint() * m;  // Hermitian PSD
    const double tr = a.trace().real();
    const double dt = a.determinant().real();
    const double disc = std::max(tr * tr - 4.0 * dt, 0.0);
    return std::sqrt(0.5 * (tr + std::sqrt(disc)));
}

// ------------------------------ time grid ------------------------------------

// Uniform grid t_k = t0 + k*dt, k = 0..n_steps. Times in units 1/omega0.
struct TimeGrid {
    double t0{0.0};
    double dt{0.0};
    long n_steps{0};

    TimeGrid() = default;
    TimeGrid(double step, long n) : dt(step), n_steps(n) {
        if (!(dt > 0.0)) throw ConfigError("TimeGrid: dt must be > 0");
        if (n_steps < 1) throw ConfigError("TimeGrid: n_steps must be >= 1");
    }

    static TimeGrid from_tmax(double dt, double tmax) {
        if (!(dt > 0.0)) throw ConfigError("TimeGrid: dt must be > 0");
        long n = static_cast<long>(std::ceil(tmax / dt - 1e-12));
        return TimeGrid(dt, std::max<long>(n, 1));
    }

    double time(long k) const { return t0 + static_cast<double>(k) * dt; }
    double t_end() const { return time(n_steps); }
    long size() const { return n_steps + 1; }
};

// ----------------------------- configuration ---------------------------------

enum class Regime { Resonant, OutOfBand, InBand };

const char* regime_name(Regime r);

// Two single-mode cavities attached to a tight-binding waveguide (band
// omega0 +- 2*xi0) at sites n1 != n2, with squeezed-vacuum inputs r1, r2.
struct SystemConfig {
    double omega0{1.0};   // waveguide resonator frequency; the frequency unit
    double xi0{0.05};     // nearest-neighbor hopping in the waveguide
    double omega_c1{1.0}; // cavity frequencies
    double omega_c2{1.0};
    double xi1{0.0};      // cavity-waveguide couplings
    double xi2{0.0};
    int n1{1};            // attachment sites, 1-based
    int n2{2};
    double r1{0.0};       // initial squeezing parameters
    double r2{0.0};

    // Derived conveniences (paper parameterizes figures by eta = xi_c/xi0).
    double eta1() const { return xi1 / xi0; }
    double eta2() const { return xi2 / xi0; }
    double band_lo() const { return omega0 - 2.0 * xi0; }
    double band_hi() const { return omega0 + 2.0 * xi0; }
    bool in_band(double w) const { return w > band_lo() && w < band_hi(); }

    // Rescale so that omega0 == 1 internally; dt in a grid built against a
    // normalized config must be multiplied by the original omega0.
    SystemConfig normalized() const;

    Regime regime_of(double omega_c, double tol = 1e-12) const;
    Regime regime1() const { return regime_of(omega_c1); }
    Regime regime2() const { return regime_of(omega_c2); }
};

struct ValidationIssue {
    std::string code;     // stable identifier, e.g. "nonpositive_xi0"
    std::string message;
};

struct ValidationResult {
    std::vector<ValidationIssue> issues;
    Regime regime_cavity1{Regime::Resonant};
    Regime regime_cavity2{Regime::Resonant};
    bool ok() const { return issues.empty(); }
};

// Total classification: every valid config maps to exactly one regime per
// cavity; invalid configs yield a list of named violations instead.
ValidationResult validate(const SystemConfig& cfg);

// Throwing wrapper used by code that requires a valid config.
void require_valid(const SystemConfig& cfg);

// ----------------------------- config file I/O -------------------------------

// Flat key = value text file; '#' starts a comment. Unknown keys are errors.
// Recognized keys: omega0 xi0 omega_c1 omega_c2 xi1 xi2 n1 n2 r1 r2,
// plus optional grid keys dt, t_max handled by the caller via RawConfig.
struct RawConfig {
    SystemConfig system;
    double dt{0.0};      // 0 = unset
    double t_max{0.0};   // 0 = unset
};

RawConfig load_config_file(const std::string& path);

// Apply a single "key=value" override (CLI flags win over file values).
void apply_override(RawConfig& raw, const std::string& key, const std::string& value);

}  // namespace crowsim
