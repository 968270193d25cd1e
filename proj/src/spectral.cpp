#include "crowsim/spectral.hpp"

#include "crowsim/bessel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace crowsim::spectral {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double site(int i, const SystemConfig& cfg) {
    if (i == 1) return cfg.n1;
    if (i == 2) return cfg.n2;
    throw ConfigError("cavity index must be 1 or 2");
}

double coupling(int i, const SystemConfig& cfg) {
    if (i == 1) return cfg.xi1;
    if (i == 2) return cfg.xi2;
    throw ConfigError("cavity index must be 1 or 2");
}

cplx ipow(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

double wavenumber(double omega, const SystemConfig& cfg) {
    if (!cfg.in_band(omega))
        throw std::domain_error("wavenumber: omega outside the open waveguide band");
    return std::acos((cfg.omega0 - omega) / (2.0 * cfg.xi0));
}

double density_of_states(double omega, const SystemConfig& cfg) {
    if (!cfg.in_band(omega))
        throw std::domain_error("density_of_states: omega at or beyond a band edge");
    const double d = omega - cfg.omega0;
    return 1.0 / std::sqrt(4.0 * cfg.xi0 * cfg.xi0 - d * d);
}

double coupling_profile(int i, double omega, const SystemConfig& cfg) {
    const double k = wavenumber(omega, cfg);
    return std::sqrt(2.0 / kPi) * coupling(i, cfg) * std::sin(site(i, cfg) * k);
}

double spectral_density(int i, int j, double omega, const SystemConfig& cfg) {
    return 2.0 * kPi * density_of_states(omega, cfg) * coupling_profile(i, omega, cfg) *
           coupling_profile(j, omega, cfg);
}

double spectral_density_banded(int i, int j, double omega, const SystemConfig& cfg) {
    if (!cfg.in_band(omega)) return 0.0;
    return spectral_density(i, j, omega, cfg);
}

cplx memory_kernel_quadrature(int i, int j, double tau, const SystemConfig& cfg,
                              const QuadratureOptions& opts) {
    const double ni = site(i, cfg), nj = site(j, cfg);
    const double pref = (2.0 / kPi) * coupling(i, cfg) * coupling(j, cfg);
    auto f = [&](double k) {
        const double wk = cfg.omega0 - 2.0 * cfg.xi0 * std::cos(k);
        return std::sin(ni * k) * std::sin(nj * k) * std::exp(-kI * wk * tau);
    };
    const QuadratureResult r = integrate_gk(f, 0.0, kPi, opts);
    if (!r.converged)
        throw ConvergenceError("memory_kernel_quadrature: tolerance not reached (error " +
                                   std::to_string(r.error) + ")",
                               std::abs(pref * r.value));
    return pref * r.value;
}

cplx memory_kernel_bessel(int i, int j, double tau, const SystemConfig& cfg) {
    const int ni = (i == 1) ? cfg.n1 : cfg.n2;
    const int nj = (j == 1) ? cfg.n1 : cfg.n2;
    const int dn = std::abs(ni - nj), sn = ni + nj;
    const double x = 2.0 * cfg.xi0 * std::abs(tau);
    cplx core = ipow(dn) * bessel_j(dn, x) - ipow(sn) * bessel_j(sn, x);
    if (tau < 0.0) core = std::conj(core);  // g(-tau) = conj(g(tau))
    return coupling(i, cfg) * coupling(j, cfg) * std::exp(-kI * cfg.omega0 * tau) * core;
}

Mat2 memory_kernel_matrix(double tau, const SystemConfig& cfg, double frame_freq) {
    const int dn = std::abs(cfg.n1 - cfg.n2), s1 = 2 * cfg.n1, s2 = 2 * cfg.n2, sn = cfg.n1 + cfg.n2;
    const double x = 2.0 * cfg.xi0 * tau;
    const int m_max = std::max({dn, s1, s2, sn});
    std::array<double, 128> buf;
    std::vector<double> heap;
    std::span<double> js;
    if (m_max + 1 <= static_cast<int>(buf.size())) {
        js = std::span<double>(buf.data(), static_cast<size_t>(m_max + 1));
    } else {
        heap.resize(static_cast<size_t>(m_max + 1));
        js = heap;
    }
    bessel_j_upto(m_max, x, js);
    const cplx phase = std::exp(-kI * (cfg.omega0 - frame_freq) * tau);
    Mat2 g;
    g(0, 0) = cfg.xi1 * cfg.xi1 * (js[0] - ipow(s1) * js[s1]);
    g(1, 1) = cfg.xi2 * cfg.xi2 * (js[0] - ipow(s2) * js[s2]);
    g(0, 1) = cfg.xi1 * cfg.xi2 * (ipow(dn) * js[dn] - ipow(sn) * js[sn]);
    g(1, 0) = g(0, 1);
    return phase * g;
}

double lamb_shift(int i, int j, double omega_c, const SystemConfig& cfg,
                  const QuadratureOptions& opts) {
    const double ni = site(i, cfg), nj = site(j, cfg);
    const double pref = (2.0 / kPi) * coupling(i, cfg) * coupling(j, cfg);
    if (pref == 0.0) return 0.0;

    QuadratureResult r;
    if (!cfg.in_band(omega_c) && omega_c != cfg.band_lo() && omega_c != cfg.band_hi()) {
        auto f = [&](double k) -> cplx {
            const double wk = cfg.omega0 - 2.0 * cfg.xi0 * std::cos(k);
            return std::sin(ni * k) * std::sin(nj * k) / (omega_c - wk);
        };
        r = integrate_gk(f, 0.0, kPi, opts);
    } else {
        // In-band: omega_c - w_k = 2 xi0 (cos k - cos k_c). Subtract the value
        // at k_c; P int_0^pi dk / (cos k - cos k_c) = 0, so only the regular
        // difference quotient remains.
        const double kc = cfg.in_band(omega_c)
                              ? wavenumber(omega_c, cfg)
                              : (omega_c <= cfg.band_lo() ? 0.0 : kPi);
        const double fc = std::sin(ni * kc) * std::sin(nj * kc);
        auto f = [&](double k) -> cplx {
            const double num = std::sin(ni * k) * std::sin(nj * k) - fc;
            const double den = std::cos(k) - std::cos(kc);
            if (std::abs(den) < 1e-9) {
                // removable point: l'Hopital in k
                const double dnum = ni * std::cos(ni * kc) * std::sin(nj * kc) +
                                    nj * std::sin(ni * kc) * std::cos(nj * kc);
                return dnum / (-std::sin(kc));
            }
            return num / den;
        };
        r = integrate_gk(f, 0.0, kPi, opts);
        r.value /= 2.0 * cfg.xi0;
        r.error /= 2.0 * cfg.xi0;
    }
    if (!r.converged)
        throw ConvergenceError("lamb_shift: tolerance not reached (error " +
                                   std::to_string(r.error) + ")",
                               pref * r.value.real());
    return pref * r.value.real();
}

Mat2 lamb_shift_matrix(double omega_c, const SystemConfig& cfg) {
    Mat2 d;
    d(0, 0) = lamb_shift(1, 1, omega_c, cfg);
    d(1, 1) = lamb_shift(2, 2, omega_c, cfg);
    d(0, 1) = lamb_shift(1, 2, omega_c, cfg);
    d(1, 0) = d(0, 1);
    return d;
}

Mat2 markovian_rates(double omega_c, const SystemConfig& cfg) {
    Mat2 g = Mat2::Zero();
    if (!cfg.in_band(omega_c)) return g;
    g(0, 0) = spectral_density(1, 1, omega_c, cfg) / 2.0;
    g(1, 1) = spectral_density(2, 2, omega_c, cfg) / 2.0;
    g(0, 1) = spectral_density(1, 2, omega_c, cfg) / 2.0;
    g(1, 0) = g(0, 1);
    return g;
}

KernelCache::KernelCache(const SystemConfig& cfg, double dt, long n_steps, double frame_freq,
                         Exec exec)
    : dt_(dt), frame_freq_(frame_freq), samples_(static_cast<size_t>(n_steps) + 1) {
    const long n = n_steps;
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (long k = 0; k <= n; ++k)
        samples_[static_cast<size_t>(k)] =
            memory_kernel_matrix(static_cast<double>(k) * dt, cfg, frame_freq);
}

}  // namespace crowsim::spectral
