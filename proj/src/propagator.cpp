#include "crowsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace crowsim::prop {

namespace {

constexpr cplx kI{0.0, 1.0};

Mat2 inverse2(const Mat2& m) {
    const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Mat2 inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / det;
}

// e^{-M t} for any 2x2 via Cayley-Hamilton: with h = tr(M)/2 and
// s^2 = h^2 - det(M), e^{-Mt} = e^{-ht} [cosh(st) I - sinh(st)/s (M - hI)].
Mat2 exp_neg(const Mat2& m, double t) {
    const cplx h = 0.5 * m.trace();
    const cplx s2 = h * h - (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    const cplx s = std::sqrt(s2);
    const cplx st = s * t;
    cplx ch, shs;  // cosh(st), sinh(st)/s
    if (std::abs(st) < 1e-6) {
        ch = 1.0 + 0.5 * st * st;
        shs = t * (1.0 + st * st / 6.0);
    } else {
        ch = std::cosh(st);
        shs = std::sinh(st) / s;
    }
    return std::exp(-h * t) * (ch * Mat2::Identity() - shs * (m - h * Mat2::Identity()));
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::Volterra: return "volterra";
        case Method::WeakCoupling: return "weak-coupling";
        case Method::FiniteChain: return "finite-chain";
        case Method::Spectral: return "spectral";
    }
    return "?";
}

Mat2 PropagatorTrajectory::lab(long k) const {
    return std::exp(-kI * frame_frequency * grid.time(k)) * rotating(k);
}

double PropagatorTrajectory::max_singular_value() const {
    double worst = 0.0;
    for (const Mat2& m : samples) worst = std::max(worst, crowsim::max_singular_value(m));
    return worst;
}

// ------------------------------ Volterra ------------------------------------

PropagatorTrajectory solve_volterra(const SystemConfig& cfg, const TimeGrid& grid,
                                    const SolverOptions& opts) {
    require_valid(cfg);
    const double wf = cfg.omega0;  // rotating frame removes the carrier scale
    const double dt = grid.dt;

    const double detune = std::max(std::abs(cfg.omega_c1 - wf), std::abs(cfg.omega_c2 - wf));
    const double scale = std::max({detune, cfg.xi0, cfg.xi1, cfg.xi2});
    if (dt * scale >= 0.1) {
        const char* binding = (detune >= cfg.xi0 && detune >= cfg.xi1 && detune >= cfg.xi2)
                                  ? "cavity detuning |omega_c - omega0|"
                              : (cfg.xi0 >= cfg.xi1 && cfg.xi0 >= cfg.xi2) ? "waveguide hopping xi0"
                                                                           : "cavity coupling xi_i";
        throw ConfigError(std::string("solve_volterra: dt too large; binding scale is ") +
                          binding + " (need dt * scale < 0.1, got " + std::to_string(dt * scale) +
                          ")");
    }

    const long n = grid.n_steps;
    const spectral::KernelCache kernel(cfg, dt, n, wf, opts.exec);

    Mat2 W = Mat2::Zero();
    W(0, 0) = cfg.omega_c1 - wf;
    W(1, 1) = cfg.omega_c2 - wf;

    PropagatorTrajectory traj;
    traj.grid = grid;
    traj.frame_frequency = wf;
    traj.method = Method::Volterra;
    traj.samples.assign(static_cast<size_t>(n) + 1, Mat2::Zero());
    std::vector<Mat2>& mu = traj.samples;
    mu[0] = Mat2::Identity();

    const Mat2 G0 = kernel.at(0);
    const Mat2 A = Mat2::Identity() + 0.5 * dt * (kI * W + 0.5 * dt * G0);
    const Mat2 Ainv = inverse2(A);

    const int nthreads = thread_count(opts.exec);
    std::vector<Mat2> partial(static_cast<size_t>(nthreads), Mat2::Zero());

    Mat2 F_prev = -kI * W;  // F at t=0 (mu = I, no history)
    constexpr long kParallelCutoff = 4096;

    for (long m = 1; m <= n; ++m) {
        // S_m = dt [ 1/2 G_m mu_0 + sum_{j=1}^{m-1} G_{m-j} mu_j ]
        Mat2 S = 0.5 * (kernel.at(m) * mu[0]);
        const long lo = 1, hi = m;  // j in [lo, hi)
        if (hi - lo < kParallelCutoff || nthreads == 1) {
            Mat2 acc = Mat2::Zero();
            for (long j = lo; j < hi; ++j) acc += kernel.at(m - j) * mu[static_cast<size_t>(j)];
            S += acc;
        } else {
#pragma omp parallel num_threads(nthreads)
            {
#ifdef _OPENMP
                const int tid = omp_get_thread_num();
                const int nt = omp_get_num_threads();
#else
                const int tid = 0;
                const int nt = 1;
#endif
                const long len = hi - lo;
                const long a = lo + (len * tid) / nt;
                const long b = lo + (len * (tid + 1)) / nt;
                Mat2 acc = Mat2::Zero();
                for (long j = a; j < b; ++j) acc += kernel.at(m - j) * mu[static_cast<size_t>(j)];
                partial[static_cast<size_t>(tid)] = acc;
            }
            for (int t = 0; t < nthreads; ++t) S += partial[static_cast<size_t>(t)];
        }
        S *= dt;

        // Trapezoidal corrector solved exactly (the implicit part is linear).
        const Mat2 rhs = mu[static_cast<size_t>(m - 1)] + 0.5 * dt * (F_prev - S);
        mu[static_cast<size_t>(m)] = Ainv * rhs;
        F_prev = -kI * (W * mu[static_cast<size_t>(m)]) - S - 0.5 * dt * (G0 * mu[static_cast<size_t>(m)]);

        if ((m & 1023) == 0 || m == n) {
            const Mat2& cur = mu[static_cast<size_t>(m)];
            if (!is_finite(cur))
                throw NumericalError("solve_volterra: non-finite sample", m - 1);
            if (crowsim::max_singular_value(cur) > 1.0 + opts.passivity_guard)
                throw NumericalError("solve_volterra: passivity violated (growing amplitude)", m - 1);
        }
    }
    return traj;
}

// ---------------------------- weak coupling ----------------------------------

PropagatorTrajectory weak_coupling_propagator(const SystemConfig& cfg, const TimeGrid& grid,
                                              double omega_c) {
    require_valid(cfg);
    if (std::abs(cfg.omega_c1 - cfg.omega_c2) > 1e-12 * cfg.omega0)
        throw UnsupportedConfigError("weak_coupling_propagator: requires omega_c1 == omega_c2");

    const double wf = cfg.omega0;
    const Mat2 gamma = spectral::markovian_rates(omega_c, cfg);
    const Mat2 shift = spectral::lamb_shift_matrix(omega_c, cfg);

    PropagatorTrajectory traj;
    traj.grid = grid;
    traj.frame_frequency = wf;
    traj.method = Method::WeakCoupling;
    traj.samples.resize(static_cast<size_t>(grid.n_steps) + 1);

    const bool resonant = cfg.regime_of(omega_c) == Regime::Resonant &&
                          shift.cwiseAbs().maxCoeff() < 1e-14;
    if (resonant) {
        // Explicit two-rate form; the collective mode decoupled from the band
        // survives as the e^{-(g11+g22)t} -> const plateau.
        const double g11 = gamma(0, 0).real(), g22 = gamma(1, 1).real(), g12 = gamma(0, 1).real();
        const double gs = g11 + g22;
        for (long k = 0; k <= grid.n_steps; ++k) {
            const double t = grid.time(k);
            const cplx phase = std::exp(-kI * (omega_c - wf) * t);
            Mat2 m;
            if (gs <= 0.0) {
                m = Mat2::Identity();
            } else {
                const double e = std::exp(-gs * t);
                m(0, 0) = (g22 + g11 * e) / gs;
                m(1, 1) = (g11 + g22 * e) / gs;
                m(0, 1) = -(g12 / gs) * (1.0 - e);
                m(1, 0) = m(0, 1);
            }
            traj.samples[static_cast<size_t>(k)] = phase * m;
        }
        return traj;
    }

    Mat2 M = gamma + kI * ((omega_c - wf) * Mat2::Identity() + shift);
    for (long k = 0; k <= grid.n_steps; ++k)
        traj.samples[static_cast<size_t>(k)] = exp_neg(M, grid.time(k));
    return traj;
}

// ----------------------------- finite chain ----------------------------------

PropagatorTrajectory finite_chain_oracle(const SystemConfig& cfg, const TimeGrid& grid,
                                         const ChainOptions& opts) {
    require_valid(cfg);
    const int N = opts.sites;
    if (N < 4 * std::max(cfg.n1, cfg.n2))
        throw ConfigError("finite_chain_oracle: need N >= 4 max(n1, n2)");
    const double horizon = opts.horizon_guard * N / (2.0 * cfg.xi0);
    if (grid.t_end() >= horizon)
        throw ConfigError("finite_chain_oracle: t_end " + std::to_string(grid.t_end()) +
                          " beyond reflection horizon " + std::to_string(horizon));

    const int dim = N + 2;  // [cavity1, cavity2, site1..siteN]
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    H(0, 0) = cfg.omega_c1;
    H(1, 1) = cfg.omega_c2;
    for (int s = 0; s < N; ++s) {
        H(2 + s, 2 + s) = cfg.omega0;
        if (s + 1 < N) H(2 + s, 3 + s) = H(3 + s, 2 + s) = -cfg.xi0;
    }
    H(0, 1 + cfg.n1) = H(1 + cfg.n1, 0) = cfg.xi1;
    H(1, 1 + cfg.n2) = H(1 + cfg.n2, 1) = cfg.xi2;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("finite_chain_oracle: eigendecomposition failed");
    const Eigen::VectorXd eps = es.eigenvalues();
    const Eigen::VectorXd u1 = es.eigenvectors().row(0);
    const Eigen::VectorXd u2 = es.eigenvectors().row(1);

    const double wf = cfg.omega0;
    PropagatorTrajectory traj;
    traj.grid = grid;
    traj.frame_frequency = wf;
    traj.method = Method::FiniteChain;
    traj.samples.resize(static_cast<size_t>(grid.n_steps) + 1);

    const long n = grid.n_steps;
#pragma omp parallel for schedule(static) if (opts.exec == Exec::Parallel)
    for (long k = 0; k <= n; ++k) {
        const double t = grid.time(k);
        cplx m11{0, 0}, m12{0, 0}, m22{0, 0};
        for (int j = 0; j < dim; ++j) {
            const cplx ph = std::exp(-kI * (eps(j) - wf) * t);
            m11 += u1(j) * u1(j) * ph;
            m12 += u1(j) * u2(j) * ph;
            m22 += u2(j) * u2(j) * ph;
        }
        Mat2 m;
        m << m11, m12, m12, m22;
        traj.samples[static_cast<size_t>(k)] = m;
    }
    return traj;
}

// --------------------------- derived coefficients ----------------------------

MasterEquationCoefficients master_equation_coefficients(const PropagatorTrajectory& traj,
                                                        double sv_floor) {
    const long n = traj.size();
    MasterEquationCoefficients out;
    out.omega_ren.assign(static_cast<size_t>(n), Mat2::Zero());
    out.gamma.assign(static_cast<size_t>(n), Mat2::Zero());
    out.valid.assign(static_cast<size_t>(n), 1);
    const double dt = traj.grid.dt;

    for (long k = 0; k < n; ++k) {
        const Mat2& m = traj.rotating(k);
        const Mat2 mtm = m.adjoint() * m;
        const double tr = mtm.trace().real();
        const double det = mtm.determinant().real();
        const double disc = std::max(tr * tr - 4.0 * det, 0.0);
        const double smin2 = 0.5 * (tr - std::sqrt(disc));
        if (smin2 < sv_floor * sv_floor) {
            out.valid[static_cast<size_t>(k)] = 0;
            continue;
        }
        Mat2 dmu;
        if (k == 0)
            dmu = (-3.0 * traj.rotating(0) + 4.0 * traj.rotating(1) - traj.rotating(2)) / (2.0 * dt);
        else if (k == n - 1)
            dmu = (3.0 * traj.rotating(k) - 4.0 * traj.rotating(k - 1) + traj.rotating(k - 2)) /
                  (2.0 * dt);
        else
            dmu = (traj.rotating(k + 1) - traj.rotating(k - 1)) / (2.0 * dt);
        const Mat2 K = dmu * inverse2(m);
        out.omega_ren[static_cast<size_t>(k)] =
            0.5 * kI * (K - K.adjoint()) + traj.frame_frequency * Mat2::Identity();
        out.gamma[static_cast<size_t>(k)] = -0.5 * (K + K.adjoint());
    }
    return out;
}

// --------------------------------- I/O ---------------------------------------

void PropagatorTrajectory::save_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "t,re_mu11,im_mu11,re_mu12,im_mu12,re_mu21,im_mu21,re_mu22,im_mu22\n");
    for (long k = 0; k < size(); ++k) {
        const Mat2& m = rotating(k);
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.time(k),
                     m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag(),
                     m(1, 0).real(), m(1, 0).imag(), m(1, 1).real(), m(1, 1).imag());
    }
    std::fclose(f);
}

namespace {
constexpr char kTrajMagic[8] = {'C', 'R', 'W', 'T', 'R', 'J', '0', '1'};
}

void PropagatorTrajectory::save_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(kTrajMagic, sizeof(kTrajMagic));
    const double header[3] = {grid.t0, grid.dt, frame_frequency};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    const std::int64_t n = grid.n_steps;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    const std::uint32_t meth = static_cast<std::uint32_t>(method);
    out.write(reinterpret_cast<const char*>(&meth), sizeof(meth));
    for (const Mat2& m : samples) {
        const double row[8] = {m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag(),
                               m(1, 0).real(), m(1, 0).imag(), m(1, 1).real(), m(1, 1).imag()};
        out.write(reinterpret_cast<const char*>(row), sizeof(row));
    }
}

PropagatorTrajectory PropagatorTrajectory::load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kTrajMagic, sizeof(magic)) != 0)
        throw std::runtime_error(path + ": not a trajectory file (bad magic/version)");
    double header[3];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    std::int64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    std::uint32_t meth = 0;
    in.read(reinterpret_cast<char*>(&meth), sizeof(meth));
    if (!in || n < 1) throw std::runtime_error(path + ": corrupt header");
    PropagatorTrajectory traj;
    traj.grid = TimeGrid(header[1], n);
    traj.grid.t0 = header[0];
    traj.frame_frequency = header[2];
    traj.method = static_cast<Method>(meth);
    traj.samples.resize(static_cast<size_t>(n) + 1);
    for (Mat2& m : traj.samples) {
        double row[8];
        in.read(reinterpret_cast<char*>(row), sizeof(row));
        if (!in) throw std::runtime_error(path + ": truncated sample data");
        m << cplx{row[0], row[1]}, cplx{row[2], row[3]}, cplx{row[4], row[5]}, cplx{row[6], row[7]};
    }
    return traj;
}

}  // namespace crowsim::prop
