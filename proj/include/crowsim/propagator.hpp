// propagator.hpp — Cavity photon propagating function mu(t): exact Volterra
// solver, weak-coupling closed form, finite-chain oracle, derived coefficients

#pragma once

#include "crowsim/model.hpp"
#include "crowsim/parallel.hpp"
#include "crowsim/spectral.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crowsim::prop {

enum class Method : std::uint32_t { Volterra = 0, WeakCoupling = 1, FiniteChain = 2, Spectral = 3 };

const char* method_name(Method m);

// Samples are stored in the frame rotating at frame_frequency; the lab-frame
// propagator is mu(t) = e^{-i frame_frequency t} mu~(t).
struct PropagatorTrajectory {
    TimeGrid grid;
    double frame_frequency{0.0};
    Method method{Method::Volterra};
    std::vector<Mat2> samples;

    const Mat2& rotating(long k) const { return samples[static_cast<size_t>(k)]; }
    Mat2 lab(long k) const;
    long size() const { return static_cast<long>(samples.size()); }

    // Passivity: a vacuum reservoir cannot amplify; every sample must satisfy
    // sigma_max <= 1 + tol.
    double max_singular_value() const;

    void save_csv(const std::string& path) const;
    void save_binary(const std::string& path) const;
    static PropagatorTrajectory load_binary(const std::string& path);
};

struct SolverOptions {
    Exec exec{Exec::Parallel};
    double kernel_tol{1e-12};       // quadrature fallback tolerance (unused by Bessel backend)
    double passivity_guard{1e-6};   // hard failure if sigma_max exceeds 1 by more than this
};

// Exact solver: trapezoidal Volterra scheme with the implicit corrector solved
// in closed form each step (second order). Rotating frame at omega0; requires
// dt * max(|wbar - omega0|, xi0, xi_i) < 0.1.
PropagatorTrajectory solve_volterra(const SystemConfig& cfg, const TimeGrid& grid,
                                    const SolverOptions& opts = {});

// Weak-coupling closed form mu = e^{-(gamma + i wbar) t} with gamma = J(wc)/2
// and wbar = wc I + lamb_shift_matrix(wc). Requires omega_c1 == omega_c2.
// In the resonant regime this reduces to the explicit two-rate expressions.
PropagatorTrajectory weak_coupling_propagator(const SystemConfig& cfg, const TimeGrid& grid,
                                              double omega_c);

// Brute-force oracle: cavity block of e^{-iHt} for a hard-wall chain of N
// sites (full Hermitian eigendecomposition, spectrally exact). Valid only
// before the reflected wavefront returns: t_end < horizon_guard * N / (2 xi0).
struct ChainOptions {
    int sites{400};
    double horizon_guard{0.8};
    Exec exec{Exec::Parallel};
};

PropagatorTrajectory finite_chain_oracle(const SystemConfig& cfg, const TimeGrid& grid,
                                         const ChainOptions& opts = {});

// Time-local generator diagnostics derived from the trajectory, lab frame:
//   omega_ren(t) =  (i/2) (K - K^dag) + frame_frequency I,  K = dmu/dt mu^{-1}
//   gamma(t)     = -(1/2) (K + K^dag)
// dmu/dt by centered differences (one-sided at the ends). Samples where mu is
// near-singular are flagged invalid and skipped, not fatal.
struct MasterEquationCoefficients {
    std::vector<Mat2> omega_ren;
    std::vector<Mat2> gamma;
    std::vector<std::uint8_t> valid;
};

MasterEquationCoefficients master_equation_coefficients(const PropagatorTrajectory& traj,
                                                        double sv_floor = 1e-12);

}  // namespace crowsim::prop
