// spectral.hpp — Waveguide spectral structure: density of states, coupling
// profiles, spectral-density matrix, memory kernel, frequency shifts, rates

#pragma once

#include "crowsim/model.hpp"
#include "crowsim/parallel.hpp"
#include "crowsim/quadrature.hpp"

#include <vector>

namespace crowsim::spectral {

// Mode wavenumber k(omega) in [0, pi]: monotone inversion of the band
// dispersion omega = omega0 - 2 xi0 cos k. Domain error outside the open band.
double wavenumber(double omega, const SystemConfig& cfg);

// 1 / sqrt(4 xi0^2 - (omega - omega0)^2); diverges (integrably) at the edges,
// so evaluation at or beyond an edge is a domain error. Quadrature routines
// avoid the singularity via the k-substitution.
double density_of_states(double omega, const SystemConfig& cfg);

// V_i(omega) = sqrt(2/pi) xi_i sin(n_i k(omega)), i in {1, 2}.
double coupling_profile(int i, double omega, const SystemConfig& cfg);

// J_ij(omega) = 2 pi rho(omega) V_i(omega) V_j(omega); domain error outside.
double spectral_density(int i, int j, double omega, const SystemConfig& cfg);

// Band-aware wrapper: zero outside the band instead of an error.
double spectral_density_banded(int i, int j, double omega, const SystemConfig& cfg);

// Memory kernel g_ij(tau) = int dw/2pi J_ij(w) e^{-i w tau}
//            = (2/pi) xi_i xi_j int_0^pi sin(n_i k) sin(n_j k) e^{-i w_k tau} dk.
// Quadrature backend: adaptive integration in k to opts.abs_tol; throws
// ConvergenceError (carrying the achieved estimate) if the tolerance is not met.
cplx memory_kernel_quadrature(int i, int j, double tau, const SystemConfig& cfg,
                              const QuadratureOptions& opts = {});

// Closed-form backend:
//   g_ij(tau) = xi_i xi_j e^{-i w0 tau} [ i^{|dn|} J_{|dn|}(2 xi0 tau)
//                                        - i^{n1+n2} J_{n1+n2}(2 xi0 tau) ].
// Cross-validated against the quadrature backend (see tests); production path.
cplx memory_kernel_bessel(int i, int j, double tau, const SystemConfig& cfg);

// Full kernel matrix in a frame rotating at frame_freq: e^{i wf tau} g(tau).
Mat2 memory_kernel_matrix(double tau, const SystemConfig& cfg, double frame_freq);

// Frequency renormalization delta_w_ij = P int dw/2pi J_ij(w) / (omega_c - w),
// the real part of the waveguide self-energy at omega_c. Out-of-band omega_c:
// ordinary convergent quadrature after the k-substitution. In-band omega_c:
// singular-part subtraction (the subtracted term integrates to zero over the
// full band), leaving a regular integrand.
double lamb_shift(int i, int j, double omega_c, const SystemConfig& cfg,
                  const QuadratureOptions& opts = {});

Mat2 lamb_shift_matrix(double omega_c, const SystemConfig& cfg);

// gamma_ij = J_ij(omega_c) / 2; zero matrix when omega_c is out of band.
Mat2 markovian_rates(double omega_c, const SystemConfig& cfg);

// Kernel samples on a uniform tau grid in the rotating frame, built once up
// front (read-only afterwards, safe for concurrent readers).
class KernelCache {
  public:
    KernelCache(const SystemConfig& cfg, double dt, long n_steps, double frame_freq,
                Exec exec = Exec::Parallel);

    const Mat2& at(long step) const { return samples_[static_cast<size_t>(step)]; }
    long size() const { return static_cast<long>(samples_.size()); }
    double dt() const { return dt_; }
    double frame_freq() const { return frame_freq_; }

  private:
    double dt_;
    double frame_freq_;
    std::vector<Mat2> samples_;
};

}  // namespace crowsim::spectral
