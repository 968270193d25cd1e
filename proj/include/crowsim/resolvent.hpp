// resolvent.hpp — Spectral propagator for out-of-band cavities: dressed-mode
// poles plus the band branch-cut, exact at arbitrary times at O(1) per sample

#pragma once

#include "crowsim/model.hpp"
#include "crowsim/parallel.hpp"
#include "crowsim/propagator.hpp"

#include <vector>

namespace crowsim::resolvent {

// Waveguide self-energy Sigma_ij(z) = int dw/2pi J_ij(w) / (z - w), evaluated
// in closed form; analytic off the band cut. On the real axis inside the band
// it returns the retarded (upper) limit, with Im Sigma = -J/2.
cplx self_energy(int i, int j, cplx z, const SystemConfig& cfg);
Mat2 self_energy_matrix(cplx z, const SystemConfig& cfg);
Mat2 self_energy_derivative(cplx z, const SystemConfig& cfg);

struct Pole {
    double energy;   // real dressed-mode frequency outside the band
    Mat2 residue;
};

// mu(t) = sum_p R_p e^{-i E_p t} + e^{-i w0 t} * pi * sum_m d_m i^m J_m(2 xi0 t)
class SpectralDecomposition {
  public:
    SpectralDecomposition(const SystemConfig& cfg, int cut_samples = 4096);

    const std::vector<Pole>& poles() const { return poles_; }
    int cut_terms() const { return static_cast<int>(cut_coeffs_.size()); }

    // |mu(0) - I| from the computed poles + cut; a built-in sanity measure.
    double completeness_error() const;

    Mat2 evaluate_lab(double t) const;
    Mat2 evaluate_rotating(double t) const;  // frame at omega0

    // Beat frequency of the two dressed modes (0 if fewer than two poles).
    double pole_splitting() const;

  private:
    SystemConfig cfg_;
    std::vector<Pole> poles_;
    std::vector<Mat2> cut_coeffs_;  // d_m, cosine series of the cut density
};

// Requires both cavities out of band (the in-band continuum of resonances is
// the Volterra solver's job); throws UnsupportedConfigError otherwise.
prop::PropagatorTrajectory propagate_spectral(const SystemConfig& cfg, const TimeGrid& grid,
                                              Exec exec = Exec::Parallel);

}  // namespace crowsim::resolvent
