// response.hpp — frequency-domain input-output solver
//
// Everything here derives from the response matrix Q(w) = (H + i w 1)^{-1}:
//
//   scattering   Z_jl(w)   = delta_jl + sqrt(kappa_j kappa_l) Q_jl(w)
//   power gain   G_j(w)    = |Z_{j,in}(w)|^2        (input port `in`, default 1)
//   amp noise    n^amp_j(w)= kappa_j sum_{l l'} Q*_jl Q_jl' gamma^p_{l' l}
//   added noise  n^add_j(w)= n^amp_j(w) / G_j(w)
//   output noise N_j^out   = (1/2pi) Int dw n^amp_j(w)   (vacuum inputs)
//   noise/signal           = N_j^out / (G_j(w_d) |alpha|^2)
//
// Site indices are 1-based. Input noise is taken as vacuum (zero spectral
// density); a caller that needs thermal input noise can add G_j(w) n_in(w)
// on top of the returned amplifier terms.

#pragma once

#include "topamp/model.hpp"
#include "topamp/types.hpp"

namespace topamp::response {

struct ResponseMatrix {
  double omega = 0.0;
  CMatrix q;
};

// Full inverse of H + i w 1. Throws NearSingularError at exceptional or
// marginally stable points.
ResponseMatrix response_matrix(const model::DynamicalMatrix& h, double omega);

// Z_jl(w) = delta_jl + sqrt(kappa_j kappa_l) Q_jl(w); sites 1-based.
Complex scattering_element(const ResponseMatrix& q, const model::LatticeSpec& spec, int j,
                           int l);

double gain(const model::LatticeSpec& spec, double omega, int input_site, int output_site);

// Sum of |Z_{j,in}|^2 over all output sites j.
double total_gain(const model::LatticeSpec& spec, double omega, int input_site = 1);

double amp_noise_density(const model::LatticeSpec& spec, double omega, int site);

double added_noise(const model::LatticeSpec& spec, double omega, int site, int input_site = 1);

// (1/2pi) Int n^amp_site(w) dw. Requires a stable lattice (throws
// UnstableError otherwise); quadrature failures propagate.
double output_noise_total(const model::LatticeSpec& spec, int site, double rel_tol = 1e-6);

double noise_to_signal(const model::LatticeSpec& spec, double omega_d, double amplitude_sq,
                       int site, int input_site = 1, double rel_tol = 1e-6);

// Max Re(lambda) of H; throws UnstableError if >= 0.
double require_stable(const model::DynamicalMatrix& h);

// Gain over a frequency grid for all sites; gain(site-1, w-index), all >= 0.
struct GainSpectrum {
  RVector omegas;
  RMatrix gain;
  int input_site = 1;
};

GainSpectrum gain_spectrum(const model::LatticeSpec& spec, const RVector& omegas,
                           int input_site = 1);

// Amplifier noise quantities over a frequency grid plus per-site integrals.
struct NoiseReport {
  RVector omegas;
  RMatrix n_amp;          // photons per unit bandwidth, (site-1, w-index)
  RMatrix n_add;          // n_amp / gain  (NaN where gain underflows)
  RVector n_out_total;    // photon flux per site
  RVector nsr;            // N_j^out / (G_j(w_d) |alpha|^2)
  int input_site = 1;
};

NoiseReport noise_report(const model::LatticeSpec& spec, const RVector& omegas, double omega_d,
                         double amplitude_sq, int input_site = 1, double rel_tol = 1e-6);

// Default probe grid: 401 points centered on omega0 spanning 6 (2 t_d - gamma_p).
RVector default_omega_grid(const model::ChainParams& params);

}  // namespace topamp::response
