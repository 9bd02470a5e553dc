// chain1d.hpp — closed-form analytics for the non-reciprocal chain
//
// In the analytic regime phi = pi/2, t_c = t_d the Bloch reduction of the
// chain maps onto a two-band model with alternating couplings r(w) and 2 t_d,
// where
//
//   r(w)   = sqrt((w - w0)^2 + (gamma_p - 2 t_d)^2)
//
// is the distance of the Bloch circle's center from the origin. For
// r(w) < 2 t_d the phase is non-trivial and everything follows in closed form:
//
//   1/xi(w) = ln(2 t_d / r(w))                      localization length
//   rho(w)  = 1 / (1 - e^{-2/xi})                   edge-vector normalization
//   s0(w)   = 2 t_d (1 - (r/2 t_d)^2)               edge singular value scale
//   s_N(w)  = s0 e^{-N/xi}                          smallest singular value
//   u_j     = rho^{-1/2} e^{-(j-1)/xi}              edge vector envelope
//   |Q_jl|  = e^{N/xi} e^{-(N-j)/xi} e^{-(l-1)/xi} / (rho s0)
//   G_j     = (kappa^2 / (rho^2 s0^2)) e^{2j/xi}    gain, valid for j > 1
//
// plus the noise ladder (site noise, total noise, added noise, noise-to-signal)
// built from the integral I(j) below. These expressions are the independent
// oracle for the dense numerical pipeline.
//
// Functions that require the analytic regime throw std::domain_error outside
// it; functions that require the non-trivial phase throw std::domain_error
// when r(w) >= 2 t_d.

#pragma once

#include "topamp/model.hpp"
#include "topamp/types.hpp"

namespace topamp::chain1d {

using model::Boundary;
using model::ChainParams;

// True when phi = pi/2 and t_c = t_d within 1e-9 relative.
bool analytic_regime(const ChainParams& p);

double r_of_omega(const ChainParams& p, double omega);

// xi(w) = 1 / ln(2 t_d / r(w)); requires the non-trivial phase r(w) < 2 t_d.
double localization_length(const ChainParams& p, double omega);

struct SshAnalytics {
  double omega = 0.0;
  double r = 0.0;
  double xi = 0.0;
  double rho = 0.0;
  double s0 = 0.0;
  double s_smallest = 0.0;  // s0 e^{-N/xi}
  RVector u_profile;        // rho^{-1/2} e^{-(j-1)/xi}, j = 1..N
};

SshAnalytics ssh_closed_forms(const ChainParams& p, double omega);

// |Q_jl(w)|; sites 1-based.
double closed_form_q_magnitude(const ChainParams& p, double omega, int j, int l);

// Gain at output site j for input at site 1; valid for j > 1.
double closed_form_gain(const ChainParams& p, double omega_d, int j);

// e-folding half width of the gain resonance, (2 t_d - gamma_p)/sqrt(j).
double gain_bandwidth(const ChainParams& p, int j);

// I(j) = (1/2pi) Int dw [ (2 t_d)^2 / ((w-w0)^2 + (2 t_d - gamma_p)^2) ]^j,
// exact binomial form (exponent 2j - 2) and the large-j asymptotic form.
double integral_i_exact(const ChainParams& p, int j);
double integral_i_asymptotic(const ChainParams& p, int j);

struct ChainNoise {
  double n_amp_prefactor = 0.0;  // 4 kappa t_d (1 + e^{-1/xi}) / (rho s0^2) at w0
  double site_noise = 0.0;       // N_j = N0 e^{2j/xi} / sqrt(j-1)
  double total_noise = 0.0;      // N_T = N0 rho e^{2N/xi} / sqrt(N-1)
  double noise_scale = 0.0;      // N0
};

// Requires stability (gamma_p < 2 t_d) on top of the non-trivial phase; j >= 2.
ChainNoise closed_form_noise(const ChainParams& p, int j);

// n^add_j(w) = (4 t_d / kappa) / (1 - e^{-1/xi(w)}), j-independent for j >> 1.
double closed_form_added_noise(const ChainParams& p, double omega);

// Resonance special case, 8 t_d^2 / (kappa (2 t_d - |gamma_p - 2 t_d|)).
double added_noise_resonance(const ChainParams& p);

// Noise-to-signal at site j (input site 1, drive on resonance, |alpha|^2 given):
//   4 t_d^2 (2 t_d - gamma_p) / (kappa gamma_p |alpha|^2 sqrt(pi (j-1))).
double closed_form_nsr(const ChainParams& p, double amplitude_sq, int j);

// Total-output variant, N in place of j.
double closed_form_nsr_total(const ChainParams& p, double amplitude_sq);

// Exact spectra of the chain dynamical matrix. Open boundaries:
//   lambda_n = gamma_p - 2 t_d - i w0
//            + 2 sqrt((i t_c e^{i phi} - t_d)(i t_c e^{-i phi} - t_d)) cos(n pi / (N+1)),
// periodic boundaries:
//   lambda(k) = gamma_p - 2 t_d + 2 t_d cos k - i w0 + 2 i t_c cos(k + phi),
// with k = 2 pi m / N. Valid for any phi, t_c, t_d (no analytic-regime
// restriction). stable <=> max Re(lambda) < 0.
struct StabilitySpectrum {
  CVector eigenvalues;
  bool stable = false;

  double max_real_part() const { return eigenvalues.real().maxCoeff(); }
};

StabilitySpectrum stability_spectrum(const ChainParams& p, Boundary boundary);

// Sign-check recipe for the chain winding: find k± where hy(k) - w vanishes
// and test whether hx changes sign between them. Returns 1 or 0.
int winding_recipe(const ChainParams& p, double omega);

}  // namespace topamp::chain1d
