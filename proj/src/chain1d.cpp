// chain1d.cpp — closed forms and exact spectra of the reference chain

#include "topamp/chain1d.hpp"

#include <cmath>
#include <stdexcept>

namespace topamp::chain1d {

namespace {

void require_analytic(const ChainParams& p, const char* who) {
  if (!analytic_regime(p))
    throw std::domain_error(std::string(who) +
                            ": closed forms require phi = pi/2 and t_c = t_d");
}

double require_topological(const ChainParams& p, double omega, const char* who) {
  const double r = r_of_omega(p, omega);
  if (!(r < 2.0 * p.t_d))
    throw std::domain_error(std::string(who) + ": trivial phase (r(w) >= 2 t_d)");
  return r;
}

void require_stable_regime(const ChainParams& p, const char* who) {
  if (!(p.gamma_p < 2.0 * p.t_d))
    throw std::domain_error(std::string(who) + ": requires gamma_p < 2 t_d (stability)");
}

}  // namespace

bool analytic_regime(const ChainParams& p) {
  const double scale = std::max({p.t_c, p.t_d, 1e-300});
  return std::abs(p.t_c - p.t_d) <= 1e-9 * scale &&
         std::abs(p.phi - M_PI / 2.0) <= 1e-9;
}

double r_of_omega(const ChainParams& p, double omega) {
  return std::hypot(omega - p.omega0, p.gamma_p - 2.0 * p.t_d);
}

double localization_length(const ChainParams& p, double omega) {
  const double r = require_topological(p, omega, "localization_length");
  return 1.0 / std::log(2.0 * p.t_d / r);
}

SshAnalytics ssh_closed_forms(const ChainParams& p, double omega) {
  require_analytic(p, "ssh_closed_forms");
  SshAnalytics a;
  a.omega = omega;
  a.r = require_topological(p, omega, "ssh_closed_forms");
  a.xi = 1.0 / std::log(2.0 * p.t_d / a.r);
  a.rho = 1.0 / (1.0 - std::exp(-2.0 / a.xi));
  a.s0 = 2.0 * p.t_d * (1.0 - (a.r / (2.0 * p.t_d)) * (a.r / (2.0 * p.t_d)));
  a.s_smallest = a.s0 * std::exp(-p.n_sites / a.xi);
  a.u_profile.resize(p.n_sites);
  for (int j = 1; j <= p.n_sites; ++j)
    a.u_profile(j - 1) = std::exp(-(j - 1) / a.xi) / std::sqrt(a.rho);
  return a;
}

double closed_form_q_magnitude(const ChainParams& p, double omega, int j, int l) {
  require_analytic(p, "closed_form_q_magnitude");
  if (j < 1 || j > p.n_sites || l < 1 || l > p.n_sites)
    throw std::out_of_range("closed_form_q_magnitude: site out of range");
  const double r = require_topological(p, omega, "closed_form_q_magnitude");
  const double xi = 1.0 / std::log(2.0 * p.t_d / r);
  const double rho = 1.0 / (1.0 - std::exp(-2.0 / xi));
  const double s0 = 2.0 * p.t_d * (1.0 - (r / (2.0 * p.t_d)) * (r / (2.0 * p.t_d)));
  return std::exp((p.n_sites - (p.n_sites - j) - (l - 1)) / xi) / (rho * s0);
}

double closed_form_gain(const ChainParams& p, double omega_d, int j) {
  require_analytic(p, "closed_form_gain");
  if (j <= 1)
    throw std::out_of_range("closed_form_gain: valid for output sites j > 1 only");
  if (j > p.n_sites) throw std::out_of_range("closed_form_gain: site out of range");
  const double r = require_topological(p, omega_d, "closed_form_gain");
  const double xi = 1.0 / std::log(2.0 * p.t_d / r);
  const double rho = 1.0 / (1.0 - std::exp(-2.0 / xi));
  const double s0 = 2.0 * p.t_d * (1.0 - (r / (2.0 * p.t_d)) * (r / (2.0 * p.t_d)));
  const double kappa = p.kappa();
  return kappa * kappa / (rho * rho * s0 * s0) * std::exp(2.0 * j / xi);
}

double gain_bandwidth(const ChainParams& p, int j) {
  require_analytic(p, "gain_bandwidth");
  require_stable_regime(p, "gain_bandwidth");
  if (j < 1) throw std::out_of_range("gain_bandwidth: site out of range");
  return (2.0 * p.t_d - p.gamma_p) / std::sqrt(static_cast<double>(j));
}

double integral_i_exact(const ChainParams& p, int j) {
  require_stable_regime(p, "integral_i_exact");
  if (j < 1) throw std::out_of_range("integral_i_exact: j must be >= 1");
  const double width = 2.0 * p.t_d - p.gamma_p;
  // Binomial central coefficient via lgamma; exponent reads 2j - 2.
  const double log_i = std::log(width / 2.0) - (2.0 * j - 2.0) * std::log(2.0) +
                       std::lgamma(2.0 * j - 1.0) - 2.0 * std::lgamma(static_cast<double>(j)) +
                       2.0 * j * std::log(2.0 * p.t_d / width);
  return std::exp(log_i);
}

double integral_i_asymptotic(const ChainParams& p, int j) {
  require_stable_regime(p, "integral_i_asymptotic");
  if (j < 2) throw std::out_of_range("integral_i_asymptotic: j must be >= 2");
  const double width = 2.0 * p.t_d - p.gamma_p;
  return width / (2.0 * std::sqrt(M_PI * (j - 1.0))) *
         std::pow(2.0 * p.t_d / width, 2.0 * j);
}

ChainNoise closed_form_noise(const ChainParams& p, int j) {
  require_analytic(p, "closed_form_noise");
  require_stable_regime(p, "closed_form_noise");
  if (j < 2 || j > p.n_sites)
    throw std::out_of_range("closed_form_noise: need 2 <= j <= N");
  const double r = require_topological(p, p.omega0, "closed_form_noise");
  const double xi = 1.0 / std::log(2.0 * p.t_d / r);
  const double rho = 1.0 / (1.0 - std::exp(-2.0 / xi));
  const double s0 = 2.0 * p.t_d * (1.0 - (r / (2.0 * p.t_d)) * (r / (2.0 * p.t_d)));
  const double kappa = p.kappa();
  const double width = 2.0 * p.t_d - p.gamma_p;

  ChainNoise noise;
  noise.n_amp_prefactor =
      4.0 * kappa * p.t_d * (1.0 + std::exp(-1.0 / xi)) / (rho * s0 * s0);
  noise.noise_scale = 2.0 * kappa * p.t_d * width * (1.0 + std::exp(-1.0 / xi)) /
                      (std::sqrt(M_PI) * rho * s0 * s0);
  noise.site_noise = noise.noise_scale * std::exp(2.0 * j / xi) / std::sqrt(j - 1.0);
  noise.total_noise = noise.noise_scale * rho * std::exp(2.0 * p.n_sites / xi) /
                      std::sqrt(p.n_sites - 1.0);
  return noise;
}

double closed_form_added_noise(const ChainParams& p, double omega) {
  require_analytic(p, "closed_form_added_noise");
  const double r = require_topological(p, omega, "closed_form_added_noise");
  const double xi = 1.0 / std::log(2.0 * p.t_d / r);
  return 4.0 * p.t_d / (p.kappa() * (1.0 - std::exp(-1.0 / xi)));
}

double added_noise_resonance(const ChainParams& p) {
  require_analytic(p, "added_noise_resonance");
  require_topological(p, p.omega0, "added_noise_resonance");
  return 8.0 * p.t_d * p.t_d /
         (p.kappa() * (2.0 * p.t_d - std::abs(p.gamma_p - 2.0 * p.t_d)));
}

double closed_form_nsr(const ChainParams& p, double amplitude_sq, int j) {
  require_analytic(p, "closed_form_nsr");
  require_stable_regime(p, "closed_form_nsr");
  if (!(amplitude_sq > 0.0))
    throw std::domain_error("closed_form_nsr: amplitude_sq must be positive");
  if (!(p.gamma_p > 0.0))
    throw std::domain_error("closed_form_nsr: requires gamma_p > 0 (non-trivial phase)");
  if (j < 2) throw std::out_of_range("closed_form_nsr: need j >= 2");
  return 4.0 * p.t_d * p.t_d * (2.0 * p.t_d - p.gamma_p) /
         (p.kappa() * p.gamma_p * amplitude_sq * std::sqrt(M_PI * (j - 1.0)));
}

double closed_form_nsr_total(const ChainParams& p, double amplitude_sq) {
  return closed_form_nsr(p, amplitude_sq, p.n_sites);
}

StabilitySpectrum stability_spectrum(const ChainParams& p, Boundary boundary) {
  StabilitySpectrum out;
  out.eigenvalues.resize(p.n_sites);
  const Complex base = p.gamma_p - 2.0 * p.t_d - imag_unit * p.omega0;
  // Same quadrant snapping as the chain builder, so the degenerate
  // phi = pi/2, t_c = t_d spectrum comes out exact.
  double cos_phi = std::cos(p.phi);
  if (std::abs(cos_phi) < 1e-12) cos_phi = 0.0;
  if (boundary == Boundary::open) {
    // product of the two hopping amplitudes,
    // (i t_c e^{i phi} - t_d)(i t_c e^{-i phi} - t_d) expanded analytically
    const Complex hop_product{p.t_d * p.t_d - p.t_c * p.t_c, -2.0 * p.t_c * p.t_d * cos_phi};
    const Complex root = std::sqrt(hop_product);  // principal branch
    for (int n = 1; n <= p.n_sites; ++n)
      out.eigenvalues(n - 1) = base + 2.0 * root * std::cos(n * M_PI / (p.n_sites + 1.0));
  } else {
    // Bloch symbol of the chain as built here (k -> -k relabels the set and
    // conjugates the t_c term relative to the common printed form; both agree
    // for phi = pi/2 or even N).
    for (int m = 0; m < p.n_sites; ++m) {
      const double k = 2.0 * M_PI * m / p.n_sites;
      out.eigenvalues(m) = base + 2.0 * p.t_d * std::cos(k) -
                           2.0 * imag_unit * p.t_c * std::cos(k - p.phi);
    }
  }
  out.stable = out.max_real_part() < 0.0;
  return out;
}

int winding_recipe(const ChainParams& p, double omega) {
  const double x = (omega - p.omega0) / (2.0 * p.t_c);
  if (std::abs(x) >= 1.0) return 0;
  const double k_plus = -p.phi + std::acos(x);
  const double k_minus = -p.phi - std::acos(x);
  auto hx = [&](double k) { return p.gamma_p - 2.0 * p.t_d + 2.0 * p.t_d * std::cos(k); };
  const double a = hx(k_minus), b = hx(k_plus);
  return (std::min(a, b) < 0.0 && std::max(a, b) > 0.0) ? 1 : 0;
}

}  // namespace topamp::chain1d
