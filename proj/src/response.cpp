// response.cpp — gain, amplifier noise, and integrated output noise

#include "topamp/response.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "topamp/errors.hpp"
#include "topamp/numerics.hpp"

namespace topamp::response {

namespace {

void check_site(const model::LatticeSpec& spec, int site, const char* who) {
  if (site < 1 || site > spec.n_sites)
    throw std::out_of_range(std::string(who) + ": site index out of range");
}

CMatrix shifted(const model::DynamicalMatrix& h, double omega) {
  return h.h + imag_unit * omega * CMatrix::Identity(h.h.rows(), h.h.cols());
}

// Column l of Q(w): one linear solve instead of a full inversion.
CVector response_column(const model::DynamicalMatrix& h, double omega, int l /*1-based*/) {
  CMatrix rhs = CMatrix::Zero(h.h.rows(), 1);
  rhs(l - 1, 0) = 1.0;
  return numerics::solve_linear(shifted(h, omega), rhs).col(0);
}

// Row j of Q(w), via the transposed system.
CVector response_row(const model::DynamicalMatrix& h, double omega, int j /*1-based*/) {
  CMatrix rhs = CMatrix::Zero(h.h.rows(), 1);
  rhs(j - 1, 0) = 1.0;
  return numerics::solve_linear(shifted(h, omega).transpose(), rhs).col(0);
}

double amp_noise_from_row(const CVector& q_row, const model::LatticeSpec& spec, int site) {
  const Complex value = q_row.adjoint() * spec.pump.transpose() * q_row;
  return spec.kappa(site - 1) * value.real();
}

// Frequency center/scale for the noise integral, estimated from the spectrum
// of H: mode frequencies are -Im(lambda), linewidths are |Re(lambda)|.
struct IntegralWindow {
  double center, scale, max_real_part;
};

IntegralWindow integral_window(const model::DynamicalMatrix& h) {
  const numerics::EigenSystem es = numerics::eig(h.h);
  const RVector freqs = -es.values.imag();
  const double spread = 0.5 * (freqs.maxCoeff() - freqs.minCoeff());
  const double width = es.values.real().cwiseAbs().maxCoeff();
  IntegralWindow w;
  w.center = 0.5 * (freqs.maxCoeff() + freqs.minCoeff());
  w.scale = std::max({width, spread, 1e-3});
  w.max_real_part = es.max_real_part();
  return w;
}

}  // namespace

ResponseMatrix response_matrix(const model::DynamicalMatrix& h, double omega) {
  const Eigen::Index n = h.h.rows();
  try {
    return ResponseMatrix{omega, numerics::solve_linear(shifted(h, omega),
                                                        CMatrix::Identity(n, n))};
  } catch (const NearSingularError& e) {
    throw NearSingularError(
        "response_matrix: H + i w 1 is singular (exceptional or unstable point)",
        e.condition_estimate());
  }
}

Complex scattering_element(const ResponseMatrix& q, const model::LatticeSpec& spec, int j,
                           int l) {
  check_site(spec, j, "scattering_element");
  check_site(spec, l, "scattering_element");
  const double weight = std::sqrt(spec.kappa(j - 1) * spec.kappa(l - 1));
  const Complex delta = (j == l) ? 1.0 : 0.0;
  return delta + weight * q.q(j - 1, l - 1);
}

double gain(const model::LatticeSpec& spec, double omega, int input_site, int output_site) {
  check_site(spec, input_site, "gain");
  check_site(spec, output_site, "gain");
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  const CVector q_col = response_column(h, omega, input_site);
  const double weight = std::sqrt(spec.kappa(output_site - 1) * spec.kappa(input_site - 1));
  const Complex delta = (output_site == input_site) ? 1.0 : 0.0;
  return std::norm(delta + weight * q_col(output_site - 1));
}

double total_gain(const model::LatticeSpec& spec, double omega, int input_site) {
  check_site(spec, input_site, "total_gain");
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  const CVector q_col = response_column(h, omega, input_site);
  double sum = 0.0;
  for (int j = 1; j <= spec.n_sites; ++j) {
    const double weight = std::sqrt(spec.kappa(j - 1) * spec.kappa(input_site - 1));
    const Complex delta = (j == input_site) ? 1.0 : 0.0;
    sum += std::norm(delta + weight * q_col(j - 1));
  }
  return sum;
}

double amp_noise_density(const model::LatticeSpec& spec, double omega, int site) {
  check_site(spec, site, "amp_noise_density");
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  return amp_noise_from_row(response_row(h, omega, site), spec, site);
}

double added_noise(const model::LatticeSpec& spec, double omega, int site, int input_site) {
  const double g = gain(spec, omega, input_site, site);
  if (!(g > 1e-300))
    throw std::domain_error("added_noise: gain below numerical floor, ratio undefined");
  return amp_noise_density(spec, omega, site) / g;
}

double require_stable(const model::DynamicalMatrix& h) {
  const double max_re = numerics::eig(h.h).max_real_part();
  if (!(max_re < 0.0))
    throw UnstableError("lattice is not stable: max Re(lambda) = " + std::to_string(max_re),
                        max_re);
  return max_re;
}

double output_noise_total(const model::LatticeSpec& spec, int site, double rel_tol) {
  check_site(spec, site, "output_noise_total");
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  require_stable(h);
  if (spec.pump.norm() == 0.0) return 0.0;

  const IntegralWindow w = integral_window(h);
  auto integrand = [&](double omega) {
    return amp_noise_from_row(response_row(h, omega, site), spec, site) / (2.0 * M_PI);
  };
  return numerics::quad_adaptive(integrand, w.center, w.scale, rel_tol);
}

double noise_to_signal(const model::LatticeSpec& spec, double omega_d, double amplitude_sq,
                       int site, int input_site, double rel_tol) {
  if (!(amplitude_sq > 0.0))
    throw std::domain_error("noise_to_signal: signal amplitude must be positive");
  const double noise = output_noise_total(spec, site, rel_tol);
  const double g = gain(spec, omega_d, input_site, site);
  if (!(g > 1e-300)) throw std::domain_error("noise_to_signal: vanishing gain");
  return noise / (g * amplitude_sq);
}

GainSpectrum gain_spectrum(const model::LatticeSpec& spec, const RVector& omegas,
                           int input_site) {
  check_site(spec, input_site, "gain_spectrum");
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  GainSpectrum out;
  out.omegas = omegas;
  out.input_site = input_site;
  out.gain.resize(spec.n_sites, omegas.size());
  for (Eigen::Index k = 0; k < omegas.size(); ++k) {
    const CVector q_col = response_column(h, omegas(k), input_site);
    for (int j = 1; j <= spec.n_sites; ++j) {
      const double weight = std::sqrt(spec.kappa(j - 1) * spec.kappa(input_site - 1));
      const Complex delta = (j == input_site) ? 1.0 : 0.0;
      out.gain(j - 1, k) = std::norm(delta + weight * q_col(j - 1));
    }
  }
  return out;
}

NoiseReport noise_report(const model::LatticeSpec& spec, const RVector& omegas, double omega_d,
                         double amplitude_sq, int input_site, double rel_tol) {
  check_site(spec, input_site, "noise_report");
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  require_stable(h);

  NoiseReport out;
  out.omegas = omegas;
  out.input_site = input_site;
  out.n_amp.resize(spec.n_sites, omegas.size());
  out.n_add.resize(spec.n_sites, omegas.size());
  out.n_out_total.resize(spec.n_sites);
  out.nsr.resize(spec.n_sites);

  for (Eigen::Index k = 0; k < omegas.size(); ++k) {
    const ResponseMatrix q = response_matrix(h, omegas(k));
    for (int j = 1; j <= spec.n_sites; ++j) {
      const CVector q_row = q.q.row(j - 1).transpose();
      const double n_amp = amp_noise_from_row(q_row, spec, j);
      const double g = std::norm(scattering_element(q, spec, j, input_site));
      out.n_amp(j - 1, k) = n_amp;
      out.n_add(j - 1, k) = g > 1e-300 ? n_amp / g : std::numeric_limits<double>::quiet_NaN();
    }
  }
  for (int j = 1; j <= spec.n_sites; ++j) {
    out.n_out_total(j - 1) = output_noise_total(spec, j, rel_tol);
    const double g = gain(spec, omega_d, input_site, j);
    out.nsr(j - 1) = g > 1e-300 ? out.n_out_total(j - 1) / (g * amplitude_sq)
                                : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

RVector default_omega_grid(const model::ChainParams& params) {
  const double span = 6.0 * std::max(std::abs(2.0 * params.t_d - params.gamma_p), 0.1 * params.t_d);
  return RVector::LinSpaced(401, params.omega0 - 0.5 * span, params.omega0 + 0.5 * span);
}

}  // namespace topamp::response
