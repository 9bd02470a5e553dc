// topology.cpp — effective Hamiltonian, winding numbers, symmetry classes

#include "topamp/topology.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topamp/errors.hpp"
#include "topamp/numerics.hpp"

namespace topamp::topology {

namespace {

CMatrix shifted(const model::DynamicalMatrix& h, double omega) {
  return h.h + imag_unit * omega * CMatrix::Identity(h.h.rows(), h.h.cols());
}

// xi from least squares on log|u_j| vs j, restricted to entries that carry
// numerical weight.
double localization_fit(const CVector& u) {
  const double big = u.cwiseAbs().maxCoeff();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double a = std::abs(u(j));
    if (a < 1e-12 * big) continue;
    const double x = static_cast<double>(j + 1);
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0.0;
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return slope < 0.0 ? -1.0 / slope : 0.0;
}

}  // namespace

EffectiveHamiltonian effective_hamiltonian(const model::DynamicalMatrix& h, double omega) {
  const Eigen::Index n = h.h.rows();
  const CMatrix a = shifted(h, omega);
  EffectiveHamiltonian out;
  out.omega = omega;
  out.mat = CMatrix::Zero(2 * n, 2 * n);
  out.mat.topRightCorner(n, n) = a;
  out.mat.bottomLeftCorner(n, n) = a.adjoint();
  return out;
}

DualityReport verify_svd_duality(const model::DynamicalMatrix& h, double omega) {
  const Eigen::Index n = h.h.rows();
  const CMatrix a = shifted(h, omega);
  const numerics::SvdTriple dec = numerics::svd(a);
  const EffectiveHamiltonian eff = effective_hamiltonian(h, omega);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(eff.mat, Eigen::EigenvaluesOnly);
  RVector eigs = es.eigenvalues();  // ascending

  RVector expected(2 * n);  // {-s_n} ascending, then {+s_n} ascending
  for (Eigen::Index i = 0; i < n; ++i) {
    expected(i) = -dec.s(i);            // s descending -> -s ascending
    expected(n + i) = dec.s(n - 1 - i);
  }

  DualityReport report;
  report.max_eigenvalue_deviation = (eigs - expected).cwiseAbs().maxCoeff();

  for (Eigen::Index i = 0; i < n; ++i) {
    CVector plus(2 * n), minus(2 * n);
    plus.head(n) = dec.u.col(i);
    plus.tail(n) = dec.v.col(i);
    minus.head(n) = dec.u.col(i);
    minus.tail(n) = -dec.v.col(i);
    plus /= std::sqrt(2.0);
    minus /= std::sqrt(2.0);
    const double r_plus = (eff.mat * plus - dec.s(i) * plus).norm();
    const double r_minus = (eff.mat * minus + dec.s(i) * minus).norm();
    report.max_vector_residual =
        std::max({report.max_vector_residual, r_plus, r_minus});
  }
  return report;
}

std::vector<EdgeMode> edge_modes(const model::DynamicalMatrix& h, double omega, int n_edge) {
  if (n_edge < 1) throw std::invalid_argument("edge_modes: n_edge must be >= 1");
  const Eigen::Index n = h.h.rows();
  n_edge = std::min<int>(n_edge, static_cast<int>(n));
  const numerics::SvdTriple dec = numerics::svd(shifted(h, omega));

  std::vector<EdgeMode> modes;
  modes.reserve(static_cast<size_t>(n_edge));
  for (int m = 0; m < n_edge; ++m) {
    const Eigen::Index col = n - 1 - m;  // smallest singular values sit last
    EdgeMode mode;
    mode.singular_value = dec.s(col);
    mode.left_vector = dec.u.col(col);
    mode.right_vector = dec.v.col(col);
    mode.localization_fit = localization_fit(mode.left_vector);
    modes.push_back(std::move(mode));
  }
  return modes;
}

BlochModel chain_bloch_model(const model::ChainParams& params) {
  BlochModel model;
  model.omega0 = params.omega0;
  const double gp = params.gamma_p, td = params.t_d, tc = params.t_c, phi = params.phi;
  const double w0 = params.omega0;
  model.hx = [gp, td](double k) { return gp - 2.0 * td + 2.0 * td * std::cos(k); };
  model.hy = [tc, phi, w0](double k) { return 2.0 * tc * std::cos(k + phi) + w0; };
  return model;
}

int winding_number(const BlochModel& model, double omega, int samples) {
  if (samples < 16) throw std::invalid_argument("winding_number: too few samples");

  for (int attempt = 0; attempt < 3; ++attempt, samples *= 2) {
    double max_norm = 0.0, min_norm = std::numeric_limits<double>::infinity();
    double accumulated = 0.0, previous = 0.0;
    for (int i = 0; i <= samples; ++i) {
      const double k = 2.0 * M_PI * i / samples;
      const double hx = model.hx(k);
      const double hy = model.hy(k) - omega;
      const double nrm = std::hypot(hx, hy);
      max_norm = std::max(max_norm, nrm);
      min_norm = std::min(min_norm, nrm);
      const double theta = std::atan2(hy, hx);
      if (i > 0) {
        double d = theta - previous;
        while (d > M_PI) d -= 2.0 * M_PI;
        while (d < -M_PI) d += 2.0 * M_PI;
        accumulated += d;
      }
      previous = theta;
    }
    if (min_norm <= 1e-8 * max_norm)
      throw GaplessError("winding_number: Bloch vector reaches the origin (gap closed)",
                         min_norm);
    // Orientation: the amplifying chain (phi in (0, pi)) traces the loop
    // clockwise; count that as positive winding.
    const double turns = -accumulated / (2.0 * M_PI);
    const int nu = static_cast<int>(std::lround(turns));
    if (std::abs(turns - nu) < 0.01) return nu;
    // Undersampled loop: refine and retry.
  }
  throw std::runtime_error("winding_number: angle accumulation did not settle on an integer");
}

std::optional<std::pair<double, double>> critical_pump_rates(double t_c, double t_d, double phi,
                                                             double delta_omega) {
  if (!(t_c > 0.0)) throw std::domain_error("critical_pump_rates: t_c must be positive");
  const double x = delta_omega / (2.0 * t_c);
  if (std::abs(x) >= 1.0) return std::nullopt;
  const double common = 2.0 * t_d - delta_omega * (t_d / t_c) * std::cos(phi);
  const double swing = 2.0 * t_d * std::sin(phi) * std::sqrt(1.0 - x * x);
  return std::make_pair(common - swing, common + swing);
}

const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::AIII: return "AIII";
    case SymmetryClass::BDI: return "BDI";
    case SymmetryClass::CI: return "CI";
    case SymmetryClass::DIII: return "DIII";
  }
  return "?";
}

std::vector<SymmetryClass> symmetry_class(const BlochModel& model, double omega, int samples,
                                          double rel_tol) {
  // Sample h on a symmetric grid and test each class criterion pointwise.
  double scale = 0.0;
  std::vector<double> hx(samples), hy(samples);
  for (int i = 0; i < samples; ++i) {
    const double k = 2.0 * M_PI * i / samples;
    hx[i] = model.hx(k);
    hy[i] = model.hy(k) - omega;
    scale = std::max(scale, std::hypot(hx[i], hy[i]));
  }
  if (scale == 0.0) throw std::domain_error("symmetry_class: h vanishes identically");
  const double tol = rel_tol * scale;
  auto mirror = [samples](int i) { return i == 0 ? 0 : samples - i; };

  bool ci = true, diii = true, norms_match = true;
  for (int i = 0; i < samples; ++i) {
    const int m = mirror(i);
    if (std::abs(hx[i] - hx[m]) > tol || std::abs(hy[i] - hy[m]) > tol) ci = false;
    if (std::abs(hx[i] + hx[m]) > tol || std::abs(hy[i] + hy[m]) > tol) diii = false;
    if (std::abs(std::hypot(hx[i], hy[i]) - std::hypot(hx[m], hy[m])) > tol)
      norms_match = false;
    if (!ci && !diii && !norms_match) break;
  }

  bool bdi = norms_match;
  if (bdi) {
    // (hx(k), -(hy(k)-w)) and (hx(-k), hy(-k)-w) must be related by one
    // k-independent rotation: the complex ratio q/p is a constant unit number.
    Complex rotation{0.0, 0.0};
    bool have_reference = false;
    for (int i = 0; i < samples; ++i) {
      const int m = mirror(i);
      const Complex p{hx[i], -hy[i]};
      const Complex q{hx[m], hy[m]};
      if (std::abs(p) <= tol) continue;  // angle undefined at tiny vectors
      const Complex ratio = q / p;
      if (!have_reference) {
        rotation = ratio;
        have_reference = true;
      } else if (std::abs(ratio - rotation) > rel_tol) {
        bdi = false;
        break;
      }
    }
    if (!have_reference) bdi = false;
  }

  std::vector<SymmetryClass> matches;
  if (bdi) matches.push_back(SymmetryClass::BDI);
  if (ci) matches.push_back(SymmetryClass::CI);
  if (diii) matches.push_back(SymmetryClass::DIII);
  if (matches.empty()) matches.push_back(SymmetryClass::AIII);
  return matches;
}

PhaseMap singular_gap_map(const model::ChainParams& family, const RVector& omegas,
                          const RVector& gamma_ps, int n_sites) {
  if (omegas.size() == 0 || gamma_ps.size() == 0)
    throw std::invalid_argument("singular_gap_map: empty grid");
  if (n_sites < 2) throw std::invalid_argument("singular_gap_map: need at least 2 sites");

  PhaseMap map;
  map.omegas = omegas;
  map.gamma_ps = gamma_ps;
  map.gap.setZero(omegas.size(), gamma_ps.size());
  map.winding.setZero(omegas.size(), gamma_ps.size());
  map.gapless.setConstant(omegas.size(), gamma_ps.size(), false);

  for (Eigen::Index ig = 0; ig < gamma_ps.size(); ++ig) {
    model::ChainParams p = family;
    p.gamma_p = gamma_ps(ig);
    p.n_sites = n_sites;
    const model::DynamicalMatrix h =
        model::build_dynamical_matrix(model::build_chain_spec(p, model::Boundary::open));
    const BlochModel bloch = chain_bloch_model(p);
    for (Eigen::Index iw = 0; iw < omegas.size(); ++iw) {
      const RVector s = numerics::singular_values(shifted(h, omegas(iw)));
      map.gap(iw, ig) = s(n_sites - 2) - s(n_sites - 1);
      try {
        map.winding(iw, ig) = winding_number(bloch, omegas(iw));
      } catch (const GaplessError&) {
        map.gapless(iw, ig) = true;
      }
    }
  }
  return map;
}

}  // namespace topamp::topology
