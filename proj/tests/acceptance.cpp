// acceptance.cpp — end-to-end acceptance suite
//
// Runs every criterion at its pinned tolerance and prints one PASS/FAIL line
// per criterion. Exit status is the number of failed criteria.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "topamp/chain1d.hpp"
#include "topamp/experiment.hpp"
#include "topamp/disorder.hpp"
#include "topamp/errors.hpp"
#include "topamp/model.hpp"
#include "topamp/numerics.hpp"
#include "topamp/response.hpp"
#include "topamp/steadystate.hpp"
#include "topamp/topology.hpp"

using namespace topamp;

namespace {

int failures = 0;

void report(int criterion, const char* title, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
              title, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

model::ChainParams chain(double gamma_p, int n_sites) {
  model::ChainParams p;
  p.t_c = 1.0;
  p.t_d = 1.0;
  p.phi = M_PI / 2.0;
  p.gamma_p = gamma_p;
  p.omega0 = 0.0;
  p.n_sites = n_sites;
  return p;
}

model::LatticeSpec chain_spec(double gamma_p, int n_sites) {
  return model::build_chain_spec(chain(gamma_p, n_sites), model::Boundary::open);
}

CMatrix random_complex(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex{dist(rng), dist(rng)};
  return a;
}

model::DynamicalMatrix wrap_matrix(const CMatrix& h) {
  model::LatticeSpec spec;
  const int n = static_cast<int>(h.rows());
  spec.n_sites = n;
  spec.omega = RVector::Zero(n);
  spec.kappa = RVector::Zero(n);
  spec.coupling_g = CMatrix::Zero(n, n);
  spec.pump = CMatrix::Zero(n, n);
  spec.loss = CMatrix::Zero(n, n);
  auto dyn = model::build_dynamical_matrix(spec);
  dyn.h = h;
  return dyn;
}

model::LatticeSpec random_stable_spec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  model::LatticeSpec spec;
  spec.n_sites = n;
  spec.omega.resize(n);
  spec.kappa.resize(n);
  for (int i = 0; i < n; ++i) {
    spec.omega(i) = 2.0 * uni(rng) - 1.0;
    spec.kappa(i) = 0.5 + 2.0 * uni(rng);
  }
  CMatrix g = random_complex(rng, n);
  spec.coupling_g = 0.5 * (g + g.adjoint());
  spec.coupling_g.diagonal().setZero();
  const CMatrix rp = random_complex(rng, n);
  const CMatrix rl = random_complex(rng, n);
  spec.pump = 0.4 / n * (rp * rp.adjoint());
  spec.loss = 0.4 / n * (rl * rl.adjoint());
  const auto h = model::build_dynamical_matrix(spec);
  const double max_re = numerics::eig(h.h).max_real_part();
  if (max_re > -0.2) spec.kappa.array() += 2.0 * (max_re + 0.3);
  return spec;
}

// --- criterion 1: eigenvalues of Heff(w) are exactly the +-singular values

void criterion_1() {
  const double t0 = now_seconds();
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const auto dyn = wrap_matrix(random_complex(rng, n));
    const double w = 2.0 * std::uniform_real_distribution<double>(-1, 1)(rng);
    const auto rep = topology::verify_svd_duality(dyn, w);
    worst = std::max({worst, rep.max_eigenvalue_deviation, rep.max_vector_residual});
  }
  for (double gp : {0.5, 1.0, 1.5, 3.0})
    for (auto b : {model::Boundary::open, model::Boundary::periodic}) {
      const auto dyn = model::build_dynamical_matrix(
          model::build_chain_spec(chain(gp, 12), b));
      for (double w : {0.0, 0.7}) {
        const auto rep = topology::verify_svd_duality(dyn, w);
        worst = std::max({worst, rep.max_eigenvalue_deviation, rep.max_vector_residual});
      }
    }
  report(1, "SVD / effective-Hamiltonian duality", worst <= 1e-9,
         "max deviation " + std::to_string(worst), now_seconds() - t0);
}

// --- criterion 2: singular-gap region vs winding prediction on the 60x60 map

void criterion_2() {
  const double t0 = now_seconds();
  const int nw = 60, ng = 60, n_sites = 100;
  RVector omegas(nw), gamma_ps(ng);
  for (int i = 0; i < nw; ++i) omegas(i) = -3.0 + (i + 0.5) * 6.0 / nw;
  for (int i = 0; i < ng; ++i) gamma_ps(i) = 0.0 + (i + 0.5) * 4.0 / ng;
  const auto map = topology::singular_gap_map(chain(1.0, n_sites), omegas, gamma_ps, n_sites);

  // boundary polyline from the critical pump rates
  std::vector<std::pair<double, double>> boundary;
  for (int i = 0; i <= 4000; ++i) {
    const double w = -2.0 + 4.0 * i / 4000.0;
    const auto bounds = topology::critical_pump_rates(1.0, 1.0, M_PI / 2.0, w);
    if (!bounds) continue;
    boundary.push_back({w, bounds->first});
    boundary.push_back({w, bounds->second});
  }

  int considered = 0, agreed = 0;
  for (int iw = 0; iw < nw; ++iw)
    for (int ig = 0; ig < ng; ++ig) {
      double dist = std::numeric_limits<double>::infinity();
      for (const auto& b : boundary)
        dist = std::min(dist, std::hypot(omegas(iw) - b.first, gamma_ps(ig) - b.second));
      if (dist <= 0.1) continue;
      const bool gap_open = map.gap(iw, ig) > 0.05;
      const bool predicted = !map.gapless(iw, ig) && map.winding(iw, ig) == 1;
      ++considered;
      if (gap_open == predicted) ++agreed;
    }
  const double fraction = considered ? double(agreed) / considered : 0.0;
  char detail[128];
  std::snprintf(detail, sizeof detail, "%d/%d points agree (%.2f%%)", agreed, considered,
                100.0 * fraction);
  report(2, "singular-value-gap map vs winding prediction", fraction >= 0.95, detail,
         now_seconds() - t0);
}

// --- criterion 3: gain vs closed form, on resonance and across frequency

void criterion_3() {
  const double t0 = now_seconds();
  double worst_resonant = 0.0, worst_scan = 0.0;
  for (double gp : {0.5, 1.0, 1.5})
    for (int n = 2; n <= 30; ++n) {
      const auto spec = chain_spec(gp, n);
      const double dense = response::gain(spec, 0.0, 1, n);
      const double closed = chain1d::closed_form_gain(chain(gp, n), 0.0, n);
      worst_resonant =
          std::max(worst_resonant, std::abs(10.0 * std::log10(dense / closed)));
    }
  for (double gp : {0.5, 1.0, 1.5, 2.0}) {
    const auto p = chain(gp, 10);
    const auto spec = chain_spec(gp, 10);
    const double window = std::sqrt(gp * (4.0 - gp));
    for (int i = 0; i <= 80; ++i) {
      const double w = -0.98 * window + 1.96 * window * i / 80.0;
      if (gp == 2.0 && std::abs(w) < 0.05) continue;  // divergence at r -> 0
      const double dense = response::gain(spec, w, 1, 10);
      const double closed = chain1d::closed_form_gain(p, w, 10);
      worst_scan = std::max(worst_scan, std::abs(10.0 * std::log10(dense / closed)));
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "max |delta| %.3g dB on resonance (tol 0.3), %.3g dB across frequency (tol 1)",
                worst_resonant, worst_scan);
  report(3, "gain vs closed form", worst_resonant <= 0.3 && worst_scan <= 1.0, detail,
         now_seconds() - t0);
}

// --- criterion 4: per-site output noise vs closed form

void criterion_4() {
  const double t0 = now_seconds();
  double worst = 0.0;
  std::string worst_at = "-";
  int checked = 0, within = 0;
  for (double gp : {0.5, 1.0, 1.5}) {
    const auto p = chain(gp, 30);
    const auto spec = chain_spec(gp, 30);
    for (int j = 5; j <= 30; ++j) {
      const double dense = response::output_noise_total(spec, j, 1e-6);
      const double closed = chain1d::closed_form_noise(p, j).site_noise;
      const double dev = std::abs(dense / closed - 1.0);
      ++checked;
      if (dev <= 0.10) ++within;
      if (dev > worst) {
        worst = dev;
        worst_at = "gamma_p=" + std::to_string(gp) + " j=" + std::to_string(j);
      }
    }
  }
  char detail[192];
  std::snprintf(detail, sizeof detail, "%d/%d sites within 10%%, worst %.1f%% at %s", within,
                checked, 100.0 * worst, worst_at.c_str());
  report(4, "per-site output noise vs closed form", worst <= 0.10, detail,
         now_seconds() - t0);
}

// --- criterion 5: added-noise limits and frequency minimum

void criterion_5() {
  const double t0 = now_seconds();
  const int n = 30, j = 25;

  const double strong = response::added_noise(chain_spec(1.9, n), 0.0, j, 1);
  const double weak = response::added_noise(chain_spec(0.2, n), 0.0, j, 1);
  const double strong_closed = chain1d::added_noise_resonance(chain(1.9, n));
  const double weak_closed = chain1d::added_noise_resonance(chain(0.2, n));

  const auto spec = chain_spec(1.0, n);
  double min_value = std::numeric_limits<double>::infinity(), min_at = -1.0;
  for (int i = 0; i <= 120; ++i) {
    const double w = -1.5 + 3.0 * i / 120.0;
    const double value = response::added_noise(spec, w, j, 1);
    if (value < min_value) {
      min_value = value;
      min_at = w;
    }
  }

  const bool pass = strong <= 1.01 && weak > 2.0 &&
                    std::abs(strong / strong_closed - 1.0) <= 0.05 &&
                    std::abs(weak / weak_closed - 1.0) <= 0.05 && std::abs(min_at) <= 0.0126;
  char detail[192];
  std::snprintf(detail, sizeof detail,
                "n_add(1.9) = %.4f (<= 1.01), n_add(0.2) = %.2f (> 2), minimum at w = %.4f",
                strong, weak, min_at);
  report(5, "added noise approaches its quantum floor", pass, detail, now_seconds() - t0);
}

// --- criterion 6: noise-to-signal power law and absolute values

void criterion_6() {
  const double t0 = now_seconds();
  const auto p = chain(1.0, 30);
  const auto spec = chain_spec(1.0, 30);
  std::vector<double> log_jm1, log_nsr;
  double worst_abs = 0.0;
  for (int j = 5; j <= 30; ++j) {
    const double nsr = response::noise_to_signal(spec, 0.0, 1.0, j, 1, 1e-6);
    const double closed = chain1d::closed_form_nsr(p, 1.0, j);
    worst_abs = std::max(worst_abs, std::abs(nsr / closed - 1.0));
    log_jm1.push_back(std::log(j - 1.0));
    log_nsr.push_back(std::log(nsr));
  }
  const auto fit = disorder::fit_loglinear(log_jm1, log_nsr);
  const bool pass = std::abs(fit.slope + 0.5) <= 0.05 && worst_abs <= 0.10;
  char detail[160];
  std::snprintf(detail, sizeof detail, "fitted power %.4f (tol -0.5 +- 0.05), worst |dev| %.1f%%",
                fit.slope, 100.0 * worst_abs);
  report(6, "noise-to-signal scaling", pass, detail, now_seconds() - t0);
}

// --- criterion 7: stability predicate and exact spectra

void criterion_7() {
  const double t0 = now_seconds();
  bool predicate_ok = true;
  double worst = 0.0;
  bool periodic_unstable = true;
  for (double gp : {0.5, 1.0, 1.5, 1.99, 2.01, 2.5}) {
    const auto p = chain(gp, 12);
    const auto open = chain1d::stability_spectrum(p, model::Boundary::open);
    predicate_ok = predicate_ok && (open.stable == (gp < 2.0));

    for (auto b : {model::Boundary::open, model::Boundary::periodic}) {
      const auto closed = chain1d::stability_spectrum(p, b);
      const auto es = numerics::eig(
          model::build_dynamical_matrix(model::build_chain_spec(p, b)).h);
      worst = std::max(worst, numerics::spectrum_deviation(closed.eigenvalues, es.values));
    }
    periodic_unstable =
        periodic_unstable &&
        !chain1d::stability_spectrum(p, model::Boundary::periodic).stable;
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "predicate == (gamma_p < 2 t_d): %s, spectra match to %.2e, PBC unstable: %s",
                predicate_ok ? "yes" : "no", worst, periodic_unstable ? "yes" : "no");
  report(7, "stability thresholds and exact spectra",
         predicate_ok && worst <= 1e-10 && periodic_unstable, detail, now_seconds() - t0);
}

// --- criterion 8: steady-state vs input-output consistency

void criterion_8() {
  const double t0 = now_seconds();
  const double chain_dev = steadystate::consistency_with_io(chain_spec(1.0, 10), 1e-7);

  std::mt19937_64 rng(88);
  double worst_pair = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);  // 2..8
    const auto spec = random_stable_spec(rng, n);
    const auto h = model::build_dynamical_matrix(spec);
    const auto a = steadystate::steady_correlation_eig(h, spec.pump);
    const auto b = steadystate::steady_correlation_integral(h, spec.pump, 1e-7);
    worst_pair =
        std::max(worst_pair, (a.m - b.m).norm() / std::max(a.m.norm(), 1e-300));
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "kappa M_jj vs N_out deviation %.2e (tol 1e-4), eig vs integral %.2e (tol 1e-6)",
                chain_dev, worst_pair);
  report(8, "steady-state consistency", chain_dev <= 1e-4 && worst_pair <= 1e-6, detail,
         now_seconds() - t0);
}

// --- criterion 9: disorder-averaged gain exponents

void criterion_9() {
  const double t0 = now_seconds();
  disorder::DisorderConfig cfg;
  cfg.base = chain(0.1, 40);
  cfg.w_list = {0.0, 0.25, 0.5, 1.0, 2.0};
  cfg.n_list = {40, 60, 80, 100, 120};
  cfg.fit_range = cfg.n_list;
  cfg.instances = 500;
  cfg.seed = 20260808;

  const auto result = disorder::mean_total_gain(cfg, 1);
  const auto rerun = disorder::mean_total_gain(cfg, 1);
  const bool bit_identical =
      (result.mean_gain - rerun.mean_gain).cwiseAbs().maxCoeff() == 0.0 &&
      (result.stderr_gain - rerun.stderr_gain).cwiseAbs().maxCoeff() == 0.0;

  const double m0 = result.m_of_w[0].slope;
  const double m0_expected = 2.0 * std::log(2.0 / 1.9);
  const bool m0_ok = std::abs(m0 / m0_expected - 1.0) <= 0.15;

  bool monotone = true;
  for (size_t i = 0; i + 1 < result.m_of_w.size(); ++i) {
    const double allowance = std::hypot(result.m_of_w[i].slope_stderr,
                                        result.m_of_w[i + 1].slope_stderr);
    if (result.m_of_w[i + 1].slope > result.m_of_w[i].slope + allowance) monotone = false;
  }

  char detail[200];
  std::snprintf(detail, sizeof detail,
                "m(0) = %.4f (expect %.4f +- 15%%), monotone: %s, rerun bit-identical: %s%s",
                m0, m0_expected, monotone ? "yes" : "no", bit_identical ? "yes" : "no",
                result.reliable ? "" : ", UNRELIABLE");
  report(9, "disorder-averaged gain exponent", m0_ok && monotone && bit_identical, detail,
         now_seconds() - t0);
}

// --- criterion 10: property suite on randomized inputs

void criterion_10() {
  const double t0 = now_seconds();
  std::string why;
  bool ok = true;
  std::mt19937_64 rng(1010);

  // unitarity + reconstruction
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const CMatrix a = random_complex(rng, n);
    const auto dec = numerics::svd(a);
    const CMatrix eye = CMatrix::Identity(n, n);
    if ((dec.u.adjoint() * dec.u - eye).norm() > 1e-10 ||
        (dec.v.adjoint() * dec.v - eye).norm() > 1e-10 ||
        (a - dec.u * dec.s.asDiagonal() * dec.v.adjoint()).norm() > 1e-10 * a.norm()) {
      ok = false;
      why = "svd unitarity/reconstruction";
    }
  }

  // exact chiral anticommutation
  for (int trial = 0; trial < 20 && ok; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 8);
    const auto eff =
        topology::effective_hamiltonian(wrap_matrix(random_complex(rng, n)), 0.31 * trial);
    CMatrix sigma_z = CMatrix::Identity(2 * n, 2 * n);
    sigma_z.bottomRightCorner(n, n) *= -1.0;
    if ((sigma_z * eff.mat * sigma_z + eff.mat).norm() != 0.0) {
      ok = false;
      why = "chiral anticommutation not exact";
    }
  }

  // steady-state PSD on random stable pumped lattices
  for (int trial = 0; trial < 20 && ok; ++trial) {
    const auto spec = random_stable_spec(rng, 2 + static_cast<int>(rng() % 6));
    const auto corr =
        steadystate::steady_correlation_eig(model::build_dynamical_matrix(spec), spec.pump);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(corr.m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, corr.m.norm())) {
      ok = false;
      why = "steady state not PSD";
    }
  }

  // added noise >= 1/2 wherever the gain is non-negligible (amplifying chains)
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 30 && ok; ++trial) {
    auto p = chain(0.2 + 1.7 * uni(rng), 12);
    const auto spec = model::build_chain_spec(p, model::Boundary::open);
    const double window = std::sqrt(p.gamma_p * (4.0 - p.gamma_p));
    const int site = 2 + static_cast<int>(rng() % 11);
    const double w = 0.9 * window * (2.0 * uni(rng) - 1.0);
    if (response::added_noise(spec, w, site, 1) < 0.5) {
      ok = false;
      why = "added noise below 1/2";
    }
  }

  // winding invariance under grid refinement
  for (int trial = 0; trial < 40 && ok; ++trial) {
    auto p = chain(0.05 + 3.9 * uni(rng), 4);
    const double w = 3.0 * (2.0 * uni(rng) - 1.0);
    try {
      const auto bloch = topology::chain_bloch_model(p);
      if (topology::winding_number(bloch, w, 4096) !=
          topology::winding_number(bloch, w, 8192)) {
        ok = false;
        why = "winding not refinement-invariant";
      }
    } catch (const GaplessError&) {
    }
  }

  report(10, "randomized property suite", ok, ok ? "all properties hold" : why,
         now_seconds() - t0);
}

}  // namespace

int main() {
  std::printf("acceptance suite (single process, %s)\n", topamp::cli::kVersion);
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
