// experiment.cpp — one function per experiment kind

#include "topamp/experiment.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "topamp/chain1d.hpp"
#include "topamp/disorder.hpp"
#include "topamp/errors.hpp"
#include "topamp/numerics.hpp"
#include "topamp/response.hpp"
#include "topamp/steadystate.hpp"
#include "topamp/topology.hpp"

namespace topamp::cli {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double db(double linear) { return 10.0 * std::log10(linear); }

struct Runner {
  const ExperimentConfig& config;
  const RunOptions& opts;
  RunOutcome outcome;
  json base_metadata;

  explicit Runner(const ExperimentConfig& cfg, const RunOptions& options)
      : config(cfg), opts(options) {
    base_metadata["experiment"] = cfg.kind;
    base_metadata["config_hash"] = config_hash(cfg);
    base_metadata["version"] = kVersion;
    if (cfg.seed) base_metadata["seed"] = *cfg.seed;
  }

  // Runs one grid point; on failure records the error (or rethrows in strict
  // mode) and leaves the caller to emit NaNs.
  bool guarded(const std::string& where, const std::function<void()>& work) {
    try {
      work();
      return true;
    } catch (const std::exception& e) {
      if (opts.strict) throw;
      outcome.errors.push_back(where + ": " + e.what());
      outcome.partial = true;
      return false;
    }
  }

  ResultTable table(const std::string& name, std::vector<std::string> columns,
                    std::vector<std::string> units) {
    ResultTable t;
    t.name = name;
    t.columns = std::move(columns);
    t.units = std::move(units);
    t.metadata = base_metadata;
    return t;
  }

  void finish(ResultTable&& t) {
    if (outcome.partial) {
      t.metadata["partial"] = true;
      t.metadata["errors"] = outcome.errors;
    }
    outcome.tables.push_back(std::move(t));
  }

  const json& exp() const { return config.experiment; }

  double num(const char* key, double fallback) const {
    return exp().contains(key) ? exp()[key].get<double>() : fallback;
  }
  int integer(const char* key, int fallback) const {
    return exp().contains(key) ? exp()[key].get<int>() : fallback;
  }
  std::vector<double> num_list(const char* key, std::vector<double> fallback) const {
    if (!exp().contains(key)) return fallback;
    return exp()[key].get<std::vector<double>>();
  }
  std::vector<int> int_list(const char* key, std::vector<int> fallback) const {
    if (!exp().contains(key)) return fallback;
    return exp()[key].get<std::vector<int>>();
  }

  bool is_chain() const { return config.model.is_chain; }

  model::ChainParams chain() const { return config.model.chain; }

  model::LatticeSpec lattice_spec() const {
    if (config.model.is_chain)
      return model::build_chain_spec(config.model.chain, config.model.boundary);
    return config.model.matrices;
  }
};

// Closed-form gain, NaN outside the analytic/topological regime.
double closed_gain_or_nan(const model::ChainParams& p, double omega_d, int j) {
  try {
    return chain1d::closed_form_gain(p, omega_d, j);
  } catch (const std::exception&) {
    return kNaN;
  }
}

void run_gain_sweep(Runner& r) {
  const model::ChainParams base = r.chain();
  const auto gamma_ps = r.num_list("gamma_p_list", {base.gamma_p});
  const auto n_list = r.int_list("n_list", {base.n_sites});
  const int input_site = r.integer("input_site", 1);

  ResultTable vs_n =
      r.table("gain-vs-n", {"gamma_p", "n_sites", "gain", "gain_db", "gain_closed",
                            "gain_closed_db"},
              {"t_d", "", "", "dB", "", "dB"});
  if (!chain1d::analytic_regime(base))
    vs_n.metadata["warning"] =
        "closed-form columns require phi = pi/2, t_c = t_d; dense values only";
  for (double gp : gamma_ps)
    for (int n : n_list) {
      model::ChainParams p = base;
      p.gamma_p = gp;
      p.n_sites = n;
      double g = kNaN;
      r.guarded("gain-vs-n gamma_p=" + std::to_string(gp) + " n=" + std::to_string(n), [&] {
        const auto spec = model::build_chain_spec(p, model::Boundary::open);
        g = response::gain(spec, p.omega0, input_site, n);
      });
      const double gc = closed_gain_or_nan(p, p.omega0, n);
      vs_n.add_row({gp, double(n), g, db(g), gc, db(gc)});
    }
  r.finish(std::move(vs_n));

  ResultTable vs_w = r.table("gain-vs-omega",
                             {"gamma_p", "omega_d", "gain", "gain_db", "gain_closed",
                              "gain_closed_db"},
                             {"t_d", "t_d", "", "dB", "", "dB"});
  const int points = r.integer("omega_points", 401);
  for (double gp : gamma_ps) {
    model::ChainParams p = base;
    p.gamma_p = gp;
    const double span =
        r.num("omega_span", 6.0 * std::max(std::abs(2.0 * p.t_d - gp), 0.1 * p.t_d));
    const auto spec = model::build_chain_spec(p, model::Boundary::open);
    for (int i = 0; i < points; ++i) {
      const double w = p.omega0 - 0.5 * span + span * i / (points - 1);
      double g = kNaN;
      r.guarded("gain-vs-omega gamma_p=" + std::to_string(gp) + " w=" + std::to_string(w),
                [&] { g = response::gain(spec, w, input_site, p.n_sites); });
      const double gc = closed_gain_or_nan(p, w, p.n_sites);
      vs_w.add_row({gp, w, g, db(g), gc, db(gc)});
    }
  }
  r.finish(std::move(vs_w));
}

void run_phase_map(Runner& r) {
  const model::ChainParams base = r.chain();
  const double td = base.t_d;
  const double w_min = r.num("omega_min", base.omega0 - 3.0 * td);
  const double w_max = r.num("omega_max", base.omega0 + 3.0 * td);
  const double g_min = r.num("gamma_p_min", 0.0);
  const double g_max = r.num("gamma_p_max", 4.0 * td);
  const int nw = r.integer("omega_points", 60);
  const int ng = r.integer("gamma_p_points", 60);
  const int n_sites = r.integer("n_sites", base.n_sites);

  // Cell-centered grids keep every gamma_p inside the valid open interval.
  RVector omegas(nw), gamma_ps(ng);
  for (int i = 0; i < nw; ++i) omegas(i) = w_min + (i + 0.5) * (w_max - w_min) / nw;
  for (int i = 0; i < ng; ++i) gamma_ps(i) = g_min + (i + 0.5) * (g_max - g_min) / ng;

  topology::PhaseMap map;
  r.guarded("phase-map grid", [&] {
    map = topology::singular_gap_map(base, omegas, gamma_ps, n_sites);
  });

  ResultTable t = r.table("phase-map",
                          {"omega", "gamma_p", "gap", "winding", "gapless",
                           "gamma_p_minus", "gamma_p_plus"},
                          {"t_d", "t_d", "t_d", "", "", "t_d", "t_d"});
  t.metadata["grid"] = "cell-centered";
  t.metadata["n_sites"] = n_sites;
  for (Eigen::Index iw = 0; iw < map.omegas.size(); ++iw) {
    const auto bounds = topology::critical_pump_rates(base.t_c, base.t_d, base.phi,
                                                      map.omegas(iw) - base.omega0);
    const double bm = bounds ? bounds->first : kNaN;
    const double bp = bounds ? bounds->second : kNaN;
    for (Eigen::Index ig = 0; ig < map.gamma_ps.size(); ++ig)
      t.add_row({map.omegas(iw), map.gamma_ps(ig), map.gap(iw, ig),
                 map.gapless(iw, ig) ? kNaN : double(map.winding(iw, ig)),
                 map.gapless(iw, ig) ? 1.0 : 0.0, bm, bp});
  }
  r.finish(std::move(t));
}

void run_noise_profile(Runner& r) {
  const auto spec = r.lattice_spec();
  std::vector<int> default_sites;
  for (int j = 1; j <= spec.n_sites; ++j) default_sites.push_back(j);
  const auto sites = r.int_list("sites", default_sites);
  const double rel_tol = r.num("rel_tol", 1e-6);

  ResultTable t = r.table("noise-profile", {"site", "noise", "noise_closed"},
                          {"", "photons/s", "photons/s"});
  double total = 0.0, total_closed = kNaN;
  for (int j : sites) {
    double n = kNaN;
    r.guarded("noise-profile site=" + std::to_string(j),
              [&] { n = response::output_noise_total(spec, j, rel_tol); });
    double nc = kNaN;
    if (r.is_chain()) {
      try {
        nc = chain1d::closed_form_noise(r.chain(), j).site_noise;
      } catch (const std::exception&) {
      }
    }
    if (!std::isnan(n)) total += n;
    t.add_row({double(j), n, nc});
  }
  if (r.is_chain()) {
    try {
      total_closed = chain1d::closed_form_noise(r.chain(), 2).total_noise;
    } catch (const std::exception&) {
    }
  }
  t.metadata["noise_sum_over_sites"] = total;
  if (!std::isnan(total_closed)) t.metadata["total_noise_closed"] = total_closed;
  r.finish(std::move(t));
}

void run_added_noise(Runner& r) {
  const model::ChainParams base = r.chain();
  const auto gamma_ps = r.num_list("gamma_p_list", {0.2, 0.6, 1.0, 1.4, 1.8});
  const int site = r.integer("site", base.n_sites);

  ResultTable vs_g = r.table("added-noise-vs-gamma-p",
                             {"gamma_p", "n_add", "n_add_closed"}, {"t_d", "", ""});
  for (double gp : gamma_ps) {
    model::ChainParams p = base;
    p.gamma_p = gp;
    double n = kNaN, nc = kNaN;
    r.guarded("added-noise gamma_p=" + std::to_string(gp), [&] {
      const auto spec = model::build_chain_spec(p, model::Boundary::open);
      n = response::added_noise(spec, p.omega0, site, 1);
    });
    try {
      nc = chain1d::added_noise_resonance(p);
    } catch (const std::exception&) {
    }
    vs_g.add_row({gp, n, nc});
  }
  r.finish(std::move(vs_g));

  ResultTable vs_w = r.table("added-noise-vs-omega",
                             {"gamma_p", "omega", "n_add", "n_add_closed"},
                             {"t_d", "t_d", "", ""});
  const int points = r.integer("omega_points", 201);
  for (double gp : gamma_ps) {
    model::ChainParams p = base;
    p.gamma_p = gp;
    const double window = std::sqrt(std::max(gp * (4.0 * p.t_d - gp), 0.0));
    const double span = r.num("omega_span", 1.8 * window);
    if (!(span > 0.0)) continue;
    const auto spec = model::build_chain_spec(p, model::Boundary::open);
    for (int i = 0; i < points; ++i) {
      const double w = p.omega0 - 0.5 * span + span * i / (points - 1);
      double n = kNaN, nc = kNaN;
      r.guarded("added-noise gamma_p=" + std::to_string(gp) + " w=" + std::to_string(w),
                [&] { n = response::added_noise(spec, w, site, 1); });
      try {
        nc = chain1d::closed_form_added_noise(p, w);
      } catch (const std::exception&) {
      }
      vs_w.add_row({gp, w, n, nc});
    }
  }
  r.finish(std::move(vs_w));
}

void run_nsr(Runner& r) {
  const auto spec = r.lattice_spec();
  std::vector<int> default_sites;
  for (int j = 2; j <= spec.n_sites; ++j) default_sites.push_back(j);
  const auto sites = r.int_list("sites", default_sites);
  const double amplitude_sq = r.num("amplitude_sq", 1.0);
  const double rel_tol = r.num("rel_tol", 1e-6);
  const double omega_d = r.num("omega_d", r.is_chain() ? r.chain().omega0 : 0.0);

  ResultTable t = r.table(
      "nsr", {"site", "nsr", "nsr_closed", "nsr_fit"}, {"", "", "", ""});
  std::vector<double> log_jm1, log_nsr;
  std::vector<std::vector<double>> rows;
  for (int j : sites) {
    double v = kNaN, vc = kNaN;
    r.guarded("nsr site=" + std::to_string(j), [&] {
      v = response::noise_to_signal(spec, omega_d, amplitude_sq, j, 1, rel_tol);
    });
    if (r.is_chain()) {
      try {
        vc = chain1d::closed_form_nsr(r.chain(), amplitude_sq, j);
      } catch (const std::exception&) {
      }
    }
    if (!std::isnan(v) && j >= 2 && v > 0.0) {
      log_jm1.push_back(std::log(double(j - 1)));
      log_nsr.push_back(std::log(v));
    }
    rows.push_back({double(j), v, vc, kNaN});
  }
  if (log_jm1.size() >= 3) {
    const auto fit = disorder::fit_loglinear(log_jm1, log_nsr);
    for (auto& row : rows)
      if (row[0] >= 2.0)
        row[3] = std::exp(fit.intercept) * std::pow(row[0] - 1.0, fit.slope);
    t.metadata["fit_power"] = fit.slope;
    t.metadata["fit_prefactor"] = std::exp(fit.intercept);
  }
  for (auto& row : rows) t.add_row(std::move(row));
  r.finish(std::move(t));
}

void run_stability(Runner& r) {
  const model::ChainParams base = r.chain();
  const auto gamma_ps = r.num_list("gamma_p_list", {base.gamma_p});
  const std::string which =
      r.exp().contains("boundary") ? r.exp()["boundary"].get<std::string>() : "both";

  ResultTable summary = r.table("stability",
                                {"gamma_p", "periodic", "stable", "max_re_lambda",
                                 "max_re_lambda_numeric", "spectrum_deviation"},
                                {"t_d", "", "", "t_d", "t_d", "t_d"});
  ResultTable spectra = r.table("spectra", {"gamma_p", "periodic", "index", "re_lambda",
                                            "im_lambda"},
                                {"t_d", "", "", "t_d", "t_d"});
  std::vector<model::Boundary> boundaries;
  if (which == "open" || which == "both") boundaries.push_back(model::Boundary::open);
  if (which == "periodic" || which == "both") boundaries.push_back(model::Boundary::periodic);

  for (double gp : gamma_ps)
    for (model::Boundary b : boundaries) {
      model::ChainParams p = base;
      p.gamma_p = gp;
      const bool periodic = b == model::Boundary::periodic;
      r.guarded("stability gamma_p=" + std::to_string(gp), [&] {
        const auto closed = chain1d::stability_spectrum(p, b);
        const auto spec = model::build_chain_spec(p, b);
        const auto h = model::build_dynamical_matrix(spec);
        const auto es = numerics::eig(h.h);

        const double dev = numerics::spectrum_deviation(closed.eigenvalues, es.values);

        summary.add_row({gp, double(periodic), double(closed.stable),
                         closed.max_real_part(), es.max_real_part(), dev});
        for (int i = 0; i < p.n_sites; ++i)
          spectra.add_row({gp, double(periodic), double(i + 1),
                           closed.eigenvalues(i).real(), closed.eigenvalues(i).imag()});
      });
    }
  r.finish(std::move(summary));
  r.finish(std::move(spectra));
}

void run_steady_state(Runner& r) {
  const auto spec = r.lattice_spec();
  const double rel_tol = r.num("rel_tol", 1e-6);

  ResultTable t = r.table("steady-state",
                          {"site", "m_diag", "kappa_m_diag", "n_out_total", "rel_deviation"},
                          {"", "photons", "photons/s", "photons/s", ""});
  r.guarded("steady-state", [&] {
    const auto h = model::build_dynamical_matrix(spec);
    const auto eig_path = steadystate::steady_correlation_eig(h, spec.pump);
    const auto int_path = steadystate::steady_correlation_integral(h, spec.pump, rel_tol);

    double path_dev = 0.0;
    const double scale = std::max(eig_path.m.norm(), 1e-300);
    path_dev = (eig_path.m - int_path.m).norm() / scale;

    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (eig_path.m + CMatrix(eig_path.m.adjoint())),
                                              Eigen::EigenvaluesOnly);
    t.metadata["hermiticity_residual"] = (eig_path.m - eig_path.m.adjoint()).norm();
    t.metadata["min_eigenvalue"] = es.eigenvalues().minCoeff();
    t.metadata["stationarity_residual"] = eig_path.stationarity_residual;
    t.metadata["used_sylvester_fallback"] = eig_path.used_sylvester_fallback;
    t.metadata["eig_vs_integral_deviation"] = path_dev;

    for (int j = 1; j <= spec.n_sites; ++j) {
      const double m_diag = eig_path.m(j - 1, j - 1).real();
      const double lhs = spec.kappa(j - 1) * m_diag;
      const double rhs = response::output_noise_total(spec, j, rel_tol);
      const double dev = (std::abs(lhs) < 1e-300 && std::abs(rhs) < 1e-300)
                             ? 0.0
                             : std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
      t.add_row({double(j), m_diag, lhs, rhs, dev});
    }
  });
  r.finish(std::move(t));
}

void run_disorder(Runner& r) {
  disorder::DisorderConfig cfg;
  cfg.base = r.chain();
  cfg.w_list = r.num_list("w_list", {0.0});
  cfg.n_list = r.int_list("n_list", {cfg.base.n_sites});
  cfg.instances = r.integer("instances", 500);
  cfg.fit_range = r.int_list("fit_range", cfg.n_list);
  cfg.seed = r.config.seed.value_or(1);

  disorder::DisorderResult result;
  r.guarded("disorder", [&] { result = disorder::mean_total_gain(cfg, r.opts.threads); });

  ResultTable gains = r.table("gain-vs-n",
                              {"w", "n_sites", "mean_gain", "stderr", "log_mean_gain",
                               "unstable_fraction"},
                              {"t_d", "", "", "", "", ""});
  gains.metadata["instances"] = cfg.instances;
  gains.metadata["seed"] = cfg.seed;
  gains.metadata["reliable"] = result.reliable;
  for (size_t iw = 0; iw < result.w_list.size(); ++iw)
    for (size_t in = 0; in < result.n_list.size(); ++in)
      gains.add_row({result.w_list[iw], double(result.n_list[in]), result.mean_gain(iw, in),
                     result.stderr_gain(iw, in), std::log(result.mean_gain(iw, in)),
                     result.unstable_fraction(iw, in)});
  r.finish(std::move(gains));

  if (!result.m_of_w.empty()) {
    ResultTable fits = r.table(
        "m-of-w", {"w", "m", "intercept", "m_stderr", "residual_rms"}, {"t_d", "", "", "", ""});
    fits.metadata["seed"] = cfg.seed;
    for (size_t iw = 0; iw < result.w_list.size(); ++iw)
      fits.add_row({result.w_list[iw], result.m_of_w[iw].slope, result.m_of_w[iw].intercept,
                    result.m_of_w[iw].slope_stderr, result.m_of_w[iw].residual_rms});
    r.finish(std::move(fits));
  }
}

void run_classify(Runner& r) {
  const model::ChainParams base = r.chain();
  const auto phis = r.num_list("phi_list", {0.0, M_PI / 4, M_PI / 2, 3 * M_PI / 4, M_PI});
  const auto omegas = r.num_list("omega_list", {base.omega0});

  ResultTable t = r.table("classify", {"phi", "omega", "class", "n_matches"},
                          {"rad", "t_d", "", ""});
  t.metadata["class_codes"] = {{"AIII", 0}, {"BDI", 1}, {"CI", 2}, {"DIII", 3}};
  for (double phi : phis)
    for (double w : omegas) {
      model::ChainParams p = base;
      p.phi = phi;
      r.guarded("classify phi=" + std::to_string(phi), [&] {
        const auto classes = topology::symmetry_class(topology::chain_bloch_model(p), w);
        t.add_row({phi, w, double(static_cast<int>(classes.front())),
                   double(classes.size())});
      });
    }
  r.finish(std::move(t));
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config, const RunOptions& opts) {
  Runner runner(config, opts);

  static const std::set<std::string> chain_only = {"gain-sweep", "phase-map", "added-noise",
                                                   "stability", "disorder", "classify"};
  if (chain_only.count(config.kind) && !config.model.is_chain)
    throw ConfigError({"experiment.kind: \"" + config.kind + "\" requires a chain model"});

  if (config.kind == "gain-sweep")
    run_gain_sweep(runner);
  else if (config.kind == "phase-map")
    run_phase_map(runner);
  else if (config.kind == "noise-profile")
    run_noise_profile(runner);
  else if (config.kind == "added-noise")
    run_added_noise(runner);
  else if (config.kind == "nsr")
    run_nsr(runner);
  else if (config.kind == "stability")
    run_stability(runner);
  else if (config.kind == "steady-state")
    run_steady_state(runner);
  else if (config.kind == "disorder")
    run_disorder(runner);
  else if (config.kind == "classify")
    run_classify(runner);
  else
    throw ConfigError({"experiment.kind: unknown kind " + config.kind});

  return std::move(runner.outcome);
}

}  // namespace topamp::cli
