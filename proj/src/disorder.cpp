// disorder.cpp — substreamed sampling, instance loop, exponent fits

#include "topamp/disorder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "topamp/numerics.hpp"
#include "topamp/response.hpp"

namespace topamp::disorder {

namespace {

std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64_step(state_); }

double Rng::uniform01() {
  // 53-bit mantissa, strictly inside (0, 1)
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t substream_key(std::uint64_t seed, std::uint64_t w_index, std::uint64_t n_index,
                            std::uint64_t instance_index) {
  // Feed the tuple through the mixer one component at a time.
  std::uint64_t state = seed;
  for (std::uint64_t part : {w_index, n_index, instance_index}) {
    state ^= splitmix64_step(state) + part;
    state = splitmix64_step(state);
  }
  return state;
}

void validate(const DisorderConfig& cfg) {
  if (cfg.instances < 1) throw std::invalid_argument("disorder: instances must be >= 1");
  if (cfg.w_list.empty() || cfg.n_list.empty())
    throw std::invalid_argument("disorder: w_list and n_list must be non-empty");
  for (double w : cfg.w_list)
    if (!(w >= 0.0)) throw std::invalid_argument("disorder: w must be >= 0");
  for (int n : cfg.n_list)
    if (n < 2) throw std::invalid_argument("disorder: system sizes must be >= 2");
  if (!cfg.fit_range.empty()) {
    if (cfg.fit_range.size() < 3)
      throw std::invalid_argument("disorder: fit_range needs at least 3 sizes");
    for (int n : cfg.fit_range)
      if (std::find(cfg.n_list.begin(), cfg.n_list.end(), n) == cfg.n_list.end())
        throw std::invalid_argument("disorder: fit_range must be a subset of n_list");
  }
}

model::LatticeSpec sample_disordered_spec(const model::ChainParams& base, double w,
                                          Rng& stream) {
  if (!(w >= 0.0)) throw std::invalid_argument("sample_disordered_spec: w must be >= 0");
  model::LatticeSpec spec = model::build_chain_spec(base, model::Boundary::open);
  for (int j = 0; j < base.n_sites; ++j) spec.omega(j) = base.omega0 + w * stream.normal();
  return spec;
}

FitResult fit_loglinear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglinear: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_loglinear: degenerate abscissae");

  FitResult fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.slope * x[i] - fit.intercept;
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  if (x.size() > 2) fit.slope_stderr = std::sqrt(ss / (n - 2.0) * n / denom);
  return fit;
}

namespace {

// Total gain G_T(omega0) of one instance, or NaN when unstable.
double instance_total_gain(const model::ChainParams& base, const model::LatticeSpec& spec) {
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  if (!(numerics::eig(h.h).max_real_part() < 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return response::total_gain(spec, base.omega0, 1);
}

}  // namespace

DisorderResult mean_total_gain(const DisorderConfig& cfg, int threads) {
  validate(cfg);
  {
    // Clean-limit stability gate.
    model::ChainParams probe = cfg.base;
    probe.n_sites = cfg.n_list.front();
    const auto spec = model::build_chain_spec(probe, model::Boundary::open);
    const auto h = model::build_dynamical_matrix(spec);
    if (!(numerics::eig(h.h).max_real_part() < 0.0))
      throw std::invalid_argument("mean_total_gain: clean chain must be stable");
  }

  const size_t nw = cfg.w_list.size(), nn = cfg.n_list.size();
  DisorderResult result;
  result.w_list = cfg.w_list;
  result.n_list = cfg.n_list;
  result.mean_gain.setZero(nw, nn);
  result.stderr_gain.setZero(nw, nn);
  result.unstable_fraction.setZero(nw, nn);

  for (size_t iw = 0; iw < nw; ++iw) {
    for (size_t in = 0; in < nn; ++in) {
      model::ChainParams params = cfg.base;
      params.n_sites = cfg.n_list[in];

      std::vector<double> gains(static_cast<size_t>(cfg.instances));
      auto run_instance = [&](int idx) {
        Rng stream(substream_key(cfg.seed, iw, in, static_cast<std::uint64_t>(idx)));
        const auto spec = sample_disordered_spec(params, cfg.w_list[iw], stream);
        gains[static_cast<size_t>(idx)] = instance_total_gain(params, spec);
      };

      if (cfg.w_list[iw] == 0.0) {
        // every instance coincides with the clean chain; the mean is exact
        run_instance(0);
        const double g = gains.front();
        const bool excluded = std::isnan(g);
        result.unstable_fraction(iw, in) = excluded ? 1.0 : 0.0;
        if (excluded) result.reliable = false;
        result.mean_gain(iw, in) = g;
        result.stderr_gain(iw, in) = excluded ? g : 0.0;
        continue;
      }

      if (threads <= 1) {
        for (int idx = 0; idx < cfg.instances; ++idx) run_instance(idx);
      } else {
        std::vector<std::thread> pool;
        std::atomic<int> cursor{0};
        const int workers = std::min<int>(threads, cfg.instances);
        pool.reserve(static_cast<size_t>(workers));
        for (int t = 0; t < workers; ++t)
          pool.emplace_back([&] {
            for (int idx = cursor.fetch_add(1); idx < cfg.instances;
                 idx = cursor.fetch_add(1))
              run_instance(idx);
          });
        for (auto& worker : pool) worker.join();
      }

      // Fixed-order reduction keeps the result independent of scheduling.
      double sum = 0.0, sum_sq = 0.0;
      int kept = 0;
      for (double g : gains) {
        if (std::isnan(g)) continue;
        sum += g;
        sum_sq += g * g;
        ++kept;
      }
      const int excluded = cfg.instances - kept;
      result.unstable_fraction(iw, in) =
          static_cast<double>(excluded) / static_cast<double>(cfg.instances);
      if (result.unstable_fraction(iw, in) > 0.2) result.reliable = false;
      if (kept == 0) {
        result.mean_gain(iw, in) = std::numeric_limits<double>::quiet_NaN();
        result.stderr_gain(iw, in) = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const double mean = sum / kept;
      result.mean_gain(iw, in) = mean;
      if (kept > 1) {
        const double var = std::max(0.0, (sum_sq - kept * mean * mean) / (kept - 1.0));
        result.stderr_gain(iw, in) = std::sqrt(var / kept);
      }
    }
  }

  if (!cfg.fit_range.empty()) result.m_of_w = fit_exponent(result, cfg.fit_range);
  return result;
}

std::vector<FitResult> fit_exponent(const DisorderResult& result,
                                    const std::vector<int>& fit_range) {
  if (fit_range.size() < 3)
    throw std::invalid_argument("fit_exponent: need at least 3 sizes in range");
  std::vector<FitResult> fits;
  fits.reserve(result.w_list.size());
  for (size_t iw = 0; iw < result.w_list.size(); ++iw) {
    std::vector<double> x, y;
    for (int n : fit_range) {
      const auto it = std::find(result.n_list.begin(), result.n_list.end(), n);
      if (it == result.n_list.end())
        throw std::invalid_argument("fit_exponent: fit_range size missing from n_list");
      const auto in = static_cast<size_t>(it - result.n_list.begin());
      const double g = result.mean_gain(iw, in);
      if (!(g > 0.0)) throw std::domain_error("fit_exponent: non-positive mean gain");
      x.push_back(static_cast<double>(n));
      y.push_back(std::log(g));
    }
    fits.push_back(fit_loglinear(x, y));
  }
  return fits;
}

}  // namespace topamp::disorder
