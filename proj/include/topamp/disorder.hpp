// disorder.hpp — diagonal-disorder Monte Carlo for the averaged total gain
//
// Local mode frequencies are drawn as omega_j = omega0 + d_j with d_j i.i.d.
// normal(0, w^2). Each (W-index, N-index, instance-index) tuple owns an
// independent substream of a counter-seeded SplitMix64 generator, so results
// are bit-identical regardless of worker count or evaluation order.

#pragma once

#include <cstdint>
#include <vector>

#include "topamp/model.hpp"
#include "topamp/types.hpp"

namespace topamp::disorder {

// SplitMix64 stream with Box-Muller normals (no rejection, fixed draw count).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double uniform01();  // in (0, 1)
  double normal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Key for the substream of one disorder instance.
std::uint64_t substream_key(std::uint64_t seed, std::uint64_t w_index, std::uint64_t n_index,
                            std::uint64_t instance_index);

struct DisorderConfig {
  model::ChainParams base;      // clean chain (n_sites ignored; n_list rules)
  std::vector<double> w_list;   // disorder standard deviations, >= 0
  int instances = 500;
  std::uint64_t seed = 1;
  std::vector<int> n_list;      // system sizes
  std::vector<int> fit_range;   // subset of n_list used by the exponent fit (>= 3)
};

void validate(const DisorderConfig& cfg);  // throws std::invalid_argument

// Open-boundary chain spec with disordered local frequencies.
model::LatticeSpec sample_disordered_spec(const model::ChainParams& base, double w, Rng& stream);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  double slope_stderr = 0.0;
};

// Least-squares line y = slope x + intercept.
FitResult fit_loglinear(const std::vector<double>& x, const std::vector<double>& y);

struct DisorderResult {
  std::vector<double> w_list;
  std::vector<int> n_list;
  RMatrix mean_gain;          // (w-index, n-index), average of G_T(omega0)
  RMatrix stderr_gain;        // standard error of the mean
  RMatrix unstable_fraction;  // excluded instances / total
  std::vector<FitResult> m_of_w;
  bool reliable = true;       // false when any point excluded > 20% of instances
};

// Average total gain at omega0 over disorder instances. Unstable instances are
// excluded and counted; > 20% exclusions at any grid point flags the result
// unreliable. Deterministic for fixed (cfg.seed, cfg), independent of
// `threads`.
DisorderResult mean_total_gain(const DisorderConfig& cfg, int threads = 1);

// Slope of log(mean gain) vs N over cfg.fit_range, one fit per W.
// Throws std::domain_error on non-positive gains.
std::vector<FitResult> fit_exponent(const DisorderResult& result,
                                    const std::vector<int>& fit_range);

}  // namespace topamp::disorder
