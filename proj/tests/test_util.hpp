// test_util.hpp — shared fixtures and random-lattice generators

#pragma once

#include <random>

#include "topamp/model.hpp"
#include "topamp/numerics.hpp"

namespace testutil {

using namespace topamp;

// Reference chain: t_c = t_d = 1, phi = pi/2, gamma_p = 1, omega0 = 0, N = 10.
// kappa = 6, xi(0) = 1/ln 2, rho(0) = 4/3, s0(0) = 3/2.
inline model::ChainParams chain_a(int n_sites = 10) {
  model::ChainParams p;
  p.t_c = 1.0;
  p.t_d = 1.0;
  p.phi = M_PI / 2.0;
  p.gamma_p = 1.0;
  p.omega0 = 0.0;
  p.n_sites = n_sites;
  return p;
}

inline model::DynamicalMatrix chain_a_matrix(int n_sites = 10,
                                             model::Boundary b = model::Boundary::open) {
  return model::build_dynamical_matrix(model::build_chain_spec(chain_a(n_sites), b));
}

inline CMatrix random_complex(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex{dist(rng), dist(rng)};
  return a;
}

inline CMatrix random_hermitian_psd(std::mt19937_64& rng, int n, double scale = 1.0) {
  const CMatrix r = random_complex(rng, n);
  return scale / n * (r * r.adjoint());
}

// Random valid lattice spec (finite frequencies, PSD pump/loss, Hermitian G).
inline model::LatticeSpec random_spec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  model::LatticeSpec spec;
  spec.n_sites = n;
  spec.omega.resize(n);
  spec.kappa.resize(n);
  for (int i = 0; i < n; ++i) {
    spec.omega(i) = 4.0 * uni(rng) - 2.0;
    spec.kappa(i) = 3.0 * uni(rng);
  }
  CMatrix g = random_complex(rng, n);
  spec.coupling_g = 0.5 * (g + g.adjoint());
  spec.coupling_g.diagonal().setZero();
  spec.pump = random_hermitian_psd(rng, n, 0.8);
  spec.loss = random_hermitian_psd(rng, n, 0.8);
  return spec;
}

// Random spec made stable by a uniform kappa shift (max Re lambda <= -margin).
inline model::LatticeSpec random_stable_spec(std::mt19937_64& rng, int n,
                                             double margin = 0.2) {
  model::LatticeSpec spec = random_spec(rng, n);
  const auto h = model::build_dynamical_matrix(spec);
  const double max_re = numerics::eig(h.h).max_real_part();
  if (max_re > -margin) spec.kappa.array() += 2.0 * (max_re + margin);
  return spec;
}

}  // namespace testutil
