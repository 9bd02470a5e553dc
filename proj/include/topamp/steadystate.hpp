// steadystate.hpp — steady-state correlation matrix of lattice fluctuations
//
// The two-point correlations M_jl = <da†_j da_l> of a stable lattice obey
//
//   dM/dt = H* M + M H^T + gamma_hat,    gamma_hat = (gamma_p)^T,
//
// whose fixed point is evaluated two independent ways: through the
// eigendecomposition of H (with a vectorized Sylvester solve as fallback when
// H is defective or the eigenbasis is too ill-conditioned), and as the
// frequency integral M = (1/2pi) Int Q*(w) gamma_hat Q(w)^T dw. The diagonal
// ties back to the input-output picture through N_j^out = kappa_j M_jj.

#pragma once

#include "topamp/model.hpp"
#include "topamp/types.hpp"

namespace topamp::steadystate {

struct CorrelationMatrix {
  CMatrix m;                            // Hermitian PSD
  double stationarity_residual = 0.0;   // ||H* M + M H^T + gamma_hat|| / ||gamma_hat||
  bool used_sylvester_fallback = false;
};

// Eigendecomposition formula M = B* X B^T with X_nm = -C_nm/(lambda*_n + lambda_m).
// Falls back to the vectorized stationarity solve when the residual exceeds
// 1e-8. Throws UnstableError for unstable H and std::runtime_error when some
// lambda*_n + lambda_m is numerically zero.
CorrelationMatrix steady_correlation_eig(const model::DynamicalMatrix& h, const CMatrix& pump);

// Entrywise adaptive quadrature of the integral form (diagonal first; the
// Hermitian lower triangle is filled by symmetry).
CorrelationMatrix steady_correlation_integral(const model::DynamicalMatrix& h,
                                              const CMatrix& pump, double rel_tol = 1e-6);

// max_j |kappa_j M_jj - N_j^out| / N_j^out, both sides computed independently
// (stationarity solve vs frequency quadrature). Sites where both sides vanish
// contribute zero.
double consistency_with_io(const model::LatticeSpec& spec, double rel_tol = 1e-6);

}  // namespace topamp::steadystate
