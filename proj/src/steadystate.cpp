// steadystate.cpp — eigendecomposition, Sylvester, and integral evaluations

#include "topamp/steadystate.hpp"

#include <cmath>
#include <stdexcept>

#include "topamp/errors.hpp"
#include "topamp/numerics.hpp"
#include "topamp/response.hpp"

namespace topamp::steadystate {

namespace {

double stationarity_residual(const CMatrix& h, const CMatrix& m, const CMatrix& gamma_hat) {
  const double scale = std::max(gamma_hat.norm(), 1e-300);
  return (h.conjugate() * m + m * h.transpose() + gamma_hat).norm() / scale;
}

// Solve H* M + M H^T = -gamma_hat through the vectorized linear system
// (I (x) H* + H (x) I) vec(M) = -vec(gamma_hat), column-major vec.
CMatrix sylvester_solve(const CMatrix& h, const CMatrix& gamma_hat) {
  const Eigen::Index n = h.rows();
  CMatrix big = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index col = 0; col < n; ++col)
    for (Eigen::Index row = 0; row < n; ++row) {
      for (Eigen::Index k = 0; k < n; ++k) {
        big(col * n + row, col * n + k) += std::conj(h(row, k));  // (H* M) term
        big(col * n + row, k * n + row) += h(col, k);             // (M H^T) term
      }
    }
  CMatrix rhs(n * n, 1);
  for (Eigen::Index col = 0; col < n; ++col)
    for (Eigen::Index row = 0; row < n; ++row) rhs(col * n + row, 0) = -gamma_hat(row, col);
  const CMatrix solution = numerics::solve_linear(big, rhs);
  CMatrix m(n, n);
  for (Eigen::Index col = 0; col < n; ++col)
    for (Eigen::Index row = 0; row < n; ++row) m(row, col) = solution(col * n + row, 0);
  return 0.5 * (m + CMatrix(m.adjoint()));
}

void check_pump(const CMatrix& pump, Eigen::Index n, const char* who) {
  if (pump.rows() != n || pump.cols() != n)
    throw std::invalid_argument(std::string(who) + ": pump shape mismatch");
}

}  // namespace

CorrelationMatrix steady_correlation_eig(const model::DynamicalMatrix& h, const CMatrix& pump) {
  const Eigen::Index n = h.h.rows();
  check_pump(pump, n, "steady_correlation_eig");
  const CMatrix gamma_hat = pump.transpose();

  const numerics::EigenSystem es = numerics::eig(h.h);
  const double max_re = es.max_real_part();
  if (!(max_re < 0.0))
    throw UnstableError("steady_correlation_eig: lattice unstable", max_re);

  CorrelationMatrix out;
  if (pump.norm() == 0.0) {
    out.m = CMatrix::Zero(n, n);
    return out;
  }

  const double rate_scale = es.values.cwiseAbs().maxCoeff();
  double min_pair = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      min_pair = std::min(min_pair, std::abs(std::conj(es.values(a)) + es.values(b)));
  if (min_pair <= 1e-12 * rate_scale)
    throw std::runtime_error(
        "steady_correlation_eig: lambda*_n + lambda_m numerically zero (ill-conditioned)");

  bool eig_path_ok = true;
  CMatrix b_inv;
  try {
    b_inv = numerics::solve_linear(es.vectors, CMatrix::Identity(n, n));
  } catch (const NearSingularError&) {
    eig_path_ok = false;  // defective eigenbasis
  }

  if (eig_path_ok) {
    const CMatrix c = b_inv.conjugate() * gamma_hat * b_inv.transpose();
    CMatrix x(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        x(a, b) = -c(a, b) / (std::conj(es.values(a)) + es.values(b));
    CMatrix m = es.vectors.conjugate() * x * es.vectors.transpose();
    m = 0.5 * (m + CMatrix(m.adjoint()));
    out.m = std::move(m);
    out.stationarity_residual = stationarity_residual(h.h, out.m, gamma_hat);
    if (out.stationarity_residual <= 1e-8) return out;
  }

  out.m = sylvester_solve(h.h, gamma_hat);
  out.stationarity_residual = stationarity_residual(h.h, out.m, gamma_hat);
  out.used_sylvester_fallback = true;
  return out;
}

CorrelationMatrix steady_correlation_integral(const model::DynamicalMatrix& h,
                                              const CMatrix& pump, double rel_tol) {
  const Eigen::Index n = h.h.rows();
  check_pump(pump, n, "steady_correlation_integral");
  const CMatrix gamma_hat = pump.transpose();

  const numerics::EigenSystem es = numerics::eig(h.h);
  const double max_re = es.max_real_part();
  if (!(max_re < 0.0))
    throw UnstableError("steady_correlation_integral: lattice unstable", max_re);

  CorrelationMatrix out;
  out.m = CMatrix::Zero(n, n);
  if (pump.norm() == 0.0) return out;

  const RVector freqs = -es.values.imag();
  const double center = 0.5 * (freqs.maxCoeff() + freqs.minCoeff());
  const double scale = std::max({es.values.real().cwiseAbs().maxCoeff(),
                                 0.5 * (freqs.maxCoeff() - freqs.minCoeff()), 1e-3});

  auto integrand_matrix = [&](double w) -> CMatrix {
    const CMatrix q = numerics::solve_linear(
        h.h + imag_unit * w * CMatrix::Identity(n, n), CMatrix::Identity(n, n));
    return q.conjugate() * gamma_hat * q.transpose() / (2.0 * M_PI);
  };

  // Diagonal first: real integrands, and their size sets the absolute floor
  // for the small off-diagonal entries.
  for (Eigen::Index j = 0; j < n; ++j) {
    auto f = [&](double w) { return integrand_matrix(w)(j, j).real(); };
    out.m(j, j) = numerics::quad_adaptive(f, center, scale, rel_tol);
  }
  const double floor = rel_tol * out.m.real().diagonal().maxCoeff();
  numerics::QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = std::max(floor, 1e-300);

  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = j + 1; l < n; ++l) {
      auto fr = [&](double w) { return integrand_matrix(w)(j, l).real(); };
      auto fi = [&](double w) { return integrand_matrix(w)(j, l).imag(); };
      const Complex value{numerics::quad_adaptive(fr, center, scale, opts),
                          numerics::quad_adaptive(fi, center, scale, opts)};
      out.m(j, l) = value;
      out.m(l, j) = std::conj(value);
    }

  out.stationarity_residual = stationarity_residual(h.h, out.m, gamma_hat);
  return out;
}

double consistency_with_io(const model::LatticeSpec& spec, double rel_tol) {
  const model::DynamicalMatrix h = model::build_dynamical_matrix(spec);
  const CorrelationMatrix corr = steady_correlation_eig(h, spec.pump);

  double worst = 0.0;
  for (int j = 1; j <= spec.n_sites; ++j) {
    const double lhs = spec.kappa(j - 1) * corr.m(j - 1, j - 1).real();
    const double rhs = response::output_noise_total(spec, j, rel_tol);
    if (std::abs(lhs) < 1e-300 && std::abs(rhs) < 1e-300) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  return worst;
}

}  // namespace topamp::steadystate
