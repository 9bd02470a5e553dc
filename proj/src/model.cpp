// model.cpp — spec validation, chain builder, dynamical matrix assembly

#include "topamp/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace topamp::model {

namespace {

constexpr double kRelTol = 1e-10;

void check_hermitian_psd(const CMatrix& m, const char* field, ValidationReport& report,
                         bool require_zero_diagonal = false) {
  const double scale = std::max(m.norm(), 1.0e-300);
  const double herm =
      m.size() > 0 ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (herm > kRelTol * scale)
    report.violations.push_back({field, "not Hermitian", herm});
  if (require_zero_diagonal) {
    const double diag = m.diagonal().cwiseAbs().maxCoeff();
    if (diag > kRelTol * scale) report.violations.push_back({field, "diagonal not zero", diag});
    return;  // PSD not required of the coupling matrix
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()),
                                            Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kRelTol * scale)
    report.violations.push_back({field, "not positive semi-definite", -min_eig});
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (violations.empty()) return "ok";
  std::ostringstream out;
  for (size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].field << ": " << violations[i].invariant << " (residual "
        << violations[i].residual << ")";
  }
  return out.str();
}

ValidationReport validate_spec(const LatticeSpec& spec) {
  ValidationReport report;
  const auto n = static_cast<Eigen::Index>(spec.n_sites);
  if (n <= 0) {
    report.violations.push_back({"n_sites", "must be positive", static_cast<double>(n)});
    return report;
  }
  if (spec.omega.size() != n)
    report.violations.push_back({"omega", "size mismatch", double(spec.omega.size() - n)});
  if (spec.kappa.size() != n)
    report.violations.push_back({"kappa", "size mismatch", double(spec.kappa.size() - n)});
  for (const CMatrix* m : {&spec.coupling_g, &spec.pump, &spec.loss}) {
    if (m->rows() != n || m->cols() != n) {
      report.violations.push_back({"matrices", "shape mismatch", 0.0});
      return report;
    }
  }
  if (!report.violations.empty()) return report;

  if (!spec.omega.allFinite())
    report.violations.push_back({"omega", "non-finite entries", 0.0});
  if (spec.kappa.size() == n && spec.kappa.minCoeff() < 0.0)
    report.violations.push_back({"kappa", "negative decay rate", -spec.kappa.minCoeff()});

  check_hermitian_psd(spec.coupling_g, "coupling_g", report, /*require_zero_diagonal=*/true);
  check_hermitian_psd(spec.pump, "pump", report);
  check_hermitian_psd(spec.loss, "loss", report);
  return report;
}

DynamicalMatrix build_dynamical_matrix(const LatticeSpec& spec) {
  ValidationReport report = validate_spec(spec);
  if (!report.ok()) throw SpecValidationError(std::move(report));

  CMatrix gamma = -0.5 * CMatrix(spec.kappa.cast<Complex>().asDiagonal());
  gamma += 0.5 * spec.pump;
  gamma -= 0.5 * spec.loss.transpose();

  CMatrix h = gamma;
  h -= imag_unit * CMatrix(spec.omega.cast<Complex>().asDiagonal());
  h -= imag_unit * spec.coupling_g;
  return DynamicalMatrix{std::move(h), spec};
}

LatticeSpec build_chain_spec(const ChainParams& p, Boundary boundary) {
  if (!(p.t_c > 0.0) || !(p.t_d > 0.0))
    throw std::domain_error("build_chain_spec: t_c and t_d must be positive");
  if (!(p.gamma_p >= 0.0 && p.gamma_p < 4.0 * p.t_d))
    throw std::domain_error(
        "build_chain_spec: gamma_p must lie in [0, 4 t_d) so that kappa > 0");
  if (p.n_sites < 1) throw std::domain_error("build_chain_spec: n_sites must be >= 1");

  const auto n = static_cast<Eigen::Index>(p.n_sites);
  LatticeSpec spec;
  spec.n_sites = p.n_sites;
  spec.omega = RVector::Constant(n, p.omega0);
  spec.kappa = RVector::Constant(n, p.kappa());
  spec.coupling_g = CMatrix::Zero(n, n);
  spec.pump = CMatrix::Zero(n, n);
  spec.loss = CMatrix::Zero(n, n);

  // Quadrant phases snap exactly: phi = pi/2 must give an exactly one-way
  // chain, and cos(pi/2) carries ~6e-17 of representation noise otherwise.
  double cos_phi = std::cos(p.phi);
  double sin_phi = std::sin(p.phi);
  if (std::abs(cos_phi) < 1e-12) cos_phi = 0.0;
  if (std::abs(sin_phi) < 1e-12) sin_phi = 0.0;
  const Complex hop = p.t_c * Complex{cos_phi, sin_phi};
  spec.pump.diagonal().setConstant(4.0 * p.t_d);
  for (Eigen::Index j = 1; j < n; ++j) {
    spec.coupling_g(j, j - 1) = hop;
    spec.coupling_g(j - 1, j) = std::conj(hop);
    spec.pump(j, j - 1) = 2.0 * p.t_d;
    spec.pump(j - 1, j) = 2.0 * p.t_d;
  }
  if (boundary == Boundary::periodic && n > 2) {
    spec.coupling_g(0, n - 1) = hop;
    spec.coupling_g(n - 1, 0) = std::conj(hop);
    spec.pump(0, n - 1) = 2.0 * p.t_d;
    spec.pump(n - 1, 0) = 2.0 * p.t_d;
  }
  return spec;
}

}  // namespace topamp::model
