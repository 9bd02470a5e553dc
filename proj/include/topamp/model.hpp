// model.hpp — lattice specifications and the non-Hermitian dynamical matrix
//
// A lattice is described by local frequencies omega_j, local decay rates
// kappa_j, a Hermitian zero-diagonal coherent coupling matrix G, and Hermitian
// positive semi-definite incoherent pump / loss matrices gamma_p, gamma_d.
// The linear Langevin dynamics  da/dt = H a + noise  is governed by
//
//   H = Gamma - i diag(omega) - i G,
//   Gamma = -diag(kappa)/2 + gamma_p/2 - gamma_d^T/2.
//
// Site indices in every public interface are 1-based, matching the physics
// convention used throughout (j = 1 .. N).

#pragma once

#include <string>
#include <vector>

#include "topamp/types.hpp"

namespace topamp::model {

enum class Boundary { open, periodic };

// The five scalars (plus size) of the nearest-neighbour non-reciprocal chain.
// kappa is fixed by the couplings: kappa = 8 t_d - 2 gamma_p.
struct ChainParams {
  double t_c = 1.0;      // coherent hopping amplitude, > 0
  double t_d = 1.0;      // dissipative hopping amplitude, > 0
  double phi = 0.0;      // tunneling phase
  double gamma_p = 0.0;  // net incoherent pump rate, 0 <= gamma_p < 4 t_d
  double omega0 = 0.0;   // common local mode frequency
  int n_sites = 2;

  double kappa() const { return 8.0 * t_d - 2.0 * gamma_p; }
};

struct LatticeSpec {
  int n_sites = 0;
  RVector omega;       // local mode frequencies
  RVector kappa;       // local decay rates, >= 0
  CMatrix coupling_g;  // Hermitian, zero diagonal
  CMatrix pump;        // gamma_p, Hermitian PSD
  CMatrix loss;        // gamma_d, Hermitian PSD
};

struct Violation {
  std::string field;
  std::string invariant;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Empty report iff all LatticeSpec invariants hold. Hermiticity and positive
// semi-definiteness are checked to 1e-10 relative.
ValidationReport validate_spec(const LatticeSpec& spec);

class SpecValidationError : public std::invalid_argument {
 public:
  explicit SpecValidationError(ValidationReport report)
      : std::invalid_argument("invalid lattice spec: " + report.to_string()),
        report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

struct DynamicalMatrix {
  CMatrix h;
  LatticeSpec source_spec;

  int n_sites() const { return source_spec.n_sites; }
};

// H = Gamma - i diag(omega) - i G. Throws SpecValidationError on an invalid spec.
DynamicalMatrix build_dynamical_matrix(const LatticeSpec& spec);

// Nearest-neighbour chain with coherent hops t_c e^{+i phi} (towards larger j)
// and dissipative hops t_d:
//
//   G_{j,j-1} = t_c e^{i phi},            G_{j,j+1} = t_c e^{-i phi},
//   gamma_p   = 4 t_d on the diagonal, 2 t_d on the first off-diagonals,
//   gamma_d   = 0,   kappa_j = 8 t_d - 2 gamma_p,   omega_j = omega0.
//
// The orientation makes site 1 the natural input port: for phi in (0, pi) the
// lattice amplifies towards larger site indices. A periodic boundary wraps
// both couplings across the ends. Throws std::domain_error when
// gamma_p >= 4 t_d (kappa would be non-positive) or t_c, t_d <= 0.
LatticeSpec build_chain_spec(const ChainParams& params, Boundary boundary);

}  // namespace topamp::model
