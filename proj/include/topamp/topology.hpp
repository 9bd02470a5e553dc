// topology.hpp — the SVD-to-topological-insulator mapping
//
// The doubled Hermitian matrix
//
//   Heff(w) = [[ 0,          H + i w 1 ],
//              [ H† - i w 1, 0         ]]
//
// anticommutes exactly with Sigma_z = diag(+1..+1, -1..-1), and its spectrum
// is the symmetric pair set {+-s_n} of the singular values of H + i w 1, with
// eigenvectors (u^n ⊗ up +- v^n ⊗ down)/sqrt(2). Small singular values are
// edge modes; separation of the smallest from the bulk (the singular gap
// s_{N-1} - s_N in descending order) signals a topologically non-trivial
// phase, which on the 1D Bloch reduction is counted by a winding number.

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "topamp/model.hpp"
#include "topamp/types.hpp"

namespace topamp::topology {

struct EffectiveHamiltonian {
  double omega = 0.0;
  CMatrix mat;  // Hermitian 2N x 2N, exact chiral anticommutation by construction
};

EffectiveHamiltonian effective_hamiltonian(const model::DynamicalMatrix& h, double omega);

// Diagnostic for the duality between eig(Heff) and svd(H + i w 1).
struct DualityReport {
  double max_eigenvalue_deviation = 0.0;  // eigenvalues vs sorted {+-s_n}
  double max_vector_residual = 0.0;       // ||Heff x - lambda x|| for x = (u ⊗ up +- v ⊗ down)/sqrt 2
};

DualityReport verify_svd_duality(const model::DynamicalMatrix& h, double omega);

struct EdgeMode {
  double singular_value = 0.0;
  CVector left_vector;       // u^n  (input-side envelope)
  CVector right_vector;      // v^n  (output-side envelope)
  double localization_fit = 0.0;  // xi from log-linear regression of |u_j| vs j
};

// The n_edge smallest singular values with their singular vectors.
std::vector<EdgeMode> edge_modes(const model::DynamicalMatrix& h, double omega, int n_edge = 1);

// 1D momentum-space model: Heff_k(w) = hx(k) sigma_x + (hy(k) - w) sigma_y.
struct BlochModel {
  std::function<double(double)> hx;
  std::function<double(double)> hy;
  double omega0 = 0.0;
};

// Bloch reduction of the nearest-neighbour chain:
//   hx(k) = gamma_p - 2 t_d + 2 t_d cos k,   hy(k) = 2 t_c cos(k + phi) + omega0.
BlochModel chain_bloch_model(const model::ChainParams& params);

// Winding of (hx(k), hy(k) - w) around the origin over k in [0, 2pi), by
// discrete angle accumulation. Orientation is fixed so that the amplifying
// phase of the chain (phi in (0, pi)) carries nu = +1. Throws GaplessError
// when min_k |h| <= 1e-8 max_k |h|.
int winding_number(const BlochModel& model, double omega, int samples = 8192);

// Critical pump rates (gamma_p^-, gamma_p^+) bounding the nu = 1 phase of the
// chain at detuning delta = w - omega0; empty when |delta| >= 2 t_c.
std::optional<std::pair<double, double>> critical_pump_rates(double t_c, double t_d, double phi,
                                                             double delta_omega);

enum class SymmetryClass { AIII, BDI, CI, DIII };

const char* to_string(SymmetryClass c);

// Ten-fold-way classes realizable by the Bloch reduction:
//   CI  : hx and hy - w both even in k
//   DIII: hx and hy - w both odd in k
//   BDI : (hx(k), -(hy(k)-w)) and (hx(-k), hy(-k)-w) related by a
//         k-independent rotation
//   AIII: otherwise (in particular whenever |h(k)| != |h(-k)|)
// All classes matching within tolerance are reported; {AIII} when none do.
std::vector<SymmetryClass> symmetry_class(const BlochModel& model, double omega,
                                          int samples = 1024, double rel_tol = 1e-9);

struct PhaseMap {
  RVector omegas;
  RVector gamma_ps;
  RMatrix gap;          // s_{N-1} - s_N (descending order), >= 0;  (w-index, gp-index)
  Eigen::MatrixXi winding;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> gapless;  // true where no winding defined
};

// Singular gap and winding of the chain family over an (omega, gamma_p) grid,
// open boundaries, n_sites sites.
PhaseMap singular_gap_map(const model::ChainParams& family, const RVector& omegas,
                          const RVector& gamma_ps, int n_sites);

}  // namespace topamp::topology
