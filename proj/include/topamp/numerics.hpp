// numerics.hpp — dense complex linear algebra and adaptive quadrature kernels
//
// The only module with low-level numerical code. Accuracy contracts:
//   svd          : ||U†U - 1||, ||V†V - 1|| <= 1e-10, reconstruction <= 1e-10 ||A||
//   eig          : ||A B - B diag(lambda)|| <= 1e-9 ||A|| for diagonalizable A
//   solve_linear : ||A x - b|| <= 1e-10 ||A|| ||x||, near-singular above cond 1e14
//   quad_adaptive: integral over (-inf, inf) to a requested relative tolerance

#pragma once

#include <functional>

#include "topamp/types.hpp"

namespace topamp::numerics {

// Singular value decomposition A = U diag(s) V†.
// Singular values are sorted descending, so edge modes sit at the last indices.
struct SvdTriple {
  CMatrix u;
  RVector s;
  CMatrix v;
};

SvdTriple svd(const CMatrix& a);

// Descending singular values only (cheaper; used by phase-map grids).
RVector singular_values(const CMatrix& a);

// Right eigensystem A B = B diag(values). B columns have unit norm and their
// first non-negligible component rotated real positive; pairs are sorted by
// descending real part, then ascending imaginary part.
//
// Exactly triangular inputs take an exact path: the eigenvalues are read off
// the diagonal, and eigenvectors are obtained by substitution (best effort for
// defective matrices; `residual` reports ||A B - B diag||/||A|| either way).
struct EigenSystem {
  CVector values;
  CMatrix vectors;
  double residual = 0.0;

  double max_real_part() const { return values.real().maxCoeff(); }
};

EigenSystem eig(const CMatrix& a);

// Solve a x = b. Throws NearSingularError when the system is singular to
// working precision (exceptional point / instability signal), carrying the
// condition estimate.
CMatrix solve_linear(const CMatrix& a, const CMatrix& b);

// Max pairing distance between two spectra compared as multisets (greedy
// nearest-neighbour matching; robust against ordering ties).
double spectrum_deviation(const CVector& a, const CVector& b);

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;        // extra absolute floor for near-zero integrals
  int max_intervals = 200000;  // refinement budget
  int max_window_doublings = 60;
};

// Integral of f over (-inf, inf) for f decaying at least as 1/w^2.
// Globally adaptive bisection with an embedded Gauss-Kronrod 7/15 rule on a
// window centered at `center`, initially +- 50*scale, doubled until the
// analytic 1/w^2 tail bound drops below tolerance. Throws QuadratureError
// (carrying the best estimate and residual) if the budget is exhausted.
double quad_adaptive(const std::function<double(double)>& f, double center, double scale,
                     double rel_tol);
double quad_adaptive(const std::function<double(double)>& f, double center, double scale,
                     const QuadratureOptions& opts);

}  // namespace topamp::numerics
