// errors.hpp — typed exceptions that carry numerical diagnostics

#pragma once

#include <stdexcept>
#include <string>

namespace topamp {

// Linear system is singular or its condition estimate exceeds ~1e14.
// For response matrices this signals an exceptional point or an instability.
class NearSingularError : public std::runtime_error {
 public:
  NearSingularError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// Adaptive quadrature ran out of refinement budget; carries the best estimate.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate, double residual)
      : std::runtime_error(what), best_estimate_(best_estimate), residual_(residual) {}
  double best_estimate() const noexcept { return best_estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

// The Bloch vector passes through (or too close to) the origin: no winding.
class GaplessError : public std::runtime_error {
 public:
  GaplessError(const std::string& what, double min_norm)
      : std::runtime_error(what), min_norm_(min_norm) {}
  double min_norm() const noexcept { return min_norm_; }

 private:
  double min_norm_;
};

// A steady state was requested for a lattice with max Re(lambda) >= 0.
class UnstableError : public std::runtime_error {
 public:
  UnstableError(const std::string& what, double max_real_part)
      : std::runtime_error(what), max_real_part_(max_real_part) {}
  double max_real_part() const noexcept { return max_real_part_; }

 private:
  double max_real_part_;
};

}  // namespace topamp
