#pragma once

#include <optional>

#include "muntz/polybasis.hpp"
#include "muntz/remez.hpp"
#include "muntz/scalar.hpp"

namespace muntz {

/// Even-power approximation of x on [0,1]:  |x - sum_k c_k x^{2k}| <= eps.
struct ProblemESolution {
  BigReal eps;
  long two_n = 0;
  MonomialPoly coeffs;  // in powers of x; c_k sits in slot 2k
  BigReal cmax;
  double cmax_log10 = 0.0;
  BestApprox approx;

  long n() const { return two_n / 2; }
  /// c_k, the coefficient of x^{2k}.
  const BigReal& coefficient(long k) const { return coeffs[static_cast<std::size_t>(2 * k)]; }
};

ProblemESolution solve_problem_e(long two_n, const RemezConfig& config = {});
ProblemESolution to_problem_e(BestApprox approx);

/// sup over `points` equispaced x in [0,1] of |x - sum c_k x^{2k}|, with the
/// coefficients and all arithmetic rounded to `precision` (the solution's own
/// precision when absent).
BigReal audit_residual(const ProblemESolution& sol, int points = 1000,
                       std::optional<Precision> precision = std::nullopt);

// Lower bounds. Theorem-domain functions require 0 < eps < 1/2 and throw
// std::domain_error otherwise.

/// 1 / (20 eps)
BigReal thm2_n_lower_bound(const BigReal& eps);
/// 0.75 eps 2^{1/(40 eps)}
BigReal thm2_cmax_lower_bound(const BigReal& eps);
double thm2_cmax_lower_bound_log10(const BigReal& eps);
/// 1 / (4 (1 + sqrt 2) (two_n - 1)); two_n >= 2.
BigReal bernstein_eps_lower_bound(long two_n, Precision p);

struct ConjecturedBounds {
  BigReal n_lower;     // 1 / (8 eps)
  BigReal cmax_lower;  // (1 + sqrt 2)^{2n} / (16 n^{1.5})
  double cmax_lower_log10 = 0.0;
};
ConjecturedBounds conjectured_bounds(const BigReal& eps, long n);

struct BoundReport {
  BigReal eps;
  long two_n = 0;
  double cmax_log10 = 0.0;

  BigReal thm2_n_lower;
  BigReal thm2_cmax_lower;
  double thm2_cmax_lower_log10 = 0.0;
  BigReal bernstein_eps_lower;
  BigReal conjectured_n_lower;
  BigReal conjectured_cmax_lower;
  double conjectured_cmax_lower_log10 = 0.0;

  bool thm2_n_satisfied = false;
  bool thm2_cmax_satisfied = false;
  bool bernstein_satisfied = false;
  bool conjectured_n_satisfied = false;
  bool conjectured_cmax_satisfied = false;

  // Head/tail split at K = floor(1/(80 eps)), measured on [-1/2, 1/2].
  // Diagnostic only.
  long split_index = 0;
  BigReal head_error_half;  // sup ||x| - sum_{k<=K} c_k x^{2k}|
  BigReal tail_sup_half;    // sup |sum_{k>K} c_k x^{2k}|
  BigReal tail_bound_half;  // (4/3) cmax 2^{-2(K+1)}

  bool theorem2_holds() const { return thm2_n_satisfied && thm2_cmax_satisfied; }
};

/// Evaluates every bound at the solution's own eps and degree and re-enacts
/// the head/tail split of the coefficient argument. Requires eps < 1/2.
BoundReport verify_theorem2_certificate(const ProblemESolution& sol, int grid_points = 1000);

}  // namespace muntz
