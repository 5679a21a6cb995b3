#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "muntz/polybasis.hpp"
#include "muntz/scalar.hpp"

namespace muntz {

using ScalarFunction = std::function<BigReal(const BigReal&)>;

/// Coincident or out-of-order reference points.
class DegenerateReference : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The error failed to alternate across the reference, so no n+2 alternating
/// extrema could be located.
class ReferenceCollapse : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Trial points of a degree-n exchange: n+2 strictly increasing points in
/// [0,1]; the error sign alternates starting from first_sign.
struct ReferenceSet {
  std::vector<BigReal> points;
  int first_sign = 1;

  std::size_t size() const { return points.size(); }
  int sign(std::size_t i) const { return i % 2 == 0 ? first_sign : -first_sign; }
  /// Throws DegenerateReference unless strictly increasing within [0,1].
  void validate() const;
};

struct RemezConfig {
  int max_iterations = 100;
  /// Convergence when defect <= 10^(-digits / defect_tol_divisor).
  int defect_tol_divisor = 4;
  int coarse_samples = 32;
  int max_collapse_retries = 3;
  PrecisionPolicy policy{};
  std::optional<int> precision_digits;  // overrides the policy

  int digits_for(long n) const;
};

/// Signed level h and the polynomial p (Chebyshev on [0,1]) with
/// f(t_i) - p(t_i) = (-1)^i h on the reference.
struct LevelledSolution {
  ChebyshevPoly poly;
  BigReal level;
};

struct IterationRecord {
  BigReal level;      // |h|, lower bound on the minimax error
  BigReal max_error;  // max |f - p| over the located extrema, upper bound
  BigReal defect;     // (max_error - level) / max_error
};

/// Converged best approximation of degree n in t on [0,1].
struct BestApprox {
  long n = 0;
  BigReal eps;    // minimax error
  BigReal level;  // signed h of the final levelled solve
  ChebyshevPoly cheb;           // p(t) on [0,1]
  MonomialPoly monomial_even;   // p(x^2) in powers of x, degree 2n
  ReferenceSet reference;       // final alternating extrema, in t
  std::vector<BigReal> extremal_errors;  // signed f - p at the reference
  int iterations = 0;
  BigReal equioscillation_defect;
  BigReal defect_tolerance;
  std::vector<IterationRecord> history;
  int precision_digits = 0;
};

/// Chebyshev points of the second kind on [0,1], squared:
/// t_j = ((1 + cos(j pi / (n+1))) / 2)^2, returned in increasing order.
ReferenceSet initial_reference(long n, Precision p);

/// Barycentric weights w_i = 1 / prod_{j != i} (t_i - t_j),
/// h = sum w_i f_i / sum (-1)^i w_i, and the interpolant of f_i - (-1)^i h
/// sampled to Chebyshev coefficients. Throws DegenerateReference.
LevelledSolution levelled_solve(const ScalarFunction& f, const ReferenceSet& ref);

struct ExtremaOptions {
  int coarse_samples = 32;
  /// Refinement stops at relative width 10^(-refine_digits / 2).
  int refine_digits = 50;
};

/// One alternating extremum of err on [0,1] per sign-change-separated region
/// around the reference points. Endpoints 0 and 1 are candidates. Throws
/// ReferenceCollapse when err does not alternate across ref.
std::vector<BigReal> find_extrema(const ScalarFunction& err, const ReferenceSet& ref,
                                  const ExtremaOptions& options = {});

/// Best uniform approximation of sqrt(t) on [0,1] by a degree-n polynomial in
/// t, i.e. of |x| on [-1,1] by an even polynomial of degree 2n.
BestApprox remez_solve(long n, const RemezConfig& config = {});

/// Same engine for an arbitrary continuous target on [0,1].
BestApprox remez_solve(const ScalarFunction& f, long n, const RemezConfig& config = {});

}  // namespace muntz
