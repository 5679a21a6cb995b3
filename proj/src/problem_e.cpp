#include "muntz/problem_e.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace muntz {

namespace {

void require_theorem_domain(const BigReal& eps) {
  if (!(eps > 0.0) || !(eps < 0.5)) throw std::domain_error("bound requires 0 < eps < 1/2");
}

const double kLog10SilverRatio = std::log10(1.0 + std::sqrt(2.0));

/// q(x^2) = sum_{k in [lo, hi]} c_k x^{2k}, Horner in t = x^2.
BigReal partial_sum(const ProblemESolution& sol, long lo, long hi, const BigReal& x) {
  const BigReal t = x * x;
  BigReal acc(x.precision());
  for (long k = hi; k >= lo; --k) {
    acc *= t;
    acc += sol.coefficient(k);
  }
  if (lo > 0) acc *= pow(t, lo);
  return acc;
}

}  // namespace

ProblemESolution to_problem_e(BestApprox approx) {
  const long two_n = 2 * approx.n;
  MonomialPoly coeffs = approx.monomial_even;
  BigReal cmax = coeffs.max_abs_coeff();
  const double cmax_log10 = to_log10_magnitude(cmax);
  BigReal eps = approx.eps;
  return ProblemESolution{.eps = std::move(eps),
                          .two_n = two_n,
                          .coeffs = std::move(coeffs),
                          .cmax = std::move(cmax),
                          .cmax_log10 = cmax_log10,
                          .approx = std::move(approx)};
}

ProblemESolution solve_problem_e(long two_n, const RemezConfig& config) {
  if (two_n < 0) throw std::invalid_argument("degree must be nonnegative");
  if (two_n % 2 != 0) throw std::invalid_argument("degree must be even");
  return to_problem_e(remez_solve(two_n / 2, config));
}

BigReal audit_residual(const ProblemESolution& sol, int points, std::optional<Precision> precision) {
  if (points < 2) throw std::invalid_argument("audit needs at least two points");
  const Precision prec = precision.value_or(sol.coeffs.precision());
  std::vector<BigReal> c;
  c.reserve(static_cast<std::size_t>(sol.n() + 1));
  for (long k = 0; k <= sol.n(); ++k) c.push_back(sol.coefficient(k).with_precision(prec));

  BigReal worst(prec), x(prec), t(prec), acc(prec);
  for (int j = 0; j < points; ++j) {
    x = BigReal(static_cast<long>(j), prec);
    x /= static_cast<long>(points - 1);
    mpfr_mul(t.raw(), x.raw(), x.raw(), MPFR_RNDN);
    acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      mpfr_mul(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
      mpfr_add(acc.raw(), acc.raw(), c[k].raw(), MPFR_RNDN);
    }
    mpfr_sub(acc.raw(), x.raw(), acc.raw(), MPFR_RNDN);
    mpfr_abs(acc.raw(), acc.raw(), MPFR_RNDN);
    if (acc > worst) worst = acc;
  }
  return worst;
}

BigReal thm2_n_lower_bound(const BigReal& eps) {
  require_theorem_domain(eps);
  return BigReal(1L, eps.precision()) / (eps * 20L);
}

BigReal thm2_cmax_lower_bound(const BigReal& eps) {
  require_theorem_domain(eps);
  // 2^{1/(40 eps)} overflows double near eps = 1e-6 but not MPFR's exponent range.
  BigReal e = BigReal(1L, eps.precision()) / (eps * 40L);
  mpfr_exp2(e.raw(), e.raw(), MPFR_RNDN);
  return BigReal::ratio(3, 4, eps.precision()) * eps * e;
}

double thm2_cmax_lower_bound_log10(const BigReal& eps) {
  require_theorem_domain(eps);
  const double exponent = (BigReal(1L, eps.precision()) / (eps * 40L)).to_double();
  return std::log10(0.75) + to_log10_magnitude(eps) + exponent * std::log10(2.0);
}

BigReal bernstein_eps_lower_bound(long two_n, Precision p) {
  if (two_n < 2) throw std::invalid_argument("Bernstein bound needs degree >= 2");
  const BigReal silver = BigReal(1L, p) + sqrt(BigReal(2L, p));
  return BigReal(1L, p) / (silver * 4L * (two_n - 1));
}

ConjecturedBounds conjectured_bounds(const BigReal& eps, long n) {
  require_theorem_domain(eps);
  if (n < 1) throw std::invalid_argument("conjectured bounds need n >= 1");
  const Precision p = eps.precision();
  const BigReal silver = BigReal(1L, p) + sqrt(BigReal(2L, p));
  const BigReal nn(n, p);
  BigReal cmax_lower = pow(silver, 2 * n) / (nn * sqrt(nn) * 16L);
  const double log10_cmax = 2.0 * static_cast<double>(n) * kLog10SilverRatio - std::log10(16.0) -
                            1.5 * std::log10(static_cast<double>(n));
  return {BigReal(1L, p) / (eps * 8L), std::move(cmax_lower), log10_cmax};
}

BoundReport verify_theorem2_certificate(const ProblemESolution& sol, int grid_points) {
  require_theorem_domain(sol.eps);
  const Precision p = sol.eps.precision();
  const long n = sol.n();
  const BigReal nn(n, p);

  BoundReport r;
  r.eps = sol.eps;
  r.two_n = sol.two_n;
  r.cmax_log10 = sol.cmax_log10;
  r.thm2_n_lower = thm2_n_lower_bound(sol.eps);
  r.thm2_cmax_lower = thm2_cmax_lower_bound(sol.eps);
  r.thm2_cmax_lower_log10 = thm2_cmax_lower_bound_log10(sol.eps);
  r.bernstein_eps_lower = bernstein_eps_lower_bound(sol.two_n, p);
  ConjecturedBounds conj = conjectured_bounds(sol.eps, n);
  r.conjectured_n_lower = conj.n_lower;
  r.conjectured_cmax_lower = conj.cmax_lower;
  r.conjectured_cmax_lower_log10 = conj.cmax_lower_log10;

  r.thm2_n_satisfied = nn > r.thm2_n_lower;
  r.thm2_cmax_satisfied = sol.cmax > r.thm2_cmax_lower;
  r.bernstein_satisfied = sol.eps > r.bernstein_eps_lower;
  r.conjectured_n_satisfied = nn > r.conjectured_n_lower;
  r.conjectured_cmax_satisfied = sol.cmax > r.conjectured_cmax_lower;

  const long k_split = (BigReal(1L, p) / (sol.eps * 80L)).to_long_floor();
  r.split_index = k_split;
  r.head_error_half = BigReal(p);
  r.tail_sup_half = BigReal(p);
  for (int j = 0; j < grid_points; ++j) {
    BigReal x(static_cast<long>(j), p);
    x /= 2L * (grid_points - 1);
    const BigReal head = partial_sum(sol, 0, std::min(k_split, n), x);
    r.head_error_half = max(r.head_error_half, abs(x - head));
    if (k_split < n) r.tail_sup_half = max(r.tail_sup_half, abs(partial_sum(sol, k_split + 1, n, x)));
  }
  BigReal quarter_power(1L, p);
  mpfr_mul_2si(quarter_power.raw(), quarter_power.raw(), -2 * (k_split + 1), MPFR_RNDN);
  r.tail_bound_half = sol.cmax * quarter_power * 4L / 3L;
  return r;
}

}  // namespace muntz
