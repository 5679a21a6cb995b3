#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "muntz/remez.hpp"

using namespace muntz;

namespace {

const Precision P = Precision::digits(50);
const ScalarFunction sqrt_fn = [](const BigReal& t) { return sqrt(t); };

ReferenceSet ref_of(std::initializer_list<double> ts, int first_sign = 1) {
  ReferenceSet r{.points = {}, .first_sign = first_sign};
  for (double t : ts) r.points.emplace_back(t, P);
  return r;
}

BigReal tol(int exponent) { return pow10(exponent, P); }

}  // namespace

TEST_CASE("initial reference") {
  const auto r0 = initial_reference(0, P);
  REQUIRE(r0.size() == 2);
  CHECK(r0.points[0] == 0.0);
  CHECK(r0.points[1] == 1.0);

  const auto r1 = initial_reference(1, P);
  REQUIRE(r1.size() == 3);
  CHECK(r1.points[0] == 0.0);
  CHECK(abs(r1.points[1] - BigReal(0.5, P)) < tol(-48));
  CHECK(r1.points[2] == 1.0);

  const auto r2 = initial_reference(2, P);
  REQUIRE(r2.size() == 4);
  CHECK(abs(r2.points[1] - BigReal(0.25, P)) < tol(-48));
  CHECK(abs(r2.points[2] - BigReal(0.75, P)) < tol(-48));

  for (long n : {5L, 40L, 141L}) {
    const auto r = initial_reference(n, P);
    CHECK(r.size() == static_cast<std::size_t>(n + 2));
    CHECK_NOTHROW(r.validate());
  }
  CHECK_THROWS_AS(initial_reference(-1, P), std::invalid_argument);
}

TEST_CASE("levelled solve: best constant") {
  const auto lev = levelled_solve(sqrt_fn, ref_of({0, 1}));
  CHECK(abs(abs(lev.level) - BigReal(0.5, P)) < tol(-48));
  CHECK(lev.poly.degree() == 0);
  CHECK(abs(lev.poly[0] - BigReal(0.5, P)) < tol(-48));
}

TEST_CASE("levelled solve: linear case is already optimal on {0, 1/4, 1}") {
  // sqrt(t) - (1/8 + t) equals -1/8, +1/8, -1/8 at t = 0, 1/4, 1.
  const auto lev = levelled_solve(sqrt_fn, ref_of({0, 0.25, 1}));
  CHECK(abs(lev.level + BigReal(0.125, P)) < tol(-48));
  for (double t : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const BigReal tt(t, P);
    CHECK(abs(eval(lev.poly, tt) - (BigReal(0.125, P) + tt)) < tol(-47));
  }
}

TEST_CASE("levelled solve residuals alternate exactly on random references") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<ScalarFunction> targets = {
      sqrt_fn, [](const BigReal& t) { return exp(t); }, [](const BigReal& t) { return cos(t * 5L); }};
  for (const auto& f : targets) {
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 3 + trial;
      std::vector<double> pts;
      for (int i = 0; i < m; ++i) pts.push_back(u(rng));
      std::sort(pts.begin(), pts.end());
      ReferenceSet ref;
      for (double t : pts) ref.points.emplace_back(t, P);
      const auto lev = levelled_solve(f, ref);
      CHECK(lev.poly.degree() == static_cast<std::size_t>(m - 2));
      for (int i = 0; i < m; ++i) {
        const BigReal r = f(ref.points[i]) - eval(lev.poly, ref.points[i]);
        const BigReal want = i % 2 == 0 ? lev.level : -lev.level;
        CHECK(abs(r - want) < tol(-35));
      }
    }
  }
}

TEST_CASE("degenerate references are rejected") {
  CHECK_THROWS_AS(levelled_solve(sqrt_fn, ref_of({0, 0.5, 0.5, 1})), DegenerateReference);
  CHECK_THROWS_AS(levelled_solve(sqrt_fn, ref_of({0.5, 0.2, 1})), DegenerateReference);
  CHECK_THROWS_AS(levelled_solve(sqrt_fn, ref_of({0, 1.5})), DegenerateReference);
}

TEST_CASE("find_extrema of a monotone error returns the endpoints") {
  const ScalarFunction err = [](const BigReal& t) { return t - BigReal(0.5, t.precision()); };
  const auto ext = find_extrema(err, ref_of({0, 1}));
  REQUIRE(ext.size() == 2);
  CHECK(ext[0] == 0.0);
  CHECK(ext[1] == 1.0);
}

TEST_CASE("find_extrema locates the interior maximizer of sqrt(t) - 1/8 - t") {
  // Oracle: d/dt (sqrt t - t) = 1/(2 sqrt t) - 1 = 0 at t = 1/4, value +1/8;
  // the endpoint values are -1/8. Starting from {0, 1/16, 1}.
  const ScalarFunction err = [](const BigReal& t) { return sqrt(t) - BigReal(0.125, t.precision()) - t; };
  const auto ext = find_extrema(err, ref_of({0, 0.0625, 1}, -1), {.coarse_samples = 32, .refine_digits = 50});
  REQUIRE(ext.size() == 3);
  CHECK(ext[0] == 0.0);
  CHECK(abs(ext[1] - BigReal(0.25, P)) < tol(-24));
  CHECK(abs(err(ext[1]) - BigReal(0.125, P)) < tol(-48));
  CHECK(ext[2] == 1.0);
}

TEST_CASE("find_extrema rejects a non-alternating reference") {
  const ScalarFunction err = [](const BigReal& t) { return t + BigReal(1L, t.precision()); };
  CHECK_THROWS_AS(find_extrema(err, ref_of({0, 0.5, 1})), ReferenceCollapse);
}

TEST_CASE("remez closed forms n = 0 and n = 1") {
  const auto a0 = remez_solve(0);
  const BigReal slack = pow10(5 - a0.precision_digits, P);
  CHECK(abs(a0.eps - BigReal(0.5, P)) <= slack);
  CHECK(abs(a0.cheb[0] - BigReal(0.5, P)) <= slack);

  const auto a1 = remez_solve(1);
  CHECK(abs(a1.eps - BigReal(0.125, P)) <= slack);
  const auto& m = a1.monomial_even;
  REQUIRE(m.degree() == 2);
  CHECK(abs(m[0] - BigReal(0.125, P)) <= slack);
  CHECK(m[1].is_zero());
  CHECK(abs(m[2] - BigReal(1L, P)) <= slack);
  CHECK(abs(m.max_abs_coeff() - BigReal(1L, P)) <= slack);
}

TEST_CASE("remez n = 14 matches the 2n = 28 row of the table") {
  const auto a = remez_solve(14);
  CHECK(a.eps <= 0.01);
  CHECK(a.eps > 0.0099);
  const double cmax = a.monomial_even.max_abs_coeff().to_double();
  CHECK(std::abs(cmax - 7.4e7) <= 0.03 * 7.4e7);
}

TEST_CASE("equioscillation, bracketing and parity on converged solves") {
  for (long n : {2L, 7L, 13L, 25L, 40L}) {
    CAPTURE(n);
    const auto a = remez_solve(n);
    REQUIRE(a.reference.size() == static_cast<std::size_t>(n + 2));
    REQUIRE(a.extremal_errors.size() == a.reference.size());
    CHECK_NOTHROW(a.reference.validate());
    for (std::size_t i = 0; i < a.extremal_errors.size(); ++i) {
      const BigReal& e = a.extremal_errors[i];
      CHECK(e.sign() == a.reference.sign(i));
      CHECK(abs(abs(e) - a.eps) / a.eps <= a.defect_tolerance);
    }
    CHECK(a.equioscillation_defect <= a.defect_tolerance);
    for (std::size_t k = 1; k < a.monomial_even.coeffs().size(); k += 2) CHECK(a.monomial_even[k].is_zero());
    CHECK(a.monomial_even.parity() == Parity::EvenOnly);
    // de la Vallee Poussin: |h| <= eps <= max|err| at every iteration, and |h| never decreases.
    for (std::size_t i = 0; i < a.history.size(); ++i) {
      CHECK(a.history[i].level <= a.history[i].max_error);
      CHECK(a.history[i].level <= a.eps);
      if (i > 0) CHECK(a.history[i].level >= a.history[i - 1].level);
    }
  }
}

TEST_CASE("post-convergence extremum search at n = 13 returns 15 levelled points") {
  const auto a = remez_solve(13);
  const ChebyshevPoly p = a.cheb;
  const ScalarFunction err = [&](const BigReal& t) { return sqrt(t) - eval(p, t); };
  const auto ext = find_extrema(err, a.reference, {.coarse_samples = 32, .refine_digits = a.precision_digits});
  REQUIRE(ext.size() == 15);
  for (const auto& t : ext) CHECK(abs(abs(err(t)) - a.eps) / a.eps <= a.defect_tolerance);
}

TEST_CASE("minimax error decreases strictly and respects Bernstein's lower bound") {
  const double silver = 1.0 + std::sqrt(2.0);
  BigReal prev(1L, P);
  for (long n = 0; n <= 30; ++n) {
    const auto a = remez_solve(n);
    CAPTURE(n);
    CHECK(a.eps < prev);
    if (n >= 1) CHECK(a.eps > 1.0 / (4.0 * silver * (2.0 * n - 1.0)));
    prev = a.eps;
  }
}

TEST_CASE("2n eps(n) is within 2% of Bernstein's constant for n >= 50") {
  for (long n : {50L, 64L}) {
    const auto a = remez_solve(n);
    CHECK(std::abs(2.0 * n * a.eps.to_double() - 0.2801694990) <= 0.02 * 0.2801694990);
  }
}

TEST_CASE("configuration: iteration cap and precision override") {
  RemezConfig capped;
  capped.max_iterations = 1;
  CHECK_THROWS_AS(remez_solve(20, capped), ConvergenceFailure);

  RemezConfig wide;
  wide.precision_digits = 80;
  const auto a = remez_solve(5, wide);
  CHECK(a.precision_digits == 80);
  CHECK(a.eps.precision() == Precision::digits(80));
  const auto b = remez_solve(5);
  CHECK(abs(a.eps - b.eps) <= b.eps * b.defect_tolerance * 2L);
  CHECK_THROWS_AS(remez_solve(-1), std::invalid_argument);
}
