#include "muntz/remez.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace muntz {

namespace {

BigReal exp10_of(double e, Precision p) {
  BigReal r(e, p);
  mpfr_exp10(r.raw(), r.raw(), MPFR_RNDN);
  return r;
}

/// Brent's localmin (golden section with parabolic steps), run on -g so that
/// it returns a local maximizer of g inside (a, b).
std::pair<BigReal, BigReal> brent_maximize(const ScalarFunction& g, BigReal a, BigReal b,
                                           const BigReal& rel_tol, const BigReal& abs_tol,
                                           int max_evals = 400) {
  const Precision prec = a.precision();
  const BigReal golden = (BigReal(3L, prec) - sqrt(BigReal(5L, prec))) / 2L;
  auto f = [&](const BigReal& x) { return -g(x); };

  BigReal x = a + golden * (b - a);
  BigReal w = x, v = x;
  BigReal fx = f(x);
  BigReal fw = fx, fv = fx;
  BigReal d(prec), e(prec);

  for (int evals = 1; evals < max_evals; ++evals) {
    const BigReal m = (a + b) / 2L;
    const BigReal tol = rel_tol * abs(x) + abs_tol;
    const BigReal t2 = tol * 2L;
    if (abs(x - m) <= t2 - (b - a) / 2L) break;

    BigReal p(prec), q(prec), r(prec);
    bool parabolic = false;
    if (abs(e) > tol) {
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = (q - r) * 2L;
      if (q > 0.0) p = -p; else q = -q;
      r = e;
      e = d;
      if (abs(p) < abs(q * r / 2L) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const BigReal u = x + d;
        if (u - a < t2 || b - u < t2) d = x < m ? tol : -tol;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m ? b : a) - x;
      d = golden * e;
    }
    const BigReal u = abs(d) >= tol ? x + d : (d > 0.0 ? x + tol : x - tol);
    const BigReal fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = std::move(w); fv = std::move(fw);
      w = std::move(x); fw = std::move(fx);
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = std::move(w); fv = std::move(fw);
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, -fx};
}

int sign_of(const BigReal& v) { return v.sign() > 0 ? 1 : (v.sign() < 0 ? -1 : 0); }

}  // namespace

void ReferenceSet::validate() const {
  if (points.size() < 2) throw DegenerateReference("reference needs at least two points");
  if (points.front() < 0.0 || points.back() > 1.0) throw DegenerateReference("reference point outside [0,1]");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1] < points[i])) {
      throw DegenerateReference("reference points not strictly increasing at index " + std::to_string(i));
    }
  }
  if (first_sign != 1 && first_sign != -1) throw DegenerateReference("first_sign must be +1 or -1");
}

int RemezConfig::digits_for(long n) const {
  if (precision_digits) return *precision_digits;
  return digits_for_degree(2 * n, policy);
}

ReferenceSet initial_reference(long n, Precision p) {
  if (n < 0) throw std::invalid_argument("degree must be nonnegative");
  const long m = n + 2;
  const BigReal pi = BigReal::pi(p);
  ReferenceSet ref;
  ref.points.reserve(static_cast<std::size_t>(m));
  // j runs from n+1 down to 0 so that the points come out increasing.
  for (long j = m - 1; j >= 0; --j) {
    if (j == 0) {
      ref.points.emplace_back(1L, p);
    } else if (j == m - 1) {
      ref.points.emplace_back(0L, p);
    } else {
      ref.points.push_back((cos(pi * j / (n + 1)) + BigReal(1L, p)) / 2L);
    }
  }
  return ref;
}

LevelledSolution levelled_solve(const ScalarFunction& f, const ReferenceSet& ref) {
  ref.validate();
  const std::size_t m = ref.size();
  const long n = static_cast<long>(m) - 2;
  Precision prec = ref.points.front().precision();
  for (const auto& t : ref.points) prec = max(prec, t.precision());

  std::vector<BigReal> w(m, BigReal(1L, prec));
  BigReal diff(prec);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      mpfr_sub(diff.raw(), ref.points[i].raw(), ref.points[j].raw(), MPFR_RNDN);
      if (diff.is_zero()) throw DegenerateReference("coincident reference points");
      mpfr_mul(w[i].raw(), w[i].raw(), diff.raw(), MPFR_RNDN);
    }
    mpfr_ui_div(w[i].raw(), 1, w[i].raw(), MPFR_RNDN);
  }

  std::vector<BigReal> fv;
  fv.reserve(m);
  BigReal num(prec), den(prec);
  for (std::size_t i = 0; i < m; ++i) {
    fv.push_back(f(ref.points[i]).with_precision(prec));
    num += w[i] * fv[i];
    if (i % 2 == 0) den += w[i]; else den -= w[i];
  }
  if (den.is_zero()) throw DegenerateReference("alternating weight sum vanished");
  BigReal h = num / den;

  // Interpolation data y_i = f_i - (-1)^i h.
  std::vector<BigReal> y(m, BigReal(prec));
  for (std::size_t i = 0; i < m; ++i) y[i] = i % 2 == 0 ? fv[i] - h : fv[i] + h;

  auto interp = [&](const BigReal& t) {
    BigReal sn(prec), sd(prec), c(prec);
    for (std::size_t i = 0; i < m; ++i) {
      mpfr_sub(c.raw(), t.raw(), ref.points[i].raw(), MPFR_RNDN);
      if (c.is_zero()) return y[i];
      mpfr_div(c.raw(), w[i].raw(), c.raw(), MPFR_RNDN);
      sd += c;
      c *= y[i];
      sn += c;
    }
    return sn / sd;
  };

  // Chebyshev coefficients from values at the n+1 first-kind points:
  // a_k = 2/(n+1) sum_j v_j cos(k theta_j), theta_j = (2j+1) pi / (2(n+1)).
  const long N = n + 1;
  const BigReal pi = BigReal::pi(prec);
  std::vector<BigReal> cos_table(static_cast<std::size_t>(4 * N), BigReal(prec));
  for (long j = 0; j < 4 * N; ++j) cos_table[static_cast<std::size_t>(j)] = cos(pi * j / (2 * N));

  std::vector<BigReal> values;
  values.reserve(static_cast<std::size_t>(N));
  for (long j = 0; j < N; ++j) {
    BigReal t = (cos_table[static_cast<std::size_t>(2 * j + 1)] + BigReal(1L, prec)) / 2L;
    values.push_back(interp(t));
  }
  std::vector<BigReal> coeffs(static_cast<std::size_t>(N), BigReal(prec));
  BigReal term(prec);
  for (long k = 0; k < N; ++k) {
    BigReal& a = coeffs[static_cast<std::size_t>(k)];
    for (long j = 0; j < N; ++j) {
      const long idx = (k * (2 * j + 1)) % (4 * N);
      mpfr_mul(term.raw(), values[static_cast<std::size_t>(j)].raw(),
               cos_table[static_cast<std::size_t>(idx)].raw(), MPFR_RNDN);
      a += term;
    }
    a *= 2L;
    a /= N;
  }
  coeffs[0] /= 2L;
  return {ChebyshevPoly(std::move(coeffs), Interval::Unit), std::move(h)};
}

std::vector<BigReal> find_extrema(const ScalarFunction& err, const ReferenceSet& ref,
                                  const ExtremaOptions& options) {
  ref.validate();
  const std::size_t m = ref.size();
  Precision prec = ref.points.front().precision();
  for (const auto& t : ref.points) prec = max(prec, t.precision());
  const int samples = std::max(options.coarse_samples, 3);
  const BigReal rel_tol = exp10_of(-options.refine_digits / 2.0, prec);
  const BigReal abs_tol = exp10_of(-static_cast<double>(options.refine_digits), prec);
  const BigReal zero(prec), one(1L, prec);

  std::vector<BigReal> at_ref;
  std::vector<int> sgn;
  for (std::size_t i = 0; i < m; ++i) {
    at_ref.push_back(err(ref.points[i]));
    sgn.push_back(sign_of(at_ref.back()));
    if (sgn[i] == 0 || (i > 0 && sgn[i] != -sgn[i - 1])) {
      throw ReferenceCollapse("error does not alternate at reference point " + std::to_string(i));
    }
  }

  // Sign changes between consecutive reference points, by bisection; only a
  // bracket is needed, not an accurate root.
  std::vector<BigReal> roots;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    BigReal lo = ref.points[i], hi = ref.points[i + 1];
    for (int step = 0; step < 20; ++step) {
      BigReal mid = (lo + hi) / 2L;
      if (sign_of(err(mid)) == sgn[i]) lo = std::move(mid); else hi = std::move(mid);
    }
    roots.push_back((lo + hi) / 2L);
  }

  std::vector<BigReal> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const BigReal& lo = i == 0 ? zero : roots[i - 1];
    const BigReal& hi = i + 1 == m ? one : roots[i];
    const int s = sgn[i];
    auto g = [&](const BigReal& x) { return s > 0 ? err(x) : -err(x); };

    // The reference point itself is always a candidate, so |E_i| >= |h|.
    BigReal best_x = ref.points[i];
    BigReal best_g = s > 0 ? at_ref[i] : -at_ref[i];
    std::vector<BigReal> xs;
    xs.reserve(static_cast<std::size_t>(samples));
    std::size_t best_j = 0;
    BigReal best_sample_g(prec);
    const BigReal width = hi - lo;
    for (int j = 0; j < samples; ++j) {
      BigReal x = j == samples - 1 ? hi : lo + width * j / (samples - 1);
      BigReal gx = g(x);
      if (j == 0 || gx > best_sample_g) {
        best_sample_g = gx;
        best_j = static_cast<std::size_t>(j);
      }
      xs.push_back(std::move(x));
    }
    if (best_sample_g > best_g) {
      best_g = best_sample_g;
      best_x = xs[best_j];
    }
    const BigReal& a = xs[best_j == 0 ? 0 : best_j - 1];
    const BigReal& b = xs[std::min(best_j + 1, xs.size() - 1)];
    if (a < b) {
      auto [xr, gr] = brent_maximize(g, a, b, rel_tol, abs_tol);
      if (gr > best_g) {
        best_g = std::move(gr);
        best_x = std::move(xr);
      }
    }
    out.push_back(std::move(best_x));
  }
  for (std::size_t i = 1; i < m; ++i) {
    if (!(out[i - 1] < out[i])) throw ReferenceCollapse("located extrema are not strictly increasing");
  }
  return out;
}

BestApprox remez_solve(long n, const RemezConfig& config) {
  return remez_solve([](const BigReal& t) { return sqrt(t); }, n, config);
}

BestApprox remez_solve(const ScalarFunction& f, long n, const RemezConfig& config) {
  if (n < 0) throw std::invalid_argument("degree must be nonnegative");
  const int digits = config.digits_for(n);
  const Precision prec = Precision::digits(digits);
  const BigReal tol = exp10_of(-static_cast<double>(digits) / config.defect_tol_divisor, prec);
  const BigReal one(1L, prec);

  BestApprox result{.n = n,
                    .eps = BigReal(prec),
                    .level = BigReal(prec),
                    .cheb = ChebyshevPoly({BigReal(prec)}, Interval::Unit),
                    .monomial_even = MonomialPoly({BigReal(prec)}, Parity::EvenOnly),
                    .reference = {},
                    .extremal_errors = {},
                    .iterations = 0,
                    .equioscillation_defect = BigReal(prec),
                    .defect_tolerance = tol,
                    .history = {},
                    .precision_digits = digits};

  ReferenceSet ref = initial_reference(n, prec);
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    LevelledSolution lev = levelled_solve(f, ref);
    const ChebyshevPoly& p = lev.poly;

    // Search in s = sqrt(t), where the error of a sqrt-type target is smooth.
    ScalarFunction err_s = [&](const BigReal& s) {
      BigReal t = s * s;
      if (t > one) t = one;
      return f(t) - eval(p, t);
    };
    ReferenceSet ref_s{.points = {}, .first_sign = ref.first_sign};
    for (const auto& t : ref.points) ref_s.points.push_back(sqrt(t));

    std::vector<BigReal> ext_s;
    ExtremaOptions opts{.coarse_samples = config.coarse_samples, .refine_digits = digits};
    for (int attempt = 0;; ++attempt) {
      try {
        ext_s = find_extrema(err_s, ref_s, opts);
        break;
      } catch (const ReferenceCollapse&) {
        if (attempt >= config.max_collapse_retries) throw;
        opts.coarse_samples *= 2;
      }
    }

    ReferenceSet next{.points = {}, .first_sign = 1};
    std::vector<BigReal> errs;
    BigReal max_err(prec);
    for (const auto& s : ext_s) {
      errs.push_back(err_s(s));
      max_err = max(max_err, abs(errs.back()));
      BigReal t = s * s;
      if (t > one) t = one;
      next.points.push_back(std::move(t));
    }
    next.first_sign = sign_of(errs.front()) >= 0 ? 1 : -1;
    const BigReal level = abs(lev.level);
    const BigReal defect = (max_err - level) / max_err;
    result.history.push_back({level, max_err, defect});

    if (defect <= tol) {
      // Audit on a Chebyshev grid in s against missed extrema.
      const long audit_n = 16 * (n + 2);
      const BigReal pi = BigReal::pi(prec);
      BigReal audit_max(prec);
      for (long j = 0; j < audit_n; ++j) {
        BigReal s = (one - cos(pi * j / (audit_n - 1))) / 2L;
        audit_max = max(audit_max, abs(err_s(s)));
      }
      if (audit_max > max_err * (one + tol)) {
        throw ConvergenceFailure("audit grid error " + to_scientific(audit_max, 12) +
                                 " exceeds located extrema " + to_scientific(max_err, 12) +
                                 " at degree n=" + std::to_string(n));
      }
      result.eps = max(max_err, audit_max);
      result.level = lev.level;
      result.cheb = p;
      result.monomial_even = cheb_to_monomial(unit_to_even_symmetric(p));
      result.reference = std::move(next);
      result.extremal_errors = std::move(errs);
      result.iterations = iter;
      result.equioscillation_defect = defect;
      return result;
    }
    next.validate();
    ref = std::move(next);
  }
  throw ConvergenceFailure("no equioscillation after " + std::to_string(config.max_iterations) +
                           " iterations at degree n=" + std::to_string(n));
}

}  // namespace muntz
