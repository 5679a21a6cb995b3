#include "muntz/polybasis.hpp"

#include <gmp.h>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace muntz {

namespace {

Precision widest(std::span<const BigReal> v) {
  Precision p = Precision::bits(MPFR_PREC_MIN);
  for (const auto& c : v) p = max(p, c.precision());
  return p;
}

}  // namespace

ChebyshevPoly::ChebyshevPoly(std::vector<BigReal> coeffs, Interval interval)
    : coeffs_(std::move(coeffs)), interval_(interval) {
  if (coeffs_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
}

Precision ChebyshevPoly::precision() const { return widest(coeffs_); }

MonomialPoly::MonomialPoly(std::vector<BigReal> coeffs, Parity parity)
    : coeffs_(std::move(coeffs)), parity_(parity) {
  if (coeffs_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  if (parity_ == Parity::EvenOnly) {
    for (std::size_t k = 1; k < coeffs_.size(); k += 2) {
      if (!coeffs_[k].is_zero()) throw std::invalid_argument("even-only polynomial has a nonzero odd coefficient");
    }
  }
}

Precision MonomialPoly::precision() const { return widest(coeffs_); }

BigReal MonomialPoly::max_abs_coeff() const { return abs(coeffs_[argmax_abs_coeff()]); }

std::size_t MonomialPoly::argmax_abs_coeff() const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    if (mpfr_cmpabs(coeffs_[k].raw(), coeffs_[best].raw()) > 0) best = k;
  }
  return best;
}

MonomialPoly cheb_to_monomial(const ChebyshevPoly& p) {
  if (p.interval() != Interval::Symmetric) throw std::invalid_argument("cheb_to_monomial needs a [-1,1] series");
  const std::size_t deg = p.degree();
  const Precision prec = p.precision();

  std::vector<BigReal> out(deg + 1, BigReal(prec));
  std::vector<BigReal> prev(deg + 1, BigReal(prec));  // T_{k-1}
  std::vector<BigReal> cur(deg + 1, BigReal(prec));   // T_k
  BigReal term(prec);
  bool odd_zero = true;

  for (std::size_t k = 0; k <= deg; ++k) {
    if (k == 0) {
      mpfr_set_ui(cur[0].raw(), 1, MPFR_RNDN);
    } else if (k == 1) {
      std::swap(prev, cur);  // prev = T_0
      mpfr_set_zero(cur[0].raw(), 1);
      mpfr_set_ui(cur[1].raw(), 1, MPFR_RNDN);
    } else {
      // T_k = 2x T_{k-1} - T_{k-2}, written into prev (which holds T_{k-2}).
      mpfr_neg(prev[0].raw(), prev[0].raw(), MPFR_RNDN);
      for (std::size_t j = 1; j <= k; ++j) {
        mpfr_mul_2ui(term.raw(), cur[j - 1].raw(), 1, MPFR_RNDN);
        mpfr_sub(prev[j].raw(), term.raw(), prev[j].raw(), MPFR_RNDN);
      }
      std::swap(prev, cur);
    }
    const BigReal& a = p[k];
    if (a.is_zero()) continue;
    if (k % 2 == 1) odd_zero = false;
    for (std::size_t j = 0; j <= k; ++j) {
      if (mpfr_zero_p(cur[j].raw())) continue;
      mpfr_mul(term.raw(), a.raw(), cur[j].raw(), MPFR_RNDN);
      mpfr_add(out[j].raw(), out[j].raw(), term.raw(), MPFR_RNDN);
    }
  }
  if (odd_zero) {
    // Exact cancellation can leave -0; normalize the odd slots.
    for (std::size_t j = 1; j <= deg; j += 2) mpfr_set_zero(out[j].raw(), 1);
  }
  return MonomialPoly(std::move(out), odd_zero ? Parity::EvenOnly : Parity::General);
}

ChebyshevPoly monomial_to_cheb(const MonomialPoly& p) {
  const std::size_t deg = p.degree();
  const Precision prec = p.precision();
  std::vector<BigReal> acc(deg + 1, BigReal(prec));
  std::vector<BigReal> next(deg + 1, BigReal(prec));
  BigReal half(prec);

  acc[0] = p[deg].with_precision(prec);
  for (std::size_t step = 1; step <= deg; ++step) {
    const std::size_t k = deg - step;
    const std::size_t len = step;  // acc holds T_0..T_{len-1}
    for (std::size_t j = 0; j <= len; ++j) mpfr_set_zero(next[j].raw(), 1);
    // x * sum b_j T_j
    for (std::size_t j = 0; j < len; ++j) {
      if (mpfr_zero_p(acc[j].raw())) continue;
      if (j == 0) {
        mpfr_add(next[1].raw(), next[1].raw(), acc[0].raw(), MPFR_RNDN);
      } else {
        mpfr_div_2ui(half.raw(), acc[j].raw(), 1, MPFR_RNDN);
        mpfr_add(next[j + 1].raw(), next[j + 1].raw(), half.raw(), MPFR_RNDN);
        mpfr_add(next[j - 1].raw(), next[j - 1].raw(), half.raw(), MPFR_RNDN);
      }
    }
    mpfr_add(next[0].raw(), next[0].raw(), p[k].raw(), MPFR_RNDN);
    std::swap(acc, next);
  }
  if (p.parity() == Parity::EvenOnly) {
    for (std::size_t j = 1; j <= deg; j += 2) mpfr_set_zero(acc[j].raw(), 1);
  }
  return ChebyshevPoly(std::move(acc), Interval::Symmetric);
}

ChebyshevPoly unit_to_even_symmetric(const ChebyshevPoly& p) {
  if (p.interval() != Interval::Unit) throw std::invalid_argument("expected a [0,1] series");
  const Precision prec = p.precision();
  std::vector<BigReal> out(2 * p.degree() + 1, BigReal(prec));
  for (std::size_t k = 0; k <= p.degree(); ++k) out[2 * k] = p[k];
  return ChebyshevPoly(std::move(out), Interval::Symmetric);
}

BigReal eval(const ChebyshevPoly& p, const BigReal& x) {
  const Precision prec = max(p.precision(), x.precision());
  BigReal u = x.with_precision(prec);
  if (p.interval() == Interval::Symmetric) {
    if (u < -1.0 || u > 1.0) throw std::domain_error("evaluation point outside [-1,1]");
  } else {
    if (u < 0.0 || u > 1.0) throw std::domain_error("evaluation point outside [0,1]");
    mpfr_mul_2ui(u.raw(), u.raw(), 1, MPFR_RNDN);
    mpfr_sub_ui(u.raw(), u.raw(), 1, MPFR_RNDN);
  }
  // b_k = a_k + 2u b_{k+1} - b_{k+2}
  BigReal b1(prec), b2(prec), tmp(prec), two_u = u * 2;
  for (std::size_t k = p.degree(); k >= 1; --k) {
    mpfr_mul(tmp.raw(), two_u.raw(), b1.raw(), MPFR_RNDN);
    mpfr_sub(tmp.raw(), tmp.raw(), b2.raw(), MPFR_RNDN);
    mpfr_add(tmp.raw(), tmp.raw(), p[k].raw(), MPFR_RNDN);
    std::swap(b2, b1);
    std::swap(b1, tmp);
  }
  // a_0 + u b_1 - b_2
  BigReal r(prec);
  mpfr_mul(r.raw(), u.raw(), b1.raw(), MPFR_RNDN);
  mpfr_sub(r.raw(), r.raw(), b2.raw(), MPFR_RNDN);
  mpfr_add(r.raw(), r.raw(), p[0].raw(), MPFR_RNDN);
  return r;
}

BigReal eval(const MonomialPoly& p, const BigReal& x) {
  if (x < -1.0 || x > 1.0) throw std::domain_error("evaluation point outside [-1,1]");
  const Precision prec = max(p.precision(), x.precision());
  BigReal r = p[p.degree()].with_precision(prec);
  for (std::size_t k = p.degree(); k-- > 0;) {
    mpfr_mul(r.raw(), r.raw(), x.raw(), MPFR_RNDN);
    mpfr_add(r.raw(), r.raw(), p[k].raw(), MPFR_RNDN);
  }
  return r;
}

Matrix::Matrix(std::size_t n, Precision p) : n_(n), a_(n * n, BigReal(p)) {}

BigReal norm_inf(const Matrix& m) {
  const Precision prec = m(0, 0).precision();
  BigReal best(prec), row(prec);
  for (std::size_t r = 0; r < m.size(); ++r) {
    mpfr_set_zero(row.raw(), 1);
    for (std::size_t c = 0; c < m.size(); ++c) row += abs(m(r, c));
    if (row > best) best = row;
  }
  return best;
}

Matrix invert(const Matrix& m) {
  const std::size_t n = m.size();
  const Precision prec = m(0, 0).precision();
  Matrix a = m;
  Matrix inv(n, prec);
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = BigReal(1L, prec);

  BigReal factor(prec), tmp(prec);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (mpfr_cmpabs(a(r, col).raw(), a(pivot, col).raw()) > 0) pivot = r;
    }
    if (a(pivot, col).is_zero()) throw std::domain_error("matrix is singular");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    const BigReal p = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      mpfr_div(a(col, c).raw(), a(col, c).raw(), p.raw(), MPFR_RNDN);
      mpfr_div(inv(col, c).raw(), inv(col, c).raw(), p.raw(), MPFR_RNDN);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      factor = a(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        mpfr_mul(tmp.raw(), factor.raw(), a(col, c).raw(), MPFR_RNDN);
        mpfr_sub(a(r, c).raw(), a(r, c).raw(), tmp.raw(), MPFR_RNDN);
        mpfr_mul(tmp.raw(), factor.raw(), inv(col, c).raw(), MPFR_RNDN);
        mpfr_sub(inv(r, c).raw(), inv(r, c).raw(), tmp.raw(), MPFR_RNDN);
      }
    }
  }
  return inv;
}

Matrix even_monomial_to_cheb_matrix(long two_n, Precision p) {
  if (two_n < 2 || two_n % 2 != 0) throw std::invalid_argument("degree must be even and at least 2");
  const std::size_t n = static_cast<std::size_t>(two_n / 2);
  Matrix m(n + 1, p);
  mpz_t binom;
  mpz_init(binom);
  // x^{2j} = 2^{1-2j} sum_k C(2j, j-k) T_{2k}, with the T_0 term halved.
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      mpz_bin_uiui(binom, 2 * j, j - k);
      BigReal& e = m(k, j);
      mpfr_set_z(e.raw(), binom, MPFR_RNDN);
      long shift = 1 - 2 * static_cast<long>(j) - (k == 0 ? 1 : 0);
      mpfr_mul_2si(e.raw(), e.raw(), shift, MPFR_RNDN);
    }
  }
  mpz_clear(binom);
  return m;
}

BigReal basis_condition_number(long two_n, Precision p) {
  Matrix m = even_monomial_to_cheb_matrix(two_n, p);
  return norm_inf(m) * norm_inf(invert(m));
}

BigReal basis_condition_number(long two_n, const PrecisionPolicy& policy) {
  return basis_condition_number(two_n, Precision::digits(digits_for_degree(two_n, policy)));
}

}  // namespace muntz
