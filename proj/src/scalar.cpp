#include "muntz/scalar.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace muntz {

namespace {

constexpr double kLog2Of10 = 3.321928094887362347870319429489390175864831393;

mpfr_prec_t wider(const BigReal& a, const BigReal& b) {
  return std::max(mpfr_get_prec(a.raw()), mpfr_get_prec(b.raw()));
}

}  // namespace

Precision Precision::digits(int decimal_digits) {
  if (decimal_digits < 1) throw std::invalid_argument("precision must be at least one decimal digit");
  return Precision(static_cast<mpfr_prec_t>(std::ceil(decimal_digits * kLog2Of10)));
}

Precision Precision::bits(mpfr_prec_t bits) {
  if (bits < MPFR_PREC_MIN) throw std::invalid_argument("precision below MPFR minimum");
  return Precision(bits);
}

int Precision::decimal_digits() const {
  // Small slack so that digits(d).decimal_digits() == d despite rounding in the ratio.
  return static_cast<int>(std::floor(static_cast<double>(bits_) / kLog2Of10 + 1e-9));
}

Precision max(Precision a, Precision b) { return a < b ? b : a; }

BigReal::BigReal() : BigReal(Precision::digits(16)) {}

BigReal::BigReal(Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(double v, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_d(v_, v, MPFR_RNDN);
}

BigReal::BigReal(long v, Precision p) {
  mpfr_init2(v_, p.bits());
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal BigReal::parse(std::string_view text, Precision p) {
  BigReal r(p);
  std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (s.empty() || end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

BigReal BigReal::pi(Precision p) {
  BigReal r(p);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigReal BigReal::ratio(long num, long den, Precision p) {
  if (den == 0) throw std::domain_error("ratio with zero denominator");
  BigReal r(num, Precision::bits(p.bits() + 64));
  mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
  return r.with_precision(p);
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  // Steal the limbs; leave `other` as a valid 2-bit zero.
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal BigReal::with_precision(Precision p) const {
  BigReal r(p);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

long BigReal::to_long_ceil() const { return mpfr_get_si(v_, MPFR_RNDU); }
long BigReal::to_long_floor() const { return mpfr_get_si(v_, MPFR_RNDD); }

BigReal& BigReal::operator+=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& o) {
  if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(long o) {
  mpfr_div_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(Precision::bits(wider(a, b)));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(Precision::bits(wider(a, b)));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(Precision::bits(wider(a, b)));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(Precision::bits(wider(a, b)));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, long b) {
  BigReal r(a.precision());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a) {
  BigReal r(a.precision());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const BigReal& a, double b) {
  if (mpfr_nan_p(a.v_) || std::isnan(b)) return std::partial_ordering::unordered;
  int c = mpfr_cmp_d(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

BigReal abs(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw std::domain_error("sqrt of a negative number");
  BigReal r(x.precision());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal cos(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_cos(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw std::domain_error("log of a nonpositive number");
  BigReal r(x.precision());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r(x.precision());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal pow(const BigReal& x, long k) {
  BigReal r(x.precision());
  mpfr_pow_si(r.raw(), x.raw(), k, MPFR_RNDN);
  return r;
}

BigReal pow10(long e, Precision p) {
  BigReal r(p);
  mpfr_ui_pow_ui(r.raw(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
  if (e < 0) mpfr_ui_div(r.raw(), 1, r.raw(), MPFR_RNDN);
  return r;
}

const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }
const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }

double to_log10_magnitude(const BigReal& x) {
  if (x.is_zero()) throw std::domain_error("log10 magnitude of zero");
  if (!x.is_finite()) throw std::domain_error("log10 magnitude of a non-finite value");
  // 64 bits is plenty: the integer part needs at most ~30 bits.
  mpfr_t t;
  mpfr_init2(t, 96);
  mpfr_abs(t, x.raw(), MPFR_RNDN);
  mpfr_log10(t, t, MPFR_RNDN);
  double r = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return r;
}

std::string to_scientific(const BigReal& x, int significant) {
  if (significant < 1) throw std::invalid_argument("need at least one significant digit");
  if (!x.is_finite()) return mpfr_nan_p(x.raw()) ? "nan" : (x.sign() < 0 ? "-inf" : "inf");
  if (x.is_zero()) {
    std::string s = "0";
    if (significant > 1) s += "." + std::string(significant - 1, '0');
    return s + "e+0";
  }
  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(significant), x.raw(), MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string out;
  if (digits.front() == '-') {
    out.push_back('-');
    digits.erase(0, 1);
  }
  out.push_back(digits[0]);
  if (digits.size() > 1) {
    out.push_back('.');
    out.append(digits, 1, std::string::npos);
  }
  long exponent = static_cast<long>(e) - 1;
  out += exponent < 0 ? "e-" : "e+";
  out += std::to_string(exponent < 0 ? -exponent : exponent);
  return out;
}

std::string to_scientific(const BigReal& x) { return to_scientific(x, x.precision().decimal_digits()); }

int digits_for_degree(long two_n, const PrecisionPolicy& policy) {
  if (two_n < 0) throw std::invalid_argument("degree must be nonnegative");
  if (two_n % 2 != 0) throw std::invalid_argument("degree must be even");
  if (policy.slope_den <= 0 || policy.slope_num < 0) throw std::invalid_argument("bad precision slope");
  // ceil(num * two_n / den) in integer arithmetic
  long scaled = policy.slope_num * two_n;
  long ceil_part = (scaled + policy.slope_den - 1) / policy.slope_den;
  long digits = ceil_part + policy.guard_digits;
  return static_cast<int>(std::max<long>(digits, policy.base_digits));
}

}  // namespace muntz
