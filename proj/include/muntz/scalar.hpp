#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace muntz {

/// Working precision of a value. Decimal digits are the user-facing unit; the
/// binary precision handed to MPFR is ceil(digits * log2(10)).
class Precision {
 public:
  static Precision digits(int decimal_digits);
  static Precision bits(mpfr_prec_t bits);

  int decimal_digits() const;
  mpfr_prec_t bits() const { return bits_; }

  friend bool operator==(Precision, Precision) = default;
  friend auto operator<=>(Precision a, Precision b) { return a.bits_ <=> b.bits_; }

 private:
  explicit Precision(mpfr_prec_t bits) : bits_(bits) {}
  mpfr_prec_t bits_;
};

Precision max(Precision a, Precision b);

/// Arbitrary-precision real with a per-value working precision.
///
/// There is no global precision mode: every value owns its precision, and a
/// binary operation yields a result at the larger of its operands'
/// precisions. Rounding is always to nearest.
class BigReal {
 public:
  BigReal();  // zero at 16 digits
  explicit BigReal(Precision p);  // zero at p
  BigReal(double v, Precision p);
  BigReal(long v, Precision p);
  BigReal(int v, Precision p) : BigReal(static_cast<long>(v), p) {}

  /// Parses decimal or scientific notation ("-7.4e+7", "0.125").
  static BigReal parse(std::string_view text, Precision p);
  static BigReal pi(Precision p);
  /// Exact ratio num/den rounded once to p.
  static BigReal ratio(long num, long den, Precision p);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  Precision precision() const { return Precision::bits(mpfr_get_prec(v_)); }
  /// Same value rounded to a new precision.
  BigReal with_precision(Precision p) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long_ceil() const;
  long to_long_floor() const;

  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);
  BigReal& operator*=(long o);
  BigReal& operator/=(long o);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator*(long a, const BigReal& b) { return b * a; }
  friend BigReal operator/(const BigReal& a, long b);
  friend BigReal operator-(const BigReal& a);

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b);
  friend std::partial_ordering operator<=>(const BigReal& a, double b);
  friend bool operator==(const BigReal& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }

  // Raw access for tight inner loops inside the library.
  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
};

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal log(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal pow(const BigReal& x, long k);
/// 10^e at precision p (e may be large; the exponent range of MPFR is huge).
BigReal pow10(long e, Precision p);
const BigReal& max(const BigReal& a, const BigReal& b);
const BigReal& min(const BigReal& a, const BigReal& b);

/// log10|x|, finite even when |x| lies far outside the range of double.
/// Throws std::domain_error for x = 0.
double to_log10_magnitude(const BigReal& x);

/// Scientific notation with `significant` digits: "-7.4123456789e+7".
std::string to_scientific(const BigReal& x, int significant);
/// Scientific notation at the value's own decimal precision.
std::string to_scientific(const BigReal& x);

/// Precision policy: working digits as a function of the polynomial degree
/// 2n. The slope tracks log10(1+sqrt 2), the per-degree growth of the
/// even-monomial basis condition number.
struct PrecisionPolicy {
  int base_digits = 50;
  int guard_digits = 30;
  // slope_per_degree = slope_num / slope_den
  long slope_num = 3830;
  long slope_den = 10000;

  double slope() const { return static_cast<double>(slope_num) / static_cast<double>(slope_den); }
};

/// ceil(slope * two_n) + guard, floored at base. Throws on odd or negative two_n.
int digits_for_degree(long two_n, const PrecisionPolicy& policy = {});

}  // namespace muntz
