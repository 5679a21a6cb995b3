#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "muntz/scalar.hpp"

namespace muntz {

enum class Interval { Symmetric, Unit };  // [-1,1] and [0,1]
enum class Parity { EvenOnly, General };

/// Coefficients of T_0..T_deg on [-1,1], or of T_k(2t-1) on [0,1].
class ChebyshevPoly {
 public:
  ChebyshevPoly(std::vector<BigReal> coeffs, Interval interval);

  std::span<const BigReal> coeffs() const { return coeffs_; }
  const BigReal& operator[](std::size_t k) const { return coeffs_[k]; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  Interval interval() const { return interval_; }
  Precision precision() const;

 private:
  std::vector<BigReal> coeffs_;
  Interval interval_;
};

/// Coefficients c_k of x^k. Even-only polynomials are stored densely with odd
/// slots held at exact zero.
class MonomialPoly {
 public:
  /// Throws std::invalid_argument if parity is EvenOnly and an odd slot is nonzero.
  MonomialPoly(std::vector<BigReal> coeffs, Parity parity);

  std::span<const BigReal> coeffs() const { return coeffs_; }
  const BigReal& operator[](std::size_t k) const { return coeffs_[k]; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  Parity parity() const { return parity_; }
  Precision precision() const;

  /// max_k |c_k|
  BigReal max_abs_coeff() const;
  /// Index of the first coefficient attaining max_abs_coeff().
  std::size_t argmax_abs_coeff() const;

 private:
  std::vector<BigReal> coeffs_;
  Parity parity_;
};

/// Expands a [-1,1] Chebyshev series in powers of x via the three-term
/// recurrence. Even-indexed series give exact zeros in the odd slots.
MonomialPoly cheb_to_monomial(const ChebyshevPoly& p);

/// Inverse of cheb_to_monomial, built by Horner's rule in the Chebyshev basis
/// using x T_k = (T_{k+1} + T_{k-1}) / 2.
ChebyshevPoly monomial_to_cheb(const MonomialPoly& p);

/// Reinterprets a series in T_k(2t-1) on [0,1] as the even series in T_{2k}(x)
/// on [-1,1], using T_k(2x^2 - 1) = T_{2k}(x). This is the t = x^2 substitution.
ChebyshevPoly unit_to_even_symmetric(const ChebyshevPoly& p);

/// Clenshaw evaluation. Throws std::domain_error for x outside the interval.
BigReal eval(const ChebyshevPoly& p, const BigReal& x);
/// Horner evaluation on [-1,1]. Throws std::domain_error for |x| > 1.
BigReal eval(const MonomialPoly& p, const BigReal& x);

/// Dense square matrix of BigReal, row-major.
class Matrix {
 public:
  Matrix(std::size_t n, Precision p);

  std::size_t size() const { return n_; }
  BigReal& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const BigReal& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

 private:
  std::size_t n_;
  std::vector<BigReal> a_;
};

/// Max absolute row sum.
BigReal norm_inf(const Matrix& m);
/// Gauss-Jordan elimination with partial pivoting. Throws std::domain_error if singular.
Matrix invert(const Matrix& m);

/// Matrix taking (c_0, c_2, ..., c_{2n}) to the coefficients of
/// (T_0, T_2, ..., T_{2n}) on [-1,1].
Matrix even_monomial_to_cheb_matrix(long two_n, Precision p);

/// ||M||_inf * ||M^-1||_inf for the even-monomial-to-Chebyshev map of degree
/// two_n, at the policy precision for that degree unless overridden.
BigReal basis_condition_number(long two_n, const PrecisionPolicy& policy = {});
BigReal basis_condition_number(long two_n, Precision p);

}  // namespace muntz
