#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "muntz/problem_e.hpp"
#include "muntz/remez.hpp"
#include "muntz/scalar.hpp"

namespace muntz {

/// Bernstein's constant to the digits published by Varga and Carpenter.
inline constexpr const char* kBernsteinBeta = "0.28016949902386913303643649";

/// One solve, flattened for CSV/JSON emission.
struct ExperimentRecord {
  long two_n = 0;
  std::string eps;  // scientific notation
  double cmax_log10 = 0.0;
  std::optional<double> kappa_log10;
  std::int64_t wall_time_ms = 0;
  int precision_digits = 0;
  int iterations = 0;
};

/// Memoized solve_problem_e keyed by degree. Thread-safe; concurrent requests
/// for the same degree may both compute, the first insertion wins.
class SolveCache {
 public:
  explicit SolveCache(RemezConfig config = {});

  const ProblemESolution& get(long two_n);
  /// Solves every missing degree, spread over `threads` workers
  /// (hardware concurrency when 0).
  void prefetch(std::span<const long> two_ns, unsigned threads = 0);

  const RemezConfig& config() const { return config_; }
  std::size_t solve_count() const;
  ExperimentRecord record(long two_n);

 private:
  struct Entry {
    ProblemESolution solution;
    std::int64_t wall_time_ms;
  };
  const Entry& entry(long two_n);

  RemezConfig config_;
  mutable std::mutex mu_;
  std::map<long, std::unique_ptr<Entry>> entries_;
};

/// Smallest even degree whose minimax error is <= target. Seeded by
/// predicted_degree and walked in steps of 2. Requires 1e-4 <= target < 1/2.
long minimal_degree(const BigReal& target_eps, SolveCache& cache);

/// beta / target rounded up to the next even integer.
long predicted_degree(const BigReal& target_eps);

struct BetaEstimate {
  std::vector<std::pair<long, BigReal>> raw_sequence;  // (n, 2n eps(n))
  std::vector<std::vector<BigReal>> richardson_table;  // row i has min(i, levels)+1 entries
  int correction_power = 2;     // s_n ~ beta + c / n^power
  bool power_detected = false;  // false when the ladder is too short to detect
  int levels = 0;
  BigReal best_estimate;
  int est_correct_digits = 0;
  bool stable = false;  // successive-level disagreement shrinks after level 1
};

/// Richardson extrapolation of s_n = 2n eps(n) over the ladder n = 10, 20, ...,
/// n_max. Requires n_max >= 20 and 0 <= levels <= min(8, ladder size - 1).
BetaEstimate estimate_beta(long n_max, int levels, SolveCache& cache);
/// Same, over an explicit ladder of n values (at least one).
BetaEstimate estimate_beta(std::span<const long> ladder, int levels, SolveCache& cache);

/// Least-squares fit of ln cmax(n) = 2n ln(1+sqrt2) + ln C - a ln n with the
/// exponential rate held fixed.
struct GrowthFit {
  std::vector<std::pair<long, double>> samples;  // (n, ln cmax)
  double fitted_constant = 0.0;
  double fitted_exponent = 0.0;
  double fixed_rate = 0.0;  // 2 ln(1+sqrt2) per unit n
  double residual_std = 0.0;
};

/// Requires n_max >= n_min + 10 and n_min >= 1.
GrowthFit fit_growth_model(long n_min, long n_max, SolveCache& cache, long stride = 1);

/// log10 of constant (1+sqrt2)^{2n} / n^exponent.
double predict_cmax_log10(long two_n, double constant = 0.066, double exponent = 1.5);

struct Figure1Row {
  long two_n;
  long k;  // power x^{2k}
  double log10_abs_ck;
};

struct Figure1Curve {
  long two_n = 0;
  long peak_k = 0;
  double peak_log10 = 0.0;
  double last_log10 = 0.0;
  double eps_log10 = 0.0;
  double end_law_log10 = 0.0;   // 2n log10 2
  double peak_law_log10 = 0.0;  // 2n log10(1+sqrt2)
  bool unimodal = false;
};

struct Figure1Dataset {
  std::vector<Figure1Row> rows;
  std::vector<Figure1Curve> curves;
};

/// Requires a nonempty list of even degrees >= 2.
Figure1Dataset figure1_dataset(std::span<const long> degrees, SolveCache& cache);

}  // namespace muntz
