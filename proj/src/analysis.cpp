#include "muntz/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace muntz {

namespace {

const double kLnSilverRatio = std::log(1.0 + std::sqrt(2.0));

/// Solves (n2^-p - n3^-p) / (n1^-p - n2^-p) = ratio for p by bisection.
std::optional<double> fit_correction_power(double n1, double n2, double n3, double ratio) {
  auto model = [&](double p) {
    return (std::pow(n2, -p) - std::pow(n3, -p)) / (std::pow(n1, -p) - std::pow(n2, -p));
  };
  double lo = 0.25, hi = 8.0;  // model is decreasing in p
  if (!(ratio < model(lo) && ratio > model(hi))) return std::nullopt;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (model(mid) > ratio) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

SolveCache::SolveCache(RemezConfig config) : config_(std::move(config)) {}

const SolveCache::Entry& SolveCache::entry(long two_n) {
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(two_n); it != entries_.end()) return *it->second;
  }
  const auto start = std::chrono::steady_clock::now();
  ProblemESolution sol = solve_problem_e(two_n, config_);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  auto fresh = std::make_unique<Entry>(Entry{std::move(sol), ms.count()});
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.try_emplace(two_n, std::move(fresh));
  return *it->second;
}

const ProblemESolution& SolveCache::get(long two_n) { return entry(two_n).solution; }

void SolveCache::prefetch(std::span<const long> two_ns, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  // Largest first so the tail of the schedule is short solves.
  std::vector<long> todo(two_ns.begin(), two_ns.end());
  std::sort(todo.begin(), todo.end(), std::greater<>());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  if (threads == 1 || todo.size() < 2) {
    for (long d : todo) entry(d);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, todo.size()); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < todo.size(); i = next++) {
        try {
          entry(todo[i]);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::size_t SolveCache::solve_count() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

ExperimentRecord SolveCache::record(long two_n) {
  const Entry& e = entry(two_n);
  return ExperimentRecord{.two_n = two_n,
                          .eps = to_scientific(e.solution.eps, 20),
                          .cmax_log10 = e.solution.cmax_log10,
                          .kappa_log10 = std::nullopt,
                          .wall_time_ms = e.wall_time_ms,
                          .precision_digits = e.solution.approx.precision_digits,
                          .iterations = e.solution.approx.iterations};
}

long predicted_degree(const BigReal& target_eps) {
  if (!(target_eps > 0.0)) throw std::invalid_argument("target accuracy must be positive");
  const Precision p = max(target_eps.precision(), Precision::digits(40));
  const BigReal beta = BigReal::parse(kBernsteinBeta, p);
  long d = (beta / target_eps.with_precision(p)).to_long_ceil();
  if (d % 2 != 0) ++d;
  return d;
}

long minimal_degree(const BigReal& target_eps, SolveCache& cache) {
  if (!(target_eps < 0.5)) throw std::invalid_argument("target accuracy must be below 1/2");
  if (target_eps < 1e-4 * (1 - 1e-12)) {
    throw std::invalid_argument("targets below 1e-4 are beyond the computed range; use predicted_degree");
  }
  long d = std::max(2L, predicted_degree(target_eps));
  if (cache.get(d).eps <= target_eps) {
    while (d >= 2 && cache.get(d - 2).eps <= target_eps) d -= 2;
  } else {
    while (cache.get(d).eps > target_eps) d += 2;
  }
  return d;
}

BetaEstimate estimate_beta(long n_max, int levels, SolveCache& cache) {
  if (n_max < 20) throw std::invalid_argument("n_max must be at least 20");
  std::vector<long> ladder;
  for (long n = 10; n <= n_max; n += 10) ladder.push_back(n);
  return estimate_beta(ladder, levels, cache);
}

BetaEstimate estimate_beta(std::span<const long> ladder, int levels, SolveCache& cache) {
  if (ladder.empty()) throw std::invalid_argument("empty ladder");
  if (levels < 0 || levels > 8) throw std::invalid_argument("levels must be in [0, 8]");
  if (static_cast<std::size_t>(levels) >= ladder.size()) {
    throw std::invalid_argument("levels must be smaller than the number of ladder points");
  }
  std::vector<long> degrees;
  for (long n : ladder) degrees.push_back(2 * n);
  cache.prefetch(degrees);

  BetaEstimate est;
  est.levels = levels;
  for (long n : ladder) est.raw_sequence.emplace_back(n, cache.get(2 * n).eps * (2 * n));

  const std::size_t m = ladder.size();
  if (m >= 3) {
    const auto& s = est.raw_sequence;
    const double d1 = (s[m - 2].second - s[m - 3].second).to_double();
    const double d2 = (s[m - 1].second - s[m - 2].second).to_double();
    if (d1 != 0.0) {
      if (auto p = fit_correction_power(static_cast<double>(ladder[m - 3]), static_cast<double>(ladder[m - 2]),
                                        static_cast<double>(ladder[m - 1]), d2 / d1)) {
        est.correction_power = std::max(1, static_cast<int>(std::lround(*p)));
        est.power_detected = true;
      }
    }
  }

  auto& T = est.richardson_table;
  T.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    T[i].push_back(est.raw_sequence[i].second);
    for (std::size_t j = 1; j <= std::min<std::size_t>(i, static_cast<std::size_t>(levels)); ++j) {
      BigReal ratio = pow(BigReal(ladder[i], T[i][j - 1].precision()) / BigReal(ladder[i - j], T[i][j - 1].precision()),
                          est.correction_power);
      T[i].push_back(T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (ratio - BigReal(1L, ratio.precision())));
    }
  }

  const auto& last = T.back();
  est.best_estimate = last.back();
  std::vector<BigReal> gaps;
  for (std::size_t j = 1; j < last.size(); ++j) gaps.push_back(abs(last[j] - last[j - 1]));
  est.stable = true;
  for (std::size_t j = 2; j < gaps.size(); ++j) {
    if (!(gaps[j] < gaps[j - 1])) est.stable = false;
  }

  BigReal gap(est.best_estimate.precision());
  if (!gaps.empty()) {
    gap = gaps.back();
  } else if (m >= 2) {
    gap = abs(est.raw_sequence[m - 1].second - est.raw_sequence[m - 2].second);
  }
  const int cap = est.best_estimate.precision().decimal_digits();
  if (gap.is_zero()) {
    est.est_correct_digits = cap;
  } else {
    const double rel = to_log10_magnitude(gap) - to_log10_magnitude(est.best_estimate);
    est.est_correct_digits = std::clamp(static_cast<int>(std::floor(-rel)), 0, cap);
  }
  return est;
}

GrowthFit fit_growth_model(long n_min, long n_max, SolveCache& cache, long stride) {
  if (n_min < 1) throw std::invalid_argument("n_min must be at least 1");
  if (n_max < n_min + 10) throw std::invalid_argument("n_max must be at least n_min + 10");
  if (stride < 1) throw std::invalid_argument("stride must be positive");
  std::vector<long> degrees;
  for (long n = n_min; n <= n_max; n += stride) degrees.push_back(2 * n);
  if (degrees.size() < 3) throw std::invalid_argument("insufficient samples for the growth fit");
  cache.prefetch(degrees);

  GrowthFit fit;
  fit.fixed_rate = 2.0 * kLnSilverRatio;
  // y = ln cmax - 2n ln(1+sqrt2) = ln C - a ln n, ordinary least squares in (1, ln n).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (long d : degrees) {
    const long n = d / 2;
    const double ln_cmax = cache.get(d).cmax_log10 * std::log(10.0);
    fit.samples.emplace_back(n, ln_cmax);
    const double x = std::log(static_cast<double>(n));
    const double y = ln_cmax - fit.fixed_rate * static_cast<double>(n);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double k = static_cast<double>(fit.samples.size());
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / k;
  fit.fitted_exponent = -slope;
  fit.fitted_constant = std::exp(intercept);

  double ss = 0;
  for (const auto& [n, ln_cmax] : fit.samples) {
    const double pred = fit.fixed_rate * static_cast<double>(n) + intercept + slope * std::log(static_cast<double>(n));
    ss += (ln_cmax - pred) * (ln_cmax - pred);
  }
  fit.residual_std = std::sqrt(ss / std::max(1.0, k - 2.0));
  return fit;
}

double predict_cmax_log10(long two_n, double constant, double exponent) {
  if (two_n < 2 || two_n % 2 != 0) throw std::invalid_argument("degree must be even and at least 2");
  const double n = static_cast<double>(two_n / 2);
  return std::log10(constant) + static_cast<double>(two_n) * std::log10(1.0 + std::sqrt(2.0)) -
         exponent * std::log10(n);
}

Figure1Dataset figure1_dataset(std::span<const long> degrees, SolveCache& cache) {
  if (degrees.empty()) throw std::invalid_argument("no degrees requested");
  for (long d : degrees) {
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("figure degrees must be even and at least 2");
  }
  cache.prefetch(degrees);

  Figure1Dataset out;
  for (long d : degrees) {
    const ProblemESolution& sol = cache.get(d);
    Figure1Curve curve;
    curve.two_n = d;
    std::vector<double> logs;
    for (long k = 0; k <= sol.n(); ++k) {
      const BigReal& c = sol.coefficient(k);
      const double l = c.is_zero() ? -std::numeric_limits<double>::infinity() : to_log10_magnitude(c);
      logs.push_back(l);
      out.rows.push_back({d, k, l});
    }
    const auto peak = std::max_element(logs.begin(), logs.end());
    curve.peak_k = peak - logs.begin();
    curve.peak_log10 = *peak;
    curve.last_log10 = logs.back();
    curve.eps_log10 = to_log10_magnitude(sol.eps);
    curve.end_law_log10 = static_cast<double>(d) * std::log10(2.0);
    curve.peak_law_log10 = static_cast<double>(d) * std::log10(1.0 + std::sqrt(2.0));
    curve.unimodal = true;
    for (std::size_t k = 2; k < logs.size(); ++k) {
      const bool rising = static_cast<long>(k) <= curve.peak_k;
      if (rising ? !(logs[k] > logs[k - 1]) : !(logs[k] < logs[k - 1])) curve.unimodal = false;
    }
    out.curves.push_back(curve);
  }
  return out;
}

}  // namespace muntz
