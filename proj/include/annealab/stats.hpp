#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace annealab {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// population variance <x^2> - <x>^2, the fluctuation observable
inline double variance(std::span<const double> xs) {
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

struct BatchStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance of the raw samples
  double stderr_ = 0.0;   // from batch means, discounts autocorrelation
  long count = 0;
};

// contiguous batch means; trailing remainder samples go to the last batch
inline BatchStats batch_stats(std::span<const double> xs, int n_batches = 16) {
  if (n_batches < 2) throw std::invalid_argument("need at least 2 batches");
  if (static_cast<int>(xs.size()) < 2 * n_batches)
    throw std::invalid_argument("too few samples for batching");
  BatchStats out;
  out.count = static_cast<long>(xs.size());
  out.mean = mean(xs);
  out.variance = variance(xs);
  std::size_t per = xs.size() / n_batches;
  std::vector<double> bm(n_batches, 0.0);
  for (int b = 0; b < n_batches; ++b) {
    std::size_t lo = b * per;
    std::size_t hi = (b == n_batches - 1) ? xs.size() : lo + per;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += xs[i];
    bm[b] = s / static_cast<double>(hi - lo);
  }
  double mb = mean(bm);
  double vb = 0.0;
  for (double b : bm) vb += (b - mb) * (b - mb);
  vb /= static_cast<double>(n_batches - 1);
  out.stderr_ = std::sqrt(vb / n_batches);
  return out;
}

// linear interpolation between order statistics (type-7 quantile)
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0,1]");
  std::sort(xs.begin(), xs.end());
  double pos = q * static_cast<double>(xs.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= xs.size()) return xs.back();
  double frac = pos - static_cast<double>(lo);
  // avoid 0*inf when a neighbor is an infinite-effort sentinel
  if (frac == 0.0 || xs[lo] == xs[lo + 1]) return xs[lo];
  return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

// score interval for a binomial proportion, z = 1.96 for 95%
inline WilsonInterval wilson_interval(long successes, long trials, double z = 1.96) {
  if (trials < 1) throw std::invalid_argument("wilson interval needs trials >= 1");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("successes outside [0, trials]");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // at the boundaries the score interval touches 0 or 1 exactly
  double lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  double upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lower, upper};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear fit needs >= 2 paired points");
  double mx = mean(xs), my = mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear fit with degenerate abscissa");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace annealab
