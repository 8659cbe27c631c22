#include "hampack/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hampack/error.hpp"

namespace hampack {

namespace {

constexpr double kLn2Pi = 1.8378770664093454836;

void check_spec(const BinomialSpec& spec) {
  if (spec.trials < 0) throw InvalidArgument("binomial trials must be non-negative");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw InvalidArgument("binomial p must lie in [0,1]");
}

// log(x!) - log(sqrt(2 pi x) (x/e)^x), after Loader (2000).
double stirlerr(double x) {
  static constexpr double kS0 = 1.0 / 12.0;
  static constexpr double kS1 = 1.0 / 360.0;
  static constexpr double kS2 = 1.0 / 1260.0;
  static constexpr double kS3 = 1.0 / 1680.0;
  static constexpr double kS4 = 1.0 / 1188.0;
  if (x <= 15.0) {
    // Exact for small integers through lgamma; x is always integral here.
    return std::lgamma(x + 1.0) - (x + 0.5) * std::log(x) + x - 0.5 * kLn2Pi;
  }
  const double x2 = x * x;
  if (x > 500.0) return (kS0 - kS1 / x2) / x;
  if (x > 80.0) return (kS0 - (kS1 - kS2 / x2) / x2) / x;
  if (x > 35.0) return (kS0 - (kS1 - (kS2 - kS3 / x2) / x2) / x2) / x;
  return (kS0 - (kS1 - (kS2 - (kS3 - kS4 / x2) / x2) / x2) / x2) / x;
}

// Deviance term x log(x/np) + np - x, computed without cancellation.
double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace

double binom_pmf(const BinomialSpec& spec, std::int64_t d) {
  check_spec(spec);
  const std::int64_t n = spec.trials;
  if (d < 0 || d > n) return 0.0;
  const double p = spec.p;
  const double q = 1.0 - p;
  if (p == 0.0) return d == 0 ? 1.0 : 0.0;
  if (q == 0.0) return d == n ? 1.0 : 0.0;
  const double nn = static_cast<double>(n);
  if (d == 0) return std::exp(nn * std::log1p(-p));
  if (d == n) return std::exp(nn * std::log(p));
  const double x = static_cast<double>(d);
  const double lc = stirlerr(nn) - stirlerr(x) - stirlerr(nn - x) - bd0(x, nn * p) -
                    bd0(nn - x, nn * q);
  const double lf = kLn2Pi + std::log(x) + std::log1p(-x / nn);
  return std::exp(lc - 0.5 * lf);
}

namespace {

// Sum of pmf over [lo, hi] walking away from `start` (an end of the range)
// with the ratio recurrence; exact pmf re-anchors drift every 64 steps.
double tail_sum(const BinomialSpec& spec, std::int64_t from, std::int64_t to, int dir) {
  const double p = spec.p;
  const double q = 1.0 - p;
  const double nn = static_cast<double>(spec.trials);
  double term = binom_pmf(spec, from);
  double sum = 0.0, comp = 0.0;
  const double peak = term;
  std::int64_t steps = 0;
  for (std::int64_t j = from;; j += dir) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (j == to) break;
    if (term < peak * 1e-18 && term < sum * 1e-18) break;
    const std::int64_t next = j + dir;
    if (++steps % 64 == 0) {
      term = binom_pmf(spec, next);
    } else if (dir < 0) {
      // b(j-1) = b(j) * j q / ((n - j + 1) p)
      term *= static_cast<double>(j) * q / ((nn - static_cast<double>(j) + 1.0) * p);
    } else {
      // b(j+1) = b(j) * (n - j) p / ((j + 1) q)
      term *= (nn - static_cast<double>(j)) * p / ((static_cast<double>(j) + 1.0) * q);
    }
  }
  return sum;
}

}  // namespace

PmfCdf binom_pmf_cdf(const BinomialSpec& spec, std::int64_t d) {
  check_spec(spec);
  if (d < 0 || d > spec.trials)
    throw InvalidArgument("binom_pmf_cdf: d=" + std::to_string(d) + " outside [0, " +
                          std::to_string(spec.trials) + "]");
  PmfCdf out;
  out.pmf = binom_pmf(spec, d);
  if (d == spec.trials || spec.p == 0.0) {
    out.cdf = 1.0;
    return out;
  }
  if (spec.p == 1.0) {
    out.cdf = 0.0;
    return out;
  }
  const double mean = static_cast<double>(spec.trials) * spec.p;
  if (static_cast<double>(d) < mean) {
    out.cdf = tail_sum(spec, d, 0, -1);
  } else {
    out.cdf = 1.0 - tail_sum(spec, d + 1, spec.trials, +1);
  }
  out.cdf = std::clamp(out.cdf, 0.0, 1.0);
  return out;
}

std::int64_t delta_quantile(std::int64_t n, double p) {
  if (n < 2) throw InvalidArgument("delta_quantile: n must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("delta_quantile: p must lie in [0,1]");
  const BinomialSpec spec{n - 1, p};
  const double target = std::log(static_cast<double>(n)) / static_cast<double>(n);
  auto ok = [&](std::int64_t d) { return binom_pmf_cdf(spec, d).cdf >= target; };
  if (ok(0)) return 0;
  // Exponential search for an upper bracket, then bisection on (lo, hi].
  std::int64_t lo = 0, hi = 1;
  while (hi < spec.trials && !ok(hi)) {
    lo = hi;
    hi = std::min(spec.trials, hi * 2);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

TailBound chernoff_bound(const BinomialSpec& spec, double a, TailKind kind) {
  check_spec(spec);
  TailBound out{kind, 1.0};
  const double mu = static_cast<double>(spec.trials) * spec.p;
  double value = 1.0;
  switch (kind) {
    case TailKind::lower:
    case TailKind::upper: {
      if (!(a >= 0.0)) throw InvalidArgument("chernoff_bound: deviation must be non-negative");
      if (a == 0.0 || mu == 0.0) break;
      // The upper form grows again past a = 2mu/3; a bound at a' <= a also
      // bounds the tail at a, so take its minimum over [0, a].
      const double x = kind == TailKind::upper ? std::min(a, 2.0 * mu / 3.0) : a;
      double expo = -x * x / (2.0 * mu);
      if (kind == TailKind::upper) expo += x * x * x / (2.0 * mu * mu);
      value = std::exp(expo);
      break;
    }
    case TailKind::multiplicative: {
      if (!(a >= 1.0)) throw InvalidArgument("chernoff_bound: kappa must be at least 1");
      if (mu == 0.0) break;
      value = std::exp(a * mu * (1.0 - std::log(a)));
      break;
    }
  }
  if (std::isnan(value)) value = 1.0;
  out.value = std::clamp(value, 0.0, 1.0);
  return out;
}

}  // namespace hampack
