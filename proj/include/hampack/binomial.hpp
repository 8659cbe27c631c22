#pragma once

#include <cstdint>

namespace hampack {

/// Bin(trials, p).
struct BinomialSpec {
  std::int64_t trials = 0;
  double p = 0.0;
};

struct PmfCdf {
  double pmf = 0.0;  ///< P(X = d)
  double cdf = 0.0;  ///< P(X <= d)
};

enum class TailKind { lower, upper, multiplicative };

struct TailBound {
  TailKind kind = TailKind::lower;
  double value = 1.0;  ///< clamped to [0, 1]
};

/// P(X = d) via the saddle-point form (Stirling error plus deviance), accurate
/// to about 1e-15 relative for any trials.
double binom_pmf(const BinomialSpec& spec, std::int64_t d);

/// P(X = d) and P(X <= d). Throws InvalidArgument for d outside [0, trials]
/// or an invalid spec.
PmfCdf binom_pmf_cdf(const BinomialSpec& spec, std::int64_t d);

/// Smallest d with P(Bin(n-1, p) <= d) >= log(n)/n.
std::int64_t delta_quantile(std::int64_t n, double p);

/// Closed-form tail bounds for X ~ Bin(trials, p) with mean mu = trials * p:
///   lower:           P(X < mu - a) <= exp(-a^2 / (2 mu))
///   upper:           P(X > mu + a) <= exp(-x^2 / (2 mu) + x^3 / (2 mu^2)), x = min(a, 2mu/3)
///   multiplicative:  P(X > a mu)   <= (e / a)^(a mu), with a = kappa >= 1
/// Negative a (or kappa < 1) throws InvalidArgument.
TailBound chernoff_bound(const BinomialSpec& spec, double a, TailKind kind);

}  // namespace hampack
