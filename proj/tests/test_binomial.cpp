#include <catch_amalgamated.hpp>

#include <cmath>

#include "hampack/binomial.hpp"
#include "hampack/error.hpp"
#include "hampack/rng.hpp"
#include "oracles.hpp"

using namespace hampack;
using Catch::Approx;

namespace {

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("pmf and cdf closed forms") {
  CHECK(binom_pmf_cdf({4, 0.5}, 4).cdf == 1.0);
  CHECK(rel_close(binom_pmf_cdf({4, 0.3}, 0).pmf, 0.2401, 1e-14));
  CHECK(binom_pmf_cdf({0, 0.3}, 0).cdf == 1.0);
  CHECK(binom_pmf_cdf({10, 0.0}, 0).pmf == 1.0);
  CHECK(binom_pmf_cdf({10, 1.0}, 10).pmf == 1.0);
  CHECK(binom_pmf_cdf({10, 1.0}, 9).cdf == 0.0);
  CHECK_THROWS_AS(binom_pmf_cdf({4, 0.3}, 5), InvalidArgument);
  CHECK_THROWS_AS(binom_pmf_cdf({4, 0.3}, -1), InvalidArgument);
  CHECK_THROWS_AS(binom_pmf_cdf({4, 1.3}, 1), InvalidArgument);
}

TEST_CASE("trials=50 p=0.1 d=5 against exact summation") {
  // 60-digit values for p = 0.1 rounded to double.
  const auto r = binom_pmf_cdf({50, 0.1}, 5);
  CHECK(rel_close(r.pmf, 0.18492460089521521579, 1e-12));
  CHECK(rel_close(r.cdf, 0.61612300772427685021, 1e-12));
  const auto [pmf, cdf] = oracle::binomial_exact(50, 0.1, 5);
  CHECK(rel_close(r.pmf, pmf, 1e-12));
  CHECK(rel_close(r.cdf, cdf, 1e-12));
}

TEST_CASE("pmf and cdf on a random grid against exact summation") {
  Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(400));
    const double p = 0.001 + 0.998 * rng.uniform01();
    const std::int64_t d = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n + 1)));
    const auto got = binom_pmf_cdf({n, p}, d);
    const auto [pmf, cdf] = oracle::binomial_exact(n, p, d);
    INFO("n=" << n << " p=" << p << " d=" << d);
    if (pmf > 1e-280) CHECK(rel_close(got.pmf, pmf, 1e-12));
    if (cdf > 1e-280) CHECK(rel_close(got.cdf, cdf, 1e-12));
  }
}

TEST_CASE("cdf monotone and reaches one") {
  for (double p : {0.01, 0.2, 0.5, 0.93}) {
    double prev = 0.0;
    for (std::int64_t d = 0; d <= 300; ++d) {
      const double c = binom_pmf_cdf({300, p}, d).cdf;
      CHECK(c >= prev);
      prev = c;
    }
    CHECK(prev == Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("ratio law and its upper bound for p <= 1/5") {
  for (double p : {0.01, 0.05, 0.2}) {
    const std::int64_t n = 500;
    const double np = static_cast<double>(n) * p;
    // b(d) = P(Bin(n-1, p) = d)
    for (std::int64_t d = 1; d < n; ++d) {
      const double b0 = binom_pmf({n - 1, p}, d - 1), b1 = binom_pmf({n - 1, p}, d);
      if (b0 < 1e-250 || b1 < 1e-250) continue;
      const double law = 1.0 + (np - static_cast<double>(d)) / (static_cast<double>(d) * (1 - p));
      CHECK(rel_close(b1 / b0, law, 1e-9));
      const double cap = 1.0 + 1.25 * (np - static_cast<double>(d)) / static_cast<double>(d);
      if (static_cast<double>(d) <= np) CHECK(b1 / b0 <= cap * (1 + 1e-12));
    }
  }
}

TEST_CASE("unimodality around floor(np)") {
  for (double p : {0.03, 0.3, 0.71}) {
    const std::int64_t n = 400;
    const auto mode = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * p));
    for (std::int64_t d = 1; d <= mode; ++d) CHECK(binom_pmf({n, p}, d - 1) <= binom_pmf({n, p}, d) * (1 + 1e-12));
    for (std::int64_t d = mode + 1; d <= n; ++d) CHECK(binom_pmf({n, p}, d) <= binom_pmf({n, p}, d - 1) * (1 + 1e-12));
  }
}

TEST_CASE("delta_quantile small cases") {
  // B(0) = (1-p)^99 >= log(100)/100 for tiny p.
  CHECK(delta_quantile(100, 1e-6) == 0);
  // Exhaustive CDF scan at 60 digits gives 3.
  CHECK(delta_quantile(10, 0.5) == 3);
  for (std::int64_t n : {3, 10, 57, 200}) {
    for (double p : {0.05, 0.3, 0.8}) {
      const std::int64_t d = delta_quantile(n, p);
      const double target = std::log(static_cast<double>(n)) / static_cast<double>(n);
      CHECK(oracle::binomial_exact(n - 1, p, d).second >= target);
      if (d > 0) CHECK(oracle::binomial_exact(n - 1, p, d - 1).second < target);
    }
  }
}

TEST_CASE("delta_quantile monotone in p") {
  for (std::int64_t n : {50, 1000, 20000}) {
    std::int64_t prev = 0;
    for (int t = 1; t < 200; ++t) {
      const double p = t / 200.0;
      const std::int64_t d = delta_quantile(n, p);
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("delta_quantile upper bound at n=1e4, p=16 log n/n") {
  const std::int64_t n = 10000;
  const double p = 16.0 * std::log(10000.0) / 10000.0;
  const double np = n * p;
  const std::int64_t d = delta_quantile(n, p);
  CHECK(d == 111);  // 60-digit CDF scan
  CHECK(static_cast<double>(d) <= np - 0.5 * std::sqrt(np * std::log(10000.0)));
}

TEST_CASE("chernoff bounds") {
  const BinomialSpec spec{200, 0.05};
  CHECK(chernoff_bound(spec, 0.0, TailKind::lower).value == 1.0);
  CHECK(chernoff_bound(spec, 0.0, TailKind::upper).value == 1.0);
  CHECK(chernoff_bound(spec, 1.0, TailKind::multiplicative).value == 1.0);
  CHECK_THROWS_AS(chernoff_bound(spec, -1.0, TailKind::lower), InvalidArgument);
  CHECK_THROWS_AS(chernoff_bound(spec, 0.5, TailKind::multiplicative), InvalidArgument);

  for (TailKind kind : {TailKind::lower, TailKind::upper, TailKind::multiplicative}) {
    double prev = 2.0;
    for (int t = 0; t < 100; ++t) {
      const double a = kind == TailKind::multiplicative ? 1.0 + t * 0.05 : t * 0.3;
      const double v = chernoff_bound(spec, a, kind).value;
      CHECK(v <= prev);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
  // np = 10, a = 10: P(X < 0) = 0.
  CHECK(chernoff_bound(spec, 10.0, TailKind::lower).value >= 0.0);
}

TEST_CASE("chernoff dominates exact tails on a random grid") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(300));
    const double p = 0.005 + 0.99 * rng.uniform01();
    const double mu = static_cast<double>(n) * p;
    const double a = rng.uniform01() * mu;
    const BinomialSpec spec{n, p};
    INFO("n=" << n << " p=" << p << " a=" << a);
    // P(X < mu - a)
    const double cut_lo = std::ceil(mu - a) - 1.0;
    const double lower =
        cut_lo < 0 ? 0.0 : oracle::binomial_exact(n, p, static_cast<std::int64_t>(cut_lo)).second;
    CHECK(chernoff_bound(spec, a, TailKind::lower).value >= lower * (1 - 1e-12));
    // P(X > mu + a)
    const double cut_hi = std::floor(mu + a);
    const double upper =
        cut_hi >= static_cast<double>(n)
            ? 0.0
            : 1.0 - oracle::binomial_exact(n, p, static_cast<std::int64_t>(cut_hi)).second;
    CHECK(chernoff_bound(spec, a, TailKind::upper).value >= upper - 1e-12);
    // P(X > kappa mu)
    const double kappa = 1.0 + 3.0 * rng.uniform01();
    const double cut_k = std::floor(kappa * mu);
    const double mult =
        cut_k >= static_cast<double>(n)
            ? 0.0
            : 1.0 - oracle::binomial_exact(n, p, static_cast<std::int64_t>(cut_k)).second;
    CHECK(chernoff_bound(spec, kappa, TailKind::multiplicative).value >= mult - 1e-12);
  }
}
