#ifndef MZLAB_RNG_HPP_
#define MZLAB_RNG_HPP_

#include <cmath>
#include <cstdint>

#include "mzlab/core.hpp"

// Deterministic randomness with a reproducibility contract: every simulated
// count is a pure function of (master seed, scan id, point index), so results
// are byte-identical across runs, platforms, and any parallel evaluation
// order.  That rules out std::poisson_distribution and friends, whose
// algorithms are implementation-defined — the generator and both samplers are
// spelled out here instead.

namespace mzlab {

// splitmix64 (Steele/Lea/Flood); passes BigCrush, two ops per output.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

inline std::uint64_t mix64(std::uint64_t x) {
  SplitMix64 g{x};
  return g.next();
}

// Per-point stream seed.  The three inputs are folded through the splitmix
// finalizer twice so that neighbouring (scan, index) pairs land far apart.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint32_t scan_id,
                                 std::uint32_t point_index) {
  std::uint64_t h = mix64(master ^ 0x6d7a6c61622d7631ull);  // "mzlab-v1"
  h = mix64(h + (static_cast<std::uint64_t>(scan_id) << 32) + point_index);
  return h;
}

// uniform on the open interval (0,1): 53-bit mantissa, half-step offset keeps
// both endpoints unreachable (log() and the quantile below need that).
inline double uniform_open(SplitMix64& g) {
  return (static_cast<double>(g.next() >> 11) + 0.5) * 0x1.0p-53;
}

// Inverse standard normal CDF, Acklam's rational approximation with one
// Halley refinement step: |relative error| < 1e-13 over (0,1) — far below
// the statistical resolution of anything sampled here.
inline double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw OutOfRange("standard_normal_quantile: p must be in (0,1)");

  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement against the true CDF via erfc.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

// Poisson sampler.  Small means: CDF inversion by stepping the recurrence
// p_{k+1} = p_k λ/(k+1).  Large means: continuity-corrected normal quantile,
// k = max(0, ⌈λ + z√λ − ½⌉) — the classic large-λ approximation, accurate to
// a fraction of a count at λ ≥ 30 and monotone in the underlying uniform.
inline std::uint64_t poisson_sample(double mean, SplitMix64& g) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw NegativeMean("poisson_sample: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    const double u = uniform_open(g);
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (k > 200) break;  // cdf ≈ 1 to double precision long before this
    }
    return k;
  }
  const double z = standard_normal_quantile(uniform_open(g));
  const double x = std::ceil(mean + z * std::sqrt(mean) - 0.5);
  return x <= 0.0 ? 0ull : static_cast<std::uint64_t>(x);
}

}  // namespace mzlab

#endif  // MZLAB_RNG_HPP_
