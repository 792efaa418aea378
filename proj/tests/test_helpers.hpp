#ifndef MZLAB_TESTS_TEST_HELPERS_HPP_
#define MZLAB_TESTS_TEST_HELPERS_HPP_

#include <cmath>
#include <cstdint>

#include "mzlab/mzlab.hpp"

// Shared comparison and generation helpers for the test suite.

namespace testutil {

inline double map_distance(const mzlab::LinearMap& a, const mzlab::LinearMap& b) {
  return mzlab::max_abs_entry(a - b);
}

inline double state_distance(const mzlab::StateVector& a,
                             const mzlab::StateVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    d = std::max(d, std::abs(a.amp[i] - b.amp[i]));
  return d;
}

// distance modulo an overall phase: align b onto a first
inline double phase_free_distance(const mzlab::StateVector& a,
                                  const mzlab::StateVector& b) {
  const mzlab::Complex ov = mzlab::inner_product(b, a);
  if (std::abs(ov) == 0.0) return 1.0;  // orthogonal — maximally distant
  const mzlab::Complex phase = ov / std::abs(ov);
  mzlab::StateVector rotated = b;
  for (mzlab::Complex& c : rotated.amp) c *= phase;
  return state_distance(a, rotated);
}

inline double uniform_in(mzlab::SplitMix64& g, double lo, double hi) {
  return lo + (hi - lo) * mzlab::uniform_open(g);
}

// a random interferometer configuration away from the degenerate corners
inline mzlab::InterferometerConfig random_config(mzlab::SplitMix64& g,
                                                 double contrast = 1.0) {
  const double a1 = uniform_in(g, 0.2, 0.98);
  const double chi = uniform_in(g, -M_PI, M_PI);
  const double alpha = uniform_in(g, 0.05, 1.2);
  return mzlab::make_config(a1, chi, alpha, 0.0, 0.0, contrast);
}

// the working-beam configuration used throughout: a₁:a₂ = 2:1 in intensity 4:1
inline mzlab::InterferometerConfig working_config(double chi,
                                                  double alpha = M_PI / 8.0,
                                                  double contrast = 1.0) {
  return mzlab::make_config(2.0 / std::sqrt(5.0), chi, alpha, 0.0, 0.0,
                            contrast);
}

}  // namespace testutil

#endif  // MZLAB_TESTS_TEST_HELPERS_HPP_
