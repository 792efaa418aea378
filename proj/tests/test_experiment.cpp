#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "test_helpers.hpp"

using namespace mzlab;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> linspace_closed(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k)
    g.push_back(lo + (hi - lo) * static_cast<double>(k) / (n - 1));
  return g;
}

std::vector<double> beta_grid_16() {
  std::vector<double> g;
  for (int j = 0; j < 16; ++j) g.push_back(-M_PI + j * (M_PI / 8.0));
  return g;
}

}  // namespace

TEST_CASE("seed derivation: deterministic, spread out, order-free") {
  REQUIRE(derive_seed(42, 1, 0) == derive_seed(42, 1, 0));
  REQUIRE(derive_seed(42, 1, 0) != derive_seed(42, 1, 1));
  REQUIRE(derive_seed(42, 1, 0) != derive_seed(42, 2, 0));
  REQUIRE(derive_seed(42, 1, 0) != derive_seed(43, 1, 0));

  // neighbouring indices decorrelate: bit-count of xor near 32
  int acc = 0;
  for (std::uint32_t i = 0; i < 64; ++i)
    acc += __builtin_popcountll(derive_seed(7, 3, i) ^ derive_seed(7, 3, i + 1));
  REQUIRE(acc > 64 * 20);
  REQUIRE(acc < 64 * 44);
}

TEST_CASE("normal quantile: round trip through the CDF") {
  for (const double p : {1e-6, 0.02, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-6}) {
    const double z = standard_normal_quantile(p);
    const double back = 0.5 * std::erfc(-z / std::sqrt(2.0));
    REQUIRE_THAT(back, WithinAbs(p, 1e-12));
  }
  REQUIRE_THAT(standard_normal_quantile(0.5), WithinAbs(0.0, 1e-13));
  REQUIRE_THROWS_AS(standard_normal_quantile(0.0), OutOfRange);
  REQUIRE_THROWS_AS(standard_normal_quantile(1.0), OutOfRange);
}

TEST_CASE("poisson sampler: moments in both regimes") {
  SplitMix64 g{777};
  for (const double mean : {3.0, 17.5, 250.0}) {
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(poisson_sample(mean, g));
      sum += k;
      sum2 += k * k;
    }
    const double m = sum / n;
    const double v = sum2 / n - m * m;
    // 5σ windows for the sample mean and a loose one for the variance
    REQUIRE_THAT(m, WithinAbs(mean, 5.0 * std::sqrt(mean / n)));
    REQUIRE_THAT(v, WithinAbs(mean, 0.05 * mean + 5.0 * mean / std::sqrt(n)));
  }
  REQUIRE(poisson_sample(0.0, g) == 0);
  REQUIRE_THROWS_AS(poisson_sample(-1.0, g), NegativeMean);
}

TEST_CASE("simulate_counts: pure function of the seed path") {
  const SeedPath sp{99, 5, 17};
  const std::uint64_t a = simulate_counts(1234.5, sp);
  REQUIRE(a == simulate_counts(1234.5, sp));
  REQUIRE_THROWS_AS(simulate_counts(-0.5, sp), NegativeMean);

  // evaluation order cannot matter: forward vs reverse sweeps agree
  std::vector<std::uint64_t> fwd, rev;
  for (std::uint32_t i = 0; i < 50; ++i)
    fwd.push_back(simulate_counts(500.0, {7, 2, i}));
  for (std::uint32_t i = 50; i-- > 0;)
    rev.push_back(simulate_counts(500.0, {7, 2, i}));
  std::reverse(rev.begin(), rev.end());
  REQUIRE(fwd == rev);
}

TEST_CASE("sinusoid fit: exact recovery and failure modes") {
  // clean data from a known sinusoid on 8 points
  std::vector<SinusoidSample> s;
  const double c0 = 0.43, c1 = 0.21, phi = 1.13;
  for (int j = 0; j < 8; ++j) {
    const double x = -M_PI + j * (M_PI / 4.0);
    s.push_back({x, c0 + c1 * std::cos(x - phi), 1.0});
  }
  const SinusoidFit fit = fit_sinusoid(s);
  REQUIRE_THAT(fit.offset, WithinAbs(c0, 1e-12));
  REQUIRE_THAT(fit.amplitude, WithinAbs(c1, 1e-12));
  REQUIRE_THAT(fit.phase, WithinAbs(phi, 1e-12));
  REQUIRE(fit.residual_rms < 1e-10);
  REQUIRE_THAT(extract_beta_opt(fit), WithinAbs(phi, 1e-12));

  // degenerate designs
  REQUIRE_THROWS_AS(fit_sinusoid(std::vector<SinusoidSample>{
                        {0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}}),
                    DegenerateDesign);
  std::vector<SinusoidSample> same_x(8, SinusoidSample{0.3, 0.5, 1.0});
  REQUIRE_THROWS_AS(fit_sinusoid(same_x), DegenerateDesign);
  std::vector<SinusoidSample> bad_w = s;
  bad_w[0].weight = -1.0;
  REQUIRE_THROWS_AS(fit_sinusoid(bad_w), DegenerateDesign);

  // flat data: amplitude below threshold, phase undefined
  std::vector<SinusoidSample> flat;
  for (int j = 0; j < 8; ++j)
    flat.push_back({-M_PI + j * (M_PI / 4.0), 0.77, 1.0});
  REQUIRE_THROWS_AS(fit_sinusoid(flat), AmplitudeZero);
}

TEST_CASE("sinusoid fit: 3σ phase coverage under Poisson noise") {
  // exposure 10⁴ per point; the fitted phase must cover the truth within
  // 3 estimated standard errors in nearly every seed
  const double exposure = 1e4;
  const double c0 = 0.45, c1 = 0.30, phi = -0.35;
  int covered = 0;
  const int kSeeds = 100;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::vector<SinusoidSample> s;
    for (int j = 0; j < 16; ++j) {
      const double x = -M_PI + j * (M_PI / 8.0);
      const double mean = exposure * (c0 + c1 * std::cos(x - phi));
      const std::uint64_t counts =
          simulate_counts(mean, {static_cast<std::uint64_t>(seed), 9,
                                 static_cast<std::uint32_t>(j)});
      s.push_back({x, static_cast<double>(counts) / exposure,
                   exposure * exposure /
                       std::max(static_cast<double>(counts), 1.0)});
    }
    const SinusoidFit fit = fit_sinusoid(s);
    const double sigma = std::sqrt(fit.phase_variance());
    if (std::abs(fit.phase - phi) <= 3.0 * sigma) ++covered;
  }
  REQUIRE(covered >= 99);
}

TEST_CASE("β-scan records: expected intensities and the retrieval rule") {
  const InterferometerConfig cfg = testutil::working_config(0.7, M_PI / 8.0, 0.9);
  const auto grid = beta_grid_16();
  const auto plus = run_beta_scan(cfg, ExitPort::Plus, grid, 1e4, 5,
                                  RunMode::Analytic, kScanBetaBase);
  REQUIRE(plus.size() == grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    InterferometerConfig c = cfg;
    c.beta_plus = grid[j];
    REQUIRE_THAT(plus[j].expected,
                 WithinAbs(1e4 * measured_intensity(c, ExitPort::Plus).up_x,
                           1e-9));
    REQUIRE(plus[j].setting.port == ExitPort::Plus);
  }

  const auto minus = run_beta_scan(cfg, ExitPort::Minus, grid, 1e4, 5,
                                   RunMode::Analytic, kScanBetaBase + 1);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    InterferometerConfig c = cfg;
    c.beta_minus = grid[j];
    REQUIRE_THAT(minus[j].expected,
                 WithinAbs(1e4 * measured_intensity(c, ExitPort::Minus).up_x,
                           1e-9));
  }

  REQUIRE_THROWS_AS(run_beta_scan(cfg, ExitPort::Plus, grid, 0.0, 5,
                                  RunMode::Analytic, kScanBetaBase),
                    OutOfRange);
}

TEST_CASE("analytic β-scan analysis lands on the exact optimum") {
  SplitMix64 g{52};
  for (int i = 0; i < 50; ++i) {
    const InterferometerConfig cfg =
        testutil::random_config(g, testutil::uniform_in(g, 0.6, 1.0));
    for (const ExitPort port : {ExitPort::Plus, ExitPort::Minus}) {
      const auto recs = run_beta_scan(cfg, port, beta_grid_16(), 1e4, 11,
                                      RunMode::Analytic, kScanBetaBase);
      const BetaScanAnalysis a = analyze_beta_scan(cfg, port, recs, RunMode::Analytic);
      REQUIRE_THAT(a.beta_fit, WithinAbs(a.theory.exact, 1e-6));
      // contrast correction reconstructs the ideal-instrument optimum
      InterferometerConfig ideal = cfg;
      ideal.contrast = 1.0;
      REQUIRE_THAT(a.beta_corrected,
                   WithinAbs(optimal_beta(ideal, port).exact, 1e-9));
    }
  }
}

TEST_CASE("interferogram simulation and contrast calibration") {
  const auto grid = linspace_closed(0.0, 2.0 * M_PI, 33);

  SECTION("ideal symmetric instrument calibrates to C = 1 exactly") {
    const auto sym = simulate_interferogram(make_config(std::sqrt(0.5), 0.0),
                                            grid, 1e4, 1, RunMode::Analytic,
                                            kScanInterferogramSym);
    const auto abs_ig = simulate_interferogram(testutil::working_config(0.0),
                                               grid, 1e4, 1, RunMode::Analytic,
                                               kScanInterferogramAbs);
    const CalibrationResult cal =
        calibrate_contrast(sym, abs_ig, RunMode::Analytic);
    REQUIRE_THAT(cal.contrast_symmetric, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(cal.contrast_absorber, WithinAbs(0.8, 1e-12));
    REQUIRE_THAT(cal.ratio, WithinAbs(0.8, 1e-12));
    REQUIRE_THAT(cal.p1, WithinAbs(0.8, 1e-12));
    REQUIRE_THAT(cal.p2, WithinAbs(0.2, 1e-12));
  }

  SECTION("a contrast multiplier of 0.8 is recovered, analytic and noisy") {
    const double c_true = 0.8;
    const auto sym = simulate_interferogram(
        make_config(std::sqrt(0.5), 0.0, 0.0, 0.0, 0.0, c_true), grid, 1e4, 2,
        RunMode::Analytic, kScanInterferogramSym);
    const auto abs_ig = simulate_interferogram(
        testutil::working_config(0.0, M_PI / 8.0, c_true), grid, 1e4, 2,
        RunMode::Analytic, kScanInterferogramAbs);
    const CalibrationResult cal =
        calibrate_contrast(sym, abs_ig, RunMode::Analytic);
    REQUIRE_THAT(cal.contrast_symmetric, WithinAbs(c_true, 1e-12));
    REQUIRE_THAT(cal.ratio, WithinAbs(0.8, 1e-12));

    // Monte-Carlo: within 3 propagated standard errors
    const auto sym_mc = simulate_interferogram(
        make_config(std::sqrt(0.5), 0.0, 0.0, 0.0, 0.0, c_true), grid, 1e4, 3,
        RunMode::MonteCarlo, kScanInterferogramSym);
    const auto abs_mc = simulate_interferogram(
        testutil::working_config(0.0, M_PI / 8.0, c_true), grid, 1e4, 3,
        RunMode::MonteCarlo, kScanInterferogramAbs);
    const CalibrationResult mc =
        calibrate_contrast(sym_mc, abs_mc, RunMode::MonteCarlo);
    REQUIRE_THAT(mc.contrast_symmetric,
                 WithinAbs(c_true, 3.0 * std::sqrt(mc.contrast_symmetric_var)));
    REQUIRE_THAT(mc.contrast_absorber,
                 WithinAbs(0.8 * c_true,
                           3.0 * std::sqrt(mc.contrast_absorber_var)));
  }

  SECTION("zero contrast: flat fringe is rejected as AmplitudeZero") {
    const auto sym = simulate_interferogram(
        make_config(std::sqrt(0.5), 0.0, 0.0, 0.0, 0.0, 0.0), grid, 1e4, 4,
        RunMode::Analytic, kScanInterferogramSym);
    REQUIRE_THROWS_AS(calibrate_contrast(sym, sym, RunMode::Analytic),
                      AmplitudeZero);
  }
}

TEST_CASE("which-way estimate") {
  const InterferometerConfig cfg = testutil::working_config(0.0);
  const auto analytic = which_way(cfg, 1e4, 1, RunMode::Analytic);
  REQUIRE_THAT(analytic.first, WithinAbs(0.8, 1e-12));
  REQUIRE_THAT(analytic.second, WithinAbs(0.2, 1e-12));

  const auto mc = which_way(cfg, 1e5, 42, RunMode::MonteCarlo);
  REQUIRE_THAT(mc.first + mc.second, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(mc.first, WithinAbs(0.8, 5.0 * std::sqrt(0.8 * 0.2 / 2e5)));
}

TEST_CASE("p₊ reconstruction from interferogram + calibration") {
  const auto grid = linspace_closed(0.0, 2.0 * M_PI, 33);
  for (const double contrast : {1.0, 0.75}) {
    const auto sym = simulate_interferogram(
        make_config(std::sqrt(0.5), 0.0, 0.0, 0.0, 0.0, contrast), grid, 1e4,
        6, RunMode::Analytic, kScanInterferogramSym);
    const InterferometerConfig cfg =
        testutil::working_config(0.0, M_PI / 8.0, contrast);
    const auto abs_ig = simulate_interferogram(cfg, grid, 1e4, 6,
                                               RunMode::Analytic,
                                               kScanInterferogramAbs);
    const CalibrationResult cal =
        calibrate_contrast(sym, abs_ig, RunMode::Analytic);
    const PPlusReconstruction rec =
        reconstruct_p_plus(abs_ig, cal, RunMode::Analytic);
    REQUIRE(rec.points.size() == grid.size());
    for (const PPlusPoint& p : rec.points) {
      InterferometerConfig c = cfg;
      c.chi = p.chi;
      REQUIRE_THAT(p.p_plus,
                   WithinAbs(output_probabilities(c).p_plus, 1e-10));
    }
  }
}

TEST_CASE("pipeline consistency: analytic scan reproduces the closed forms") {
  // weak coupling — the regime in which β/α estimates the weak value with
  // negligible O(α²) systematic
  const InterferometerConfig cfg = testutil::working_config(0.0, 0.01);
  const auto grid = linspace_closed(0.1, 2.0 * M_PI - 0.1, 21);
  const UncertaintyScan scan =
      run_uncertainty_scan(cfg, grid, 1e4, 1, RunMode::Analytic);
  REQUIRE(scan.points.size() == grid.size());
  REQUIRE_THAT(scan.calibration.contrast_symmetric, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(scan.which_way_estimate.first, WithinAbs(0.8, 1e-12));
  for (const UncertaintyPoint& pt : scan.points) {
    REQUIRE_THAT(pt.p_plus, WithinAbs(pt.p_plus_theory, 1e-9));
    REQUIRE_THAT(pt.beta_plus_fit, WithinAbs(pt.beta_plus_exact, 1e-9));
    REQUIRE_THAT(pt.beta_minus_fit, WithinAbs(pt.beta_minus_exact, 1e-9));
    // β/α carries an O(α²) systematic, largest where a port fringe is weak
    // (plus port near χ = π, minus port near χ = 0)
    REQUIRE_THAT(pt.a_plus, WithinAbs(pt.a_plus_theory, 1e-4));
    REQUIRE_THAT(pt.a_minus, WithinAbs(pt.a_minus_theory, 1e-4));
    REQUIRE_THAT(pt.delta_b, WithinAbs(pt.delta_b_theory, 1e-9));
    // ε̂² = ε² + Σ p̂·δ², so the estimate systematics feed straight in
    REQUIRE(pt.epsilon >= pt.epsilon_theory - 1e-12);
    REQUIRE_THAT(pt.epsilon, WithinAbs(pt.epsilon_theory, 1e-4));
    REQUIRE_THAT(pt.rhs, WithinAbs(pt.bound_theory, 1e-9));
    REQUIRE_THAT(pt.gap, WithinAbs(0.0, 1e-4));
  }

  // at the working coupling α = π/8 the finite-α systematic dominates: a few
  // 1e-3 where the fringes are strong, up to ~4e-2 where a port goes dark
  // (plus port at χ = π, minus port at χ = 0)
  const UncertaintyScan coarse = run_uncertainty_scan(
      testutil::working_config(0.0, M_PI / 8.0), grid, 1e4, 1,
      RunMode::Analytic);
  for (const UncertaintyPoint& pt : coarse.points) {
    REQUIRE_THAT(pt.a_plus, WithinAbs(pt.a_plus_theory, 5e-2));
    REQUIRE_THAT(pt.a_minus, WithinAbs(pt.a_minus_theory, 5e-2));
    REQUIRE(pt.epsilon >= pt.epsilon_theory - 1e-12);
    REQUIRE_THAT(pt.epsilon, WithinAbs(pt.epsilon_theory, 2e-2));
  }
}

TEST_CASE("monte-carlo scan: reconstruction sits on the right side") {
  const InterferometerConfig cfg = testutil::working_config(0.0, M_PI / 8.0);
  const auto grid = linspace_closed(0.2, 2.8, 7);
  const UncertaintyScan scan =
      run_uncertainty_scan(cfg, grid, 1e4, 42, RunMode::MonteCarlo);
  for (const UncertaintyPoint& pt : scan.points) {
    REQUIRE(pt.p_plus_err > 0.0);
    REQUIRE(pt.lhs_err > 0.0);
    REQUIRE(pt.gap_err > 0.0);
    // noise inflates ε̂, so the measured product stays at or above the bound
    REQUIRE(pt.lhs >= pt.rhs - 3.0 * pt.gap_err);
    REQUIRE_THAT(pt.p_plus, WithinAbs(pt.p_plus_theory,
                                      5.0 * std::max(pt.p_plus_err, 1e-3)));
    REQUIRE_THAT(pt.a_plus,
                 WithinAbs(pt.a_plus_theory, 5.0 * std::max(pt.a_plus_err, 1e-3)));
  }
}

TEST_CASE("the whole campaign is reproducible byte for byte") {
  const InterferometerConfig cfg = testutil::working_config(0.0, M_PI / 8.0, 0.8);
  const auto grid = linspace_closed(0.3, 2.0, 3);
  const UncertaintyScan a = run_uncertainty_scan(cfg, grid, 1e4, 7, RunMode::MonteCarlo);
  const UncertaintyScan b = run_uncertainty_scan(cfg, grid, 1e4, 7, RunMode::MonteCarlo);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    REQUIRE(a.points[i].epsilon == b.points[i].epsilon);
    REQUIRE(a.points[i].lhs == b.points[i].lhs);
    REQUIRE(a.points[i].p_plus == b.points[i].p_plus);
  }
  const UncertaintyScan c = run_uncertainty_scan(cfg, grid, 1e4, 8, RunMode::MonteCarlo);
  REQUIRE(a.points[0].epsilon != c.points[0].epsilon);
}
