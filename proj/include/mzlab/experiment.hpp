#ifndef MZLAB_EXPERIMENT_HPP_
#define MZLAB_EXPERIMENT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mzlab/interferometer.hpp"
#include "mzlab/rng.hpp"
#include "mzlab/uncertainty.hpp"

// Counting-statistics layer: turns the closed-form intensities into Poisson
// count records, fits them back, and propagates the fit covariances through
// the whole error-disturbance reconstruction.  Exposure is the expected
// number of counts at unit intensity.
//
// Reproducibility contract: every record's counts depend only on
// (master seed, scan id, point index) — never on evaluation order — so a run
// is byte-identical however the points are scheduled.

namespace mzlab {

enum class RunMode { Analytic, MonteCarlo };

enum class SpinAnalysis { UpX, DownX, None };

// Stable scan ids; β-scans inside the χ sweep use kScanBetaBase + 2k (+1 for
// the minus port) at χ index k.
inline constexpr std::uint32_t kScanWhichWay = 1;
inline constexpr std::uint32_t kScanInterferogramSym = 2;
inline constexpr std::uint32_t kScanInterferogramAbs = 3;
inline constexpr std::uint32_t kScanBetaBase = 16;

struct SeedPath {
  std::uint64_t master = 0;
  std::uint32_t scan_id = 0;
  std::uint32_t point_index = 0;
};

inline std::uint64_t simulate_counts(double mean, const SeedPath& sp) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw NegativeMean("simulate_counts: expected count must be finite, >= 0");
  SplitMix64 g{derive_seed(sp.master, sp.scan_id, sp.point_index)};
  return poisson_sample(mean, g);
}

struct ScanSetting {
  double chi = 0.0;
  double beta = 0.0;
  ExitPort port = ExitPort::Plus;
  SpinAnalysis spin = SpinAnalysis::UpX;
};

struct CountRecord {
  ScanSetting setting;
  double exposure = 0.0;
  double expected = 0.0;       // exposure × intensity
  std::uint64_t counts = 0;    // Poisson draw (MonteCarlo) or 0 (Analytic)
  SeedPath seed_path;
};

// β-scan of the ↑x intensity in one exit port.  The minus port is *measured*
// through the retrieval rule — identical code path, χ shifted by π — exactly
// how the spin analysis only ever looks at one physical detector.
inline std::vector<CountRecord> run_beta_scan(
    const InterferometerConfig& cfg, ExitPort port,
    std::span<const double> beta_grid, double exposure,
    std::uint64_t master_seed, RunMode mode, std::uint32_t scan_id) {
  if (!(exposure > 0.0) || !std::isfinite(exposure))
    throw OutOfRange("run_beta_scan: exposure must be finite and > 0");
  std::vector<CountRecord> out;
  out.reserve(beta_grid.size());
  const InterferometerConfig base =
      port == ExitPort::Minus ? retrieved(cfg) : cfg;
  for (std::uint32_t k = 0; k < beta_grid.size(); ++k) {
    InterferometerConfig c = base;
    c.beta_plus = beta_grid[k];
    CountRecord rec;
    rec.setting = {cfg.chi, beta_grid[k], port, SpinAnalysis::UpX};
    rec.exposure = exposure;
    rec.expected = exposure * measured_intensity(c, ExitPort::Plus).up_x;
    rec.seed_path = {master_seed, scan_id, k};
    rec.counts =
        mode == RunMode::MonteCarlo ? simulate_counts(rec.expected, rec.seed_path) : 0;
    out.push_back(rec);
  }
  return out;
}

// Interferogram: bare fringe χ-scan, coupling off, both exit beams counted.
// Point k draws the O beam from stream index 2k and the H beam from 2k+1.
struct InterferogramPoint {
  double chi = 0.0;
  double exposure = 0.0;
  double expected_o = 0.0;
  double expected_h = 0.0;
  std::uint64_t counts_o = 0;
  std::uint64_t counts_h = 0;
};

inline std::vector<InterferogramPoint> simulate_interferogram(
    const InterferometerConfig& cfg, std::span<const double> chi_grid,
    double exposure, std::uint64_t master_seed, RunMode mode,
    std::uint32_t scan_id) {
  if (!(exposure > 0.0) || !std::isfinite(exposure))
    throw OutOfRange("simulate_interferogram: exposure must be finite, > 0");
  std::vector<InterferogramPoint> out;
  out.reserve(chi_grid.size());
  for (std::uint32_t k = 0; k < chi_grid.size(); ++k) {
    InterferometerConfig c = cfg;
    c.chi = chi_grid[k];
    c.alpha = 0.0;  // contrast calibration runs with the probe coupling off
    InterferogramPoint p;
    p.chi = chi_grid[k];
    p.exposure = exposure;
    p.expected_o = exposure * fringe_intensity(c, ExitPort::Plus);
    p.expected_h = exposure * fringe_intensity(c, ExitPort::Minus);
    if (mode == RunMode::MonteCarlo) {
      p.counts_o = simulate_counts(p.expected_o, {master_seed, scan_id, 2 * k});
      p.counts_h =
          simulate_counts(p.expected_h, {master_seed, scan_id, 2 * k + 1});
    }
    out.push_back(p);
  }
  return out;
}

// --- weighted sinusoid fit ---------------------------------------------------

struct SinusoidSample {
  double x = 0.0;
  double value = 0.0;
  double weight = 1.0;  // 1/σ² when values carry noise
};

// y(x) = offset + a·cos x + b·sin x = offset + amplitude·cos(x − phase);
// phasor a+ib matches BetaScanModel::phasor, so extract_beta_opt is arg().
struct SinusoidFit {
  double offset = 0.0;
  double a = 0.0;
  double b = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  double residual_rms = 0.0;
  std::array<double, 9> cov{};  // covariance of (offset, a, b), row-major

  Complex phasor() const { return {a, b}; }

  double offset_variance() const { return cov[0]; }

  double phase_variance() const {
    const double c2 = amplitude * amplitude;
    return (b * b * cov[4] - 2.0 * a * b * cov[5] + a * a * cov[8]) /
           (c2 * c2);
  }

  double amplitude_variance() const {
    const double c2 = amplitude * amplitude;
    return (a * a * cov[4] + 2.0 * a * b * cov[5] + b * b * cov[8]) / c2;
  }
};

namespace detail {

// Gauss-Jordan inverse of a symmetric positive-definite 3×3 with partial
// pivoting; the design is degenerate when a pivot collapses relative to the
// matrix scale.
inline std::array<double, 9> invert3(std::array<double, 9> m) {
  std::array<double, 9> inv{1, 0, 0, 0, 1, 0, 0, 0, 1};
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw DegenerateDesign("invert3: zero normal matrix");
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[3 * r + col]) > std::abs(m[3 * piv + col])) piv = r;
    if (std::abs(m[3 * piv + col]) <= 1e-12 * scale)
      throw DegenerateDesign("invert3: rank-deficient normal equations");
    if (piv != col)
      for (int j = 0; j < 3; ++j) {
        std::swap(m[3 * piv + j], m[3 * col + j]);
        std::swap(inv[3 * piv + j], inv[3 * col + j]);
      }
    const double d = m[3 * col + col];
    for (int j = 0; j < 3; ++j) {
      m[3 * col + j] /= d;
      inv[3 * col + j] /= d;
    }
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[3 * r + col];
      if (f == 0.0) continue;
      for (int j = 0; j < 3; ++j) {
        m[3 * r + j] -= f * m[3 * col + j];
        inv[3 * r + j] -= f * inv[3 * col + j];
      }
    }
  }
  return inv;
}

}  // namespace detail

inline SinusoidFit fit_sinusoid(std::span<const SinusoidSample> samples) {
  if (samples.size() < 3)
    throw DegenerateDesign("fit_sinusoid: need at least 3 samples");
  std::array<double, 9> m{};
  std::array<double, 3> rhs{};
  for (const SinusoidSample& s : samples) {
    if (!(s.weight > 0.0) || !std::isfinite(s.weight) ||
        !std::isfinite(s.x) || !std::isfinite(s.value))
      throw DegenerateDesign("fit_sinusoid: non-finite sample or weight <= 0");
    const double basis[3] = {1.0, std::cos(s.x), std::sin(s.x)};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += s.weight * basis[i] * s.value;
      for (int j = 0; j < 3; ++j) m[3 * i + j] += s.weight * basis[i] * basis[j];
    }
  }
  SinusoidFit fit;
  fit.cov = detail::invert3(m);
  double theta[3] = {0, 0, 0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) theta[i] += fit.cov[3 * i + j] * rhs[j];
  fit.offset = theta[0];
  fit.a = theta[1];
  fit.b = theta[2];
  fit.amplitude = std::hypot(fit.a, fit.b);
  if (fit.amplitude < kEps)
    throw AmplitudeZero("fit_sinusoid: amplitude below 1e-12, phase undefined");
  fit.phase = std::atan2(fit.b, fit.a);
  double ss = 0.0;
  for (const SinusoidSample& s : samples) {
    const double r =
        s.value - (fit.offset + fit.a * std::cos(s.x) + fit.b * std::sin(s.x));
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(samples.size()));
  return fit;
}

// The fitted sinusoid peaks where the phase says it does.
inline double extract_beta_opt(const SinusoidFit& fit) { return fit.phase; }

// --- sample builders ----------------------------------------------------------

// β-scan records → intensity samples.  Monte-Carlo weights are 1/var with
// var(counts/exposure) ≈ counts/exposure²; max(counts,1) keeps empty bins
// from acquiring infinite weight.
inline std::vector<SinusoidSample> beta_scan_samples(
    std::span<const CountRecord> records, RunMode mode) {
  std::vector<SinusoidSample> out;
  out.reserve(records.size());
  for (const CountRecord& r : records) {
    SinusoidSample s;
    s.x = r.setting.beta;
    if (mode == RunMode::Analytic) {
      s.value = r.expected / r.exposure;
      s.weight = 1.0;
    } else {
      s.value = static_cast<double>(r.counts) / r.exposure;
      s.weight = r.exposure * r.exposure /
                 std::max(static_cast<double>(r.counts), 1.0);
    }
    out.push_back(s);
  }
  return out;
}

// Interferogram → normalized O-beam fraction r = O/(O+H), the quantity whose
// fringe is ½(1 + C·2a₁a₂cosχ)·…; Poisson δ-method variance
// var(r) ≈ OH/(O+H)³, regularized so empty beams stay finite.
inline std::vector<SinusoidSample> interferogram_samples(
    std::span<const InterferogramPoint> points, RunMode mode) {
  std::vector<SinusoidSample> out;
  out.reserve(points.size());
  for (const InterferogramPoint& p : points) {
    SinusoidSample s;
    s.x = p.chi;
    if (mode == RunMode::Analytic) {
      s.value = p.expected_o / (p.expected_o + p.expected_h);
      s.weight = 1.0;
    } else {
      const double o = static_cast<double>(p.counts_o);
      const double h = static_cast<double>(p.counts_h);
      const double total = o + h;
      if (total == 0.0) continue;  // the point carries no information
      s.value = o / total;
      s.weight = total * total * total / (o * h + 0.25);
    }
    out.push_back(s);
  }
  return out;
}

// --- contrast calibration ------------------------------------------------------

// C estimate = fitted fringe amplitude / fitted offset, with its δ-method
// variance over the full (offset, a, b) covariance.
namespace detail {

struct ValueVar {
  double value = 0.0;
  double variance = 0.0;
};

inline ValueVar contrast_estimate(const SinusoidFit& f) {
  ValueVar v;
  v.value = f.amplitude / f.offset;
  const double g0 = -f.amplitude / (f.offset * f.offset);
  const double ga = f.a / (f.amplitude * f.offset);
  const double gb = f.b / (f.amplitude * f.offset);
  const double grad[3] = {g0, ga, gb};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      v.variance += grad[i] * f.cov[3 * i + j] * grad[j];
  v.variance = std::max(v.variance, 0.0);
  return v;
}

}  // namespace detail

struct CalibrationResult {
  double contrast_symmetric = 0.0;
  double contrast_symmetric_var = 0.0;
  double contrast_absorber = 0.0;
  double contrast_absorber_var = 0.0;
  double ratio = 0.0;  // contrast_absorber / contrast_symmetric = 2a₁a₂
  double p1 = 0.0;     // fringe-range populations: p1 = ½(1+√(1−ratio²))
  double p2 = 0.0;     // (absorber attenuates path 2, so p1 ≥ p2)
};

// Two interferograms: a symmetric 1:1 sample (a₁ = a₂, fringe amplitude C/2)
// and the working beam (amplitude C·a₁a₂).  Their amplitude/offset ratios
// give C and C·2a₁a₂; the ratio of those removes the instrument and leaves
// the beam statistics.  Estimates are clamped into [0,1] — Poisson noise can
// push a raw ratio marginally past an endpoint.
inline CalibrationResult calibrate_contrast(
    std::span<const InterferogramPoint> interferogram_sym,
    std::span<const InterferogramPoint> interferogram_abs, RunMode mode) {
  const SinusoidFit sym =
      fit_sinusoid(interferogram_samples(interferogram_sym, mode));
  const SinusoidFit abs_fit =
      fit_sinusoid(interferogram_samples(interferogram_abs, mode));
  const detail::ValueVar cs = detail::contrast_estimate(sym);
  const detail::ValueVar ca = detail::contrast_estimate(abs_fit);
  CalibrationResult out;
  out.contrast_symmetric = std::clamp(cs.value, 0.0, 1.0);
  out.contrast_symmetric_var = cs.variance;
  out.contrast_absorber = std::clamp(ca.value, 0.0, 1.0);
  out.contrast_absorber_var = ca.variance;
  if (out.contrast_symmetric <= kEps)
    throw DegenerateDesign("calibrate_contrast: symmetric contrast is zero");
  out.ratio = std::clamp(out.contrast_absorber / out.contrast_symmetric, 0.0, 1.0);
  const double root = std::sqrt(1.0 - out.ratio * out.ratio);
  out.p1 = 0.5 * (1.0 + root);
  out.p2 = 0.5 * (1.0 - root);
  return out;
}

// Direct which-way check: block each path in turn and count.
inline std::pair<double, double> which_way(const InterferometerConfig& cfg,
                                           double exposure,
                                           std::uint64_t master_seed,
                                           RunMode mode,
                                           std::uint32_t scan_id = kScanWhichWay) {
  if (mode == RunMode::Analytic)
    return {cfg.a1 * cfg.a1, cfg.a2 * cfg.a2};
  const double n1 = static_cast<double>(
      simulate_counts(exposure * cfg.a1 * cfg.a1, {master_seed, scan_id, 0}));
  const double n2 = static_cast<double>(
      simulate_counts(exposure * cfg.a2 * cfg.a2, {master_seed, scan_id, 1}));
  const double total = n1 + n2;
  if (total == 0.0) return {0.5, 0.5};  // no counts, no information
  return {n1 / total, n2 / total};
}

// --- p₊ fringe reconstruction ---------------------------------------------------

// p₊(χ) = ½ + (a·cosχ + b·sinχ)/C₁:₁ with (a,b) fitted on the working-beam
// interferogram and the symmetric contrast dividing out the instrument.
struct FringeModel {
  double a = 0.0;
  double b = 0.0;
  std::array<double, 4> cov_ab{};  // 2×2 covariance of (a,b)
  double c11 = 1.0;
  double c11_var = 0.0;

  double p_plus(double chi) const {
    return 0.5 + (a * std::cos(chi) + b * std::sin(chi)) / c11;
  }

  double p_plus_variance(double chi) const {
    const double gc = std::cos(chi) / c11;
    const double gs = std::sin(chi) / c11;
    const double gk = -(a * std::cos(chi) + b * std::sin(chi)) / (c11 * c11);
    double v = gc * (cov_ab[0] * gc + cov_ab[1] * gs) +
               gs * (cov_ab[2] * gc + cov_ab[3] * gs) + gk * gk * c11_var;
    return std::max(v, 0.0);
  }
};

struct PPlusPoint {
  double chi = 0.0;
  double p_plus = 0.0;
  double std_error = 0.0;
};

struct PPlusReconstruction {
  FringeModel model;
  std::vector<PPlusPoint> points;
};

inline PPlusReconstruction reconstruct_p_plus(
    std::span<const InterferogramPoint> interferogram_abs,
    const CalibrationResult& calibration, RunMode mode) {
  const SinusoidFit fit =
      fit_sinusoid(interferogram_samples(interferogram_abs, mode));
  PPlusReconstruction rec;
  rec.model.a = fit.a;
  rec.model.b = fit.b;
  rec.model.cov_ab = {fit.cov[4], fit.cov[5], fit.cov[7], fit.cov[8]};
  rec.model.c11 = calibration.contrast_symmetric;
  rec.model.c11_var = calibration.contrast_symmetric_var;
  if (mode == RunMode::Analytic) {
    rec.model.cov_ab = {0, 0, 0, 0};
    rec.model.c11_var = 0.0;
  }
  rec.points.reserve(interferogram_abs.size());
  for (const InterferogramPoint& p : interferogram_abs)
    rec.points.push_back({p.chi, rec.model.p_plus(p.chi),
                          std::sqrt(rec.model.p_plus_variance(p.chi))});
  return rec;
}

// --- β-scan analysis -------------------------------------------------------------

// Fit one β-scan, undo the finite-contrast pull on the fitted phasor
// (subtract the non-interfering part, divide the cross term by C — exact for
// the single-harmonic model), and express the result as a path-presence
// estimate Â = β/α.
struct BetaScanAnalysis {
  SinusoidFit fit;
  double beta_fit = 0.0;        // raw fitted phase
  double beta_var = 0.0;
  double beta_corrected = 0.0;  // contrast-corrected phase
  double a_estimate = 0.0;      // β_corrected / α
  double a_estimate_var = 0.0;
  BetaOptimum theory;           // exact argmax and weak limit for this cfg
};

inline BetaScanAnalysis analyze_beta_scan(const InterferometerConfig& cfg,
                                          ExitPort port,
                                          std::span<const CountRecord> records,
                                          RunMode mode) {
  BetaScanAnalysis out;
  out.theory = optimal_beta(cfg, port);  // throws AmplitudeZero when α = 0
  out.fit = fit_sinusoid(beta_scan_samples(records, mode));
  out.beta_fit = out.fit.phase;
  out.beta_var = mode == RunMode::Analytic ? 0.0 : out.fit.phase_variance();

  const double c = cfg.contrast;
  const Complex zni = noninterfering_phasor(cfg);
  const Complex z = (out.fit.phasor() - (1.0 - c) * zni) / c;
  if (std::abs(z) < kEps)
    throw AmplitudeZero("analyze_beta_scan: corrected phasor vanishes");
  out.beta_corrected = std::atan2(z.imag(), z.real());
  out.a_estimate = out.beta_corrected / cfg.alpha;
  if (mode == RunMode::MonteCarlo) {
    // δ-method through φ = arg((a+ib − const)/C): ∂φ/∂a = −Im z/(|z|²C), etc.
    const double ga = -z.imag() / (std::norm(z) * c);
    const double gb = z.real() / (std::norm(z) * c);
    const double var_phase =
        ga * (out.fit.cov[4] * ga + out.fit.cov[5] * gb) +
        gb * (out.fit.cov[7] * ga + out.fit.cov[8] * gb);
    out.a_estimate_var =
        std::max(var_phase, 0.0) / (cfg.alpha * cfg.alpha);
  }
  return out;
}

// --- full error-disturbance reconstruction ----------------------------------------

namespace detail {

// Central-difference gradient propagation: var(f) = ∇fᵀ Σ ∇f.
inline double propagate_variance(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> theta, std::span<const double> cov) {
  const std::size_t n = theta.size();
  std::vector<double> grad(n);
  std::vector<double> t(theta.begin(), theta.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(theta[i]));
    t[i] = theta[i] + h;
    const double fp = f(t);
    t[i] = theta[i] - h;
    const double fm = f(t);
    t[i] = theta[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      v += grad[i] * cov[i * n + j] * grad[j];
  return std::max(v, 0.0);
}

inline double clamp01(double p) {
  return std::clamp(p, 1e-9, 1.0 - 1e-9);
}

}  // namespace detail

struct UncertaintyPoint {
  double chi = 0.0;

  double p_plus = 0.0, p_plus_err = 0.0, p_plus_theory = 0.0;
  double beta_plus_fit = 0.0, beta_plus_err = 0.0, beta_plus_exact = 0.0;
  double beta_minus_fit = 0.0, beta_minus_err = 0.0, beta_minus_exact = 0.0;
  double a_plus = 0.0, a_plus_err = 0.0, a_plus_theory = 0.0;
  double a_minus = 0.0, a_minus_err = 0.0, a_minus_theory = 0.0;
  double delta_b = 0.0, delta_b_theory = 0.0;
  double epsilon = 0.0, epsilon_sq = 0.0, epsilon_theory = 0.0;
  double lhs = 0.0, lhs_err = 0.0;
  double rhs = 0.0, rhs_err = 0.0;
  double gap = 0.0, gap_err = 0.0;
  double bound_theory = 0.0;
};

struct UncertaintyScan {
  CalibrationResult calibration;
  std::pair<double, double> which_way_estimate;
  PPlusReconstruction fringe;
  std::vector<UncertaintyPoint> points;
};

// One full simulated campaign at fixed master seed:
//   1. which-way counts,
//   2. symmetric + working-beam interferograms → contrast calibration and
//      the p₊(χ) fringe model,
//   3. per χ: one β-scan per port → path-presence estimates Â±,
//   4. ε̂² = Σ_± p̂_± |ω_± − Â_±|², Δ̂(σ_x) = 2√(p̂₊p̂₋), and the bound read
//      from the fringe at χ ± π/2 — everything a real run can measure.
// Fit covariances propagate through every derived quantity by the δ-method
// (numeric gradients), including the p̂/Â correlations inside lhs − rhs.
inline UncertaintyScan run_uncertainty_scan(const InterferometerConfig& cfg_base,
                                            std::span<const double> chi_grid,
                                            double exposure,
                                            std::uint64_t master_seed,
                                            RunMode mode) {
  UncertaintyScan scan;
  scan.which_way_estimate = which_way(cfg_base, exposure, master_seed, mode);

  // calibration interferograms over a full period
  std::vector<double> calib_grid;
  for (int k = 0; k < 33; ++k) calib_grid.push_back(k * (2.0 * M_PI / 32.0));
  InterferometerConfig sym = cfg_base;
  sym.a1 = std::sqrt(0.5);
  sym.a2 = std::sqrt(0.5);
  const auto ig_sym = simulate_interferogram(sym, calib_grid, exposure,
                                             master_seed, mode,
                                             kScanInterferogramSym);
  const auto ig_abs = simulate_interferogram(cfg_base, calib_grid, exposure,
                                             master_seed, mode,
                                             kScanInterferogramAbs);
  scan.calibration = calibrate_contrast(ig_sym, ig_abs, mode);
  scan.fringe = reconstruct_p_plus(ig_abs, scan.calibration, mode);
  const FringeModel& fm = scan.fringe.model;

  std::vector<double> beta_grid;
  for (int j = 0; j < 16; ++j) beta_grid.push_back(-M_PI + j * (M_PI / 8.0));

  scan.points.reserve(chi_grid.size());
  for (std::uint32_t k = 0; k < chi_grid.size(); ++k) {
    InterferometerConfig cfg = cfg_base;
    cfg.chi = chi_grid[k];

    const auto recs_p = run_beta_scan(cfg, ExitPort::Plus, beta_grid, exposure,
                                      master_seed, mode, kScanBetaBase + 2 * k);
    const auto recs_m =
        run_beta_scan(cfg, ExitPort::Minus, beta_grid, exposure, master_seed,
                      mode, kScanBetaBase + 2 * k + 1);
    const BetaScanAnalysis bp = analyze_beta_scan(cfg, ExitPort::Plus, recs_p, mode);
    const BetaScanAnalysis bm =
        analyze_beta_scan(cfg, ExitPort::Minus, recs_m, mode);

    UncertaintyPoint pt;
    pt.chi = cfg.chi;
    pt.p_plus_theory = output_probabilities(cfg).p_plus;
    pt.a_plus_theory = path_weak_value(cfg, ExitPort::Plus).real();
    pt.a_minus_theory = path_weak_value(cfg, ExitPort::Minus).real();
    pt.delta_b_theory = delta_sigma_x(pt.p_plus_theory);
    pt.epsilon_theory = epsilon_closed_form(cfg);
    pt.bound_theory = commutator_bound_direct(cfg);

    pt.beta_plus_fit = bp.beta_fit;
    pt.beta_plus_err = std::sqrt(bp.beta_var);
    pt.beta_plus_exact = bp.theory.exact;
    pt.beta_minus_fit = bm.beta_fit;
    pt.beta_minus_err = std::sqrt(bm.beta_var);
    pt.beta_minus_exact = bm.theory.exact;
    pt.a_plus = bp.a_estimate;
    pt.a_plus_err = std::sqrt(bp.a_estimate_var);
    pt.a_minus = bm.a_estimate;
    pt.a_minus_err = std::sqrt(bm.a_estimate_var);

    // reconstruction as a function of θ = (a_f, b_f, C₁:₁, a₊, b₊, a₋, b₋)
    const Complex wp{pt.a_plus_theory,
                     path_weak_value(cfg, ExitPort::Plus).imag()};
    const Complex wm{pt.a_minus_theory,
                     path_weak_value(cfg, ExitPort::Minus).imag()};
    const Complex zni = noninterfering_phasor(cfg);
    const double chi_k = cfg.chi;
    const double contrast = cfg.contrast;
    const double alpha = cfg.alpha;

    const auto p_of = [&](std::span<const double> th, double chi) {
      return 0.5 + (th[0] * std::cos(chi) + th[1] * std::sin(chi)) / th[2];
    };
    const auto a_of = [&](std::span<const double> th, int port) {
      const Complex raw{th[3 + 2 * port], th[4 + 2 * port]};
      const Complex z = (raw - (1.0 - contrast) * zni) / contrast;
      return std::atan2(z.imag(), z.real()) / alpha;
    };
    const auto eps_of = [&](std::span<const double> th) {
      const double p = detail::clamp01(p_of(th, chi_k));
      const double ap = a_of(th, 0);
      const double am = a_of(th, 1);
      return std::sqrt(p * std::norm(wp - Complex{ap, 0.0}) +
                       (1.0 - p) * std::norm(wm - Complex{am, 0.0}));
    };
    const auto delta_of = [&](std::span<const double> th) {
      const double p = detail::clamp01(p_of(th, chi_k));
      return 2.0 * std::sqrt(p * (1.0 - p));
    };
    const auto lhs_of = [&](std::span<const double> th) {
      return eps_of(th) * delta_of(th);
    };
    const auto rhs_of = [&](std::span<const double> th) {
      return 0.5 * std::abs(p_of(th, chi_k - M_PI / 2.0) -
                            p_of(th, chi_k + M_PI / 2.0));
    };
    const auto gap_of = [&](std::span<const double> th) {
      return lhs_of(th) - rhs_of(th);
    };

    const std::vector<double> theta = {fm.a,       fm.b,       fm.c11,
                                       bp.fit.a,   bp.fit.b,   bm.fit.a,
                                       bm.fit.b};
    pt.p_plus = p_of(theta, chi_k);
    pt.epsilon = eps_of(theta);
    pt.epsilon_sq = pt.epsilon * pt.epsilon;
    pt.delta_b = delta_of(theta);
    pt.lhs = lhs_of(theta);
    pt.rhs = rhs_of(theta);
    pt.gap = pt.lhs - pt.rhs;

    if (mode == RunMode::MonteCarlo) {
      // block-diagonal covariance of θ
      std::vector<double> cov(49, 0.0);
      cov[0 * 7 + 0] = fm.cov_ab[0];
      cov[0 * 7 + 1] = fm.cov_ab[1];
      cov[1 * 7 + 0] = fm.cov_ab[2];
      cov[1 * 7 + 1] = fm.cov_ab[3];
      cov[2 * 7 + 2] = fm.c11_var;
      cov[3 * 7 + 3] = bp.fit.cov[4];
      cov[3 * 7 + 4] = bp.fit.cov[5];
      cov[4 * 7 + 3] = bp.fit.cov[7];
      cov[4 * 7 + 4] = bp.fit.cov[8];
      cov[5 * 7 + 5] = bm.fit.cov[4];
      cov[5 * 7 + 6] = bm.fit.cov[5];
      cov[6 * 7 + 5] = bm.fit.cov[7];
      cov[6 * 7 + 6] = bm.fit.cov[8];
      const auto pf = [&](std::span<const double> th) { return p_of(th, chi_k); };
      pt.p_plus_err = std::sqrt(detail::propagate_variance(pf, theta, cov));
      pt.lhs_err = std::sqrt(detail::propagate_variance(lhs_of, theta, cov));
      pt.rhs_err = std::sqrt(detail::propagate_variance(rhs_of, theta, cov));
      pt.gap_err = std::sqrt(detail::propagate_variance(gap_of, theta, cov));
    }
    scan.points.push_back(pt);
  }
  return scan;
}

}  // namespace mzlab

#endif  // MZLAB_EXPERIMENT_HPP_
