#ifndef MZLAB_UNCERTAINTY_HPP_
#define MZLAB_UNCERTAINTY_HPP_

#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mzlab/interferometer.hpp"

// Closed forms for the error-disturbance budget of the interferometer's
// path measurement (A = Π₁ read out at the exit ports, B = σ_x):
//
//   ε²(Π₁)  = Σ_± p_± |ω₁± − A_±|²          (estimate values A_±)
//           = (a₁a₂ sinχ)² / (1 − (2a₁a₂cosχ)²)   for optimal estimates
//   Δ(σ_x)  = 2√(p₊ p₋)
//   bound   = ½|⟨[Π₁, σ_x]⟩| = a₁a₂|sinχ|
//
// With optimal estimates and η(σ_x) = 0 the budget is *tight*:
// ε·Δ(σ_x) = a₁a₂|sinχ| identically — the product of the first two lines
// equals the third for every χ.  verify_tightness sweeps that identity.

namespace mzlab {

inline double delta_sigma_x(double p_plus) {
  if (!(p_plus >= 0.0 && p_plus <= 1.0))
    throw OutOfRange("delta_sigma_x: p_plus must lie in [0,1]");
  return 2.0 * std::sqrt(p_plus * (1.0 - p_plus));
}

inline std::pair<double, double> optimal_port_estimates(
    const InterferometerConfig& cfg) {
  return {path_weak_value(cfg, ExitPort::Plus).real(),
          path_weak_value(cfg, ExitPort::Minus).real()};
}

// Weak-value form of the rms error for arbitrary real port estimates
// (A₊, A₋).  Ports with vanishing postselection probability are excluded by
// the weak value itself (OrthogonalPostselection).
inline double epsilon_pi1(const InterferometerConfig& cfg,
                          std::pair<double, double> estimates) {
  const PortProbabilities p = output_probabilities(cfg);
  const Complex wp = path_weak_value(cfg, ExitPort::Plus);
  const Complex wm = path_weak_value(cfg, ExitPort::Minus);
  const double e2 =
      p.p_plus * std::norm(wp - Complex{estimates.first, 0.0}) +
      p.p_minus * std::norm(wm - Complex{estimates.second, 0.0});
  return std::sqrt(e2);
}

// Optimal-estimate error in closed form.  At 2a₁a₂|cosχ| = 1 one port goes
// dark and the expression degenerates; by contract the function returns 0
// there (the Kraus sum assigns nothing to a zero-probability branch), even
// though the χ-limit of the ratio is ¼ — callers probing that corner should
// use the operator definitions directly.
inline double epsilon_closed_form(const InterferometerConfig& cfg) {
  const double x = 2.0 * cfg.a1 * cfg.a2 * std::cos(cfg.chi);
  const double den = 1.0 - x * x;
  if (den <= kEps) return 0.0;
  const double num = cfg.a1 * cfg.a2 * std::sin(cfg.chi);
  return std::sqrt(num * num / den);
}

// ½|⟨ψ|[Π₁, σ_x]|ψ⟩| straight from the matrices.
inline double commutator_bound_direct(const InterferometerConfig& cfg) {
  const StateVector psi = initial_state(cfg);
  const LinearMap comm = commutator(projector(path_one()), pauli(PauliAxis::X));
  return 0.5 * std::abs(inner_product(psi, apply(comm, psi)));
}

// Same bound from two phase-shifted fringe values:
// ½|p₊(χ−π/2) − p₊(χ+π/2)| — how an experiment reads the commutator off the
// interferogram without reconstructing any operator.
inline double commutator_bound_phase_shift(
    const std::function<double(double)>& p_plus_of_chi, double chi) {
  return 0.5 *
         std::abs(p_plus_of_chi(chi - M_PI / 2.0) -
                  p_plus_of_chi(chi + M_PI / 2.0));
}

// And once more as ½|d⟨σ_x⟩/dχ|/... : central finite difference of the
// fringe, ½|d(p₊−p₋)/dχ| = |dp₊/dχ|; error is O(step²) with the sinχ
// curvature constant.
inline double fringe_gradient_bound(
    const std::function<double(double)>& p_plus_of_chi, double chi,
    double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw OutOfRange("fringe_gradient_bound: step must be finite and > 0");
  return std::abs(p_plus_of_chi(chi + step) - p_plus_of_chi(chi - step)) /
         (2.0 * step);
}

struct TightnessReport {
  double chi = 0.0;
  double lhs = 0.0;  // ε(Π₁)·Δ(σ_x), optimal estimates, η = 0
  double rhs = 0.0;  // ½|⟨[Π₁, σ_x]⟩|
  double gap = 0.0;  // lhs − rhs; 0 up to rounding when the budget is tight
};

inline std::vector<TightnessReport> verify_tightness(
    const InterferometerConfig& cfg_template, std::span<const double> chi_grid) {
  std::vector<TightnessReport> out;
  out.reserve(chi_grid.size());
  for (const double chi : chi_grid) {
    InterferometerConfig cfg = cfg_template;
    cfg.chi = chi;
    TightnessReport r;
    r.chi = chi;
    r.lhs = epsilon_closed_form(cfg) *
            delta_sigma_x(output_probabilities(cfg).p_plus);
    r.rhs = commutator_bound_direct(cfg);
    r.gap = r.lhs - r.rhs;
    out.push_back(r);
  }
  return out;
}

}  // namespace mzlab

#endif  // MZLAB_UNCERTAINTY_HPP_
