#ifndef MZLAB_INTERFEROMETER_HPP_
#define MZLAB_INTERFEROMETER_HPP_

#include <algorithm>
#include <cmath>
#include <utility>

#include "mzlab/measurement.hpp"
#include "mzlab/qubit.hpp"

// Two-path interferometer with a spin-½ probe riding along:
//
//   |ψ(χ)⟩ = a₁|1⟩ + a₂ e^{iχ}|2⟩,    a₁² + a₂² = 1,  spin prepared in |↑x⟩.
//
// Path 1 carries a weak spin rotation R_z(α) (the coupling); the exit beam
// splitter maps paths onto ports |±⟩ = (|1⟩ ± |2⟩)/√2; a feedback rotation
// R_z(−β) applied in the selected port *counter-rotates* the spin, and the
// β that maximizes the ↑x intensity estimates the real part of the path-1
// weak value:  β_opt → α·Re ω₁±  as α → 0.
//
// Target observables:  A = Π₁ = |1⟩⟨1| (path presence), B = σ_x (path).
//
// Minus-port quantities follow from the plus port via χ → χ+π (the retrieval
// rule); it is applied literally everywhere, including in the Monte-Carlo
// sampling layer, so both ports run through one code path.

namespace mzlab {

enum class ExitPort { Plus, Minus };

inline double port_sign(ExitPort p) { return p == ExitPort::Plus ? 1.0 : -1.0; }

struct InterferometerConfig {
  double a1 = 0.0;
  double a2 = 0.0;
  double chi = 0.0;
  double alpha = 0.0;      // coupling rotation angle
  double beta_plus = 0.0;  // compensation angle, plus port
  double beta_minus = 0.0;
  double contrast = 1.0;   // multiplies the interference cross term only

  double beta(ExitPort p) const {
    return p == ExitPort::Plus ? beta_plus : beta_minus;
  }
};

inline InterferometerConfig make_config(double a1, double chi,
                                        double alpha = 0.0,
                                        double beta_plus = 0.0,
                                        double beta_minus = 0.0,
                                        double contrast = 1.0) {
  if (!(a1 >= 0.0 && a1 <= 1.0))
    throw OutOfRange("make_config: a1 must lie in [0,1]");
  if (!(contrast >= 0.0 && contrast <= 1.0))
    throw OutOfRange("make_config: contrast must lie in [0,1]");
  if (!std::isfinite(chi) || !std::isfinite(alpha) ||
      !std::isfinite(beta_plus) || !std::isfinite(beta_minus))
    throw OutOfRange("make_config: angles must be finite");
  InterferometerConfig c;
  c.a1 = a1;
  c.a2 = std::sqrt(std::max(0.0, 1.0 - a1 * a1));
  c.chi = chi;
  c.alpha = alpha;
  c.beta_plus = beta_plus;
  c.beta_minus = beta_minus;
  c.contrast = contrast;
  return c;
}

// χ → χ+π swaps the roles of the two ports.
inline InterferometerConfig retrieved(const InterferometerConfig& cfg) {
  InterferometerConfig c = cfg;
  c.chi = cfg.chi + M_PI;
  return c;
}

inline StateVector initial_state(const InterferometerConfig& cfg) {
  return make_state({Complex{cfg.a1, 0.0},
                     std::polar(cfg.a2, cfg.chi)},
                    Basis::Path);
}

struct PortProbabilities {
  double p_plus = 0.0;
  double p_minus = 0.0;
};

inline PortProbabilities output_probabilities(const InterferometerConfig& cfg) {
  // a₁a₂ can round one ulp past ½ for a symmetric split, so pin the result
  // into [0,1]; p_minus is taken as the exact complement.
  const double x = cfg.a1 * cfg.a2 * std::cos(cfg.chi);
  const double p = std::clamp(0.5 + x, 0.0, 1.0);
  return {p, 1.0 - p};
}

// Path-1-controlled spin rotation: |1⟩⟨1|⊗R_z(α) + |2⟩⟨2|⊗1.
inline LinearMap coupling_unitary(double alpha) {
  return kron(projector(path_one()), rotation_z(alpha)) +
         kron(projector(path_two()), identity(2));
}

// Feedback counter-rotation R_z(−β) confined to the selected port branch.
inline LinearMap compensation_unitary(double beta, ExitPort port) {
  const StateVector sel =
      port == ExitPort::Plus ? port_plus_state() : port_minus_state();
  const StateVector other =
      port == ExitPort::Plus ? port_minus_state() : port_plus_state();
  return kron(projector(sel), rotation_z(-beta)) +
         kron(projector(other), identity(2));
}

// Spin state of the selected exit branch after coupling, port projection and
// compensation.  Deliberately *not* normalized: ‖branch‖² is the port
// probability (with the coupling's cos(α/2) visibility reduction folded in),
// so the ↑x/↓x intensities read off directly as |⟨s|branch⟩|².
//
//   branch = (1/√2)[ a₁ R_z(α−β) ± a₂ e^{iχ} R_z(−β) ] |↑x⟩
inline StateVector exit_branch_state(const InterferometerConfig& cfg,
                                     ExitPort port) {
  const double s = port_sign(port);
  const double b = cfg.beta(port);
  const Complex w1 = Complex{cfg.a1 / std::sqrt(2.0), 0.0};
  const Complex w2 = s * std::polar(cfg.a2 / std::sqrt(2.0), cfg.chi);
  const StateVector r1 = apply(rotation_z(cfg.alpha - b), up_x());
  const StateVector r2 = apply(rotation_z(-b), up_x());
  StateVector out;
  out.basis = Basis::Spin;
  out.amp = {w1 * r1.amp[0] + w2 * r2.amp[0], w1 * r1.amp[1] + w2 * r2.amp[1]};
  return out;
}

struct IntensityRecord {
  double up_x = 0.0;
  double down_x = 0.0;
};

inline IntensityRecord ideal_intensities(const InterferometerConfig& cfg,
                                         ExitPort port) {
  const StateVector branch = exit_branch_state(cfg, port);
  return {std::norm(inner_product(up_x(), branch)),
          std::norm(inner_product(down_x(), branch))};
}

// Incoherent-path limit: same populations, interference cross term dropped.
// Independent of χ and identical for both ports.
inline IntensityRecord noninterfering_intensities(
    const InterferometerConfig& cfg, ExitPort port) {
  (void)port;
  const double b = cfg.beta(port);
  const double ca = std::cos((cfg.alpha - b) / 2.0);
  const double sa = std::sin((cfg.alpha - b) / 2.0);
  const double cb = std::cos(b / 2.0);
  const double sb = std::sin(b / 2.0);
  return {0.5 * (cfg.a1 * cfg.a1 * ca * ca + cfg.a2 * cfg.a2 * cb * cb),
          0.5 * (cfg.a1 * cfg.a1 * sa * sa + cfg.a2 * cfg.a2 * sb * sb)};
}

// Finite interferometer contrast C damps only the coherent cross term:
// I_meas = C·I_ideal + (1−C)·I_noninterfering, channel by channel.
inline IntensityRecord measured_intensity(const InterferometerConfig& cfg,
                                          ExitPort port) {
  const IntensityRecord ideal = ideal_intensities(cfg, port);
  const IntensityRecord ni = noninterfering_intensities(cfg, port);
  const double c = cfg.contrast;
  return {c * ideal.up_x + (1.0 - c) * ni.up_x,
          c * ideal.down_x + (1.0 - c) * ni.down_x};
}

// Bare-port fringe (coupling off, no spin analysis): what an interferogram
// χ-scan records in the O (plus) and H (minus) beams.
inline double fringe_intensity(const InterferometerConfig& cfg, ExitPort port) {
  const PortProbabilities p = output_probabilities(cfg);
  const double p_port = port == ExitPort::Plus ? p.p_plus : p.p_minus;
  return cfg.contrast * p_port + (1.0 - cfg.contrast) * 0.5;
}

// ω₁± = ⟨±|Π₁|ψ⟩/⟨±|ψ⟩ = a₁ / (a₁ ± a₂ e^{iχ}).
inline Complex path_weak_value(const InterferometerConfig& cfg, ExitPort port) {
  const Complex den =
      Complex{cfg.a1, 0.0} + port_sign(port) * std::polar(cfg.a2, cfg.chi);
  // den/√2 is the postselection amplitude ⟨±|ψ⟩
  if (std::abs(den) / std::sqrt(2.0) <= kEps)
    throw OrthogonalPostselection("path_weak_value: ⟨±|ψ⟩ ≈ 0");
  return Complex{cfg.a1, 0.0} / den;
}

// The measured ↑x intensity is an exact single-harmonic function of β:
//
//   I(β) = offset + Re(phasor · e^{−iβ})
//   phasor = (a₁²/4)e^{iα} + a₂²/4 + C·(±a₁a₂cosχ/2)e^{iα/2}
//   offset = 1/4 + C·(±a₁a₂cosχ/2)cos(α/2)
//
// — the whole β-scan analysis (optimal β, sinusoid fits, contrast
// correction) hangs off this decomposition.  The first two phasor terms are
// the non-interfering part; only the cross term feels the contrast.
struct BetaScanModel {
  double offset = 0.0;
  Complex phasor{0.0, 0.0};

  double at(double beta) const {
    return offset + (phasor * std::polar(1.0, -beta)).real();
  }
};

inline Complex noninterfering_phasor(const InterferometerConfig& cfg) {
  return Complex{cfg.a1 * cfg.a1 / 4.0, 0.0} * std::polar(1.0, cfg.alpha) +
         Complex{cfg.a2 * cfg.a2 / 4.0, 0.0};
}

inline BetaScanModel beta_scan_model(const InterferometerConfig& cfg,
                                     ExitPort port) {
  const double cross =
      port_sign(port) * cfg.a1 * cfg.a2 * std::cos(cfg.chi) / 2.0;
  BetaScanModel m;
  m.phasor = noninterfering_phasor(cfg) +
             Complex{cfg.contrast * cross, 0.0} * std::polar(1.0, cfg.alpha / 2.0);
  m.offset = 0.25 + cfg.contrast * cross * std::cos(cfg.alpha / 2.0);
  return m;
}

struct BetaOptimum {
  double exact = 0.0;       // arg of the β-scan phasor, in (−π, π]
  double weak_limit = 0.0;  // α·Re ω₁± — what the exact value tends to
};

inline BetaOptimum optimal_beta(const InterferometerConfig& cfg,
                                ExitPort port) {
  if (cfg.alpha == 0.0)
    throw AmplitudeZero(
        "optimal_beta: α = 0 — the β-scan maximum carries no weak-value "
        "information");
  const BetaScanModel m = beta_scan_model(cfg, port);
  if (std::abs(m.phasor) <= kEps)
    throw AmplitudeZero("optimal_beta: β-fringe amplitude vanishes");
  BetaOptimum opt;
  opt.exact = std::atan2(m.phasor.imag(), m.phasor.real());
  opt.weak_limit = cfg.alpha * path_weak_value(cfg, port).real();
  return opt;
}

// Bridge into the generic apparatus machinery: the exit beam splitter as a
// port measurement read out by a spin meter.
//
//   U = |+⟩⟨+|⊗1 + |−⟩⟨−|⊗σ_x,  ξ = |↑z⟩,  meter basis {|↑z⟩, |↓z⟩}
//
// gives measurement operators M_↑ = |+⟩⟨+|, M_↓ = |−⟩⟨−|.  U commutes with
// σ_x(path)⊗1, so the disturbance on B = σ_x vanishes identically.  With the
// default ±1 meter the apparatus measures which port; attach estimate values
// (A₊, A₋) instead to make it output path-presence estimates.
inline ApparatusModel as_apparatus_model(const InterferometerConfig& cfg) {
  (void)cfg;  // the bridge depends only on the exit optics, not on (a₁, χ)
  ApparatusModel m;
  m.interaction = kron(projector(port_plus_state()), identity(2)) +
                  kron(projector(port_minus_state()), pauli(PauliAxis::X));
  m.probe_state = up_z();
  m.meter_basis = {up_z(), down_z()};
  m.meter_values = {+1.0, -1.0};
  detail::validate_apparatus(m, /*require_distinct=*/true);
  return m;
}

inline ApparatusModel as_apparatus_model(const InterferometerConfig& cfg,
                                         std::pair<double, double> estimates) {
  return with_meter_values(as_apparatus_model(cfg),
                           {estimates.first, estimates.second});
}

}  // namespace mzlab

#endif  // MZLAB_INTERFEROMETER_HPP_
