#ifndef MZLAB_MEASUREMENT_HPP_
#define MZLAB_MEASUREMENT_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mzlab/qubit.hpp"
#include "mzlab/rng.hpp"

// Indirect measurement of a system qubit through a probe qubit:
//
//   (system ⊗ probe) --U--> read out the probe in meter_basis {|m0⟩,|m1⟩},
//   report the meter value attached to the outcome.
//
// Root-mean-square error and disturbance follow the operator definitions
//
//   ε(A)  = ‖(U†(1⊗M)U − A⊗1)|ψ⟩|ξ⟩‖,   M = Σ_k values[k]|m_k⟩⟨m_k|
//   η(B)  = ‖(U†(B⊗1)U − B⊗1)|ψ⟩|ξ⟩‖
//
// and equivalently through the measurement operators M_k = ⟨m_k|U|ξ⟩:
//
//   ε² = Σ_k ‖M_k (values[k]·1 − A)|ψ⟩‖²,   η² = Σ_k ‖[M_k, B]|ψ⟩‖².
//
// Meter values are ordinary reals: the inequality machinery below is proved
// for any Hermitian meter observable, which is what lets the apparatus
// output *estimates* of A instead of eigenvalues.

namespace mzlab {

struct ApparatusModel {
  StateVector probe_state;                 // |ξ⟩, dim 2, Spin basis
  LinearMap interaction;                   // U, 4×4 unitary on path⊗spin
  std::array<StateVector, 2> meter_basis;  // orthonormal probe basis
  std::array<double, 2> meter_values;      // reals attached to the outcomes
};

namespace detail {

inline void validate_apparatus(const ApparatusModel& m, bool require_distinct) {
  if (m.probe_state.dim() != 2 || m.probe_state.basis != Basis::Spin)
    throw InvalidModel("apparatus: probe must be a dim-2 Spin state");
  if (std::abs(norm(m.probe_state) - 1.0) > kEps)
    throw InvalidModel("apparatus: probe state not normalized");
  if (m.interaction.n != 4)
    throw InvalidModel("apparatus: interaction must be 4x4");
  if (!is_unitary(m.interaction))
    throw InvalidModel("apparatus: interaction is not unitary");
  for (const StateVector& b : m.meter_basis) {
    if (b.dim() != 2 || b.basis != Basis::Spin)
      throw InvalidModel("apparatus: meter basis must be dim-2 Spin states");
    if (std::abs(norm(b) - 1.0) > kEps)
      throw InvalidModel("apparatus: meter basis vector not normalized");
  }
  if (std::abs(inner_product(m.meter_basis[0], m.meter_basis[1])) > kEps)
    throw InvalidModel("apparatus: meter basis is not orthogonal");
  if (require_distinct &&
      std::abs(m.meter_values[0] - m.meter_values[1]) <= kEps)
    throw InvalidModel("apparatus: meter values must be distinct");
}

}  // namespace detail

inline ApparatusModel make_apparatus(StateVector probe, LinearMap interaction,
                                     std::array<StateVector, 2> meter_basis,
                                     std::array<double, 2> meter_values) {
  ApparatusModel m{std::move(probe), std::move(interaction),
                   std::move(meter_basis), meter_values};
  detail::validate_apparatus(m, /*require_distinct=*/true);
  return m;
}

// Estimate-valued variant: the meter reports real estimates (A0, A1) of the
// target observable.  Estimates may coincide (optimal estimates do whenever
// the two weak values share their real part), so distinctness is not
// enforced — the meter basis stays explicit and keeps outcomes separated.
inline ApparatusModel with_meter_values(ApparatusModel m,
                                        std::array<double, 2> values) {
  m.meter_values = values;
  detail::validate_apparatus(m, /*require_distinct=*/false);
  return m;
}

// --- measurement operators -------------------------------------------------

struct MeasurementOperatorFamily {
  std::vector<LinearMap> operators;    // M_k, 2×2 on the system
  std::vector<double> outcome_values;  // aligned with operators
};

inline double completeness_defect(const MeasurementOperatorFamily& f) {
  if (f.operators.empty()) throw IncompleteFamily("empty operator family");
  LinearMap sum{2, std::vector<Complex>(4, Complex{0.0, 0.0}), 0};
  for (const LinearMap& m : f.operators) sum = sum + adjoint(m) * m;
  return max_abs_entry(sum - identity(2));
}

// M_k[i][j] = Σ_{s,t} conj(⟨m_k|_s) U[(i,s),(j,t)] ξ_t — partial matrix
// element of U between probe states, acting on the path (system) slot.
inline MeasurementOperatorFamily measurement_operators(
    const ApparatusModel& model) {
  detail::validate_apparatus(model, /*require_distinct=*/false);
  MeasurementOperatorFamily fam;
  for (std::size_t k = 0; k < 2; ++k) {
    LinearMap mk{2, std::vector<Complex>(4, Complex{0.0, 0.0}), 0};
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        Complex acc{0.0, 0.0};
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t t = 0; t < 2; ++t)
            acc += std::conj(model.meter_basis[k].amp[s]) *
                   model.interaction.at(2 * i + s, 2 * j + t) *
                   model.probe_state.amp[t];
        mk.at(i, j) = acc;
      }
    fam.operators.push_back(std::move(mk));
    fam.outcome_values.push_back(model.meter_values[k]);
  }
  const double defect = completeness_defect(fam);
  if (defect > kEps)
    throw IncompleteFamily("measurement_operators: completeness defect " +
                           std::to_string(defect));
  return fam;
}

// --- rms error and disturbance (operator definitions) ----------------------

namespace detail {

inline void require_system_pair(const LinearMap& op, const StateVector& psi,
                                const char* who) {
  if (op.n != 2 || psi.dim() != 2)
    throw BadDimension(std::string(who) + ": system operator/state are dim 2");
  if (!is_hermitian(op))
    throw NotHermitian(std::string(who) + ": observable is not Hermitian");
  if (std::abs(norm(psi) - 1.0) > kEps)
    throw NotNormalized(std::string(who) + ": state is not normalized");
}

// ‖N |ψ⟩⊗|ξ⟩‖ for a 4×4 map N.
inline double composite_norm(const LinearMap& n4, const StateVector& psi,
                             const StateVector& xi) {
  StateVector sys = psi;
  sys.basis = Basis::Path;  // composite convention: system = path slot
  return norm(apply(n4, tensor_product(sys, xi)));
}

}  // namespace detail

inline double rms_error(const ApparatusModel& model, const LinearMap& a,
                        const StateVector& psi) {
  detail::require_system_pair(a, psi, "rms_error");
  detail::validate_apparatus(model, /*require_distinct=*/false);
  const LinearMap meter =
      Complex{model.meter_values[0], 0.0} * projector(model.meter_basis[0]) +
      Complex{model.meter_values[1], 0.0} * projector(model.meter_basis[1]);
  const LinearMap& u = model.interaction;
  const LinearMap heis = adjoint(u) * kron(identity(2), meter) * u;
  return detail::composite_norm(heis - kron(a, identity(2)), psi,
                                model.probe_state);
}

inline double rms_disturbance(const ApparatusModel& model, const LinearMap& b,
                              const StateVector& psi) {
  detail::require_system_pair(b, psi, "rms_disturbance");
  detail::validate_apparatus(model, /*require_distinct=*/false);
  const LinearMap& u = model.interaction;
  const LinearMap b4 = kron(b, identity(2));
  return detail::composite_norm(adjoint(u) * b4 * u - b4, psi,
                                model.probe_state);
}

// --- rms error and disturbance (Kraus form) ---------------------------------

inline double kraus_error(const MeasurementOperatorFamily& fam,
                          const LinearMap& a, const StateVector& psi) {
  detail::require_system_pair(a, psi, "kraus_error");
  const double defect = completeness_defect(fam);
  if (defect > kEps)
    throw IncompleteFamily("kraus_error: completeness defect " +
                           std::to_string(defect));
  double e2 = 0.0;
  for (std::size_t k = 0; k < fam.operators.size(); ++k) {
    const LinearMap shifted =
        Complex{fam.outcome_values[k], 0.0} * identity(2) - a;
    const double term = norm(apply(fam.operators[k] * shifted, psi));
    e2 += term * term;
  }
  return std::sqrt(e2);
}

inline double kraus_disturbance(const MeasurementOperatorFamily& fam,
                                const LinearMap& b, const StateVector& psi) {
  detail::require_system_pair(b, psi, "kraus_disturbance");
  const double defect = completeness_defect(fam);
  if (defect > kEps)
    throw IncompleteFamily("kraus_disturbance: completeness defect " +
                           std::to_string(defect));
  double d2 = 0.0;
  for (const LinearMap& mk : fam.operators) {
    const double term = norm(apply(commutator(mk, b), psi));
    d2 += term * term;
  }
  return std::sqrt(d2);
}

// --- weak values and projective error forms ---------------------------------

// ω_m = ⟨m|A|ψ⟩ / ⟨m|ψ⟩ — defined only away from orthogonal postselection.
inline Complex weak_value(const LinearMap& a, const StateVector& psi,
                          const StateVector& m) {
  detail::require_system_pair(a, psi, "weak_value");
  if (m.dim() != psi.dim()) throw BadDimension("weak_value: dim mismatch");
  const Complex den = inner_product(m, psi);
  if (std::abs(den) <= kEps)
    throw OrthogonalPostselection("weak_value: ⟨m|ψ⟩ ≈ 0");
  return inner_product(m, apply(a, psi)) / den;
}

struct EstimateAssignment {
  std::vector<double> values;  // one real estimate per basis outcome
};

inline EstimateAssignment optimal_estimates(const LinearMap& a,
                                            const StateVector& psi,
                                            std::span<const StateVector> basis) {
  if (basis.size() != 2) throw BadDimension("optimal_estimates: need 2 outcomes");
  if (std::abs(inner_product(basis[0], basis[1])) > kEps)
    throw InvalidModel("optimal_estimates: basis is not orthogonal");
  EstimateAssignment est;
  for (const StateVector& m : basis)
    est.values.push_back(weak_value(a, psi, m).real());
  return est;
}

// The four equivalent faces of the projective-measurement error:
//
//   operator_form      ⟨ψ|(A − Σ_m A_m |m⟩⟨m|)²|ψ⟩          (any estimates)
//   weak_value_form    Σ_m p_m |ω_m − A_m|²                  (any estimates)
//   second_moment_form ⟨A²⟩ − Σ_m p_m A_m²          (optimal estimates only)
//   variance_form      Δ²(A) − Σ_m p_m (A_m − ⟨A⟩)² (optimal estimates only)
//
// operator_form ≡ weak_value_form is an algebraic identity; the last two are
// filled only when the supplied estimates match Re ω_m to kEps, since they
// are derived under that substitution.
struct ProjectiveErrorForms {
  double operator_form = 0.0;
  double weak_value_form = 0.0;
  std::optional<double> second_moment_form;
  std::optional<double> variance_form;
  bool optimal = false;

  double value() const { return operator_form; }  // canonical ε²
};

inline ProjectiveErrorForms projective_error_forms(
    const LinearMap& a, const StateVector& psi,
    std::span<const StateVector> basis, const EstimateAssignment& est) {
  detail::require_system_pair(a, psi, "projective_error_forms");
  if (basis.size() != 2 || est.values.size() != 2)
    throw BadDimension("projective_error_forms: need 2 outcomes/estimates");
  if (std::abs(inner_product(basis[0], basis[1])) > kEps)
    throw InvalidModel("projective_error_forms: basis is not orthogonal");

  ProjectiveErrorForms out;

  // estimate operator E = Σ_m A_m |m⟩⟨m|
  LinearMap e{2, std::vector<Complex>(4, Complex{0.0, 0.0}), 0};
  for (std::size_t k = 0; k < 2; ++k)
    e = e + Complex{est.values[k], 0.0} * projector(basis[k]);
  const LinearMap d = a - e;
  out.operator_form = expectation(
      Complex{0.5, 0.0} * ((d * d) + adjoint(d * d)), psi);

  bool optimal = true;
  double wv_form = 0.0, sum_pa2 = 0.0, sum_pda2 = 0.0;
  const double mean_a = expectation(a, psi);
  for (std::size_t k = 0; k < 2; ++k) {
    const double pk = std::norm(inner_product(basis[k], psi));
    const Complex wk = weak_value(a, psi, basis[k]);  // OrthogonalPostselection
    wv_form += pk * std::norm(wk - Complex{est.values[k], 0.0});
    sum_pa2 += pk * est.values[k] * est.values[k];
    sum_pda2 += pk * (est.values[k] - mean_a) * (est.values[k] - mean_a);
    if (std::abs(wk.real() - est.values[k]) > kEps) optimal = false;
  }
  out.weak_value_form = wv_form;
  out.optimal = optimal;
  if (optimal) {
    const double mean_a2 = expectation(
        Complex{0.5, 0.0} * ((a * a) + adjoint(a * a)), psi);
    out.second_moment_form = mean_a2 - sum_pa2;
    const double var_a = mean_a2 - mean_a * mean_a;
    out.variance_form = var_a - sum_pda2;
  }
  return out;
}

// --- the Ozawa budget --------------------------------------------------------

struct UncertaintyBudget {
  double epsilon_a = 0.0;
  double eta_b = 0.0;
  double delta_a = 0.0;
  double delta_b = 0.0;
  double bound = 0.0;  // ½|⟨[A,B]⟩|

  double lhs() const {
    return epsilon_a * eta_b + epsilon_a * delta_b + delta_a * eta_b;
  }
};

// εη + εΔ(B) + Δ(A)η ≥ ½|⟨[A,B]⟩| holds for every apparatus in this model
// class; a violation here can only mean broken algebra, so it throws.
inline UncertaintyBudget ozawa_budget(const ApparatusModel& model,
                                      const LinearMap& a, const LinearMap& b,
                                      const StateVector& psi) {
  UncertaintyBudget u;
  u.epsilon_a = rms_error(model, a, psi);
  u.eta_b = rms_disturbance(model, b, psi);
  u.delta_a = standard_deviation(a, psi);
  u.delta_b = standard_deviation(b, psi);
  u.bound = 0.5 * std::abs(inner_product(psi, apply(commutator(a, b), psi)));
  if (u.lhs() < u.bound - 1e-10)
    throw InvalidModel("ozawa_budget: inequality violated — broken algebra");
  return u;
}

// --- random models for property sweeps ---------------------------------------

namespace detail {

// Golden-ratio sequenced Gaussians via Box-Muller on splitmix64 uniforms.
inline Complex gaussian_complex(SplitMix64& g) {
  const double u1 = uniform_open(g);
  const double u2 = uniform_open(g);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

// Gram-Schmidt on an n×n complex Gaussian matrix → Haar-like unitary.
inline LinearMap random_unitary(std::size_t n, SplitMix64& g) {
  LinearMap m{n, std::vector<Complex>(n * n), tag::kUnitary};
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = gaussian_complex(g);
    for (std::size_t prev = 0; prev < col; ++prev) {
      Complex overlap{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i)
        overlap += std::conj(m.at(i, prev)) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= overlap * m.at(i, prev);
    }
    double nv = 0.0;
    for (const Complex& c : v) nv += std::norm(c);
    nv = std::sqrt(nv);
    for (std::size_t i = 0; i < n; ++i) m.at(i, col) = v[i] / nv;
  }
  return m;
}

}  // namespace detail

inline StateVector random_state(std::size_t dim, std::uint64_t seed) {
  SplitMix64 g{seed};
  std::vector<Complex> amps(dim);
  for (Complex& c : amps) c = detail::gaussian_complex(g);
  return make_state(std::move(amps),
                    dim == 2 ? Basis::Path : Basis::PathSpin);
}

// Seeded random apparatus: Haar-like 4×4 unitary, random probe, random
// orthonormal meter basis.  Even seeds use the ±1 meter; odd seeds attach a
// random real pair, exercising the estimate-valued case.
inline ApparatusModel random_apparatus(std::uint64_t seed) {
  SplitMix64 g{seed};
  ApparatusModel m;
  m.interaction = detail::random_unitary(4, g);
  std::vector<Complex> xi{detail::gaussian_complex(g),
                          detail::gaussian_complex(g)};
  m.probe_state = make_state(std::move(xi), Basis::Spin);
  const LinearMap mb = detail::random_unitary(2, g);
  for (std::size_t k = 0; k < 2; ++k) {
    m.meter_basis[k].basis = Basis::Spin;
    m.meter_basis[k].amp = {mb.at(0, k), mb.at(1, k)};
  }
  if (seed % 2 == 0) {
    m.meter_values = {+1.0, -1.0};
  } else {
    m.meter_values = {4.0 * uniform_open(g) - 2.0, 4.0 * uniform_open(g) - 2.0};
  }
  detail::validate_apparatus(m, /*require_distinct=*/false);
  return m;
}

}  // namespace mzlab

#endif  // MZLAB_MEASUREMENT_HPP_
