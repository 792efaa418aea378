#ifndef MZLAB_QUBIT_HPP_
#define MZLAB_QUBIT_HPP_

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "mzlab/core.hpp"

// Minimal complex linear algebra for one qubit (path OR spin, dim 2) and the
// path⊗spin composite (dim 4).  Dimensions are fixed by the physics, so plain
// row-major std::vector storage with runtime checks beats a general matrix
// library here.  Composite indexing convention throughout:
//
//   index(path i, spin s) = 2*i + s,   i,s ∈ {0,1}
//
// i.e. kron(path_op, spin_op) and tensor_product(path_state, spin_state).

namespace mzlab {

enum class Basis { Path, Spin, PathSpin };

struct StateVector {
  std::vector<Complex> amp;
  Basis basis = Basis::Path;

  std::size_t dim() const { return amp.size(); }
};

// Structural facts a map is known to satisfy.  Factories set them when the
// construction guarantees the property; numeric checks below never trust a
// tag, they re-verify against kEps.
namespace tag {
inline constexpr unsigned kUnitary = 1u << 0;
inline constexpr unsigned kHermitian = 1u << 1;
inline constexpr unsigned kProjector = 1u << 2;
}  // namespace tag

struct LinearMap {
  std::size_t n = 0;
  std::vector<Complex> a;  // row-major n×n
  unsigned tags = 0;

  Complex& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

namespace detail {

inline void require_dim_2_or_4(std::size_t d, const char* who) {
  if (d != 2 && d != 4)
    throw BadDimension(std::string(who) + ": dimension must be 2 or 4, got " +
                       std::to_string(d));
}

}  // namespace detail

// --- states ---------------------------------------------------------------

inline double norm(const StateVector& s) {
  double n2 = 0.0;
  for (const Complex& c : s.amp) n2 += std::norm(c);
  return std::sqrt(n2);
}

// Normalizes on construction; the zero vector has no direction to keep.
inline StateVector make_state(std::vector<Complex> amps, Basis basis) {
  detail::require_dim_2_or_4(amps.size(), "make_state");
  if (amps.size() == 4 && basis != Basis::PathSpin)
    throw BadDimension("make_state: dim-4 states live in the PathSpin basis");
  if (amps.size() == 2 && basis == Basis::PathSpin)
    throw BadDimension("make_state: PathSpin states have dim 4");
  double n2 = 0.0;
  for (const Complex& c : amps) n2 += std::norm(c);
  if (n2 <= kEps * kEps) throw ZeroVector("make_state: zero input vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (Complex& c : amps) c *= inv;
  return StateVector{std::move(amps), basis};
}

inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim())
    throw BadDimension("inner_product: dimension mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i)
    acc += std::conj(a.amp[i]) * b.amp[i];
  return acc;
}

inline StateVector tensor_product(const StateVector& path,
                                  const StateVector& spin) {
  if (path.basis != Basis::Path || spin.basis != Basis::Spin ||
      path.dim() != 2 || spin.dim() != 2)
    throw BadDimension("tensor_product: expects (Path dim 2, Spin dim 2)");
  StateVector out;
  out.basis = Basis::PathSpin;
  out.amp.resize(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t s = 0; s < 2; ++s)
      out.amp[2 * i + s] = path.amp[i] * spin.amp[s];
  return out;
}

// Convenience kets.  x-basis spin states are the interferometer's natural
// probe frame; path |±⟩ are the exit ports of the final beam splitter.
inline StateVector up_z() { return {{1.0, 0.0}, Basis::Spin}; }
inline StateVector down_z() { return {{0.0, 1.0}, Basis::Spin}; }
inline StateVector up_x() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, r}, Basis::Spin};
}
inline StateVector down_x() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, -r}, Basis::Spin};
}
inline StateVector path_one() { return {{1.0, 0.0}, Basis::Path}; }
inline StateVector path_two() { return {{0.0, 1.0}, Basis::Path}; }
inline StateVector port_plus_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, r}, Basis::Path};
}
inline StateVector port_minus_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, -r}, Basis::Path};
}

// --- maps -----------------------------------------------------------------

inline LinearMap make_map(std::size_t n, std::vector<Complex> entries,
                          unsigned tags = 0) {
  detail::require_dim_2_or_4(n, "make_map");
  if (entries.size() != n * n)
    throw BadDimension("make_map: entry count does not match n*n");
  return LinearMap{n, std::move(entries), tags};
}

inline LinearMap identity(std::size_t n) {
  detail::require_dim_2_or_4(n, "identity");
  LinearMap m{n, std::vector<Complex>(n * n, Complex{0.0, 0.0}),
              tag::kUnitary | tag::kHermitian};
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

inline LinearMap adjoint(const LinearMap& m) {
  LinearMap out{m.n, std::vector<Complex>(m.n * m.n), m.tags};
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      out.at(i, j) = std::conj(m.at(j, i));
  return out;
}

inline LinearMap operator*(const LinearMap& a, const LinearMap& b) {
  if (a.n != b.n) throw BadDimension("map product: dimension mismatch");
  LinearMap out{a.n, std::vector<Complex>(a.n * a.n, Complex{0.0, 0.0}), 0};
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t k = 0; k < a.n; ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < a.n; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  // unitarity survives composition; hermiticity generally does not
  if ((a.tags & tag::kUnitary) && (b.tags & tag::kUnitary))
    out.tags |= tag::kUnitary;
  return out;
}

inline LinearMap operator+(const LinearMap& a, const LinearMap& b) {
  if (a.n != b.n) throw BadDimension("map sum: dimension mismatch");
  LinearMap out{a.n, a.a, a.tags & b.tags & tag::kHermitian};
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += b.a[i];
  return out;
}

inline LinearMap operator-(const LinearMap& a, const LinearMap& b) {
  if (a.n != b.n) throw BadDimension("map difference: dimension mismatch");
  LinearMap out{a.n, a.a, a.tags & b.tags & tag::kHermitian};
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] -= b.a[i];
  return out;
}

inline LinearMap operator*(Complex c, const LinearMap& m) {
  LinearMap out{m.n, m.a, 0};
  for (Complex& e : out.a) e *= c;
  if (c.imag() == 0.0 && (m.tags & tag::kHermitian)) out.tags |= tag::kHermitian;
  return out;
}

inline StateVector apply(const LinearMap& m, const StateVector& s) {
  if (m.n != s.dim()) throw BadDimension("apply: dimension mismatch");
  StateVector out;
  out.basis = s.basis;
  out.amp.assign(m.n, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) out.amp[i] += m.at(i, j) * s.amp[j];
  return out;
}

inline double max_abs_entry(const LinearMap& m) {
  double mx = 0.0;
  for (const Complex& c : m.a) mx = std::max(mx, std::abs(c));
  return mx;
}

inline bool is_hermitian(const LinearMap& m, double eps = kEps) {
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      if (std::abs(m.at(i, j) - std::conj(m.at(j, i))) > eps) return false;
  return true;
}

inline bool is_unitary(const LinearMap& m, double eps = kEps) {
  return max_abs_entry(adjoint(m) * m - identity(m.n)) <= eps;
}

inline bool is_projector(const LinearMap& m, double eps = kEps) {
  return is_hermitian(m, eps) && max_abs_entry(m * m - m) <= eps;
}

// ⟨ψ|H|ψ⟩ for Hermitian H.  The imaginary residue is a rounding artifact
// once Hermiticity holds; we assert it is negligible and discard it.
inline double expectation(const LinearMap& h, const StateVector& s) {
  if (h.n != s.dim()) throw BadDimension("expectation: dimension mismatch");
  if (!is_hermitian(h))
    throw NotHermitian("expectation: operator is not Hermitian");
  const Complex v = inner_product(s, apply(h, s));
  if (std::abs(v.imag()) > kEps)
    throw NotHermitian("expectation: imaginary residue above tolerance");
  return v.real();
}

// sqrt(⟨H²⟩ − ⟨H⟩²), clamped at 0 against rounding.
inline double standard_deviation(const LinearMap& h, const StateVector& s) {
  const double m1 = expectation(h, s);
  // h*h is Hermitian for Hermitian h only up to rounding; symmetrize.
  const LinearMap h2 = Complex{0.5, 0.0} * ((h * h) + adjoint(h * h));
  const double var = expectation(h2, s) - m1 * m1;
  return std::sqrt(std::max(0.0, var));
}

inline LinearMap commutator(const LinearMap& a, const LinearMap& b) {
  return a * b - b * a;
}

// |s⟩⟨s| — requires a normalized input, a projector must have unit trace.
inline LinearMap projector(const StateVector& s) {
  if (std::abs(norm(s) - 1.0) > kEps)
    throw NotNormalized("projector: state is not normalized");
  LinearMap out{s.dim(), std::vector<Complex>(s.dim() * s.dim()),
                tag::kHermitian | tag::kProjector};
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j)
      out.at(i, j) = s.amp[i] * std::conj(s.amp[j]);
  return out;
}

enum class PauliAxis { X, Y, Z };

inline LinearMap pauli(PauliAxis axis) {
  const Complex i{0.0, 1.0};
  switch (axis) {
    case PauliAxis::X:
      return make_map(2, {0.0, 1.0, 1.0, 0.0}, tag::kUnitary | tag::kHermitian);
    case PauliAxis::Y:
      return make_map(2, {0.0, -i, i, 0.0}, tag::kUnitary | tag::kHermitian);
    case PauliAxis::Z:
    default:
      return make_map(2, {1.0, 0.0, 0.0, -1.0},
                      tag::kUnitary | tag::kHermitian);
  }
}

// exp(−i a σ_z / 2) = diag(e^{−ia/2}, e^{+ia/2}).  Group law
// rotation_z(a) rotation_z(b) = rotation_z(a+b) is exact up to rounding.
inline LinearMap rotation_z(double angle) {
  const Complex e_minus = std::polar(1.0, -angle / 2.0);
  const Complex e_plus = std::polar(1.0, +angle / 2.0);
  return make_map(2, {e_minus, 0.0, 0.0, e_plus}, tag::kUnitary);
}

// kron(P, S): P acts on the path slot, S on the spin slot, consistent with
// the 2*i+s composite index.
inline LinearMap kron(const LinearMap& path_op, const LinearMap& spin_op) {
  if (path_op.n != 2 || spin_op.n != 2)
    throw BadDimension("kron: expects two 2x2 factors");
  LinearMap out{4, std::vector<Complex>(16), 0};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t t = 0; t < 2; ++t)
          out.at(2 * i + s, 2 * j + t) = path_op.at(i, j) * spin_op.at(s, t);
  out.tags = path_op.tags & spin_op.tags &
             (tag::kUnitary | tag::kHermitian | tag::kProjector);
  return out;
}

}  // namespace mzlab

#endif  // MZLAB_QUBIT_HPP_
