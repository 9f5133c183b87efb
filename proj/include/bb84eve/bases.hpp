#pragma once

// The two conjugate signal bases and their geometry.
//
// Signals are linear-polarization states with real amplitudes:
//   |x> = (1,0), |y> = (0,1), |u> = (|x>+|y>)/sqrt2, |v> = (|x>-|y>)/sqrt2.
// On the Poincare sphere (n1,n2,n3) = (<sx>,<sy>,<sz>) they sit on the
// equatorial plane n2 = 0 at 90-degree spacing: x,u,y,v at polar angles
// 0, 90, 180, 270. The polar axis n2 is the circular-polarization axis.
// Poincare angles are twice polarization-plane angles; that factor of two
// lives entirely inside polar_rotation.

#include <array>
#include <cmath>
#include <stdexcept>

#include "hilbert.hpp"

namespace bb84eve {

enum class Basis : int { XY = 0, UV = 1 };
enum class Signal : int { X = 0, Y = 1, U = 2, V = 3 };

inline int index(Signal s) { return static_cast<int>(s); }
inline int index(Basis b) { return static_cast<int>(b); }

inline Basis basis_of(Signal s) { return (index(s) < 2) ? Basis::XY : Basis::UV; }
inline Basis conjugate(Basis b) { return (b == Basis::XY) ? Basis::UV : Basis::XY; }

// The two signals of a basis in bit order: bit 0 first (x or u).
inline std::array<Signal, 2> signals_of(Basis b) {
  return (b == Basis::XY) ? std::array<Signal, 2>{Signal::X, Signal::Y}
                          : std::array<Signal, 2>{Signal::U, Signal::V};
}

inline Signal partner(Signal s) {
  switch (s) {
    case Signal::X: return Signal::Y;
    case Signal::Y: return Signal::X;
    case Signal::U: return Signal::V;
    default: return Signal::U;
  }
}

inline const char* name(Signal s) {
  switch (s) {
    case Signal::X: return "x";
    case Signal::Y: return "y";
    case Signal::U: return "u";
    default: return "v";
  }
}

inline const char* name(Basis b) { return (b == Basis::XY) ? "xy" : "uv"; }

inline StateVector signal_vector(Signal s) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (s) {
    case Signal::X: return StateVector{1.0, 0.0};
    case Signal::Y: return StateVector{0.0, 1.0};
    case Signal::U: return StateVector{r, r};
    default: return StateVector{r, -r};
  }
}

// Two-qubit Bell basis built on the signal pair of b, in the order
// Phi+, Phi-, Psi+, Psi- where Phi+- = (|00>+-|11>)/sqrt2 and
// Psi+- = (|01>+-|10>)/sqrt2 with 0,1 the two signals of b.
inline std::array<StateVector, 4> bell_basis(Basis b) {
  const auto sig = signals_of(b);
  const StateVector s0 = signal_vector(sig[0]);
  const StateVector s1 = signal_vector(sig[1]);
  const cplx r = 1.0 / std::sqrt(2.0);
  const StateVector s00 = tensor(s0, s0), s11 = tensor(s1, s1);
  const StateVector s01 = tensor(s0, s1), s10 = tensor(s1, s0);
  return {r * (s00 + s11), r * (s00 - s11), r * (s01 + s10), r * (s01 - s10)};
}

struct BlochVector {
  double n1 = 0.0, n2 = 0.0, n3 = 0.0;
  double norm() const { return std::sqrt(n1 * n1 + n2 * n2 + n3 * n3); }
};

inline BlochVector bloch_of(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("bloch_of: qubit expected");
  BlochVector n;
  n.n1 = 2.0 * rho.at(1, 0).real();
  n.n2 = 2.0 * rho.at(1, 0).imag();
  n.n3 = (rho.at(0, 0) - rho.at(1, 1)).real();
  return n;
}

inline DensityMatrix state_of(const BlochVector& n) {
  if (n.norm() > 1.0 + tol::algebraic)
    throw std::invalid_argument("state_of: Bloch vector norm exceeds 1");
  Operator m(2);
  m.at(0, 0) = 0.5 * (1.0 + n.n3);
  m.at(1, 1) = 0.5 * (1.0 - n.n3);
  m.at(0, 1) = 0.5 * cplx(n.n1, -n.n2);
  m.at(1, 0) = 0.5 * cplx(n.n1, n.n2);
  return DensityMatrix::trusted(std::move(m));
}

// Rotation of the Poincare sphere about its polar axis by `angle` (radians,
// Poincare convention). The amplitude-plane half angle is internal, and the
// determinant phase is normalized so that the operator is 2*pi periodic:
// four 90-degree rotations compose to the identity operator exactly.
inline Operator polar_rotation(double angle) {
  const double h = 0.5 * angle;
  const cplx ph = std::exp(cplx(0.0, h));
  const double c = std::cos(h), s = std::sin(h);
  Operator m(2);
  m.at(0, 0) = ph * c;
  m.at(0, 1) = ph * (-s);
  m.at(1, 0) = ph * s;
  m.at(1, 1) = ph * c;
  return m;
}

// Real amplitude-plane rotation for a polarization-plane angle (half the
// Poincare angle). Used where real arithmetic keeps conjugation bookkeeping
// transparent; equal to polar_rotation(2*theta) up to a global phase.
inline Operator polarization_rotation(double theta) {
  Operator m(2);
  m.at(0, 0) = std::cos(theta);
  m.at(0, 1) = -std::sin(theta);
  m.at(1, 0) = std::sin(theta);
  m.at(1, 1) = std::cos(theta);
  return m;
}

}  // namespace bb84eve
