#pragma once

// Central tolerance record. Every numeric acceptance threshold in the library
// derives from one of these three scales.
namespace bb84eve::tol {

// Algebraic identities evaluated in closed form (orthogonality, trace
// normalization, linear reconstruction).
inline constexpr double algebraic = 1e-12;

// Quantities routed through an eigensolver or other spectral decomposition.
inline constexpr double spectral = 1e-10;

// Targets for the derivative-free optimizer.
inline constexpr double optimization = 1e-4;

}  // namespace bb84eve::tol
