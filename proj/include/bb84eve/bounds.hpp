#pragma once

// Information-disturbance bound kernel and its numerical sanity checks.
//
//   phi(z)        = (1+z)ln(1+z) + (1-z)ln(1-z)
//   gain_bound(d) = 2 sqrt(d(1-d))
//   info_bound(d) = phi(gain_bound(d)) / 2        (nats)
//
// info_bound is the ceiling on the eavesdropper's mutual information about
// one basis given the disturbance d she causes in the conjugate basis, and
// equally the ceiling on the basis-averaged information at average
// disturbance d.

#include <array>
#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace bb84eve {

// Monotone increasing on [0,1]; phi(0) = 0, phi(1) = 2 ln 2 (0 ln 0 := 0).
inline double phi(double z) {
  if (!(z >= -tol::algebraic && z <= 1.0 + tol::algebraic))
    throw std::invalid_argument("phi: argument outside [0, 1]");
  z = std::min(std::max(z, 0.0), 1.0);
  const double up = (1.0 + z) * std::log1p(z);
  const double dn = (z < 1.0) ? (1.0 - z) * std::log1p(-z) : 0.0;
  return up + dn;
}

inline double gain_bound(double d) {
  if (!(d >= 0.0 && d <= 1.0))
    throw std::invalid_argument("gain_bound: disturbance outside [0, 1]");
  return 2.0 * std::sqrt(d * (1.0 - d));
}

inline double info_bound(double d) {
  if (!(d >= 0.0 && d <= 0.5))
    throw std::invalid_argument("info_bound: disturbance outside [0, 1/2]");
  return 0.5 * phi(gain_bound(d));
}

// d^2/dx^2 of phi(2 sqrt(x(1-x))), expressed through z = 2 sqrt(x(1-x)).
// Negative for z in (0, 1); vanishes in the z -> 0 limit.
inline double concavity_closed_form(double z) {
  if (!(z > 0.0 && z < 1.0))
    throw std::invalid_argument("concavity_closed_form: z outside (0, 1)");
  return (4.0 / (z * z * z)) * (2.0 * z - std::log((1.0 + z) / (1.0 - z)));
}

struct SlopeReport {
  std::array<double, 3> d{};
  std::array<double, 3> ratio{};  // info_bound(d)/d, approaching 2 from below
  bool pass = false;
};

// Small-disturbance behavior: the bound flattens to the line 2d.
inline SlopeReport small_d_slope_check() {
  SlopeReport r;
  r.d = {1e-3, 1e-4, 1e-5};
  for (int k = 0; k < 3; ++k) r.ratio[k] = info_bound(r.d[k]) / r.d[k];
  r.pass = true;
  for (int k = 0; k < 3; ++k)
    r.pass = r.pass && r.ratio[k] >= 1.9 && r.ratio[k] <= 2.0;
  r.pass = r.pass && r.ratio[0] < r.ratio[1] && r.ratio[1] < r.ratio[2];
  return r;
}

struct ConcavityReport {
  double grid_step = 0.0;
  int points = 0;
  double max_second_difference = 0.0;  // of phi(2 sqrt(x(1-x))), divided by h^2
  double max_closed_form = 0.0;
  bool pass = false;
};

// Concavity of x -> phi(2 sqrt(x(1-x))) on (grid_step, 1/2 - grid_step),
// checked both by second central differences and by the closed form.
inline ConcavityReport concavity_check(double grid_step) {
  if (!(grid_step > 0.0 && grid_step < 0.1))
    throw std::invalid_argument("concavity_check: step outside (0, 0.1)");
  ConcavityReport r;
  r.grid_step = grid_step;
  const double h = grid_step;
  auto f = [](double x) { return phi(gain_bound(x)); };
  double max_dd = -1e300, max_cf = -1e300;
  for (double x = 2.0 * h; x < 0.5 - 2.0 * h + 1e-15; x += h) {
    const double dd = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    const double cf = concavity_closed_form(gain_bound(x));
    max_dd = std::max(max_dd, dd);
    max_cf = std::max(max_cf, cf);
    ++r.points;
  }
  r.max_second_difference = max_dd;
  r.max_closed_form = max_cf;
  r.pass = r.points > 0 && max_dd <= 1e-8 && max_cf <= 0.0;
  return r;
}

}  // namespace bb84eve
