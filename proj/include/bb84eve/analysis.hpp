#pragma once

// Security analysis around the optimal attack: the legitimate channel's
// mutual information, the disturbance threshold where Eve's information
// overtakes it, CHSH correlations of an entangled pair sent through the
// attack channel, and the disturbance-information trade-off table.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bases.hpp"
#include "bounds.hpp"
#include "hilbert.hpp"
#include "measurement.hpp"
#include "probe.hpp"
#include "symmetry.hpp"

namespace bb84eve {

inline constexpr double ln2 = 0.69314718055994530941723212145818;

// Mutual information of the sifted key bit across a binary symmetric
// channel with error rate d, in nats. Equals phi(1 - 2d) / 2.
inline double alice_bob_information(double d) {
  if (d < 0.0 || d > 1.0) throw std::domain_error("alice_bob_information: d outside [0, 1]");
  double i = ln2;
  if (d > 0.0) i += d * std::log(d);
  if (d < 1.0) i += (1.0 - d) * std::log(1.0 - d);
  return i;
}

inline double chsh_formula(double d) {
  if (d < 0.0 || d > 0.5) throw std::domain_error("chsh_formula: d outside [0, 1/2]");
  return 2.0 * std::sqrt(2.0) * (1.0 - 2.0 * d);
}

// Observable of a linear-polarization measurement at angle theta_pol. The
// Poincare angle doubles: cos(2t) sigma3 + sin(2t) sigma1.
inline Operator polarization_observable(double theta_pol) {
  const double c = std::cos(2.0 * theta_pol), s = std::sin(2.0 * theta_pol);
  Operator o(2);
  o.at(0, 0) = c;
  o.at(1, 1) = -c;
  o.at(0, 1) = s;
  o.at(1, 0) = s;
  return o;
}

// Singlet state with the second half sent through a channel given as Kraus
// operators on one qubit.
inline DensityMatrix singlet_through_channel(const std::vector<Operator>& kraus) {
  const StateVector singlet = bell_basis(Basis::XY)[3];
  const Operator id = Operator::identity(2);
  Operator acc = Operator::zero(4);
  for (const Operator& a : kraus) {
    const Operator k = tensor(id, a);
    const StateVector branch = k * singlet;
    acc = acc + outer(branch, branch);
  }
  return DensityMatrix::trusted(acc);
}

inline double chsh_correlation(const DensityMatrix& rho_ab, double a_pol, double b_pol) {
  return trace(rho_ab.m * tensor(polarization_observable(a_pol), polarization_observable(b_pol)))
      .real();
}

// CHSH value of a shared singlet whose travelling half passes through the
// given channel, at the standard settings a in {0, 45} deg and b in
// {22.5, 67.5} deg. The (a1, b2) correlator enters with a minus sign.
inline double chsh_value(const std::vector<Operator>& kraus) {
  const DensityMatrix rho = singlet_through_channel(kraus);
  const double deg = std::acos(-1.0) / 180.0;
  const double a1 = 0.0, a2 = 45.0 * deg, b1 = 22.5 * deg, b2 = 67.5 * deg;
  const double e11 = chsh_correlation(rho, a1, b1);
  const double e12 = chsh_correlation(rho, a1, b2);
  const double e21 = chsh_correlation(rho, a2, b1);
  const double e22 = chsh_correlation(rho, a2, b2);
  return std::abs(e11 - e12 + e21 + e22);
}

// CHSH value when the travelling half passes through the optimal attack at
// equal disturbance d in both bases. Agrees with chsh_formula(d).
inline double chsh_from_state(double d) {
  return chsh_value(bob_channel(build_optimal(d, d)).kraus);
}

namespace detail {

template <typename Fn>
double bisect_root(Fn&& f, double lo, double hi) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// The security threshold computed three ways: in closed form, as the root
// of the information balance i_AB(d) = i_E(d), and as the disturbance where
// the CHSH value drops to the classical bound 2. All three coincide at
// 1/2 - sqrt(2)/4.
struct ThresholdResult {
  double closed_form = 0.0;
  double info_root = 0.0;
  double chsh_root = 0.0;
};

inline ThresholdResult threshold() {
  ThresholdResult t;
  t.closed_form = 0.5 - 0.25 * std::sqrt(2.0);
  t.info_root =
      detail::bisect_root([](double d) { return alice_bob_information(d) - info_bound(d); }, 1e-9,
                          0.25);
  t.chsh_root = detail::bisect_root([](double d) { return chsh_formula(d) - 2.0; }, 0.0, 0.25);
  return t;
}

struct TradeoffRow {
  double d = 0.0;
  double g_bound = 0.0;
  double i_eve_nats = 0.0;
  double i_eve_bits = 0.0;
  double i_ab_nats = 0.0;
  double s_chsh = 0.0;
  bool secure = false;
};

inline TradeoffRow tradeoff_row(double d) {
  TradeoffRow r;
  r.d = d;
  r.g_bound = gain_bound(d);
  r.i_eve_nats = info_bound(d);
  r.i_eve_bits = r.i_eve_nats / ln2;
  r.i_ab_nats = alice_bob_information(d);
  r.s_chsh = chsh_formula(d);
  r.secure = r.i_ab_nats > r.i_eve_nats;
  return r;
}

inline std::vector<TradeoffRow> tradeoff_curve(double d_min, double d_max, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("tradeoff_curve: step must be positive");
  if (d_min < 0.0 || d_max > 0.5 || d_min > d_max)
    throw std::invalid_argument("tradeoff_curve: range outside [0, 1/2]");
  const int count = static_cast<int>(std::floor((d_max - d_min) / step + 1e-9)) + 1;
  std::vector<TradeoffRow> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double d = d_min + i * step;
    if (d > d_max) d = d_max;
    rows.push_back(tradeoff_row(d));
  }
  return rows;
}

namespace detail {

inline std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// Round a double to 12 significant digits, for JSON output that matches the
// text formatting byte for byte.
inline double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace detail

inline void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows) {
  os << "d,g_bound,i_eve_nats,i_eve_bits,i_ab_nats,s_chsh,secure\n";
  for (const TradeoffRow& r : rows) {
    os << detail::g12(r.d) << ',' << detail::g12(r.g_bound) << ',' << detail::g12(r.i_eve_nats)
       << ',' << detail::g12(r.i_eve_bits) << ',' << detail::g12(r.i_ab_nats) << ','
       << detail::g12(r.s_chsh) << ',' << (r.secure ? "true" : "false") << '\n';
  }
}

// Reference point: measure in a random basis and resend the result. All
// four numbers are computed from the explicit model, not hardcoded.
struct InterceptResendSummary {
  double disturbance = 0.0;
  double gain = 0.0;
  double info_nats = 0.0;
  double s_chsh = 0.0;
};

inline InterceptResendSummary intercept_resend() {
  InterceptResendSummary out;

  // Channel: project onto a uniformly random signal state.
  std::vector<Operator> kraus;
  for (int k = 0; k < 4; ++k) {
    const StateVector s = signal_vector(static_cast<Signal>(k));
    kraus.push_back(cplx(std::sqrt(0.5)) * projector(s));
  }
  double err = 0.0;
  for (int k = 0; k < 4; ++k) {
    const StateVector s = signal_vector(static_cast<Signal>(k));
    Operator rho_out = Operator::zero(2);
    for (const Operator& a : kraus) {
      const StateVector branch = a * s;
      rho_out = rho_out + outer(branch, branch);
    }
    err += 1.0 - expectation(rho_out, s).real();
  }
  out.disturbance = err / 4.0;
  out.s_chsh = chsh_value(kraus);

  // Eve's outcomes for an announced basis: with probability 1/2 she
  // measured the same basis and knows the bit; otherwise she learned
  // nothing.
  MeasurementStats st;
  st.q = {0.25, 0.25, 0.25, 0.25};
  st.posterior = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}, {0.5, 0.5}};
  st.g_per_outcome = {1.0, 1.0, 0.0, 0.0};
  out.gain = bb84eve::gain(st).g;
  out.info_nats = mutual_information(st);
  return out;
}

}  // namespace bb84eve
