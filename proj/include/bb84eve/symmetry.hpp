#pragma once

// Symmetrization of an eavesdropping strategy. Eve draws one of eight
// branches (four 90-degree rotations of the signal plane, each with or
// without complex conjugation), conjugates her attack by that branch, and
// finally applies one fixed alignment rotation to the returning qubit.
// The twirl equalizes the disturbance across all four signals without
// changing the basis-averaged information, and the alignment never
// increases the average disturbance.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bases.hpp"
#include "constants.hpp"
#include "hilbert.hpp"
#include "measurement.hpp"
#include "povm.hpp"
#include "probe.hpp"

namespace bb84eve {

// Bob's marginal channel of an attack, as Kraus operators indexed by the
// probe basis. Requires orthonormal signal images.
struct BobChannel {
  std::vector<Operator> kraus;  // 2x2 each

  DensityMatrix apply(const DensityMatrix& rho) const { return DensityMatrix::trusted(apply_raw(rho.m)); }

  Operator apply_raw(const Operator& m) const {
    Operator out = Operator::zero(2);
    for (const Operator& a : kraus) out = out + a * m * dagger(a);
    return out;
  }
};

namespace detail {
inline BobChannel bob_channel_from_images(const StateVector& image_x, const StateVector& image_y,
                                          int probe_dim) {
  const double off = std::abs(inner(image_x, image_y));
  if (off > tol::spectral || std::abs(image_x.norm() - 1.0) > tol::spectral ||
      std::abs(image_y.norm() - 1.0) > tol::spectral)
    throw std::invalid_argument("bob_channel: signal images are not orthonormal");
  BobChannel ch;
  ch.kraus.reserve(static_cast<std::size_t>(probe_dim));
  for (int k = 0; k < probe_dim; ++k) {
    Operator a = Operator::zero(2);
    for (int i = 0; i < 2; ++i) {
      a.at(i, 0) = image_x[i * probe_dim + k];
      a.at(i, 1) = image_y[i * probe_dim + k];
    }
    ch.kraus.push_back(a);
  }
  return ch;
}
}  // namespace detail

inline BobChannel bob_channel(const Strategy& s) {
  return detail::bob_channel_from_images(s.image_x, s.image_y, s.probe_dim);
}

inline BobChannel bob_channel(const ProbeInteraction& p) {
  return detail::bob_channel_from_images(p.post[index(Signal::X)], p.post[index(Signal::Y)], 4);
}

// Affine action on the Bloch ball: n -> M n + t, coordinates (n1, n2, n3).
struct AffineBloch {
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> t{};
};

template <typename ChannelFn>
AffineBloch bloch_map(ChannelFn&& apply) {
  AffineBloch map;
  const BlochVector center = bloch_of(apply(DensityMatrix::maximally_mixed(2)));
  map.t = {center.n1, center.n2, center.n3};
  for (int j = 0; j < 3; ++j) {
    BlochVector axis{j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, j == 2 ? 1.0 : 0.0};
    const BlochVector out = bloch_of(apply(state_of(axis)));
    map.m[0][j] = out.n1 - map.t[0];
    map.m[1][j] = out.n2 - map.t[1];
    map.m[2][j] = out.n3 - map.t[2];
  }
  return map;
}

// Disturbance and information summary of a strategy's channel. The isotropy
// residual is the largest deviation of a single signal's error probability
// from the four-signal average.
struct ChannelReport {
  double d_xy = 0.0;
  double d_uv = 0.0;
  double d_avg = 0.0;
  double i_xy = 0.0;
  double i_uv = 0.0;
  double i_avg = 0.0;
  double isotropy_residual = 0.0;
};

inline ChannelReport channel_report(const Strategy& s) {
  ChannelReport rep;
  std::array<double, 4> err{};
  for (int k = 0; k < 4; ++k) err[k] = bob_error_probability(s, static_cast<Signal>(k));
  rep.d_xy = 0.5 * (err[0] + err[1]);
  rep.d_uv = 0.5 * (err[2] + err[3]);
  rep.d_avg = 0.5 * (rep.d_xy + rep.d_uv);
  for (int k = 0; k < 4; ++k)
    rep.isotropy_residual = std::max(rep.isotropy_residual, std::abs(err[k] - rep.d_avg));
  rep.i_xy = mutual_information(s, Basis::XY);
  rep.i_uv = mutual_information(s, Basis::UV);
  rep.i_avg = 0.5 * (rep.i_xy + rep.i_uv);
  return rep;
}

struct SymBranch {
  double angle = 0.0;  // signal-plane rotation, a multiple of pi/2
  bool conjugated = false;
  double weight = 0.125;
};

struct SymmetrizedStrategy {
  Strategy base;
  std::array<SymBranch, 8> branches;
  double alignment = 0.0;  // final rotation of the returning qubit
  double d_base_avg = 0.0;
  double d_sym = 0.0;      // per-signal (= average) disturbance after alignment
  double i_avg = 0.0;      // basis-averaged information, preserved by the twirl
};

namespace detail {

// Whether a branch rotation carries signals of b into the conjugate basis:
// odd quarter turns do, half turns only permute signals within the basis.
inline Basis branch_measurement_basis(const SymBranch& br, Basis b) {
  const int quarter = static_cast<int>(std::lround(br.angle / std::asin(1.0))) & 3;
  return (quarter & 1) ? conjugate(b) : b;
}

inline StateVector conj_if(const StateVector& v, bool c) { return c ? conj(v) : v; }
inline Operator conj_if(const Operator& m, bool c) { return c ? conj(m) : m; }

}  // namespace detail

// Joint signal image under one branch, alignment rotation included. The
// branch rotates the incoming signal, applies the base attack (conjugated
// when the branch says so), and rotates Bob's half back.
inline StateVector branch_image(const SymmetrizedStrategy& sym, const SymBranch& br, Signal sig) {
  const int p = sym.base.probe_dim;
  const Operator rot = polar_rotation(br.angle);
  const StateVector in = detail::conj_if(rot * signal_vector(sig), br.conjugated);
  StateVector mid = in[0] * sym.base.image_x + in[1] * sym.base.image_y;
  mid = detail::conj_if(mid, br.conjugated);
  const Operator back = polar_rotation(sym.alignment) * dagger(rot);
  StateVector out(2 * p);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < p; ++k)
      out[i * p + k] = back.at(i, 0) * mid[0 * p + k] + back.at(i, 1) * mid[1 * p + k];
  return out;
}

// Eve's statistics on one branch for an announced basis: the branch knows
// its own rotation, so it measures with the base POVM of the rotated basis
// (conjugated alongside the attack).
inline MeasurementStats branch_stats(const SymmetrizedStrategy& sym, const SymBranch& br, Basis b) {
  const auto sig = signals_of(b);
  const StateVector j0 = branch_image(sym, br, sig[0]);
  const StateVector j1 = branch_image(sym, br, sig[1]);
  Povm meas = sym.base.meas(detail::branch_measurement_basis(br, b));
  for (Operator& e : meas.elements) e = detail::conj_if(e, br.conjugated);
  return outcome_stats(j0, j1, meas, sym.base.probe_dim);
}

inline double information(const SymmetrizedStrategy& sym, Basis b) {
  double i = 0.0;
  for (const SymBranch& br : sym.branches) i += br.weight * mutual_information(branch_stats(sym, br, b));
  return i;
}

// Exact action of the symmetrized channel on Bob's qubit.
inline DensityMatrix apply(const SymmetrizedStrategy& sym, const DensityMatrix& rho) {
  const BobChannel base = bob_channel(sym.base);
  Operator acc = Operator::zero(2);
  for (const SymBranch& br : sym.branches) {
    const Operator rot = polar_rotation(br.angle);
    Operator in = rot * rho.m * dagger(rot);
    in = detail::conj_if(in, br.conjugated);
    Operator out = base.apply_raw(in);
    out = detail::conj_if(out, br.conjugated);
    out = dagger(rot) * out * rot;
    acc = acc + cplx(br.weight) * out;
  }
  const Operator align = polar_rotation(sym.alignment);
  return DensityMatrix::trusted(align * acc * dagger(align));
}

namespace detail {

inline double plane_disturbance(const AffineBloch& map, double chi) {
  // Average over the four equatorial signals of (1 - n_out . n_in) / 2,
  // with the alignment rotation (about n2, by chi) applied to the output.
  static const std::array<std::array<double, 3>, 4> sig{{
      {0.0, 0.0, 1.0},   // x
      {0.0, 0.0, -1.0},  // y
      {1.0, 0.0, 0.0},   // u
      {-1.0, 0.0, 0.0},  // v
  }};
  const double c = std::cos(chi), s = std::sin(chi);
  double total = 0.0;
  for (const auto& n : sig) {
    std::array<double, 3> o{};
    for (int r = 0; r < 3; ++r) {
      o[r] = map.t[r];
      for (int j = 0; j < 3; ++j) o[r] += map.m[r][j] * n[j];
    }
    const double o1 = s * o[2] + c * o[0];
    const double o3 = c * o[2] - s * o[0];
    total += 0.5 * (1.0 - (o1 * n[0] + o[1] * n[1] + o3 * n[2]));
  }
  return 0.25 * total;
}

}  // namespace detail

inline SymmetrizedStrategy symmetrize(const Strategy& s) {
  SymmetrizedStrategy sym;
  sym.base = s;
  const double half_pi = std::asin(1.0);
  for (int q = 0; q < 4; ++q)
    for (int c = 0; c < 2; ++c)
      sym.branches[static_cast<std::size_t>(2 * q + c)] = {q * half_pi, c != 0, 0.125};

  sym.d_base_avg = avg_disturbance(s);

  // Bloch map of the unaligned twirl, then the mandated alignment search:
  // a full-circle scan at 1e-4 rad followed by golden-section refinement.
  sym.alignment = 0.0;
  const AffineBloch tw = bloch_map([&](const DensityMatrix& rho) { return apply(sym, rho); });
  const double two_pi = 4.0 * half_pi;
  const double step = 1e-4;
  double best_chi = 0.0;
  double best_d = detail::plane_disturbance(tw, 0.0);
  for (double chi = step; chi < two_pi; chi += step) {
    const double d = detail::plane_disturbance(tw, chi);
    if (d < best_d) {
      best_d = d;
      best_chi = chi;
    }
  }
  double lo = best_chi - step, hi = best_chi + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = detail::plane_disturbance(tw, x1), f2 = detail::plane_disturbance(tw, x2);
  while (hi - lo > 1e-13) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = detail::plane_disturbance(tw, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = detail::plane_disturbance(tw, x2);
    }
  }
  sym.alignment = 0.5 * (lo + hi);

  // The scanned objective is an exact sinusoid in chi (the four signal
  // directions average out every other term of the affine map), so its
  // valley is flat near the argmin and value comparisons stall around 1e-8
  // away from it. The closed-form minimizer of that same sinusoid pins the
  // angle to machine precision; the bracket above already confirmed it is
  // the global valley.
  const double mu_re = 0.5 * (tw.m[2][2] + tw.m[0][0]);
  const double mu_im = 0.5 * (tw.m[0][2] - tw.m[2][0]);
  double snapped = -std::atan2(mu_im, mu_re);
  if (snapped < 0.0) snapped += two_pi;
  if (detail::plane_disturbance(tw, snapped) <=
      detail::plane_disturbance(tw, sym.alignment) + 1e-12)
    sym.alignment = snapped;
  sym.d_sym = detail::plane_disturbance(tw, sym.alignment);
  sym.i_avg = 0.5 * (information(sym, Basis::XY) + information(sym, Basis::UV));
  return sym;
}

inline double disturbance(const SymmetrizedStrategy& sym, Signal sig) {
  const DensityMatrix out = apply(sym, DensityMatrix::pure(signal_vector(sig)));
  return 1.0 - expectation(out.m, signal_vector(sig)).real();
}

inline double avg_disturbance(const SymmetrizedStrategy& sym) {
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d += disturbance(sym, static_cast<Signal>(k));
  return 0.25 * d;
}

inline ChannelReport channel_report(const SymmetrizedStrategy& sym) {
  ChannelReport rep;
  std::array<double, 4> err{};
  for (int k = 0; k < 4; ++k) err[k] = disturbance(sym, static_cast<Signal>(k));
  rep.d_xy = 0.5 * (err[0] + err[1]);
  rep.d_uv = 0.5 * (err[2] + err[3]);
  rep.d_avg = 0.5 * (rep.d_xy + rep.d_uv);
  for (int k = 0; k < 4; ++k)
    rep.isotropy_residual = std::max(rep.isotropy_residual, std::abs(err[k] - rep.d_avg));
  rep.i_xy = information(sym, Basis::XY);
  rep.i_uv = information(sym, Basis::UV);
  rep.i_avg = 0.5 * (rep.i_xy + rep.i_uv);
  return rep;
}

// Least-squares fit of the symmetrized channel's action on the four signal
// states to rho -> (1 - 2D) rho + D I, with the worst operator-norm
// deviation as the residual. A twirled channel fits exactly.
struct IsotropyReport {
  double d_fit = 0.0;
  double residual = 0.0;
  bool pass = false;
};

inline IsotropyReport isotropy_check(const SymmetrizedStrategy& sym, double eps = tol::spectral) {
  std::array<DensityMatrix, 4> in{};
  std::array<DensityMatrix, 4> out{};
  double numer = 0.0;
  for (int k = 0; k < 4; ++k) {
    in[k] = DensityMatrix::pure(signal_vector(static_cast<Signal>(k)));
    out[k] = apply(sym, in[k]);
    // <I - 2 rho, out - rho>_F accumulates the unnormalized projection of
    // the observed shift onto the direction that mixing by D produces.
    const Operator dir = Operator::identity(2) - cplx(2.0) * in[k].m;
    const Operator shift = out[k].m - in[k].m;
    numer += trace(dagger(dir) * shift).real();
  }
  IsotropyReport rep;
  rep.d_fit = numer / 8.0;
  for (int k = 0; k < 4; ++k) {
    const Operator model =
        cplx(1.0 - 2.0 * rep.d_fit) * in[k].m + cplx(rep.d_fit) * Operator::identity(2);
    rep.residual = std::max(rep.residual, opnorm_hermitian(out[k].m - model));
  }
  rep.pass = rep.residual <= eps;
  return rep;
}

}  // namespace bb84eve
