#pragma once

// Two-qubit probe interactions for individual eavesdropping on the four
// signal states.
//
// A ProbeInteraction stores, for each signal s, the normalized joint
// post-interaction state |post_s> of (signal qubit) x (two probe qubits) in
// Schmidt-like form
//
//   |post_s> = sqrt(1-d_b) |s>|keep_s> + sqrt(d_b) |s_perp>|flip_s>,
//
// where b is the basis of s, |s_perp> its partner, and keep_s / flip_s are
// the probe's relative states paired with the undisturbed and flipped Bob
// component. keep_s and flip_s are unit vectors orthogonal to each other, so
// Bob's marginal is diagonal in basis b with weights (1-d_b, d_b).
//
// build_optimal realizes the information-disturbance-optimal family: the
// relative states are fixed linear combinations of the Bell states of the
// announced basis, with coefficients sqrt(1-d), sqrt(d) drawn from the
// conjugate basis's disturbance. build_ansatz realizes the two-parameter
// product-form family whose disturbance is
// (1-cos a)/(2 - cos a + cos b).

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bases.hpp"
#include "hilbert.hpp"
#include "povm.hpp"

namespace bb84eve {

struct ProbeInteraction {
  double d_xy = 0.0;
  double d_uv = 0.0;
  std::array<StateVector, 4> keep;  // indexed by Signal
  std::array<StateVector, 4> flip;
  std::array<StateVector, 4> post;  // dim 8, signal qubit first

  double disturbance(Basis b) const { return (b == Basis::XY) ? d_xy : d_uv; }
};

// (<bob| x 1) |full>, with the signal qubit as the leading tensor factor.
inline StateVector bob_component(const StateVector& full, const StateVector& bob,
                                 int probe_dim) {
  if (full.dim() != 2 * probe_dim || bob.dim() != 2)
    throw std::invalid_argument("bob_component: dimension mismatch");
  StateVector out(probe_dim);
  for (int k = 0; k < probe_dim; ++k)
    out[k] = std::conj(bob[0]) * full[k] + std::conj(bob[1]) * full[probe_dim + k];
  return out;
}

namespace detail {

// First standard basis vector with a stable orthogonal complement against
// `against`, normalized. Deterministic completion used when a relative state
// is multiplied by a zero Schmidt coefficient.
inline StateVector completion_orthogonal_to(const StateVector& against) {
  const int d = against.dim();
  for (int j = 0; j < d; ++j) {
    StateVector v(d);
    v[j] = 1.0;
    const cplx ov = inner(against, v);
    for (int i = 0; i < d; ++i) v[i] -= ov * against[i];
    if (v.norm() > 1e-8) return v.normalized();
  }
  throw std::runtime_error("completion_orthogonal_to: no candidate found");
}

inline void check_disturbance_domain(double d, const char* who) {
  if (!(d >= 0.0 && d <= 0.5))
    throw std::invalid_argument(std::string(who) + ": disturbance outside [0, 1/2]");
}

}  // namespace detail

inline ProbeInteraction build_optimal(double d_xy, double d_uv) {
  detail::check_disturbance_domain(d_xy, "build_optimal(d_xy)");
  detail::check_disturbance_domain(d_uv, "build_optimal(d_uv)");

  ProbeInteraction p;
  p.d_xy = d_xy;
  p.d_uv = d_uv;

  const auto bell_xy = bell_basis(Basis::XY);
  const auto bell_uv = bell_basis(Basis::UV);

  // xy-side relative states carry the conjugate (uv) disturbance split and
  // vice versa.
  const double a = std::sqrt(1.0 - d_uv), b = std::sqrt(d_uv);
  p.keep[index(Signal::X)] = a * bell_xy[0] + b * bell_xy[1];
  p.keep[index(Signal::Y)] = a * bell_xy[0] - b * bell_xy[1];
  p.flip[index(Signal::X)] = a * bell_xy[2] - b * bell_xy[3];
  p.flip[index(Signal::Y)] = a * bell_xy[2] + b * bell_xy[3];

  const double c = std::sqrt(1.0 - d_xy), s = std::sqrt(d_xy);
  p.keep[index(Signal::U)] = c * bell_uv[0] + s * bell_uv[1];
  p.keep[index(Signal::V)] = c * bell_uv[0] - s * bell_uv[1];
  p.flip[index(Signal::U)] = c * bell_uv[2] - s * bell_uv[3];
  p.flip[index(Signal::V)] = c * bell_uv[2] + s * bell_uv[3];

  for (Signal sig : {Signal::X, Signal::Y, Signal::U, Signal::V}) {
    const double d = p.disturbance(basis_of(sig));
    p.post[index(sig)] =
        cplx(std::sqrt(1.0 - d)) * tensor(signal_vector(sig), p.keep[index(sig)]) +
        cplx(std::sqrt(d)) * tensor(signal_vector(partner(sig)), p.flip[index(sig)]);
  }
  return p;
}

inline double ansatz_disturbance(double alpha, double beta) {
  return (1.0 - std::cos(alpha)) / (2.0 - std::cos(alpha) + std::cos(beta));
}

// Product-form two-parameter family. The xy-side relative states are
//   keep_x = |x>|x>,                 flip_x = |x>|y>,
//   keep_y = (cos a |x> + sin a |y>)|x>,
//   flip_y = (cos b |x> + sin b |y>)|y>,
// and the uv side follows from conjugacy of the post states. Both bases see
// the same disturbance D = ansatz_disturbance(a, b).
inline ProbeInteraction build_ansatz(double alpha, double beta) {
  const double half_pi = std::asin(1.0);
  if (!(alpha >= 0.0 && alpha <= half_pi) || !(beta >= 0.0 && beta <= half_pi))
    throw std::invalid_argument("build_ansatz: angles outside [0, pi/2]");

  const double d = ansatz_disturbance(alpha, beta);
  ProbeInteraction p;
  p.d_xy = d;
  p.d_uv = d;

  const StateVector x = signal_vector(Signal::X), y = signal_vector(Signal::Y);
  p.keep[index(Signal::X)] = tensor(x, x);
  p.flip[index(Signal::X)] = tensor(x, y);
  p.keep[index(Signal::Y)] =
      tensor(cplx(std::cos(alpha)) * x + cplx(std::sin(alpha)) * y, x);
  p.flip[index(Signal::Y)] =
      tensor(cplx(std::cos(beta)) * x + cplx(std::sin(beta)) * y, y);

  for (Signal sig : {Signal::X, Signal::Y}) {
    p.post[index(sig)] =
        cplx(std::sqrt(1.0 - d)) * tensor(signal_vector(sig), p.keep[index(sig)]) +
        cplx(std::sqrt(d)) * tensor(signal_vector(partner(sig)), p.flip[index(sig)]);
  }
  const cplx r = 1.0 / std::sqrt(2.0);
  p.post[index(Signal::U)] = r * (p.post[index(Signal::X)] + p.post[index(Signal::Y)]);
  p.post[index(Signal::V)] = r * (p.post[index(Signal::X)] - p.post[index(Signal::Y)]);

  // Read the uv-side relative states back off the post states. Zero Schmidt
  // coefficients leave the paired relative state unconstrained; store a
  // deterministic unit completion so every invariant stays checkable.
  for (Signal sig : {Signal::U, Signal::V}) {
    const StateVector keep_part =
        bob_component(p.post[index(sig)], signal_vector(sig), 4);
    const StateVector flip_part =
        bob_component(p.post[index(sig)], signal_vector(partner(sig)), 4);
    p.keep[index(sig)] = (keep_part.norm() > 1e-8)
                             ? keep_part.normalized()
                             : detail::completion_orthogonal_to(
                                   flip_part.norm() > 1e-8 ? flip_part.normalized()
                                                           : tensor(x, x));
    p.flip[index(sig)] = (flip_part.norm() > 1e-8)
                             ? flip_part.normalized()
                             : detail::completion_orthogonal_to(p.keep[index(sig)]);
  }
  return p;
}

struct ConstraintReport {
  struct Entry {
    std::string name;
    double residual = 0.0;
    bool pass = false;
  };
  std::vector<Entry> entries;
  double max_residual = 0.0;
  bool all_pass = true;

  void add(std::string name, double residual, double eps = tol::algebraic) {
    const bool ok = residual <= eps;
    max_residual = std::max(max_residual, residual);
    all_pass = all_pass && ok;
    entries.push_back({std::move(name), residual, ok});
  }
};

// Checks the construction identities satisfied by both builders: unit norms,
// per-signal keep/flip orthogonality, the signal-orthogonality conditions on
// cross overlaps, conjugacy of the post states, the linear uv-side
// reconstruction, and Bob-marginal weights.
inline ConstraintReport verify_constraints(const ProbeInteraction& p) {
  ConstraintReport rep;

  double norm_res = 0.0;
  for (int s = 0; s < 4; ++s) {
    norm_res = std::max(norm_res, std::abs(p.keep[s].norm() - 1.0));
    norm_res = std::max(norm_res, std::abs(p.flip[s].norm() - 1.0));
    norm_res = std::max(norm_res, std::abs(p.post[s].norm() - 1.0));
  }
  rep.add("unit norms (relative and post states)", norm_res);

  double rel_orth = 0.0;
  for (int s = 0; s < 4; ++s)
    rel_orth = std::max(rel_orth, std::abs(inner(p.keep[s], p.flip[s])));
  rep.add("keep/flip orthogonality per signal", rel_orth);

  const cplx kxfy = inner(p.keep[index(Signal::X)], p.flip[index(Signal::Y)]);
  const cplx fxky = inner(p.flip[index(Signal::X)], p.keep[index(Signal::Y)]);
  rep.add("cross-overlap sum <keep_x|flip_y> + <flip_x|keep_y>", std::abs(kxfy + fxky));
  rep.add("cross-overlap difference, real part", std::abs((kxfy - fxky).real()));
  rep.add("cross-overlap difference, imaginary part", std::abs((kxfy - fxky).imag()));

  const cplx r = 1.0 / std::sqrt(2.0);
  rep.add("post_u = (post_x + post_y)/sqrt2",
          (p.post[index(Signal::U)] -
           r * (p.post[index(Signal::X)] + p.post[index(Signal::Y)]))
              .norm());
  rep.add("post_v = (post_x - post_y)/sqrt2",
          (p.post[index(Signal::V)] -
           r * (p.post[index(Signal::X)] - p.post[index(Signal::Y)]))
              .norm());

  // Linear reconstruction of the uv-side relative states from the xy side.
  const double cx = std::sqrt(1.0 - p.d_xy), sx = std::sqrt(p.d_xy);
  const double cu = std::sqrt(1.0 - p.d_uv), su = std::sqrt(p.d_uv);
  const StateVector& kx = p.keep[index(Signal::X)];
  const StateVector& ky = p.keep[index(Signal::Y)];
  const StateVector& fx = p.flip[index(Signal::X)];
  const StateVector& fy = p.flip[index(Signal::Y)];
  const StateVector rhs_keep_u = cplx(cx) * (kx + ky) + cplx(sx) * (fx + fy);
  const StateVector rhs_flip_u = cplx(cx) * (kx - ky) + cplx(sx) * (fy - fx);
  const StateVector rhs_keep_v = cplx(cx) * (kx + ky) - cplx(sx) * (fx + fy);
  const StateVector rhs_flip_v = cplx(cx) * (kx - ky) + cplx(sx) * (fx - fy);
  rep.add("uv reconstruction of keep_u",
          (cplx(2.0 * cu) * p.keep[index(Signal::U)] - rhs_keep_u).norm());
  rep.add("uv reconstruction of flip_u",
          (cplx(2.0 * su) * p.flip[index(Signal::U)] - rhs_flip_u).norm());
  rep.add("uv reconstruction of keep_v",
          (cplx(2.0 * cu) * p.keep[index(Signal::V)] - rhs_keep_v).norm());
  rep.add("uv reconstruction of flip_v",
          (cplx(2.0 * su) * p.flip[index(Signal::V)] - rhs_flip_v).norm());

  double marginal_res = 0.0;
  for (Signal sig : {Signal::X, Signal::Y, Signal::U, Signal::V}) {
    const double d = p.disturbance(basis_of(sig));
    const StateVector own = bob_component(p.post[index(sig)], signal_vector(sig), 4);
    const StateVector other =
        bob_component(p.post[index(sig)], signal_vector(partner(sig)), 4);
    marginal_res = std::max(marginal_res, std::abs(own.norm_sq() - (1.0 - d)));
    marginal_res = std::max(marginal_res, std::abs(other.norm_sq() - d));
  }
  rep.add("Bob marginal weights (1-d, d)", marginal_res);

  return rep;
}

// A concrete eavesdropping strategy: an isometry from the signal qubit into
// (signal qubit) x (probe of dimension probe_dim), given by the images of
// |x> and |y>, plus one probe POVM per announced basis.
struct Strategy {
  int probe_dim = 0;
  StateVector image_x, image_y;  // dim 2*probe_dim, orthonormal
  Povm meas_xy, meas_uv;

  const Povm& meas(Basis b) const { return (b == Basis::XY) ? meas_xy : meas_uv; }
};

inline StateVector image_of(const Strategy& s, Signal sig) {
  const cplx r = 1.0 / std::sqrt(2.0);
  switch (sig) {
    case Signal::X: return s.image_x;
    case Signal::Y: return s.image_y;
    case Signal::U: return r * (s.image_x + s.image_y);
    default: return r * (s.image_x - s.image_y);
  }
}

inline const StateVector& image_of(const ProbeInteraction& p, Signal sig) {
  return p.post[index(sig)];
}

// Probability that Bob, measuring in the signal's own basis, reads the
// partner signal.
inline double bob_error_probability(const Strategy& s, Signal sig) {
  return bob_component(image_of(s, sig), signal_vector(partner(sig)), s.probe_dim)
      .norm_sq();
}

inline double disturbance(const Strategy& s, Basis b) {
  const auto sig = signals_of(b);
  return 0.5 * (bob_error_probability(s, sig[0]) + bob_error_probability(s, sig[1]));
}

inline double avg_disturbance(const Strategy& s) {
  return 0.5 * (disturbance(s, Basis::XY) + disturbance(s, Basis::UV));
}

namespace detail {

// Unitary completion of columns (fixed_cols) at positions (fixed_pos):
// remaining columns are Gram-Schmidt completions of the standard basis in
// index order, skipping near-dependent candidates (threshold 1e-8).
inline Operator complete_unitary(int dim, const std::vector<int>& fixed_pos,
                                 const std::vector<StateVector>& fixed_cols) {
  Operator u(dim);
  std::vector<StateVector> assigned;
  std::vector<bool> is_fixed(static_cast<std::size_t>(dim), false);
  for (std::size_t k = 0; k < fixed_pos.size(); ++k) {
    const StateVector& col = fixed_cols[k];
    for (int i = 0; i < dim; ++i) u.at(i, fixed_pos[k]) = col[i];
    assigned.push_back(col);
    is_fixed[static_cast<std::size_t>(fixed_pos[k])] = true;
  }
  int candidate = 0;
  for (int c = 0; c < dim; ++c) {
    if (is_fixed[static_cast<std::size_t>(c)]) continue;
    for (; candidate < dim; ++candidate) {
      StateVector v(dim);
      v[candidate] = 1.0;
      for (const StateVector& w : assigned) {
        const cplx ov = inner(w, v);
        for (int i = 0; i < dim; ++i) v[i] -= ov * w[i];
      }
      if (v.norm() > 1e-8) {
        StateVector col = v.normalized();
        for (int i = 0; i < dim; ++i) u.at(i, c) = col[i];
        assigned.push_back(std::move(col));
        ++candidate;
        break;
      }
    }
  }
  if (static_cast<int>(assigned.size()) != dim)
    throw std::runtime_error("complete_unitary: completion failed");
  return u;
}

}  // namespace detail

// Deterministic unitary extension of the interaction isometry on
// (signal) x (probe). The probe is initialized in its first basis state, so
// input |s> x |e0> (column index s*probe_dim) must map to the image of s;
// free columns are completed in index order.
inline Operator unitary_extension(const Strategy& s) {
  if (std::abs(s.image_x.norm() - 1.0) > tol::spectral ||
      std::abs(s.image_y.norm() - 1.0) > tol::spectral ||
      std::abs(inner(s.image_x, s.image_y)) > tol::spectral)
    throw std::invalid_argument("unitary_extension: images are not orthonormal");
  const int dim = 2 * s.probe_dim;
  Operator u = detail::complete_unitary(dim, {0, s.probe_dim}, {s.image_x, s.image_y});
  if (max_abs_entry(dagger(u) * u - Operator::identity(dim)) > tol::spectral)
    throw std::runtime_error("unitary_extension: completion not unitary");
  return u;
}

inline Operator unitary_extension(const ProbeInteraction& p) {
  Strategy s;
  s.probe_dim = 4;
  s.image_x = p.post[index(Signal::X)];
  s.image_y = p.post[index(Signal::Y)];
  return unitary_extension(s);
}

}  // namespace bb84eve
