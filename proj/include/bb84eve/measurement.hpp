#pragma once

// Probe measurements and the statistics they induce: outcome probabilities,
// Bayesian posteriors over the two signals of the announced basis, the
// per-outcome and average information gain, and mutual information in nats.
//
// Priors are fixed at (1/2, 1/2). Zero-probability outcomes keep the prior
// as their posterior and contribute nothing to averages.

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bases.hpp"
#include "bounds.hpp"
#include "hilbert.hpp"
#include "povm.hpp"
#include "probe.hpp"

namespace bb84eve {

struct MeasurementStats {
  std::array<double, 2> prior{0.5, 0.5};
  std::vector<double> q;                          // outcome probabilities
  std::vector<std::array<double, 2>> posterior;   // rows sum to 1
  std::vector<double> g_per_outcome;              // |posterior spread|
};

// Joint post-interaction states of the two signals of one basis, measured on
// the probe. P(outcome | signal) = sum over Bob's basis of the squared norm
// of the probe component filtered through the POVM element.
inline MeasurementStats outcome_stats(const StateVector& joint0, const StateVector& joint1,
                                      const Povm& meas, int probe_dim) {
  if (meas.dim() != probe_dim)
    throw std::invalid_argument("outcome_stats: POVM does not act on the probe");
  if (joint0.dim() != 2 * probe_dim || joint1.dim() != 2 * probe_dim)
    throw std::invalid_argument("outcome_stats: joint state dimension mismatch");

  StateVector bob0(2), bob1(2);
  bob0[0] = 1.0;
  bob1[1] = 1.0;
  const std::array<const StateVector*, 2> joints{&joint0, &joint1};

  std::array<std::array<StateVector, 2>, 2> comp;  // [signal][bob index]
  for (int s = 0; s < 2; ++s) {
    comp[s][0] = bob_component(*joints[s], bob0, probe_dim);
    comp[s][1] = bob_component(*joints[s], bob1, probe_dim);
  }

  MeasurementStats st;
  st.q.resize(meas.elements.size());
  st.posterior.resize(meas.elements.size());
  st.g_per_outcome.resize(meas.elements.size());
  for (std::size_t l = 0; l < meas.elements.size(); ++l) {
    const Operator& e = meas.elements[l];
    std::array<double, 2> p{};  // P(l | signal)
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < 2; ++k) p[s] += expectation(e, comp[s][k]).real();
    for (int s = 0; s < 2; ++s) p[s] = std::max(p[s], 0.0);

    const double ql = 0.5 * (p[0] + p[1]);
    st.q[l] = ql;
    if (ql > 0.0) {
      st.posterior[l] = {0.5 * p[0] / ql, 0.5 * p[1] / ql};
    } else {
      st.posterior[l] = st.prior;
    }
    st.g_per_outcome[l] =
        std::min(std::abs(st.posterior[l][0] - st.posterior[l][1]), 1.0);
  }
  return st;
}

inline MeasurementStats outcome_stats(const ProbeInteraction& p, Basis b, const Povm& meas) {
  const auto sig = signals_of(b);
  return outcome_stats(p.post[index(sig[0])], p.post[index(sig[1])], meas, 4);
}

inline MeasurementStats outcome_stats(const Strategy& s, Basis b, const Povm& meas) {
  const auto sig = signals_of(b);
  return outcome_stats(image_of(s, sig[0]), image_of(s, sig[1]), meas, s.probe_dim);
}

inline MeasurementStats outcome_stats(const Strategy& s, Basis b) {
  return outcome_stats(s, b, s.meas(b));
}

struct GainResult {
  double g = 0.0;           // average information gain, in [0, 1]
  double guess_error = 0.5; // (1 - g) / 2
};

inline GainResult gain(const MeasurementStats& st) {
  double g = 0.0;
  for (std::size_t l = 0; l < st.q.size(); ++l) g += st.q[l] * st.g_per_outcome[l];
  return {g, 0.5 * (1.0 - g)};
}

// Probability that the maximum-posterior guess is correct: (1 + G)/2.
inline double guess_accuracy(const MeasurementStats& st) { return 0.5 * (1.0 + gain(st).g); }

// I = 1/2 sum_l q_l phi(G_l), in nats. Equals ln 2 minus the expected
// posterior entropy for equiprobable binary signals.
inline double mutual_information(const MeasurementStats& st) {
  double i = 0.0;
  for (std::size_t l = 0; l < st.q.size(); ++l)
    if (st.q[l] > 0.0) i += st.q[l] * phi(st.g_per_outcome[l]);
  return 0.5 * i;
}

inline double mutual_information(const ProbeInteraction& p, Basis b, const Povm& meas) {
  return mutual_information(outcome_stats(p, b, meas));
}

inline double mutual_information(const Strategy& s, Basis b) {
  return mutual_information(outcome_stats(s, b));
}

// Complete rank-1 eigenbasis measurement of rho0 - rho1: the minimum-error
// discrimination of two equiprobable states, refined to all eigenvectors so
// mutual information is preserved alongside the optimal guess.
inline Povm helstrom_povm(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.dim() != rho1.dim())
    throw std::invalid_argument("helstrom_povm: dimension mismatch");
  EigResult eig = eig_hermitian(rho0.m - rho1.m);
  Povm out;
  out.elements.reserve(eig.vectors.size());
  for (const StateVector& v : eig.vectors) out.elements.push_back(projector(v));
  return out;
}

// Product-basis measurement on the two probe qubits, both factors in the
// signal basis of b. Outcome order: |s0 s0>, |s1 s0>, |s0 s1>, |s1 s1>; the
// second letter (probe qubit 2) is the signal estimate, and a mismatch of
// the two letters flags the rounds on which Bob's qubit was flipped.
inline Povm optimal_povm(Basis b) {
  const auto sig = signals_of(b);
  const StateVector s0 = signal_vector(sig[0]);
  const StateVector s1 = signal_vector(sig[1]);
  return projective_povm({tensor(s0, s0), tensor(s1, s0), tensor(s0, s1), tensor(s1, s1)});
}

// The measurement does not depend on the interaction; the overload exists
// for call sites that carry one.
inline Povm optimal_povm(const ProbeInteraction&, Basis b) { return optimal_povm(b); }

inline Signal outcome_guess(Basis b, int lambda) {
  const auto sig = signals_of(b);
  return (lambda < 2) ? sig[0] : sig[1];
}

// True for outcomes whose two letters disagree; on the optimal interaction
// these are exactly the rounds where Bob's qubit was flipped.
inline bool outcome_flags_error(int lambda) { return lambda == 1 || lambda == 2; }

// Two-outcome measurement of probe qubit 2 alone in the basis of b. It is
// the two-by-two binning of optimal_povm over the signal estimate and loses
// no mutual information against the optimal interaction.
inline Povm second_qubit_povm(Basis b) {
  const auto sig = signals_of(b);
  Povm out;
  out.elements.push_back(tensor(Operator::identity(2), projector(signal_vector(sig[0]))));
  out.elements.push_back(tensor(Operator::identity(2), projector(signal_vector(sig[1]))));
  return out;
}

inline Strategy as_strategy(const ProbeInteraction& p) {
  Strategy s;
  s.probe_dim = 4;
  s.image_x = p.post[index(Signal::X)];
  s.image_y = p.post[index(Signal::Y)];
  s.meas_xy = optimal_povm(Basis::XY);
  s.meas_uv = optimal_povm(Basis::UV);
  return s;
}

// Tightness conditions of the information bound for a basis-b measurement.
// With (c0, c1) the conjugate-basis signals and D their disturbance, the
// bound is attained iff for every outcome l there is a sign eps_l with
//
//   (B_{c0} x sqrt(E_l)) |post_{c1}> = eps_l r (B_{c0} x sqrt(E_l)) |post_{c0}>
//   (B_{c1} x sqrt(E_l)) |post_{c0}> = eps_l r (B_{c1} x sqrt(E_l)) |post_{c1}>
//
// where r = sqrt(D / (1-D)). Both sides share the Bob factor, so the test
// runs on probe-space vectors.
struct SignReport {
  struct OutcomeEntry {
    int eps = 0;           // +1 / -1; 0 when both relations carry no weight
    double residual = 0.0; // worst vector residual of the two relations
    bool vacuous = false;
  };
  std::vector<OutcomeEntry> outcomes;
  double ratio = 0.0;         // sqrt(D / (1 - D))
  double max_residual = 0.0;
  bool attained = false;
};

inline SignReport equality_conditions(const ProbeInteraction& p, const Povm& meas, Basis b,
                                      double eps_tol = 1e-10) {
  if (meas.dim() != 4)
    throw std::invalid_argument("equality_conditions: POVM does not act on the probe");
  const Basis cb = conjugate(b);
  const auto csig = signals_of(cb);
  const double d = p.disturbance(cb);
  SignReport rep;
  rep.ratio = (d < 0.5) ? std::sqrt(d / (1.0 - d)) : 1.0;

  const StateVector& post0 = p.post[index(csig[0])];
  const StateVector& post1 = p.post[index(csig[1])];
  const StateVector b0 = signal_vector(csig[0]);
  const StateVector b1 = signal_vector(csig[1]);

  for (const Operator& e : meas.elements) {
    const Operator root = sqrt_psd(e);
    // [relation][side]: relation 0 filters through Bob outcome c0, with
    // post_{c1} on the left; relation 1 mirrors it.
    const StateVector lhs0 = root * bob_component(post1, b0, 4);
    const StateVector rhs0 = root * bob_component(post0, b0, 4);
    const StateVector lhs1 = root * bob_component(post0, b1, 4);
    const StateVector rhs1 = root * bob_component(post1, b1, 4);

    SignReport::OutcomeEntry entry;
    const double weight = lhs0.norm() + rhs0.norm() + lhs1.norm() + rhs1.norm();
    if (weight < 1e-12) {
      entry.vacuous = true;
    } else {
      double best = 1e300;
      for (int sign : {+1, -1}) {
        const cplx f(sign * rep.ratio);
        const double res =
            std::max((lhs0 - f * rhs0).norm(), (lhs1 - f * rhs1).norm());
        if (res < best) {
          best = res;
          entry.eps = sign;
        }
      }
      entry.residual = best;
      rep.max_residual = std::max(rep.max_residual, best);
    }
    rep.outcomes.push_back(entry);
  }
  rep.attained = rep.max_residual <= eps_tol;
  return rep;
}

// Mutual information of the two-parameter product-form family, computed
// blockwise: the probe's second qubit splits the discrimination into two
// pure-state pairs with overlaps cos(alpha) and cos(beta).
inline double ansatz_information(double alpha, double beta) {
  const double d = ansatz_disturbance(alpha, beta);
  return (1.0 - d) * 0.5 * phi(std::abs(std::sin(alpha))) +
         d * 0.5 * phi(std::abs(std::sin(beta)));
}

}  // namespace bb84eve
