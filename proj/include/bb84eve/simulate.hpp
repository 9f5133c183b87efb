#pragma once

// Monte Carlo of the full protocol round: Alice draws a basis and a bit,
// Bob measures in his own random basis, mismatched rounds are sifted out,
// and on kept rounds Eve's probe outcome is drawn jointly with Bob's
// result. Workers partition the rounds with independent RNG streams, so a
// run is reproducible bit for bit for a fixed (seed, workers) pair.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bases.hpp"
#include "hilbert.hpp"
#include "measurement.hpp"
#include "povm.hpp"
#include "probe.hpp"
#include "rng.hpp"

namespace bb84eve {

// Joint distribution of (Eve's outcome, Alice's bit, Bob's bit) for one
// announced basis, Alice's equiprobable bit included. Bob measures in
// Alice's basis; Eve measures the given probe POVM.
struct JointTable {
  Basis basis = Basis::XY;
  std::array<std::array<std::array<double, 2>, 2>, 4> p{};  // [eve][alice][bob]

  double total() const {
    double t = 0.0;
    for (const auto& pa : p)
      for (const auto& pb : pa)
        for (double v : pb) t += v;
    return t;
  }
};

inline JointTable joint_table(const ProbeInteraction& probe, Basis alice_basis,
                              const Povm& eve_meas) {
  if (eve_meas.dim() != 4)
    throw std::invalid_argument("joint_table: POVM does not act on the probe");
  if (eve_meas.elements.size() != 4)
    throw std::invalid_argument("joint_table: expected a four-outcome measurement");
  JointTable t;
  t.basis = alice_basis;
  const auto sig = signals_of(alice_basis);
  for (int a = 0; a < 2; ++a) {
    const StateVector& post = probe.post[index(sig[a])];
    for (int b = 0; b < 2; ++b) {
      const StateVector w = bob_component(post, signal_vector(sig[b]), 4);
      for (int l = 0; l < 4; ++l) {
        const double pr = expectation(eve_meas.elements[static_cast<std::size_t>(l)], w).real();
        t.p[l][a][b] = 0.5 * std::max(pr, 0.0);
      }
    }
  }
  return t;
}

// Protocol table of the optimal symmetric attack: Eve measures the POVM
// matched to the announced basis.
inline JointTable joint_distribution(double d, Basis b) {
  return joint_table(build_optimal(d, d), b, optimal_povm(b));
}

// Off-diagonal table: Alice uses the basis conjugate to the one Eve's
// measurement was built for. Bob's error stays d conditioned on any of
// Eve's outcomes.
inline JointTable cross_basis_joint(double d, Basis meas_basis) {
  return joint_table(build_optimal(d, d), conjugate(meas_basis), optimal_povm(meas_basis));
}

struct ProtocolConfig {
  double d = 0.1;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  bool attack = true;
};

struct BasisSummary {
  std::uint64_t n_sifted = 0;
  double bob_error_rate = 0.0;
  std::optional<double> eve_guess_accuracy;
  std::optional<double> eve_mi_plugin_nats;
};

struct TranscriptSummary {
  double d_target = 0.0;
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  bool attack = true;
  std::uint64_t n_sifted = 0;
  double sifted_fraction = 0.0;
  double bob_error_rate = 0.0;
  std::optional<double> eve_guess_accuracy;
  std::optional<double> eve_mi_plugin_nats;
  std::array<BasisSummary, 2> per_basis{};  // indexed by Basis
};

namespace detail {

struct BasisCounts {
  std::uint64_t sifted = 0;
  std::uint64_t bob_errors = 0;
  std::uint64_t eve_correct = 0;
  std::array<std::array<std::uint64_t, 4>, 2> alice_eve{};  // [alice bit][eve outcome]
};

struct SimCounts {
  std::array<BasisCounts, 2> by_basis{};

  void merge(const SimCounts& o) {
    for (int b = 0; b < 2; ++b) {
      by_basis[b].sifted += o.by_basis[b].sifted;
      by_basis[b].bob_errors += o.by_basis[b].bob_errors;
      by_basis[b].eve_correct += o.by_basis[b].eve_correct;
      for (int a = 0; a < 2; ++a)
        for (int l = 0; l < 4; ++l) by_basis[b].alice_eve[a][l] += o.by_basis[b].alice_eve[a][l];
    }
  }
};

// 16-entry sampling CDF, entry index = eve*4 + alice*2 + bob.
inline std::array<double, 16> table_cdf(const JointTable& t) {
  std::array<double, 16> cdf{};
  double acc = 0.0;
  for (int l = 0; l < 4; ++l)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        acc += t.p[l][a][b];
        cdf[static_cast<std::size_t>(l * 4 + a * 2 + b)] = acc;
      }
  cdf[15] = 1.0;  // guard against rounding in the running sum
  return cdf;
}

inline void simulate_worker(const ProtocolConfig& cfg, const std::array<std::array<double, 16>, 2>& cdf,
                            std::uint64_t n, std::uint64_t stream, SimCounts& out) {
  SplitMix64 rng(cfg.seed, stream);
  for (std::uint64_t r = 0; r < n; ++r) {
    const int alice_basis = rng.next_bool() ? 1 : 0;
    const int bob_basis = rng.next_bool() ? 1 : 0;
    if (alice_basis != bob_basis) continue;
    BasisCounts& c = out.by_basis[alice_basis];
    ++c.sifted;
    if (cfg.attack) {
      const double u = rng.next_double();
      const auto& table = cdf[alice_basis];
      int idx = 0;
      while (idx < 15 && u >= table[static_cast<std::size_t>(idx)]) ++idx;
      const int eve = idx >> 2;
      const int alice = (idx >> 1) & 1;
      const int bob = idx & 1;
      c.bob_errors += static_cast<std::uint64_t>(bob != alice);
      const int guess = eve < 2 ? 0 : 1;
      c.eve_correct += static_cast<std::uint64_t>(guess == alice);
      ++c.alice_eve[alice][eve];
    } else {
      rng.next_bool();  // Alice's bit; Bob receives it untouched
    }
  }
}

// Plug-in mutual information of the empirical (alice bit, eve outcome)
// table, in nats.
inline double plugin_mi(const std::array<std::array<std::uint64_t, 4>, 2>& counts, std::uint64_t n) {
  if (n == 0) return 0.0;
  std::array<double, 2> fa{};
  std::array<double, 4> fl{};
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 4; ++l) {
      const double f = static_cast<double>(counts[a][l]) / static_cast<double>(n);
      fa[a] += f;
      fl[l] += f;
    }
  double mi = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 4; ++l) {
      if (counts[a][l] == 0) continue;
      const double f = static_cast<double>(counts[a][l]) / static_cast<double>(n);
      mi += f * std::log(f / (fa[a] * fl[l]));
    }
  return mi;
}

}  // namespace detail

inline TranscriptSummary run(const ProtocolConfig& cfg) {
  if (cfg.workers < 1) throw std::invalid_argument("run: workers must be at least 1");
  std::array<std::array<double, 16>, 2> cdf{};
  if (cfg.attack) {
    cdf[0] = detail::table_cdf(joint_distribution(cfg.d, Basis::XY));
    cdf[1] = detail::table_cdf(joint_distribution(cfg.d, Basis::UV));
  }

  const std::uint64_t w = static_cast<std::uint64_t>(cfg.workers);
  std::vector<detail::SimCounts> parts(w);
  const std::uint64_t base = cfg.rounds / w;
  const std::uint64_t rem = cfg.rounds % w;
  if (cfg.workers == 1) {
    detail::simulate_worker(cfg, cdf, cfg.rounds, 0, parts[0]);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::uint64_t k = 0; k < w; ++k) {
      const std::uint64_t n = base + (k < rem ? 1 : 0);
      threads.emplace_back(detail::simulate_worker, std::cref(cfg), std::cref(cdf), n, k,
                           std::ref(parts[k]));
    }
    for (std::thread& t : threads) t.join();
  }
  detail::SimCounts total;
  for (const detail::SimCounts& p : parts) total.merge(p);

  TranscriptSummary s;
  s.d_target = cfg.d;
  s.rounds = cfg.rounds;
  s.seed = cfg.seed;
  s.workers = cfg.workers;
  s.attack = cfg.attack;

  std::uint64_t sifted = 0, errors = 0, correct = 0;
  double mi_weighted = 0.0;
  for (int b = 0; b < 2; ++b) {
    const detail::BasisCounts& c = total.by_basis[b];
    BasisSummary& out = s.per_basis[b];
    out.n_sifted = c.sifted;
    out.bob_error_rate =
        c.sifted ? static_cast<double>(c.bob_errors) / static_cast<double>(c.sifted) : 0.0;
    if (cfg.attack) {
      out.eve_guess_accuracy =
          c.sifted ? static_cast<double>(c.eve_correct) / static_cast<double>(c.sifted) : 0.0;
      out.eve_mi_plugin_nats = detail::plugin_mi(c.alice_eve, c.sifted);
      mi_weighted += static_cast<double>(c.sifted) * *out.eve_mi_plugin_nats;
    }
    sifted += c.sifted;
    errors += c.bob_errors;
    correct += c.eve_correct;
  }
  s.n_sifted = sifted;
  s.sifted_fraction =
      cfg.rounds ? static_cast<double>(sifted) / static_cast<double>(cfg.rounds) : 0.0;
  s.bob_error_rate = sifted ? static_cast<double>(errors) / static_cast<double>(sifted) : 0.0;
  if (cfg.attack) {
    s.eve_guess_accuracy = sifted ? static_cast<double>(correct) / static_cast<double>(sifted) : 0.0;
    s.eve_mi_plugin_nats = sifted ? mi_weighted / static_cast<double>(sifted) : 0.0;
  }
  return s;
}

}  // namespace bb84eve
