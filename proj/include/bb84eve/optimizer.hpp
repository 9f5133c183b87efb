#pragma once

// Direct numerical search over probe strategies, used to confirm that the
// closed-form information bound is attainable and that nothing exceeds it.
//
// Parameter layout for probe dimension p with m measurement outcomes per
// basis (m = p unless extra outcomes are enabled), all entries re/im pairs:
//
//   [0,      4p)   raw image of the first signal, dimension 2p
//   [4p,     8p)   raw image of the second signal
//   [8p,  8p+2pm)  m raw probe vectors, dimension p, first-basis POVM
//   [.., 8p+4pm)   m raw probe vectors, second-basis POVM
//
// Decoding orthonormalizes the images by modified Gram-Schmidt and, in the
// default m = p case, the measurement vectors too, giving a projective
// POVM. Near-dependent raw vectors fall back to a deterministic completion
// instead of failing, so every parameter point decodes to a valid strategy.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bases.hpp"
#include "bounds.hpp"
#include "constants.hpp"
#include "hilbert.hpp"
#include "measurement.hpp"
#include "povm.hpp"
#include "probe.hpp"
#include "rng.hpp"

namespace bb84eve {

struct SearchConfig {
  double d_target = 0.1;
  int probe_dim = 4;           // 2 or 4
  double penalty_weight = 1e4;
  int restarts = 8;
  int max_iters = 4000;        // coordinate sweeps per phase
  std::uint64_t seed = 1;
  double tolerance = 1e-6;     // step size at which a phase stops
  bool allow_extra_outcomes = false;
  int extra_outcomes = 2;      // per-basis outcomes beyond probe_dim when allowed
};

inline int measurement_outcomes(const SearchConfig& cfg) {
  return cfg.probe_dim + (cfg.allow_extra_outcomes ? cfg.extra_outcomes : 0);
}

inline int param_count(int probe_dim, int outcomes_per_basis) {
  return 8 * probe_dim + 4 * probe_dim * outcomes_per_basis;
}

struct EvalResult {
  double objective = 0.0;
  double i_avg = 0.0;
  double d_avg = 0.0;
  double violation = 0.0;  // i_avg minus the bound at d_avg
};

namespace detail {

// Bound value valid for any achieved disturbance, clamping into [0, 1].
inline double bound_at(double d) {
  const double c = d < 0.0 ? 0.0 : (d > 1.0 ? 1.0 : d);
  return 0.5 * phi(2.0 * std::sqrt(c * (1.0 - c)));
}

// Fixed-capacity complex vector workspace for the hot path (p <= 4).
using Vec8 = std::array<cplx, 8>;

inline double norm_sq(const Vec8& v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::norm(v[i]);
  return s;
}

inline cplx dot(const Vec8& a, const Vec8& b, int n) {
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Orthonormalize v against the first `have` rows of basis; on a
// near-dependent residual, substitute the first standard-basis completion.
inline void mgs_step(Vec8* basis, int have, Vec8& v, int n) {
  for (int r = 0; r < have; ++r) {
    const cplx c = dot(basis[r], v, n);
    for (int i = 0; i < n; ++i) v[i] -= c * basis[r][i];
  }
  double nn = norm_sq(v, n);
  if (nn < 1e-16) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) v[i] = (i == j) ? 1.0 : 0.0;
      for (int r = 0; r < have; ++r) {
        const cplx c = dot(basis[r], v, n);
        for (int i = 0; i < n; ++i) v[i] -= c * basis[r][i];
      }
      nn = norm_sq(v, n);
      if (nn > 1e-4) break;
    }
  }
  const double inv = 1.0 / std::sqrt(nn);
  for (int i = 0; i < n; ++i) v[i] *= inv;
}

}  // namespace detail

// The search objective: basis-averaged information minus a quadratic
// penalty pinning the basis-averaged disturbance to the target.
class SearchObjective {
 public:
  SearchObjective(int probe_dim, int outcomes, double d_target, double penalty)
      : p_(probe_dim), m_(outcomes), d_target_(d_target), penalty_(penalty) {
    if (probe_dim != 2 && probe_dim != 4)
      throw std::invalid_argument("SearchObjective: probe dimension must be 2 or 4");
    if (outcomes < probe_dim || outcomes > 8)
      throw std::invalid_argument("SearchObjective: invalid outcome count");
  }

  int param_count() const { return bb84eve::param_count(p_, m_); }
  bool projective() const { return m_ == p_; }

  EvalResult operator()(const std::vector<double>& x) const {
    return projective() ? eval_fast(x.data()) : eval_general(x);
  }

  // Full decode, for reporting and for the general (non-projective) path.
  Strategy decode(const std::vector<double>& x) const {
    Strategy s;
    s.probe_dim = p_;
    const int n2 = 2 * p_;
    detail::Vec8 img[2];
    load(x.data(), 0, n2, img[0]);
    load(x.data(), 4 * p_, n2, img[1]);
    detail::mgs_step(img, 0, img[0], n2);
    detail::mgs_step(img, 1, img[1], n2);
    s.image_x = to_state(img[0], n2);
    s.image_y = to_state(img[1], n2);
    s.meas_xy = decode_povm(x.data(), 8 * p_);
    s.meas_uv = decode_povm(x.data(), 8 * p_ + 2 * p_ * m_);
    return s;
  }

  // Parameters that decode back to the given strategy, up to the POVM
  // element order. Projective elements are encoded by a spanning column.
  std::vector<double> encode(const Strategy& s) const {
    if (s.probe_dim != p_) throw std::invalid_argument("encode: probe dimension mismatch");
    std::vector<double> x(static_cast<std::size_t>(param_count()), 0.0);
    store(x.data(), 0, s.image_x);
    store(x.data(), 4 * p_, s.image_y);
    for (int b = 0; b < 2; ++b) {
      const Povm& meas = (b == 0) ? s.meas_xy : s.meas_uv;
      if (static_cast<int>(meas.elements.size()) != m_)
        throw std::invalid_argument("encode: POVM outcome count mismatch");
      int off = 8 * p_ + b * 2 * p_ * m_;
      for (const Operator& e : meas.elements) {
        StateVector v = leading_column(e);
        store(x.data(), off, v);
        off += 2 * p_;
      }
    }
    return x;
  }

 private:
  static void load(const double* x, int off, int n, detail::Vec8& v) {
    for (int i = 0; i < n; ++i) v[i] = cplx(x[off + 2 * i], x[off + 2 * i + 1]);
  }
  static void store(double* x, int off, const StateVector& v) {
    for (int i = 0; i < v.dim(); ++i) {
      x[off + 2 * i] = v[i].real();
      x[off + 2 * i + 1] = v[i].imag();
    }
  }
  StateVector to_state(const detail::Vec8& v, int n) const {
    StateVector out(n);
    for (int i = 0; i < n; ++i) out[i] = v[i];
    return out;
  }
  static StateVector leading_column(const Operator& e) {
    int best = 0;
    double best_norm = -1.0;
    for (int c = 0; c < e.dim(); ++c) {
      double nn = 0.0;
      for (int r = 0; r < e.dim(); ++r) nn += std::norm(e.at(r, c));
      if (nn > best_norm) {
        best_norm = nn;
        best = c;
      }
    }
    StateVector v(e.dim());
    for (int r = 0; r < e.dim(); ++r) v[r] = e.at(r, best);
    const double nrm = v.norm();
    if (nrm > 1e-12)
      return (cplx(1.0 / nrm) * v);
    return v;
  }

  Povm decode_povm(const double* x, int off) const {
    std::vector<StateVector> raw;
    raw.reserve(static_cast<std::size_t>(m_));
    for (int k = 0; k < m_; ++k) {
      detail::Vec8 v;
      load(x, off + 2 * p_ * k, p_, v);
      raw.push_back(to_state(v, p_));
    }
    if (projective()) {
      detail::Vec8 basis[4];
      std::vector<StateVector> ortho;
      for (int k = 0; k < m_; ++k) {
        detail::Vec8 v;
        for (int i = 0; i < p_; ++i) v[i] = raw[static_cast<std::size_t>(k)][i];
        detail::mgs_step(basis, k, v, p_);
        basis[k] = v;
        ortho.push_back(to_state(v, p_));
      }
      return projective_povm(ortho);
    }
    // Rank-1 outcomes normalized through the inverse square root of their
    // sum; any kernel weight is spread evenly so the elements stay complete.
    Operator sum = Operator::zero(p_);
    for (const StateVector& v : raw) sum = sum + outer(v, v);
    const EigResult eig = eig_hermitian(sum);
    const double scale = eig.values.empty() ? 0.0 : eig.values[0];
    Operator inv_sqrt = Operator::zero(p_);
    Operator kernel = Operator::zero(p_);
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
      const Operator proj = projector(eig.vectors[i]);
      if (eig.values[i] > 1e-12 * std::max(scale, 1.0))
        inv_sqrt = inv_sqrt + cplx(1.0 / std::sqrt(eig.values[i])) * proj;
      else
        kernel = kernel + proj;
    }
    Povm out;
    for (const StateVector& v : raw) {
      const StateVector w = inv_sqrt * v;
      out.elements.push_back(outer(w, w) + cplx(1.0 / m_) * kernel);
    }
    return out;
  }

  EvalResult eval_general(const std::vector<double>& x) const {
    const Strategy s = decode(x);
    const double dxy = disturbance(s, Basis::XY);
    const double duv = disturbance(s, Basis::UV);
    const double ixy = mutual_information(s, Basis::XY);
    const double iuv = mutual_information(s, Basis::UV);
    EvalResult r;
    r.i_avg = 0.5 * (ixy + iuv);
    r.d_avg = 0.5 * (dxy + duv);
    r.objective = r.i_avg - penalty_ * (r.d_avg - d_target_) * (r.d_avg - d_target_);
    r.violation = r.i_avg - detail::bound_at(r.d_avg);
    return r;
  }

  EvalResult eval_fast(const double* x) const {
    const int p = p_;
    const int n2 = 2 * p;
    detail::Vec8 img[2];
    load(x, 0, n2, img[0]);
    load(x, 4 * p, n2, img[1]);
    detail::mgs_step(img, 0, img[0], n2);
    detail::mgs_step(img, 1, img[1], n2);
    const detail::Vec8& ex = img[0];
    const detail::Vec8& ey = img[1];

    const double inv_sqrt2 = 0.70710678118654752440;
    detail::Vec8 eu, ev;
    for (int i = 0; i < n2; ++i) {
      eu[i] = (ex[i] + ey[i]) * inv_sqrt2;
      ev[i] = (ex[i] - ey[i]) * inv_sqrt2;
    }

    // Bob error probabilities: squared weight on the partner signal.
    double err_x = 0.0, err_y = 0.0, err_u = 0.0, err_v = 0.0;
    for (int k = 0; k < p; ++k) {
      err_x += std::norm(ex[p + k]);
      err_y += std::norm(ey[k]);
      err_u += std::norm((eu[k] - eu[p + k]) * inv_sqrt2);
      err_v += std::norm((ev[k] + ev[p + k]) * inv_sqrt2);
    }
    const double dxy = 0.5 * (err_x + err_y);
    const double duv = 0.5 * (err_u + err_v);

    double info[2] = {0.0, 0.0};
    for (int b = 0; b < 2; ++b) {
      detail::Vec8 basis[4];
      const int off = 8 * p + b * 2 * p * m_;
      for (int k = 0; k < m_; ++k) {
        detail::Vec8 v;
        load(x, off + 2 * p * k, p, v);
        detail::mgs_step(basis, k, v, p);
        basis[k] = v;
      }
      const detail::Vec8& s0 = (b == 0) ? ex : eu;
      const detail::Vec8& s1 = (b == 0) ? ey : ev;
      double acc = 0.0;
      for (int l = 0; l < m_; ++l) {
        double pr[2] = {0.0, 0.0};
        for (int side = 0; side < 2; ++side) {
          const detail::Vec8& s = side == 0 ? s0 : s1;
          cplx d0 = 0.0, d1 = 0.0;
          for (int i = 0; i < p; ++i) {
            d0 += std::conj(basis[l][i]) * s[i];
            d1 += std::conj(basis[l][i]) * s[p + i];
          }
          pr[side] = std::norm(d0) + std::norm(d1);
        }
        const double q = 0.5 * (pr[0] + pr[1]);
        if (q > 0.0) {
          double g = std::abs(pr[0] - pr[1]) / (2.0 * q);
          if (g > 1.0) g = 1.0;
          acc += q * phi(g);
        }
      }
      info[b] = 0.5 * acc;
    }

    EvalResult r;
    r.i_avg = 0.5 * (info[0] + info[1]);
    r.d_avg = 0.5 * (dxy + duv);
    r.objective = r.i_avg - penalty_ * (r.d_avg - d_target_) * (r.d_avg - d_target_);
    r.violation = r.i_avg - detail::bound_at(r.d_avg);
    return r;
  }

  int p_;
  int m_;
  double d_target_;
  double penalty_;
};

struct SearchResult {
  Strategy best;
  double i_achieved = 0.0;
  double d_achieved = 0.0;
  double gap_to_bound = 0.0;
  bool converged = false;
  int best_restart = -1;
  std::vector<double> restart_objectives;
  double max_bound_violation = -1.0;
};

namespace detail {

struct PhaseOutcome {
  double objective = 0.0;
  bool step_criterion = false;
  int sweeps = 0;
};

// Pattern search: cycle the coordinates, try +/- h, keep stepping along an
// accepted direction while it improves; after a successful sweep, ride the
// sweep's net displacement (the Hooke-Jeeves pattern move), which follows
// curved valleys that defeat pure axis steps. A step size is kept only
// while a full sweep earns a gain proportional to h; below that it is
// halved, so the walk cannot crawl along vanishing gains forever.
inline PhaseOutcome compass_phase(const SearchObjective& f, std::vector<double>& x, double h0,
                                  double tolerance, int max_sweeps, double& best,
                                  double& worst_violation) {
  constexpr double min_improve = 1e-12;
  constexpr int max_ride = 64;
  const int n = static_cast<int>(x.size());
  double h = h0;
  PhaseOutcome out;
  std::vector<double> base(x), kept(x);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    out.sweeps = sweep + 1;
    const double sweep_start = best;
    base = x;
    for (int i = 0; i < n; ++i) {
      const double old = x[i];
      bool moved = false;
      for (int dir = 0; dir < 2 && !moved; ++dir) {
        const double delta = dir == 0 ? h : -h;
        x[i] = old + delta;
        EvalResult r = f(x);
        worst_violation = std::max(worst_violation, r.violation);
        if (r.objective > best + min_improve) {
          // Ride the improving direction as far as it goes.
          double accepted = x[i];
          for (int ride = 0; ride < max_ride; ++ride) {
            best = r.objective;
            accepted = x[i];
            x[i] += delta;
            r = f(x);
            worst_violation = std::max(worst_violation, r.violation);
            if (!(r.objective > best + min_improve)) break;
          }
          x[i] = accepted;
          moved = true;
        } else {
          x[i] = old;
        }
      }
    }
    if (best - sweep_start < min_improve + 1e-4 * h) {
      h *= 0.5;
      if (h <= tolerance) {
        out.step_criterion = true;
        break;
      }
      continue;
    }
    for (int ride = 0; ride < max_ride; ++ride) {
      kept = x;
      for (int i = 0; i < n; ++i) x[i] += x[i] - base[i];
      const EvalResult r = f(x);
      worst_violation = std::max(worst_violation, r.violation);
      if (r.objective > best + min_improve) {
        best = r.objective;
      } else {
        x = kept;
        break;
      }
    }
  }
  out.objective = best;
  return out;
}

}  // namespace detail

inline SearchResult run_search(const SearchConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("run_search: restarts must be at least 1");
  const SearchObjective objective(cfg.probe_dim, measurement_outcomes(cfg), cfg.d_target,
                                  cfg.penalty_weight);
  const SearchObjective polish_objective(cfg.probe_dim, measurement_outcomes(cfg), cfg.d_target,
                                         cfg.penalty_weight * 100.0);
  const int n = objective.param_count();

  SearchResult result;
  std::vector<double> best_x;
  double best_obj = 0.0;
  double worst_violation = -1.0;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    SplitMix64 rng(cfg.seed, static_cast<std::uint64_t>(restart));
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = rng.gaussian();

    const EvalResult start = objective(x);
    worst_violation = std::max(worst_violation, start.violation);
    double cur = start.objective;
    const detail::PhaseOutcome main_phase =
        detail::compass_phase(objective, x, 0.25, cfg.tolerance, cfg.max_iters, cur,
                              worst_violation);
    double polished = polish_objective(x).objective;
    const detail::PhaseOutcome polish_phase =
        detail::compass_phase(polish_objective, x, 1e-3, cfg.tolerance, cfg.max_iters, polished,
                              worst_violation);

    result.restart_objectives.push_back(polished);
    if (result.best_restart < 0 || polished > best_obj) {
      best_obj = polished;
      best_x = x;
      result.best_restart = restart;
      result.converged = main_phase.step_criterion && polish_phase.step_criterion;
    }
  }

  result.best = objective.decode(best_x);
  const EvalResult final_eval = objective(best_x);
  result.i_achieved = final_eval.i_avg;
  result.d_achieved = final_eval.d_avg;
  result.gap_to_bound = detail::bound_at(final_eval.d_avg) - final_eval.i_avg;
  result.max_bound_violation = worst_violation;
  return result;
}

struct SaturationPoint {
  double d_target = 0.0;
  double d_achieved = 0.0;
  double i_achieved = 0.0;
  double gap = 0.0;
  bool converged = false;
};

// Run the search over a disturbance grid and report the gap to the bound
// at each point.
inline std::vector<SaturationPoint> verify_saturation(const std::vector<double>& d_grid,
                                                      SearchConfig base) {
  std::vector<SaturationPoint> out;
  out.reserve(d_grid.size());
  for (double d : d_grid) {
    base.d_target = d;
    const SearchResult r = run_search(base);
    out.push_back({d, r.d_achieved, r.i_achieved, r.gap_to_bound, r.converged});
  }
  return out;
}

// A valid strategy with Gaussian raw parameters, for property tests.
inline Strategy random_strategy(SplitMix64& rng, int probe_dim) {
  const SearchObjective objective(probe_dim, probe_dim, 0.1, 0.0);
  std::vector<double> x(static_cast<std::size_t>(objective.param_count()));
  for (double& v : x) v = rng.gaussian();
  return objective.decode(x);
}

}  // namespace bb84eve
