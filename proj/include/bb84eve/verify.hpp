#pragma once

// Self-contained verification suites: each check re-derives a claimed
// property at runtime and reports pass/fail with a short numeric detail.
// The CLI surfaces these; the test suite asserts them.

#include <cmath>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "bounds.hpp"
#include "measurement.hpp"
#include "optimizer.hpp"
#include "probe.hpp"
#include "rng.hpp"
#include "symmetry.hpp"

namespace bb84eve {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline bool all_pass(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

inline std::vector<Check> verify_bounds() {
  std::vector<Check> out;

  const SlopeReport slope = small_d_slope_check();
  std::string sd;
  for (std::size_t i = 0; i < slope.d.size(); ++i)
    sd += (i ? ", " : "") + detail::g12(slope.ratio[i]);
  out.push_back({"bound-small-d-slope", slope.pass, "i(d)/d = " + sd});

  const ConcavityReport conc = concavity_check(1e-3);
  out.push_back({"bound-concavity", conc.pass,
                 "max second difference " + detail::g12(conc.max_second_difference) +
                     ", max closed form " + detail::g12(conc.max_closed_form)});

  const ThresholdResult th = threshold();
  const double info_dev = std::abs(th.info_root - th.closed_form);
  const double chsh_dev = std::abs(th.chsh_root - th.closed_form);
  out.push_back({"threshold-info-root", info_dev <= 1e-8,
                 "root " + detail::g12(th.info_root) + ", deviation " + detail::g12(info_dev)});
  out.push_back({"threshold-chsh-root", chsh_dev <= 1e-8,
                 "root " + detail::g12(th.chsh_root) + ", deviation " + detail::g12(chsh_dev)});

  for (double d : {0.05, 0.1, 0.25}) {
    const ProbeInteraction p = build_optimal(d, d);
    const double i_xy = mutual_information(p, Basis::XY, optimal_povm(Basis::XY));
    const double dev = std::abs(i_xy - info_bound(d));
    out.push_back({"bound-attained-d" + detail::g12(d), dev <= 1e-10,
                   "information " + detail::g12(i_xy) + ", deviation " + detail::g12(dev)});
  }
  return out;
}

inline std::vector<Check> verify_equality() {
  std::vector<Check> out;
  const ProbeInteraction p = build_optimal(0.1, 0.1);

  const ConstraintReport cons = verify_constraints(p);
  out.push_back({"interaction-constraints", cons.all_pass,
                 "max residual " + detail::g12(cons.max_residual)});

  for (Basis b : {Basis::XY, Basis::UV}) {
    const SignReport rep = equality_conditions(p, optimal_povm(b), b);
    std::string pattern;
    for (const auto& o : rep.outcomes) {
      if (!pattern.empty()) pattern += ' ';
      pattern += o.vacuous ? "0" : (o.eps > 0 ? "+1" : "-1");
    }
    out.push_back({std::string("equality-signs-") + name(b), rep.attained,
                   "eps = [" + pattern + "], max residual " + detail::g12(rep.max_residual)});
  }
  return out;
}

inline std::vector<Check> verify_symmetry() {
  std::vector<Check> out;

  const SymmetrizedStrategy opt = symmetrize(as_strategy(build_optimal(0.2, 0.1)));
  out.push_back({"sym-optimal-disturbance", std::abs(opt.d_sym - 0.15) <= 1e-12,
                 "d_sym = " + detail::g12(opt.d_sym)});

  SplitMix64 rng(20240816);
  bool info_ok = true, d_ok = true, iso_ok = true;
  double worst_info = 0.0, worst_d = 0.0, worst_iso = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const int dim = (trial % 2 == 0) ? 4 : 2;
    const Strategy s = random_strategy(rng, dim);
    const ChannelReport base = channel_report(s);
    const SymmetrizedStrategy sym = symmetrize(s);
    const double info_dev = std::abs(sym.i_avg - base.i_avg);
    const double d_excess = sym.d_sym - base.d_avg;
    const double iso = isotropy_check(sym).residual;
    worst_info = std::max(worst_info, info_dev);
    worst_d = std::max(worst_d, d_excess);
    worst_iso = std::max(worst_iso, iso);
    info_ok = info_ok && info_dev <= 1e-10;
    d_ok = d_ok && d_excess <= 1e-12;
    iso_ok = iso_ok && iso <= 1e-10;
  }
  out.push_back({"sym-information-preserved", info_ok,
                 "worst deviation " + detail::g12(worst_info)});
  out.push_back({"sym-disturbance-not-increased", d_ok, "worst excess " + detail::g12(worst_d)});
  out.push_back({"sym-isotropy", iso_ok, "worst residual " + detail::g12(worst_iso)});
  return out;
}

inline std::vector<Check> verify_all() {
  std::vector<Check> out = verify_bounds();
  for (Check& c : verify_equality()) out.push_back(std::move(c));
  for (Check& c : verify_symmetry()) out.push_back(std::move(c));
  return out;
}

}  // namespace bb84eve
