#include <catch2/catch_amalgamated.hpp>

#include <bb84eve/bounds.hpp>
#include <bb84eve/measurement.hpp>
#include <bb84eve/probe.hpp>
#include <bb84eve/simulate.hpp>

#include <cmath>

using namespace bb84eve;

namespace {

double eve_marginal(const JointTable& t, int l) {
  double q = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) q += t.p[static_cast<std::size_t>(l)][a][b];
  return q;
}

double bob_error_in(const JointTable& t) {
  double e = 0.0;
  for (int l = 0; l < 4; ++l)
    for (int a = 0; a < 2; ++a) e += t.p[static_cast<std::size_t>(l)][a][1 - a];
  return e;
}

bool summaries_identical(const TranscriptSummary& a, const TranscriptSummary& b) {
  auto opt_eq = [](const std::optional<double>& x, const std::optional<double>& y) {
    return x.has_value() == y.has_value() && (!x.has_value() || *x == *y);
  };
  bool same = a.d_target == b.d_target && a.rounds == b.rounds && a.seed == b.seed &&
              a.workers == b.workers && a.attack == b.attack && a.n_sifted == b.n_sifted &&
              a.sifted_fraction == b.sifted_fraction && a.bob_error_rate == b.bob_error_rate &&
              opt_eq(a.eve_guess_accuracy, b.eve_guess_accuracy) &&
              opt_eq(a.eve_mi_plugin_nats, b.eve_mi_plugin_nats);
  for (int k = 0; k < 2; ++k) {
    const BasisSummary& pa = a.per_basis[static_cast<std::size_t>(k)];
    const BasisSummary& pb = b.per_basis[static_cast<std::size_t>(k)];
    same = same && pa.n_sifted == pb.n_sifted && pa.bob_error_rate == pb.bob_error_rate &&
           opt_eq(pa.eve_guess_accuracy, pb.eve_guess_accuracy) &&
           opt_eq(pa.eve_mi_plugin_nats, pb.eve_mi_plugin_nats);
  }
  return same;
}

}  // namespace

TEST_CASE("joint tables are normalized with the declared marginals") {
  for (double d : {0.0, 0.1, 0.3, 0.5}) {
    for (Basis b : {Basis::XY, Basis::UV}) {
      const JointTable t = joint_distribution(d, b);
      INFO("d = " << d << " basis " << name(b));
      CHECK(std::abs(t.total() - 1.0) < 1e-14);
      CHECK(std::abs(bob_error_in(t) - d) < 1e-12);

      // Alice's two signals are equiprobable.
      for (int a = 0; a < 2; ++a) {
        double pa = 0.0;
        for (int l = 0; l < 4; ++l)
          for (int bob = 0; bob < 2; ++bob) pa += t.p[static_cast<std::size_t>(l)][a][bob];
        CHECK(std::abs(pa - 0.5) < 1e-12);
      }

      // Eve's outcome marginal agrees with the measurement statistics.
      const MeasurementStats st =
          outcome_stats(build_optimal(d, d), b, optimal_povm(b));
      for (int l = 0; l < 4; ++l)
        CHECK(std::abs(eve_marginal(t, l) - st.q[static_cast<std::size_t>(l)]) < 1e-12);
    }
  }
}

TEST_CASE("outcome letters encode Bob's flip syndrome exactly") {
  const JointTable t = joint_distribution(0.1, Basis::XY);
  for (int l = 0; l < 4; ++l) {
    const double q = eve_marginal(t, l);
    REQUIRE(q > 0.0);
    double err = 0.0;
    for (int a = 0; a < 2; ++a) err += t.p[static_cast<std::size_t>(l)][a][1 - a];
    const double conditional = err / q;
    if (outcome_flags_error(l)) {
      CHECK(std::abs(conditional - 1.0) < 1e-12);
      CHECK(std::abs(q - 0.05) < 1e-12);
    } else {
      CHECK(conditional < 1e-12);
      CHECK(std::abs(q - 0.45) < 1e-12);
    }
  }
}

TEST_CASE("measuring across the announced basis leaves Bob's error unconditioned") {
  for (double d : {0.05, 0.2, 0.4}) {
    const JointTable t = cross_basis_joint(d, Basis::XY);
    CHECK(t.basis == Basis::UV);
    CHECK(std::abs(t.total() - 1.0) < 1e-14);
    for (int l = 0; l < 4; ++l) {
      for (int a = 0; a < 2; ++a) {
        const double pa =
            t.p[static_cast<std::size_t>(l)][a][0] + t.p[static_cast<std::size_t>(l)][a][1];
        REQUIRE(pa > 0.0);
        const double conditional = t.p[static_cast<std::size_t>(l)][a][1 - a] / pa;
        INFO("d = " << d << " outcome " << l << " alice " << a);
        CHECK(std::abs(conditional - d) < 1e-12);
      }
    }
  }
}

TEST_CASE("a fully one-sided interaction pins Eve to Alice's bit") {
  // d_xy = 0 with maximal conjugate disturbance: Bob never errs in xy and
  // the probe copies the announced-basis bit outright.
  const JointTable t = joint_table(build_optimal(0.0, 0.5), Basis::XY, optimal_povm(Basis::XY));
  CHECK(std::abs(t.total() - 1.0) < 1e-14);
  CHECK(bob_error_in(t) < 1e-14);
  CHECK(std::abs(t.p[0][0][0] - 0.5) < 1e-14);
  CHECK(std::abs(t.p[3][1][1] - 0.5) < 1e-14);
  for (int l = 0; l < 4; ++l)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (!((l == 0 && a == 0 && b == 0) || (l == 3 && a == 1 && b == 1)))
          CHECK(t.p[static_cast<std::size_t>(l)][a][b] < 1e-14);
}

TEST_CASE("plug-in estimator recovers exact table information") {
  std::array<std::array<std::uint64_t, 4>, 2> independent{};
  for (int a = 0; a < 2; ++a)
    for (int l = 0; l < 4; ++l) independent[static_cast<std::size_t>(a)][static_cast<std::size_t>(l)] = 1000;
  CHECK(std::abs(detail::plugin_mi(independent, 8000)) < 1e-15);

  std::array<std::array<std::uint64_t, 4>, 2> correlated{};
  correlated[0][0] = 5000;
  correlated[0][1] = 5000;
  correlated[1][2] = 5000;
  correlated[1][3] = 5000;
  CHECK(std::abs(detail::plugin_mi(correlated, 20000) - 0.69314718055994531) < 1e-12);

  CHECK(detail::plugin_mi(independent, 0) == 0.0);
}

TEST_CASE("disabling the attack gives a clean channel and no listener fields") {
  ProtocolConfig cfg;
  cfg.d = 0.1;
  cfg.rounds = 50000;
  cfg.seed = 9;
  cfg.attack = false;

  const TranscriptSummary s = run(cfg);
  CHECK(s.bob_error_rate == 0.0);
  CHECK_FALSE(s.eve_guess_accuracy.has_value());
  CHECK_FALSE(s.eve_mi_plugin_nats.has_value());
  for (const BasisSummary& pb : s.per_basis) {
    CHECK(pb.bob_error_rate == 0.0);
    CHECK_FALSE(pb.eve_guess_accuracy.has_value());
    CHECK_FALSE(pb.eve_mi_plugin_nats.has_value());
  }
  CHECK(s.n_sifted == s.per_basis[0].n_sifted + s.per_basis[1].n_sifted);
}

TEST_CASE("identical seed and worker count reproduce the transcript bit for bit") {
  ProtocolConfig cfg;
  cfg.d = 0.12;
  cfg.rounds = 40000;
  cfg.seed = 77;
  cfg.workers = 1;

  CHECK(summaries_identical(run(cfg), run(cfg)));

  cfg.workers = 3;
  CHECK(summaries_identical(run(cfg), run(cfg)));
}

TEST_CASE("sifting keeps about half the rounds") {
  for (std::uint64_t seed : {2ULL, 13ULL, 101ULL}) {
    ProtocolConfig cfg;
    cfg.d = 0.1;
    cfg.rounds = 100000;
    cfg.seed = seed;

    const TranscriptSummary s = run(cfg);
    const double slack = 3.0 * 0.5 / std::sqrt(static_cast<double>(cfg.rounds));
    INFO("seed " << seed << " fraction " << s.sifted_fraction);
    CHECK(std::abs(s.sifted_fraction - 0.5) < slack);
  }
}

TEST_CASE("empirical information approaches the ceiling as rounds grow") {
  const double bound = info_bound(0.1);
  double previous = 1e300;
  for (std::uint64_t n : {10000ULL, 100000ULL, 1000000ULL}) {
    ProtocolConfig cfg;
    cfg.d = 0.1;
    cfg.rounds = n;
    cfg.seed = 2024;
    cfg.workers = 1;

    const TranscriptSummary s = run(cfg);
    REQUIRE(s.eve_mi_plugin_nats.has_value());
    const double gap = std::abs(*s.eve_mi_plugin_nats - bound);
    INFO("n = " << n << " |mi - bound| = " << gap);
    CHECK(gap < previous);
    previous = gap;

    if (n == 1000000ULL) {
      CHECK(gap < 0.005);
      CHECK(std::abs(s.bob_error_rate - 0.1) < 0.0013);
      REQUIRE(s.eve_guess_accuracy.has_value());
      CHECK(std::abs(*s.eve_guess_accuracy - 0.8) < 0.002);
    }
  }
}

TEST_CASE("an undisturbing attack learns nothing") {
  ProtocolConfig cfg;
  cfg.d = 0.0;
  cfg.rounds = 100000;
  cfg.seed = 4;

  const TranscriptSummary s = run(cfg);
  CHECK(s.bob_error_rate == 0.0);
  REQUIRE(s.eve_mi_plugin_nats.has_value());
  CHECK(*s.eve_mi_plugin_nats < 1e-3);
  REQUIRE(s.eve_guess_accuracy.has_value());
  CHECK(std::abs(*s.eve_guess_accuracy - 0.5) < 0.01);
}

TEST_CASE("configuration errors are rejected") {
  ProtocolConfig bad;
  bad.rounds = 10;
  bad.workers = 0;
  CHECK_THROWS_AS(run(bad), std::invalid_argument);

  ProtocolConfig out_of_range;
  out_of_range.d = 0.6;
  out_of_range.rounds = 10;
  CHECK_THROWS_AS(run(out_of_range), std::invalid_argument);
}
