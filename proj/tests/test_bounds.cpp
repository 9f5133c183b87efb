#include <catch2/catch_amalgamated.hpp>

#include <bb84eve/bounds.hpp>

#include <cmath>

using namespace bb84eve;

TEST_CASE("kernel values at the edges and a fixed interior point") {
  CHECK(phi(0.0) == 0.0);
  CHECK(std::abs(phi(1.0) - 2.0 * 0.69314718055994531) < 1e-15);
  // Reference value computed with 40-digit arithmetic.
  CHECK(std::abs(phi(0.6) - 0.38548951404351486) < 1e-15);
  CHECK_THROWS_AS(phi(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(phi(1.1), std::invalid_argument);
}

TEST_CASE("gain ceiling is the root-parabola") {
  CHECK(gain_bound(0.0) == 0.0);
  CHECK(std::abs(gain_bound(0.5) - 1.0) < 1e-15);
  CHECK(std::abs(gain_bound(0.1) - 0.6) < 1e-15);  // 2 sqrt(0.09)
  CHECK_THROWS_AS(gain_bound(-0.01), std::invalid_argument);
}

TEST_CASE("information ceiling at reference disturbances") {
  // Reference values computed with 40-digit arithmetic.
  CHECK(std::abs(info_bound(0.05) - 0.098263403339302825) < 1e-15);
  CHECK(std::abs(info_bound(0.1) - 0.19274475702175743) < 1e-15);
  CHECK(std::abs(info_bound(0.15) - 0.2829028874860709) < 1e-15);
  CHECK(std::abs(info_bound(0.2) - 0.36806420716849707) < 1e-15);
  CHECK(std::abs(info_bound(0.5) - 0.69314718055994531) < 1e-15);
  CHECK(info_bound(0.0) == 0.0);
  CHECK_THROWS_AS(info_bound(0.6), std::invalid_argument);

  // The definition chain is literal: half the kernel at the gain ceiling.
  for (double d : {0.03, 0.17, 0.29, 0.48})
    CHECK(info_bound(d) == 0.5 * phi(gain_bound(d)));
}

TEST_CASE("both ceilings increase monotonically on the half-interval") {
  double prev_g = -1.0, prev_i = -1.0;
  for (int k = 0; k <= 500; ++k) {
    const double d = 0.001 * k;
    const double g = gain_bound(d);
    const double i = info_bound(d);
    CHECK(g >= prev_g);
    CHECK(i >= prev_i);
    prev_g = g;
    prev_i = i;
  }
}

TEST_CASE("small-disturbance slope approaches two from below") {
  const SlopeReport rep = small_d_slope_check();
  CHECK(rep.pass);
  CHECK(std::abs(rep.ratio[0] - 1.9993327995) < 1e-9);
  CHECK(std::abs(rep.ratio[1] - 1.999933328) < 1e-8);
  CHECK(std::abs(rep.ratio[2] - 1.99999333328) < 1e-8);
  CHECK(rep.ratio[0] < rep.ratio[1]);
  CHECK(rep.ratio[1] < rep.ratio[2]);
  CHECK(rep.ratio[2] < 2.0);
}

TEST_CASE("information ceiling is concave in the disturbance") {
  const ConcavityReport rep = concavity_check(1e-3);
  CHECK(rep.pass);
  CHECK(rep.max_second_difference <= 0.0);
  CHECK(rep.max_closed_form <= 0.0);
  CHECK(rep.points > 400);
  CHECK_THROWS_AS(concavity_check(0.0), std::invalid_argument);
  CHECK_THROWS_AS(concavity_check(0.2), std::invalid_argument);
}

TEST_CASE("closed-form curvature matches a central second difference") {
  // Reference value computed with 40-digit arithmetic at x = 0.3.
  const double x = 0.3;
  const double z = gain_bound(x);
  CHECK(std::abs(concavity_closed_form(z) - (-6.7573154245467722)) < 1e-12);

  const double h = 1e-5;
  auto f = [](double v) { return phi(gain_bound(v)); };
  const double dd = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
  CHECK(std::abs(dd - concavity_closed_form(z)) < 1e-4);

  CHECK_THROWS_AS(concavity_closed_form(0.0), std::invalid_argument);
  CHECK_THROWS_AS(concavity_closed_form(1.0), std::invalid_argument);
}
