#include <catch2/catch_amalgamated.hpp>

#include <bb84eve/analysis.hpp>
#include <bb84eve/bounds.hpp>

#include <cmath>
#include <sstream>
#include <string>

using namespace bb84eve;

TEST_CASE("key-channel information at reference error rates") {
  CHECK(std::abs(alice_bob_information(0.0) - ln2) < 1e-15);
  CHECK(std::abs(alice_bob_information(0.5)) < 1e-15);
  // Reference values computed with 40-digit arithmetic.
  CHECK(std::abs(alice_bob_information(0.1) - 0.36806420716849707) < 1e-15);
  CHECK(std::abs(alice_bob_information(0.25) - 0.13081203594113696) < 1e-15);
  CHECK(std::abs(alice_bob_information(0.14644661) - 0.27665164881446621) < 1e-14);
  CHECK_THROWS_AS(alice_bob_information(-0.1), std::domain_error);

  // Same kernel as the listener bound: i_ab(d) = phi(1 - 2d) / 2, so the
  // key channel at error d carries what a listener is allowed at the
  // mirrored disturbance.
  for (double d : {0.05, 0.1, 0.2, 0.3, 0.45})
    CHECK(std::abs(alice_bob_information(d) - 0.5 * phi(1.0 - 2.0 * d)) < 1e-14);
  CHECK(std::abs(alice_bob_information(0.1) - info_bound(0.2)) < 1e-14);
}

TEST_CASE("the three threshold definitions coincide") {
  const ThresholdResult t = threshold();
  CHECK(t.closed_form == 0.5 - 0.25 * std::sqrt(2.0));
  // Reference value computed with 40-digit arithmetic.
  CHECK(std::abs(t.closed_form - 0.14644660940672624) < 1e-14);
  CHECK(std::abs(t.closed_form - t.info_root) < 1e-10);
  CHECK(std::abs(t.closed_form - t.chsh_root) < 1e-10);
  CHECK(std::abs(t.info_root - t.chsh_root) < 1e-10);

  // At the threshold the key channel and the listener ceiling balance.
  CHECK(std::abs(alice_bob_information(t.closed_form) - info_bound(t.closed_form)) < 1e-10);
  CHECK(std::abs(alice_bob_information(t.closed_form) - 0.27665164986025786) < 1e-10);
}

TEST_CASE("Bell combination closed form") {
  CHECK(std::abs(chsh_formula(0.0) - 2.0 * std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(chsh_formula(0.1) - 2.2627416997969521) < 1e-12);
  CHECK(std::abs(chsh_formula(0.5)) < 1e-15);
  CHECK(std::abs(chsh_formula(threshold().closed_form) - 2.0) < 1e-12);
  CHECK_THROWS_AS(chsh_formula(0.6), std::domain_error);
}

TEST_CASE("Bell combination from the channel state matches the formula") {
  CHECK(std::abs(chsh_from_state(0.0) - 2.0 * std::sqrt(2.0)) < 1e-10);
  for (int k = 0; k <= 50; ++k) {
    const double d = 0.01 * k;
    INFO("d = " << d);
    CHECK(std::abs(chsh_from_state(d) - chsh_formula(d)) < 1e-10);
  }
}

TEST_CASE("identity channel yields the Tsirelson value") {
  std::vector<Operator> identity_kraus{Operator::identity(2)};
  CHECK(std::abs(chsh_value(identity_kraus) - 2.0 * std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("tradeoff rows are internally consistent") {
  for (double d : {0.0, 0.07, 0.25, 0.5}) {
    const TradeoffRow r = tradeoff_row(d);
    CHECK(r.d == d);
    CHECK(r.g_bound == gain_bound(d));
    CHECK(r.i_eve_nats == info_bound(d));
    CHECK(std::abs(r.i_eve_bits - r.i_eve_nats / ln2) < 1e-15);
    CHECK(r.i_ab_nats == alice_bob_information(d));
    CHECK(r.s_chsh == chsh_formula(d));
    CHECK(r.secure == (r.i_ab_nats > r.i_eve_nats));
  }
}

TEST_CASE("tradeoff curve spans the range and flips security exactly once") {
  const auto rows = tradeoff_curve(0.0, 0.5, 0.01);
  REQUIRE(rows.size() == 51);

  CHECK(rows.front().d == 0.0);
  CHECK(rows.front().i_eve_nats == 0.0);
  CHECK(std::abs(rows.front().i_ab_nats - ln2) < 1e-15);
  CHECK(rows.front().secure);

  CHECK(std::abs(rows.back().d - 0.5) < 1e-12);
  CHECK(std::abs(rows.back().i_eve_nats - ln2) < 1e-12);
  CHECK(std::abs(rows.back().i_eve_bits - 1.0) < 1e-12);
  CHECK(std::abs(rows.back().i_ab_nats) < 1e-12);
  CHECK_FALSE(rows.back().secure);

  int flips = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].secure != rows[k - 1].secure) ++flips;
    CHECK(rows[k].i_eve_nats >= rows[k - 1].i_eve_nats);
    CHECK(rows[k].i_ab_nats <= rows[k - 1].i_ab_nats);
    CHECK(rows[k].s_chsh <= rows[k - 1].s_chsh);
  }
  CHECK(flips == 1);
  CHECK(rows[14].secure);        // d = 0.14, below threshold
  CHECK_FALSE(rows[15].secure);  // d = 0.15, above threshold

  CHECK_THROWS_AS(tradeoff_curve(0.0, 0.6, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(tradeoff_curve(0.2, 0.1, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(tradeoff_curve(0.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("CSV export has the fixed header and machine-stable formatting") {
  std::ostringstream os;
  write_tradeoff_csv(os, tradeoff_curve(0.0, 0.02, 0.01));
  const std::string text = os.str();

  CHECK(text.rfind("d,g_bound,i_eve_nats,i_eve_bits,i_ab_nats,s_chsh,secure\n", 0) == 0);
  CHECK(text.find("\r") == std::string::npos);
  CHECK(text.back() == '\n');

  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 4);

  // Row at d = 0: exact zeros and the Tsirelson value at 12 significant digits.
  CHECK(text.find("0,0,0,0,0.69314718056,2.82842712475,true") != std::string::npos);

  std::ostringstream again;
  write_tradeoff_csv(again, tradeoff_curve(0.0, 0.02, 0.01));
  CHECK(again.str() == text);
}

TEST_CASE("intercept-resend reference point") {
  const InterceptResendSummary ref = intercept_resend();
  CHECK(std::abs(ref.disturbance - 0.25) < 1e-12);
  CHECK(std::abs(ref.gain - 0.5) < 1e-12);
  CHECK(std::abs(ref.info_nats - 0.34657359027997265) < 1e-12);
  CHECK(std::abs(ref.s_chsh - std::sqrt(2.0)) < 1e-12);
}
