#include <catch2/catch_amalgamated.hpp>

#include <bb84eve/bases.hpp>
#include <bb84eve/hilbert.hpp>
#include <bb84eve/rng.hpp>

#include <cmath>
#include <cstring>

using namespace bb84eve;

namespace {

// Identity of rays: equal projectors means equal up to a global phase.
double ray_distance(const StateVector& a, const StateVector& b) {
  return max_abs_entry(projector(a) - projector(b));
}

}  // namespace

TEST_CASE("signal labels and pairings") {
  CHECK(basis_of(Signal::X) == Basis::XY);
  CHECK(basis_of(Signal::Y) == Basis::XY);
  CHECK(basis_of(Signal::U) == Basis::UV);
  CHECK(basis_of(Signal::V) == Basis::UV);
  CHECK(conjugate(Basis::XY) == Basis::UV);
  CHECK(conjugate(Basis::UV) == Basis::XY);

  for (int k = 0; k < 4; ++k) {
    const Signal s = static_cast<Signal>(k);
    CHECK(partner(partner(s)) == s);
    CHECK(basis_of(partner(s)) == basis_of(s));
    CHECK(partner(s) != s);
  }

  CHECK(std::strcmp(name(Basis::XY), "xy") == 0);
  CHECK(std::strcmp(name(Basis::UV), "uv") == 0);
  CHECK(std::strcmp(name(Signal::X), "x") == 0);
  CHECK(std::strcmp(name(Signal::V), "v") == 0);
}

TEST_CASE("the two bases are mutually unbiased") {
  for (Signal i : {Signal::X, Signal::Y}) {
    for (Signal j : {Signal::U, Signal::V}) {
      const double overlap = std::norm(inner(signal_vector(i), signal_vector(j)));
      CHECK(std::abs(overlap - 0.5) < 1e-12);
    }
  }
  CHECK(std::abs(inner(signal_vector(Signal::X), signal_vector(Signal::Y))) < 1e-15);
  CHECK(std::abs(inner(signal_vector(Signal::U), signal_vector(Signal::V))) < 1e-15);

  const double r = 1.0 / std::sqrt(2.0);
  const StateVector u = signal_vector(Signal::U);
  const StateVector x = signal_vector(Signal::X);
  const StateVector y = signal_vector(Signal::Y);
  CHECK((u - cplx(r) * (x + y)).norm() < 1e-15);
  CHECK((signal_vector(Signal::V) - cplx(r) * (x - y)).norm() < 1e-15);
}

TEST_CASE("Bell vectors are orthonormal and maximally entangled") {
  for (Basis b : {Basis::XY, Basis::UV}) {
    const auto bell = bell_basis(b);
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        const double expect = j == k ? 1.0 : 0.0;
        CHECK(std::abs(inner(bell[j], bell[k]) - cplx(expect)) < 1e-12);
      }
      const DensityMatrix marg =
          partial_trace(DensityMatrix::pure(bell[j].normalized()), {2, 2}, {0});
      CHECK(max_abs_entry(marg.m - cplx(0.5) * Operator::identity(2)) < 1e-12);
    }
  }
}

TEST_CASE("Bell vectors of one basis re-express in the other") {
  const auto xy = bell_basis(Basis::XY);
  const auto uv = bell_basis(Basis::UV);

  CHECK((uv[0] - xy[0]).norm() < 1e-12);  // Phi+ is shared
  CHECK((uv[1] - xy[2]).norm() < 1e-12);  // Phi- <-> Psi+
  CHECK((uv[2] - xy[1]).norm() < 1e-12);  // Psi+ <-> Phi-
  CHECK((uv[3] + xy[3]).norm() < 1e-12);  // Psi- flips sign
}

TEST_CASE("Bloch coordinates round trip on the closed unit ball") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    BlochVector n{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double len = n.norm();
    const double target = rng.next_double();  // radius in [0, 1)
    n.n1 *= target / len;
    n.n2 *= target / len;
    n.n3 *= target / len;

    const BlochVector back = bloch_of(state_of(n));
    CHECK(std::abs(back.n1 - n.n1) < 1e-12);
    CHECK(std::abs(back.n2 - n.n2) < 1e-12);
    CHECK(std::abs(back.n3 - n.n3) < 1e-12);
  }

  // Pure boundary point.
  const BlochVector pole{0.0, 0.0, 1.0};
  CHECK(max_abs_entry(state_of(pole).m - projector(signal_vector(Signal::X))) < 1e-15);
  CHECK_THROWS_AS(state_of(BlochVector{1.1, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("signal vectors sit on the Bloch equator of the rotation plane") {
  // n2 = 0 for all four signals; the polar rotation never leaves that plane.
  for (int k = 0; k < 4; ++k) {
    const BlochVector n = bloch_of(DensityMatrix::pure(signal_vector(static_cast<Signal>(k))));
    CHECK(std::abs(n.n2) < 1e-15);
    CHECK(std::abs(n.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("polar rotation cycles the signal set by quarter turns") {
  const Operator q = polar_rotation(std::acos(-1.0) / 2.0);
  CHECK(is_unitary(q));

  const Signal cycle[5] = {Signal::X, Signal::U, Signal::Y, Signal::V, Signal::X};
  for (int k = 0; k < 4; ++k) {
    const StateVector image = q * signal_vector(cycle[k]);
    CHECK(ray_distance(image, signal_vector(cycle[k + 1])) < 1e-12);
  }
}

TEST_CASE("polar rotation composes additively and has period two pi") {
  const double pi = std::acos(-1.0);
  const Operator a = polar_rotation(0.7);
  const Operator b = polar_rotation(1.9);
  CHECK(max_abs_entry(a * b - polar_rotation(2.6)) < 1e-12);
  CHECK(max_abs_entry(polar_rotation(2.0 * pi) - Operator::identity(2)) < 1e-12);
  CHECK(max_abs_entry(polar_rotation(0.0) - Operator::identity(2)) < 1e-15);

  // Four quarter turns compose to the identity operator, not merely a phase.
  const Operator q = polar_rotation(pi / 2.0);
  CHECK(max_abs_entry(q * q * q * q - Operator::identity(2)) < 1e-12);
}

TEST_CASE("polarization-plane rotation matches the Poincare rotation as a channel") {
  SplitMix64 rng(32);
  for (double theta : {0.3, 1.1, 2.7}) {
    const Operator real_rot = polarization_rotation(theta);
    const Operator polar = polar_rotation(2.0 * theta);
    CHECK(is_unitary(real_rot));
    const StateVector probe{cplx(rng.gaussian(), rng.gaussian()),
                            cplx(rng.gaussian(), rng.gaussian())};
    const StateVector v = probe.normalized();
    CHECK(ray_distance(real_rot * v, polar * v) < 1e-12);
  }
}
