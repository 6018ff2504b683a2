#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "qfcs/dynamics.hpp"
#include "qfcs/error.hpp"
#include "qfcs/fcs.hpp"
#include "scenarios.hpp"

using namespace qfcs;
using testing_support::qubit_pair;
using testing_support::random_scenario;

namespace {

std::vector<oracle::Atom> as_oracle(const AtomicMeasure& m) {
  std::vector<oracle::Atom> out;
  for (const Atom& a : m.atoms()) out.push_back({a.location, a.weight});
  return out;
}

std::vector<oracle::Atom> protocol_oracle(const Scenario& s, double t) {
  return oracle::reservoir_protocol(s.h_system(), s.h_reservoir(), s.coupling(), s.lambda(), s.beta(),
                                    s.rho_system().op(), t);
}

}  // namespace

TEST_CASE("qubit pair reservoir FCS has atoms at -1, 0 and 1") {
  const Scenario s = qubit_pair(0.2);
  const FcsResult r = reservoir_fcs(s, 1.0);
  REQUIRE(r.measure.size() == 3);
  CHECK(r.measure.atoms()[0].location == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(r.measure.atoms()[1].location) < 1e-12);
  CHECK(r.measure.atoms()[2].location == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.measure.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle::measure_distance(as_oracle(r.measure), protocol_oracle(s, 1.0)) < 1e-10);
  REQUIRE(r.moments.size() == 4);
  CHECK(r.moments[0] == doctest::Approx(r.mean));
}

TEST_CASE("system FCS of the qubit pair") {
  const Scenario s = qubit_pair(0.2);
  const FcsResult r = system_fcs(s, 1.0);
  // Starting in the excited state only the jumps 0 and -1 occur.
  REQUIRE(r.measure.size() == 2);
  CHECK(r.measure.atoms()[0].location == doctest::Approx(-1.0));
  CHECK(r.measure.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.mean - delta_q_direct(s, 1.0).system) < 1e-12);
}

TEST_CASE("reservoir FCS agrees with the relative modular oracle and the protocol") {
  RandomOperators rng(61);
  for (int k = 0; k < 10; ++k) {
    const Scenario s = random_scenario(rng, {rng.uniform_int(2, 3), 1 << rng.uniform_int(1, 2), rng.uniform(0, 0.5),
                                             rng.uniform(0.5, 2)});
    const double t = rng.uniform(0, 5);
    const FcsResult r = reservoir_fcs(s, t);
    const auto modular = oracle::relative_modular_measure(eta_evolved(s, t), eta_weight(s), omega_initial(s).mat(),
                                                          s.beta());
    CHECK(oracle::measure_distance(as_oracle(r.measure), modular) < 1e-9);
    CHECK(oracle::measure_distance(as_oracle(r.measure), protocol_oracle(s, t)) < 1e-10);
    CHECK(oracle::measure_distance(as_oracle(reservoir_protocol_fcs(s, t).measure), protocol_oracle(s, t)) < 1e-10);
  }
}

TEST_CASE("FCS reduces to a point mass without coupling or time") {
  const Scenario s = qubit_pair(0.3);
  for (const FcsResult& r : {reservoir_fcs(s.with_lambda(0.0), 2.0), reservoir_fcs(s, 0.0), system_fcs(s, 0.0)}) {
    REQUIRE(r.measure.size() == 1);
    CHECK(std::abs(r.measure.atoms()[0].location) < 1e-12);
    CHECK(std::abs(r.measure.atoms()[0].weight - 1.0) < 1e-12);
  }
  const StripFunction f(s.with_lambda(0.0), 2.0);
  for (Complex a : default_strip_grid()) CHECK(std::abs(f(a) - 1.0) < 1e-12);
}

TEST_CASE("mean of the reservoir FCS is the reservoir heat loss") {
  RandomOperators rng(62);
  for (int k = 0; k < 5; ++k) {
    const Scenario s = random_scenario(rng, {2, 4, rng.uniform(0.1, 0.5), 1.0});
    const double t = rng.uniform(0.5, 5);
    CHECK(mean_identity_check(s, t, 1e-10) <= 1e-7);
    CHECK(std::abs(reservoir_fcs(s, t).mean - delta_q_direct(s, t).reservoir) < 1e-10);
  }
}

TEST_CASE("system FCS mean is the heat of the dephased initial state") {
  RandomOperators rng(69);
  for (int k = 0; k < 5; ++k) {
    const Scenario s = random_scenario(rng, {3, 2, rng.uniform(0.1, 0.5), 1.0});
    const double t = rng.uniform(0.5, 5);
    // The first measurement removes the coherences of rho_S in the H_S eigenbasis.
    const Eigensystem& es = s.system_eigensystem();
    const Operator in_basis = es.vectors.adjoint() * s.rho_system().op() * es.vectors;
    const Operator dephased = es.vectors * Operator(in_basis.diagonal().asDiagonal()) * es.vectors.adjoint();
    const Scenario d(s.h_system(), s.h_reservoir(), s.coupling(), s.lambda(), s.beta(), DensityMatrix(dephased));
    CHECK(std::abs(system_fcs(s, t).mean - delta_q_direct(d, t).system) < 1e-10);
  }
}

TEST_CASE("system characteristic limit at gamma = pi") {
  const double want = (1.0 - std::exp(-1.0)) / (1.0 + std::exp(-1.0));
  CHECK(system_char_limit(qubit_pair(0.2, 1.0, 0.5, 0), M_PI).real() == doctest::Approx(want).epsilon(1e-14));
  CHECK(system_char_limit(qubit_pair(0.2, 1.0, 0.5, 1), M_PI).real() == doctest::Approx(-want).epsilon(1e-14));
  CHECK(std::abs(system_char_limit(qubit_pair(0.2), 0.0) - 1.0) < 1e-15);
  CHECK(want == doctest::Approx(0.462117).epsilon(1e-6));
}

TEST_CASE("strip function values") {
  RandomOperators rng(63);
  const Scenario s = random_scenario(rng, {3, 2, 0.4, 1.3});
  const double t = 1.7;
  const StripFunction f(s, t);
  CHECK(std::abs(f(0.0) - 1.0) < 1e-12);
  const Complex one = f(1.0);
  CHECK(std::abs(one.imag()) < 1e-12);
  CHECK(one.real() >= 0.0);
  CHECK(one.real() <= 3.0 + 1e-12);
  for (Complex a : {Complex(0.3, 0.8), Complex(0.5, -1.5), Complex(0.9, 0.1)}) {
    const Complex want = oracle::strip_function(s.h_system(), s.h_reservoir(), s.coupling(), s.lambda(), s.beta(),
                                                s.rho_system().op(), t, a);
    CHECK(std::abs(f(a) - want) < 1e-9);
    // Conjugate symmetry across the real axis.
    CHECK(std::abs(f(std::conj(a)) - std::conj(f(a))) < 1e-12);
  }
  CHECK_THROWS_AS(f(Complex(-0.1, 0.0)), DomainError);
  CHECK_THROWS_AS(f(Complex(1.1, 0.0)), DomainError);
  CHECK_NOTHROW(f.extended(Complex(-0.1, 0.0)));
}

TEST_CASE("strip function on the imaginary axis is the characteristic function") {
  RandomOperators rng(64);
  const Scenario s = random_scenario(rng, {2, 4, 0.3, 0.8});
  const StripFunction f(s, 2.0);
  const FcsResult r = reservoir_fcs(s, 2.0);
  for (double g : {-3.0, -0.4, 0.0, 1.1, 2.5})
    CHECK(std::abs(f(Complex(0.0, g / s.beta())) - r.measure.characteristic(g)) < 1e-11);
}

TEST_CASE("strip bounds") {
  RandomOperators rng(65);
  for (int k = 0; k < 5; ++k) {
    const Scenario s = random_scenario(rng, {rng.uniform_int(2, 3), 2, rng.uniform(0, 0.5), 1.0});
    const auto grid = default_strip_grid();
    REQUIRE(grid.size() == 25);
    const StripBoundsReport r = strip_bounds_check(s, rng.uniform(0, 5), grid);
    CHECK(r.pass);
    CHECK(r.max_violation <= 1e-10);
    CHECK(r.points == 25);
  }
}

TEST_CASE("half-line identity") {
  RandomOperators rng(66);
  const Scenario s = random_scenario(rng, {2, 2, 0.3, 1.0});
  for (double t : {0.0, 0.8, 2.0})
    for (double sv : {-1.0, 0.0, 0.7}) {
      const HalfLineResult r = lemma_half_line_check(s, t, sv);
      CHECK(std::min(r.residual_statement, r.residual_proof) <= 1e-8);
    }
}

TEST_CASE("moments from derivatives match atom moments") {
  RandomOperators rng(67);
  for (int k = 0; k < 5; ++k) {
    const Scenario s = random_scenario(rng, {2, 4, rng.uniform(0.1, 0.5), rng.uniform(0.5, 2)});
    const double t = rng.uniform(0.5, 5);
    const StripFunction f(s, t);
    const FcsResult r = reservoir_fcs(s, t);
    const auto dm = derivative_moments(f, 4);
    REQUIRE(dm.size() == 4);
    for (int n = 0; n < 4; ++n) CHECK(std::abs(dm[n] - r.moments[n]) <= 1e-6);
  }
  CHECK_THROWS_AS(derivative_moments(StripFunction(qubit_pair(0.1), 1.0), 4, 8), Error);
}

TEST_CASE("balance operator identity") {
  RandomOperators rng(68);
  const Scenario s = random_scenario(rng, {2, 2, 0.3, 1.0});
  CHECK(balance_operator_check(s, 1.5, 1e-10) < 1e-8);
}

TEST_CASE("default gamma grid spans one period of the smallest gap") {
  const auto g = default_gamma_grid(qubit_pair(0.2));
  REQUIRE(g.size() == 41);
  CHECK(g.front() == doctest::Approx(-M_PI));
  CHECK(g.back() == doctest::Approx(M_PI));
  CHECK(std::abs(g[20]) < 1e-15);
}
