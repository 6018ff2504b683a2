#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "qfcs/dynamics.hpp"
#include "qfcs/error.hpp"
#include "qfcs/quadrature.hpp"
#include "scenarios.hpp"

using namespace qfcs;
using testing_support::qubit_pair;
using testing_support::random_scenario;

TEST_CASE("adaptive quadrature on smooth and oscillatory integrands") {
  const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r.error_estimate <= 1e-12);
  const auto osc = integrate_adaptive([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0, 1e-10);
  CHECK(std::abs(osc.value - std::sin(120.0) / 40.0) <= 1e-10);
  const auto back = integrate_adaptive([](double x) { return x * x; }, 2.0, 0.0, 1e-12);
  CHECK(back.value == doctest::Approx(-8.0 / 3.0));
  CHECK(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0, 1e-12).value == 0.0);
}

TEST_CASE("adaptive quadrature reports the achieved error when it gives up") {
  auto spiky = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); };
  auto norm = [](double x) { return std::abs(x); };
  try {
    integrate_adaptive(spiky, 0.0, 1.0, 1e-12, norm, 8);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_error() > 1e-15);
  }
}

TEST_CASE("heisenberg evolution examples") {
  CHECK((heisenberg(pauli_x(), pauli_z(), 0.0) - pauli_x()).norm() < 1e-15);
  CHECK((heisenberg(pauli_z(), pauli_z(), 3.0) - pauli_z()).norm() < 1e-14);
  for (double t : {0.3, 1.0, 2.2}) {
    const Operator want = std::cos(2 * t) * pauli_x() - std::sin(2 * t) * pauli_y();
    CHECK((heisenberg(pauli_x(), pauli_z(), t) - want).norm() < 1e-14);
  }
}

TEST_CASE("heisenberg group law and isometry") {
  RandomOperators rng(31);
  const Operator h = rng.hermitian(5), a = rng.ginibre(5);
  CHECK((heisenberg(heisenberg(a, h, 0.4), h, 0.9) - heisenberg(a, h, 1.3)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(std::abs(op_norm(heisenberg(a, h, 2.0)) - op_norm(a)) < 1e-10);
}

TEST_CASE("flux observables") {
  const Scenario s = qubit_pair(0.3);
  const FluxObservables f = flux_observables(s);
  CHECK(hermiticity_defect(f.phi_system) < 1e-14);
  CHECK(hermiticity_defect(f.phi_reservoir) < 1e-14);
  const Operator total = 0.3 * Complex(0, 1) * (s.h_free() * s.coupling() - s.coupling() * s.h_free());
  CHECK((f.phi_system + f.phi_reservoir - total).norm() < 1e-14);
}

TEST_CASE("heat changes vanish in the trivial limits") {
  const Scenario s = qubit_pair(0.2);
  const HeatChange at0 = delta_q_direct(s, 0.0);
  CHECK(std::abs(at0.system) < 1e-14);
  CHECK(std::abs(at0.reservoir) < 1e-14);
  const HeatChange uncoupled = delta_q_direct(s.with_lambda(0.0), 4.0);
  CHECK(std::abs(uncoupled.system) < 1e-14);
  CHECK(std::abs(uncoupled.reservoir) < 1e-14);
  const FluxHeatChange f0 = delta_q_flux(s, 0.0, 1e-8);
  CHECK(f0.value.system == 0.0);
  CHECK(balance_check(s.with_lambda(0.0), 2.0) < 1e-14);
  CHECK(balance_check(s, 0.0) < 1e-14);
}

TEST_CASE("fluxes vanish when V commutes with H_0") {
  const Scenario s(pauli_z(), pauli_z(), tensor(pauli_z(), pauli_z()), 0.4, 1.0, DensityMatrix(identity(2) / 2.0));
  const FluxHeatChange f = delta_q_flux(s, 3.0, 1e-8);
  CHECK(std::abs(f.value.system) < 1e-14);
  CHECK(std::abs(f.value.reservoir) < 1e-14);
}

TEST_CASE("direct and flux heat changes agree on random scenarios") {
  RandomOperators rng(32);
  for (int k = 0; k < 50; ++k) {
    const Scenario s = random_scenario(rng, {rng.uniform_int(2, 3), 1 << rng.uniform_int(1, 3), rng.uniform(0, 0.5),
                                             rng.uniform(0.5, 2)});
    const double t = rng.uniform(0, 5);
    const HeatChange d = delta_q_direct(s, t);
    const FluxHeatChange f = delta_q_flux(s, t, 1e-8);
    CHECK(std::abs(d.system - f.value.system) <= 1e-8 + 1e-10);
    CHECK(std::abs(d.reservoir - f.value.reservoir) <= 1e-8 + 1e-10);
    CHECK(balance_check(s, t) <= 1e-10 * s.energy_scale());
    CHECK(energy_drift(s, t) <= 1e-10 * s.energy_scale());
  }
}

TEST_CASE("balance on a 2x8 scenario at t = 5") {
  RandomOperators rng(33);
  const Scenario s = random_scenario(rng, {2, 8, 0.3, 1.0});
  CHECK(balance_check(s, 5.0) <= 1e-10 * s.energy_scale());
}

TEST_CASE("Dyson series trivial cases") {
  const Scenario s = qubit_pair(0.1);
  CHECK((dyson_gamma(s.with_lambda(0.0), 2.0, 3).gamma - identity(4)).norm() == 0.0);
  CHECK((dyson_gamma(s, 0.0, 3).gamma - identity(4)).norm() == 0.0);
}

TEST_CASE("Dyson series of order 6 matches the exact cocycle") {
  const Scenario s = qubit_pair(0.1);
  const Operator exact = exact_cocycle(s, 1.0);
  const DysonResult r = dyson_gamma(s, 1.0, 6);
  CHECK(r.converged);
  CHECK(op_norm(r.gamma - exact) <= 1e-8);
  // Independent exact cocycle from Pade exponentials.
  const Operator pade = oracle::propagator(s.h_coupled(), 1.0) * oracle::propagator(s.h_free(), -1.0);
  CHECK(op_norm(exact - pade) < 1e-12);
}

TEST_CASE("Dyson truncation error sits under the factorial envelope") {
  RandomOperators rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    const Scenario s = random_scenario(rng, {2, 4, rng.uniform(0.1, 0.5), 1.0});
    const double t = 1.0 / (std::abs(s.lambda()) * op_norm(s.coupling()));
    const DysonSeries series = dyson_series(s, t, 6);
    const Operator exact = exact_cocycle(s, t);
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 6; ++k) {
      const double err = op_norm(series.partial_sum(k) - exact);
      CHECK(err <= dyson_error_bound(s, t, k) + series.integration_error);
      CHECK(err < previous);
      previous = err;
      CHECK(op_norm(dyson_gamma(s, t, k).gamma - series.partial_sum(k)) <= 1e-11);
    }
  }
}
