#pragma once

#include <cstdint>
#include <vector>

#include "qfcs/scenario.hpp"
#include "qfcs/states.hpp"

namespace testing_support {

struct RandomScenarioSpec {
  int ds;
  int dr;
  double lambda;
  double beta;
};

/// Random Hermitian H_S, H_R and V scaled to unit operator norm, random full-rank ρ_S.
inline qfcs::Scenario random_scenario(qfcs::RandomOperators& rng, const RandomScenarioSpec& s) {
  auto unit_hermitian = [&](int d) {
    qfcs::Operator h = rng.hermitian(d);
    return qfcs::Operator(h / qfcs::op_norm(h));
  };
  const qfcs::Operator hs = unit_hermitian(s.ds);
  const qfcs::Operator hr = unit_hermitian(s.dr);
  const qfcs::Operator v = unit_hermitian(s.ds * s.dr);
  return qfcs::Scenario(hs, hr, v, s.lambda, s.beta, rng.density(s.ds));
}

/// H_S = diag(0, 1), H_R = h σ_z, V = σ_x ⊗ σ_x.
inline qfcs::Scenario qubit_pair(double lambda, double beta = 1.0, double field = 0.5, int excited = 1) {
  qfcs::Operator hs = qfcs::Operator::Zero(2, 2);
  hs(1, 1) = 1.0;
  qfcs::Operator rho = qfcs::Operator::Zero(2, 2);
  rho(excited, excited) = 1.0;
  return qfcs::Scenario(hs, field * qfcs::pauli_z(), qfcs::tensor(qfcs::pauli_x(), qfcs::pauli_x()), lambda, beta,
                        qfcs::DensityMatrix(rho));
}

}  // namespace testing_support
