#pragma once

#include <memory>

#include "qfcs/operator.hpp"
#include "qfcs/states.hpp"

namespace qfcs {

struct Tolerances {
  double cluster_tol = 1e-9;
  double quad_tol = 1e-8;
};

/// A confined system coupled to a confined reservoir:
///   H_0 = H_S ⊗ 1 + 1 ⊗ H_R,   H_λ = H_0 + λV,
/// initial state ω = ρ_S ⊗ ρ_R with ρ_R the β-Gibbs state of H_R.
///
/// Immutable; copies share the derived data, so a Scenario may be passed
/// freely between threads.
class Scenario {
 public:
  Scenario(Operator h_system, Operator h_reservoir, Operator coupling, double lambda, double beta,
           DensityMatrix rho_system, Tolerances tolerances = {});

  const Operator& h_system() const;
  const Operator& h_reservoir() const;
  const Operator& coupling() const;
  double lambda() const;
  double beta() const;
  const DensityMatrix& rho_system() const;
  const Tolerances& tolerances() const;

  int dim_system() const;
  int dim_reservoir() const;
  int dim() const;

  /// H_S ⊗ 1
  const Operator& h_system_full() const;
  /// 1 ⊗ H_R
  const Operator& h_reservoir_full() const;
  /// H_0
  const Operator& h_free() const;
  /// H_λ
  const Operator& h_coupled() const;

  const Eigensystem& system_eigensystem() const;
  const Eigensystem& reservoir_eigensystem() const;
  const Eigensystem& free_eigensystem() const;
  const Eigensystem& coupled_eigensystem() const;

  /// ρ_R = gibbs(H_R, β)
  const DensityMatrix& rho_reservoir() const;
  /// ρ_β = gibbs(H_S, β)
  const DensityMatrix& rho_system_gibbs() const;
  /// ω = ρ_S ⊗ ρ_R
  const DensityMatrix& initial_state() const;
  /// ω_eq = ρ_β ⊗ ρ_R
  const DensityMatrix& equilibrium_state() const;

  /// τ_λ^t(A) = e^{itH_λ} A e^{−itH_λ}
  Operator evolve(const Operator& a, double t) const;
  /// τ_0^t(A)
  Operator evolve_free(const Operator& a, double t) const;
  /// e^{itH_λ}
  Operator coupled_unitary(double t) const;
  /// e^{itH_0}
  Operator free_unitary(double t) const;

  Scenario with_lambda(double lambda) const;

  /// max(1, ‖H_S‖ + ‖H_R‖ + |λ|‖V‖); scales absolute tolerances.
  double energy_scale() const;

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

}  // namespace qfcs
