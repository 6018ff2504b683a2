#pragma once

#include <vector>

#include "qfcs/operator.hpp"
#include "qfcs/scenario.hpp"

namespace qfcs {

/// e^{itH} A e^{−itH}
Operator heisenberg(const Operator& a, const Operator& h, double t);

/// Energy fluxes φ_S = λ i[H_S⊗1, V] and φ_R = λ i[1⊗H_R, V].
struct FluxObservables {
  Operator phi_system;
  Operator phi_reservoir;
};

FluxObservables flux_observables(const Scenario& scn);

/// ΔQ_S = ω(τ_λ^t(H_S)) − ω(H_S) (system gain) and
/// ΔQ_R = ω(H_R) − ω(τ_λ^t(H_R)) (reservoir loss).
struct HeatChange {
  double system;
  double reservoir;
};

HeatChange delta_q_direct(const Scenario& scn, double t);

struct FluxHeatChange {
  HeatChange value;
  double error_estimate;
};

/// The same quantities as time integrals of the fluxes:
///   ΔQ_R = ∫₀ᵗ ω(τ_λ^s(φ_R)) ds,   ΔQ_S = −∫₀ᵗ ω(τ_λ^s(φ_S)) ds.
FluxHeatChange delta_q_flux(const Scenario& scn, double t, double quad_tol);

/// |(ΔQ_R − ΔQ_S) − λ(ω(τ_λ^t(V)) − ω(V))|
double balance_check(const Scenario& scn, double t);

/// |ω(τ_λ^t(H_λ)) − ω(H_λ)|
double energy_drift(const Scenario& scn, double t);

/// Interaction-picture cocycle e^{itH_λ} e^{−itH_0}.
Operator exact_cocycle(const Scenario& scn, double t);

struct DysonResult {
  Operator gamma;           // Σ_{n ≤ order} of the Dyson terms
  double integration_error; // Richardson estimate of the ODE integration error
  int steps;
  bool converged;
};

/// The Dyson terms T_1..T_K of the cocycle, Γ = 1 + Σ_n T_n. The nested
/// integrals are the solution of the triangular system dT_n/ds = iλ T_{n−1}(s) τ_0^s(V),
/// so one integration yields every lower order as well.
struct DysonSeries {
  std::vector<Operator> terms;  // terms[n − 1] = T_n
  double integration_error;     // Richardson estimate, max over n
  int steps;
  bool converged;

  /// 1 + T_1 + … + T_order
  Operator partial_sum(int order) const;
};

DysonSeries dyson_series(const Scenario& scn, double t, int max_order, double tol = 1e-12);

/// Dyson series of the cocycle truncated at `order`, with the nested time
/// integrals produced by integrating dT_n/ds = iλ T_{n−1}(s) τ_0^s(V) with
/// classical RK4. Step count doubles until the integration error estimate
/// falls below `tol`.
DysonResult dyson_gamma(const Scenario& scn, double t, int order, double tol = 1e-12);

/// (|λ|‖V‖|t|)^{k+1} e^{|λ|‖V‖|t|} / (k+1)!
double dyson_error_bound(const Scenario& scn, double t, int order);

}  // namespace qfcs
