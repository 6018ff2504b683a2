#pragma once

// Standard (Hilbert–Schmidt) GNS representation and modular theory at finite
// dimension. A vector of the GNS space is a d×d matrix X with inner product
// tr(X*Y); the algebra acts by left multiplication, π(A)X = AX, and the
// commutant by right multiplication. Superoperators are applied to the
// matrix of a vector and never materialized as d²×d² matrices.

#include <cstdint>
#include <utility>
#include <vector>

#include "qfcs/operator.hpp"
#include "qfcs/scenario.hpp"
#include "qfcs/states.hpp"

namespace qfcs {

class HSVector {
 public:
  HSVector() = default;
  explicit HSVector(Operator mat) : mat_(std::move(mat)) {}

  const Operator& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

  Complex inner(const HSVector& other) const { return hs_inner(mat_, other.mat_); }
  double norm() const { return mat_.norm(); }

 private:
  Operator mat_;
};

/// GNS data of a state in the standard representation.
struct StandardGns {
  HSVector omega;  // ρ^{1/2}

  /// π(A)X = AX
  static Operator represent(const Operator& a, const Operator& x) { return a * x; }
  /// ⟨Ω, π(A)Ω⟩
  Complex expectation(const Operator& a) const;
};

StandardGns standard_gns(const DensityMatrix& rho);

/// Modular data of a faithful reference ρ (Ω = ρ^{1/2}):
///   J X = X*,   Δ X = ρ X ρ^{−1},   Δ^α X = ρ^α X ρ^{−α}.
/// In the canonical representation the same J reads [A] ↦ [ρ^{1/2}A*ρ^{−1/2}].
class ModularStructure {
 public:
  explicit ModularStructure(const Operator& rho_ref, double rank_tol = 1e-12);

  const Operator& reference() const { return rho_; }
  const Eigensystem& eigensystem() const { return eig_; }
  HSVector vacuum() const { return HSVector(sqrt_rho_); }

  Operator conjugation(const Operator& x) const { return x.adjoint(); }
  Operator delta(const Operator& x) const;
  Operator delta_power(Complex alpha, const Operator& x) const;
  /// log Δ X = log ρ X − X log ρ
  Operator log_delta(const Operator& x) const;
  /// S = J Δ^{1/2}
  Operator tomita(const Operator& x) const;
  /// F = J Δ^{−1/2}, the adjoint of S.
  Operator tomita_adjoint(const Operator& x) const;

 private:
  Operator rho_;
  Operator sqrt_rho_;
  Eigensystem eig_;
};

ModularStructure modular_pair(const Operator& rho_ref, double rank_tol = 1e-12);

/// Δ_{η|ω} X = ρ_η X ρ_ω^{−1} with ρ_ω faithful and ρ_η a positive weight.
class RelativeModular {
 public:
  RelativeModular(const Operator& rho_eta, const Operator& rho_omega, double rank_tol = 1e-12);

  Operator apply(const Operator& x) const;
  /// ρ_η^α X ρ_ω^{−α} (principal powers).
  Operator power(Complex alpha, const Operator& x) const;
  /// log ρ_η X − X log ρ_ω; requires ρ_η faithful.
  Operator log(const Operator& x) const;

  /// ⟨ξ, Δ^α ξ⟩
  Complex expectation_power(Complex alpha, const HSVector& xi) const;

  /// Spectral measure of scale·log Δ in the vector ξ. The eigenvectors of Δ
  /// are |u_i⟩⟨v_j| with eigenvalue μ_i/ν_j; atom weights are |⟨u_i|ξ|v_j⟩|².
  AtomicMeasure log_spectral_measure(const HSVector& xi, double scale, double cluster_tol) const;

  const Eigensystem& eta_eigensystem() const { return eta_; }
  const Eigensystem& omega_eigensystem() const { return omega_; }

 private:
  Eigensystem eta_;
  Eigensystem omega_;
  double eta_rank_tol_;
};

RelativeModular relative_modular(const Operator& rho_eta, const Operator& rho_omega,
                                 double rank_tol = 1e-12);

/// Standard-representation cone test: X Hermitian and positive semidefinite
/// within `tol`.
bool cone_membership(const HSVector& x, double tol);

/// The Liouvilleans of a scenario as superoperators on the GNS space of ω_eq:
///   L_0 X = H_0 X − X H_0
///   L_λ X = H_λ X − X H_λ
///   L̂_λ X = (H_S⊗1 + λV + 1⊗H_R) X − X (1⊗H_R)
///   (L_0 + λπ(V)) X = H_λ X − X H_0
class Liouvilleans {
 public:
  explicit Liouvilleans(const Scenario& scn);

  Operator uncoupled(const Operator& x) const;
  Operator coupled(const Operator& x) const;
  Operator hat(const Operator& x) const;
  Operator perturbed_generator(const Operator& x) const;
  /// L_0 + λπ(V) − λJπ(V)J assembled term by term.
  Operator coupled_from_formula(const Operator& x) const;

  Operator evolve_uncoupled(double t, const Operator& x) const;
  Operator evolve_coupled(double t, const Operator& x) const;
  Operator evolve_hat(double t, const Operator& x) const;
  Operator evolve_perturbed(double t, const Operator& x) const;

 private:
  Scenario scn_;
};

/// Vector representatives used by the FCS constructions.
HSVector omega_equilibrium(const Scenario& scn);  // (ρ_β ⊗ ρ_R)^{1/2}
HSVector omega_initial(const Scenario& scn);      // ρ_S^{1/2} ⊗ ρ_R^{1/2}
HSVector omega_eta(const Scenario& scn);          // 1 ⊗ ρ_R^{1/2}, norm² = d_S
/// π(ρ_S^{1/2} ⊗ 1) Ω
HSVector omega_hat_statement(const Scenario& scn);
/// J R J Ω with R = π(ρ_S^{1/2} ⊗ 1)
HSVector omega_hat_proof(const Scenario& scn);

/// 1 ⊗ ρ_R, the weight η (total mass d_S).
Operator eta_weight(const Scenario& scn);
/// Density of η∘τ_λ^{−t}: e^{itH_λ}(1 ⊗ ρ_R)e^{−itH_λ}.
Operator eta_evolved(const Scenario& scn, double t);

/// Ω_λ = e^{−β(L_0+λπ(V))/2} Ω_eq, normalized.
HSVector araki_vector(const Scenario& scn);

struct Cocycle {
  Operator left_factor;              // W with Γ_λ(t) X = W X
  double left_multiplication_residual;  // max over matrix units of ‖Γ(E_ij) − W E_ij‖
};

/// Γ_λ(t) = e^{it(L_0+λπ(V))} e^{−itL_0} applied to every matrix unit.
Cocycle cocycle(const Scenario& scn, double t);

/// max over matrix units of ‖Δ_{η∘τ^{−t}|η} X − Γ Δ_η Γ* X‖ (max entry).
double cocycle_identity_residual(const Scenario& scn, double t);

struct KoopmanReport {
  double distance;     // time-averaged deviation from |Ω_λ⟩⟨Ω_λ| on the test set
  double threshold;
  bool mixing_like;    // distance < threshold
  int test_vectors;
  int samples;
};

/// Time average over `grid` points of the window of
///   max_{a,b} |⟨X_a, e^{itL_λ} X_b⟩ − ⟨X_a, Ω_λ⟩⟨Ω_λ, X_b⟩|
/// with X_a = π(G_a ⊗ 1)Ω_λ normalized and G_a the traceless generalized
/// Gell-Mann basis of the system. The deviation is averaged per (a, b)
/// before the maximum is taken.
KoopmanReport koopman_diagnostic(const Scenario& scn, std::pair<double, double> window, int grid,
                                 double threshold = 0.5);

/// Traceless Hermitian basis of d×d matrices (d² − 1 elements).
std::vector<Operator> gell_mann_basis(int dim);

}  // namespace qfcs
