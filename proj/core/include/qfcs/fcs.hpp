#pragma once

// Energy full counting statistics of a confined system/reservoir pair.
//
// System FCS: two-time measurement of H_S, atoms at λ_j − λ_i.
// Reservoir FCS: spectral measure of (1/β) log Δ_{η∘τ_λ^{−t}|η} in the
// initial vector Ω, with η = 1 ⊗ ω_R. Its atoms sit at e − e′ (initial minus
// final reservoir energy), so the mean is the reservoir energy loss ΔQ_R.

#include <span>
#include <vector>

#include "qfcs/modular.hpp"
#include "qfcs/scenario.hpp"
#include "qfcs/states.hpp"

namespace qfcs {

/// Atoms lighter than this are dropped from FCS measures.
inline constexpr double kAtomWeightFloor = 1e-14;

struct CharSample {
  double gamma;
  Complex value;
};

struct FcsResult {
  AtomicMeasure measure;
  double mean = 0.0;
  std::vector<double> moments;          // orders 1..4
  std::vector<CharSample> char_samples; // ∫ e^{iγx} dP on the default γ grid
};

/// 41 points on [−π/δE, π/δE], δE the smallest gap of H_S (1 if none).
std::vector<double> default_gamma_grid(const Scenario& scn, int points = 41);

FcsResult system_fcs(const Scenario& scn, double t);

/// Reservoir FCS from the spectral decomposition of the relative modular
/// operator.
FcsResult reservoir_fcs(const Scenario& scn, double t);

/// Reservoir FCS from the two-time measurement of H_R:
///   Σ_{e,e′} δ_{e−e′} (ω_S ⊗ tr(P_e ρ_R P_e ·))(τ_λ^t(1 ⊗ P_{e′})).
FcsResult reservoir_protocol_fcs(const Scenario& scn, double t);

/// ω_β(e^{iγH_S}) · ω_S(e^{−iγH_S})
Complex system_char_limit(const Scenario& scn, double gamma);

/// α ↦ F_{λ,t}(α) = ⟨Ω, Δ^α_{η∘τ_λ^{−t}|η} Ω⟩ on the strip 0 ≤ Re α ≤ 1.
class StripFunction {
 public:
  StripFunction(const Scenario& scn, double t);

  /// Throws DomainError when Re α ∉ [0, 1].
  Complex operator()(Complex alpha) const;

  /// Same expression without the strip check. At finite dimension F extends
  /// to an entire function; used for contour-integral derivatives at 0.
  Complex extended(Complex alpha) const;

  double time() const { return t_; }
  double beta() const { return beta_; }
  /// max|x| over possible atoms: the log-spread of ρ_R divided by β.
  double support_radius() const { return support_radius_; }

 private:
  double t_;
  double beta_;
  double support_radius_;
  RelativeModular rel_;
  HSVector omega_;
};

Complex reservoir_char(const Scenario& scn, double t, Complex alpha);

/// Moments ∫ x^n dP_{R,λ,t}, n = 1..max_order, from d^n F/dα^n at 0 = β^n m_n,
/// evaluated by a trapezoidal Cauchy integral on a circle around 0.
std::vector<double> derivative_moments(const StripFunction& f, int max_order, int nodes = 64);

/// |⟨x⟩_{P_R} − ΔQ_R| with ΔQ_R from the flux integral.
double mean_identity_check(const Scenario& scn, double t, double quad_tol);

/// max over matrix units X of
///   |log Δ_{η∘τ^{−t}|η} X − (log Δ_η X + β ∫₀ᵗ τ_λ^s(φ_R) ds · X)|.
double balance_operator_check(const Scenario& scn, double t, double quad_tol);

/// Residuals of F(is + ½) = ⟨e^{iβsL̂}Ω̂, e^{itL_λ}e^{iβsL̂}Ω_η⟩ for both
/// definitions of Ω̂.
struct HalfLineResult {
  double residual_statement;  // Ω̂ = π(ρ_S^{1/2} ⊗ 1)Ω
  double residual_proof;      // Ω̂ = JRJΩ
};

HalfLineResult lemma_half_line_check(const Scenario& scn, double t, double s);

struct StripBoundsReport {
  double max_violation;  // max over grid of |F(α)| − (1 + (d_S − 1)Re α); ≤ 0 when the bound holds
  double min_slack;      // −max_violation
  Complex f_at_one;
  double f_at_one_violation;  // max(|Im F(1)|, −Re F(1), Re F(1) − d_S)
  int points;
  bool pass;  // both bounds hold within 1e−10
};

StripBoundsReport strip_bounds_check(const Scenario& scn, double t, std::span<const Complex> grid);

/// 5×5 grid: Re α ∈ {0, ¼, ½, ¾, 1}, Im α ∈ {−2, −1, 0, 1, 2}.
std::vector<Complex> default_strip_grid();

}  // namespace qfcs
