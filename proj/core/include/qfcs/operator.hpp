#pragma once

// Dense complex linear algebra on finite-dimensional Hilbert spaces:
// Hermitian spectral decompositions, functional calculus, tensor products
// and partial traces. Every other part of the library is written on top of
// these primitives.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qfcs {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Orthonormal eigenbasis of a Hermitian operator. Eigenvalues ascend and
/// `vectors.col(k)` belongs to `values(k)`.
struct Eigensystem {
  RealVector values;
  Operator vectors;

  /// Σ f(λ_k)|v_k⟩⟨v_k|. Throws DomainError if f is not finite at some λ_k.
  Operator apply(const std::function<Complex(double)>& f) const;
  int dim() const { return static_cast<int>(values.size()); }
};

/// Spectral resolution with eigenvalues clustered into distinct values.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Operator> projectors;

  Operator reconstruct() const;
  std::size_t size() const { return eigenvalues.size(); }
};

Operator identity(int dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

/// Largest singular value.
double op_norm(const Operator& a);

/// ‖A − A*‖ in operator norm.
double hermiticity_defect(const Operator& a);

/// Throws NotHermitianError when ‖A − A*‖ > rel_tol·max(‖A‖, 1).
void require_hermitian(const Operator& a, const char* what, double rel_tol = 1e-12);

/// Throws ShapeError unless `a` is square.
void require_square(const Operator& a, const char* what);

/// Hermitian part ½(A + A*); used after validation to drop roundoff asymmetry.
Operator hermitian_part(const Operator& a);

/// Raw eigensystem of a Hermitian operator (validated).
Eigensystem eigensystem(const Operator& a);

/// Spectral decomposition with eigenvalues within `cluster_tol` of their
/// neighbours merged into a single projector.
SpectralDecomposition eig_hermitian(const Operator& a, double cluster_tol);

/// Same, with cluster_tol = 1e-9·max(‖A‖, 1).
SpectralDecomposition eig_hermitian(const Operator& a);

/// f(A) for Hermitian A.
Operator func_calc(const Operator& a, const std::function<Complex(double)>& f);

/// Unique positive square root. Eigenvalues in [−1e−12‖A‖, 0) are clamped to 0.
Operator positive_sqrt(const Operator& a);

/// |A| = √(A*A).
Operator abs_op(const Operator& a);

/// e^{i t H} through the eigensystem of H.
Operator unitary_exp(const Operator& h, double t);
Operator unitary_exp(const Eigensystem& h, double t);

/// Kronecker product, left factor outermost.
Operator tensor(const Operator& a, const Operator& b);

/// Traces out factor `which` (0-based) of a product space with the given
/// factor dimensions.
Operator partial_trace(const Operator& x, std::span<const int> factor_dims, int which);

using Superoperator = std::function<Operator(const Operator&)>;

/// A ↦ i[H, A].
Superoperator commutator_gen(const Operator& h);

struct NormSpectral {
  double op_norm;
  double spectral_radius;
};

NormSpectral norm_spectral_check(const Operator& a);

/// Hilbert–Schmidt inner product tr(X* Y).
Complex hs_inner(const Operator& x, const Operator& y);

/// max |x_ij| over entries.
double max_abs_entry(const Operator& x);

/// max over matrix units E_ij of max_abs_entry(A E_ij B). A E_ij B is the
/// outer product of column i of A and row j of B, so this is max|A|·max|B|.
double unit_basis_sandwich_residual(const Operator& a, const Operator& b);

/// max over matrix units E_ij of max_abs_entry(A E_ij − E_ij B).
double unit_basis_commutator_residual(const Operator& a, const Operator& b);

}  // namespace qfcs
