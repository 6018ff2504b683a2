#include "qfcs/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qfcs/error.hpp"

namespace qfcs {

Operator Eigensystem::apply(const std::function<Complex(double)>& f) const {
  const Eigen::Index n = values.size();
  Eigen::VectorXcd fv(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex v = f(values(k));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "function undefined at eigenvalue " << values(k);
      throw DomainError(msg.str(), values(k));
    }
    fv(k) = v;
  }
  return vectors * fv.asDiagonal() * vectors.adjoint();
}

Operator SpectralDecomposition::reconstruct() const {
  if (projectors.empty()) return Operator{};
  Operator out = Operator::Zero(projectors.front().rows(), projectors.front().cols());
  for (std::size_t k = 0; k < projectors.size(); ++k) out += eigenvalues[k] * projectors[k];
  return out;
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator pauli_x() {
  Operator s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

Operator pauli_y() {
  Operator s(2, 2);
  s << 0.0, -kI, kI, 0.0;
  return s;
}

Operator pauli_z() {
  Operator s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

double op_norm(const Operator& a) {
  if (a.size() == 0) return 0.0;
  // Largest eigenvalue of A*A; eigenvalues only, far cheaper than an SVD.
  const Operator gram = a.rows() <= a.cols() ? Operator(a * a.adjoint()) : Operator(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Operator> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
}

double hermiticity_defect(const Operator& a) {
  return op_norm(a - a.adjoint());
}

void require_square(const Operator& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw ShapeError(msg.str());
  }
}

void require_hermitian(const Operator& a, const char* what, double rel_tol) {
  require_square(a, what);
  const double defect = hermiticity_defect(a);
  const double scale = std::max(op_norm(a), 1.0);
  if (defect > rel_tol * scale) {
    std::ostringstream msg;
    msg << what << ": not Hermitian, ||A - A*|| = " << defect;
    throw NotHermitianError(msg.str(), defect);
  }
}

Operator hermitian_part(const Operator& a) { return 0.5 * (a + a.adjoint()); }

Eigensystem eigensystem(const Operator& a) {
  require_hermitian(a, "eigensystem");
  Eigen::SelfAdjointEigenSolver<Operator> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) throw Error("eigensystem: eigensolver did not converge");
  return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition eig_hermitian(const Operator& a, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw Error("eig_hermitian: cluster_tol must be positive");
  const Eigensystem es = eigensystem(a);
  SpectralDecomposition out;
  const int n = es.dim();
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && es.values(end) - es.values(end - 1) <= cluster_tol) ++end;
    const auto block = es.vectors.middleCols(start, end - start);
    out.eigenvalues.push_back(es.values.segment(start, end - start).mean());
    out.projectors.push_back(block * block.adjoint());
    start = end;
  }
  return out;
}

SpectralDecomposition eig_hermitian(const Operator& a) {
  require_square(a, "eig_hermitian");
  return eig_hermitian(a, 1e-9 * std::max(op_norm(a), 1.0));
}

Operator func_calc(const Operator& a, const std::function<Complex(double)>& f) {
  return eigensystem(a).apply(f);
}

Operator positive_sqrt(const Operator& a) {
  const Eigensystem es = eigensystem(a);
  const double floor = -1e-12 * std::max(op_norm(a), 1.0);
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values(k) < floor) {
      std::ostringstream msg;
      msg << "positive_sqrt: operator is not positive, eigenvalue " << es.values(k);
      throw NotPositiveError(msg.str(), es.values(k));
    }
  }
  return es.apply([](double x) { return Complex(std::sqrt(std::max(x, 0.0)), 0.0); });
}

Operator abs_op(const Operator& a) {
  require_square(a, "abs_op");
  return positive_sqrt(a.adjoint() * a);
}

Operator unitary_exp(const Eigensystem& h, double t) {
  return h.apply([t](double x) { return std::exp(kI * (t * x)); });
}

Operator unitary_exp(const Operator& h, double t) { return unitary_exp(eigensystem(h), t); }

Operator tensor(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator partial_trace(const Operator& x, std::span<const int> factor_dims, int which) {
  require_square(x, "partial_trace");
  if (factor_dims.empty() || which < 0 || which >= static_cast<int>(factor_dims.size()))
    throw ShapeError("partial_trace: factor index out of range");
  const long total = std::accumulate(factor_dims.begin(), factor_dims.end(), 1L, std::multiplies<>());
  if (total != x.rows()) {
    std::ostringstream msg;
    msg << "partial_trace: factor dimensions multiply to " << total << " but operator has dimension "
        << x.rows();
    throw ShapeError(msg.str());
  }
  // View the index as (outer, traced, inner) with row-major factor order.
  long outer = 1;
  for (int k = 0; k < which; ++k) outer *= factor_dims[k];
  const long mid = factor_dims[which];
  const long inner = total / (outer * mid);
  const long reduced = outer * inner;
  Operator out = Operator::Zero(reduced, reduced);
  for (long o1 = 0; o1 < outer; ++o1)
    for (long i1 = 0; i1 < inner; ++i1)
      for (long o2 = 0; o2 < outer; ++o2)
        for (long i2 = 0; i2 < inner; ++i2) {
          Complex acc = 0.0;
          for (long m = 0; m < mid; ++m)
            acc += x((o1 * mid + m) * inner + i1, (o2 * mid + m) * inner + i2);
          out(o1 * inner + i1, o2 * inner + i2) = acc;
        }
  return out;
}

Superoperator commutator_gen(const Operator& h) {
  require_hermitian(h, "commutator_gen");
  return [h](const Operator& a) -> Operator {
    if (a.rows() != h.rows() || a.cols() != h.cols())
      throw ShapeError("commutator_gen: dimension mismatch");
    return kI * (h * a - a * h);
  };
}

NormSpectral norm_spectral_check(const Operator& a) {
  require_square(a, "norm_spectral_check");
  Eigen::ComplexEigenSolver<Operator> solver(a, false);
  const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  return NormSpectral{op_norm(a), radius};
}

Complex hs_inner(const Operator& x, const Operator& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ShapeError("hs_inner: dimension mismatch");
  return (x.conjugate().cwiseProduct(y)).sum();
}

double max_abs_entry(const Operator& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

double unit_basis_sandwich_residual(const Operator& a, const Operator& b) {
  return max_abs_entry(a) * max_abs_entry(b);
}

double unit_basis_commutator_residual(const Operator& a, const Operator& b) {
  require_square(a, "unit_basis_commutator_residual");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("unit_basis_commutator_residual: shape mismatch");
  // A E_ij − E_ij B has column j equal to A(:, i), row i equal to −B(j, :),
  // and A_ii − B_jj where they cross.
  const Eigen::Index d = a.rows();
  double off = 0.0, cross = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) {
      if (i != k) off = std::max({off, std::abs(a(k, i)), std::abs(b(i, k))});
      cross = std::max(cross, std::abs(a(i, i) - b(k, k)));
    }
  return std::max(off, cross);
}

}  // namespace qfcs
