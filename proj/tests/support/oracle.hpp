#pragma once

// Brute-force reference computations for the tests. Nothing here calls the
// library's spectral code: matrix functions come from Eigen's unsupported
// MatrixFunctions module (Padé / Schur–Parlett) and superoperators are built
// as explicit d²×d² matrices acting on column-stacked vectors.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Cx = std::complex<double>;

struct Atom {
  double x;
  double w;
};

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat eye(Eigen::Index d) { return Mat::Identity(d, d); }

inline Mat expm(const Mat& a) { return a.exp(); }

/// e^{itH}
inline Mat propagator(const Mat& h, double t) { return expm(Cx(0.0, t) * h); }

inline Mat gibbs(const Mat& h, double beta) {
  const Mat e = expm(-beta * h);
  return e / e.trace();
}

/// A^α = exp(α log A) for positive definite A.
inline Mat power(const Mat& a, Cx alpha) { return expm(alpha * Mat(a.log())); }

/// vec(X) stacks columns; vec(A X B) = (Bᵀ ⊗ A) vec(X).
inline Eigen::VectorXcd vec(const Mat& x) { return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size()); }

inline Mat sandwich(const Mat& a, const Mat& b) { return kron(b.transpose(), a); }

/// Sorts by location and merges atoms closer than `tol`; drops weights ≤ floor.
inline std::vector<Atom> merge(std::vector<Atom> atoms, double tol, double floor = 1e-14) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && a.x - out.back().x <= tol) {
      out.back().w += a.w;
    } else {
      out.push_back(a);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [&](const Atom& a) { return a.w <= floor; }), out.end());
  return out;
}

/// Two-time measurement of H_R: for eigenvectors e_a, e_b of H_R,
///   weight p_a tr((ρ_S ⊗ |a⟩⟨a|) e^{itH}(1 ⊗ |b⟩⟨b|)e^{−itH}) at E_a − E_b.
inline std::vector<Atom> reservoir_protocol(const Mat& hs, const Mat& hr, const Mat& v, double lambda, double beta,
                                            const Mat& rho_s, double t, double tol = 1e-9) {
  const Eigen::Index ds = hs.rows(), dr = hr.rows();
  Eigen::SelfAdjointEigenSolver<Mat> es(hr);
  const Mat h = kron(hs, eye(dr)) + kron(eye(ds), hr) + lambda * v;
  const Mat u = propagator(h, t);
  Eigen::VectorXd p = (-beta * (es.eigenvalues().array() - es.eigenvalues().minCoeff())).exp();
  p /= p.sum();
  std::vector<Atom> atoms;
  for (Eigen::Index a = 0; a < dr; ++a) {
    const Mat pa = es.eigenvectors().col(a) * es.eigenvectors().col(a).adjoint();
    const Mat prepared = kron(rho_s, p(a) * pa);
    for (Eigen::Index b = 0; b < dr; ++b) {
      const Mat pb = es.eigenvectors().col(b) * es.eigenvectors().col(b).adjoint();
      const Mat final_proj = u * kron(eye(ds), pb) * u.adjoint();
      atoms.push_back({es.eigenvalues()(a) - es.eigenvalues()(b), (prepared * final_proj).trace().real()});
    }
  }
  return merge(atoms, tol);
}

/// Spectral measure of (1/β) log Δ in vec(Ω) with Δ = ρ_left ⊗ ρ_right^{-1}
/// assembled as a d²×d² Hermitian matrix and diagonalized directly.
inline std::vector<Atom> relative_modular_measure(const Mat& rho_left, const Mat& rho_right, const Mat& omega,
                                                  double beta, double tol = 1e-9) {
  const Mat delta = sandwich(rho_left, rho_right.inverse());
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (delta + delta.adjoint())));
  const Eigen::VectorXcd w = es.eigenvectors().adjoint() * vec(omega);
  std::vector<Atom> atoms;
  for (Eigen::Index k = 0; k < w.size(); ++k) atoms.push_back({std::log(es.eigenvalues()(k)) / beta, std::norm(w(k))});
  return merge(atoms, tol);
}

/// F(α) = tr(Ω* ρ_evolved^α Ω ρ_η^{−α}) with ρ_evolved = e^{itH}(1⊗ρ_R)e^{−itH}.
inline Cx strip_function(const Mat& hs, const Mat& hr, const Mat& v, double lambda, double beta, const Mat& rho_s,
                         double t, Cx alpha) {
  const Eigen::Index ds = hs.rows(), dr = hr.rows();
  const Mat rho_r = gibbs(hr, beta);
  const Mat eta = kron(eye(ds), rho_r);
  const Mat u = propagator(kron(hs, eye(dr)) + kron(eye(ds), hr) + lambda * v, t);
  const Mat evolved = u * eta * u.adjoint();
  const Mat omega = kron(Mat(rho_s.sqrt()), Mat(rho_r.sqrt()));
  return (omega.adjoint() * power(evolved, alpha) * omega * power(eta, -alpha)).trace();
}

/// Composite Gauss–Legendre (5 nodes per panel) for matrix-valued integrands.
template <class F>
Mat integrate(F&& f, double a, double b, int panels) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                              0.2369268850561891};
  Mat sum;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) {
      const Mat v = f(mid + 0.5 * h * x[k]) * (0.5 * h * w[k]);
      if (sum.size() == 0) {
        sum = v;
      } else {
        sum += v;
      }
    }
  }
  return sum;
}

inline double max_entry(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Worst location/weight mismatch after pairing atoms in sorted order.
/// Unequal atom counts report the largest unmatched weight.
inline double measure_distance(const std::vector<Atom>& a, const std::vector<Atom>& b, double loc_tol = 1e-8) {
  double worst = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && std::abs(a[i].x - b[j].x) <= loc_tol) {
      worst = std::max({worst, std::abs(a[i].x - b[j].x), std::abs(a[i].w - b[j].w)});
      ++i;
      ++j;
    } else if (j >= b.size() || (i < a.size() && a[i].x < b[j].x)) {
      worst = std::max(worst, a[i++].w);
    } else {
      worst = std::max(worst, b[j++].w);
    }
  }
  return worst;
}

}  // namespace oracle
