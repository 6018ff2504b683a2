#include "qfcs/dynamics.hpp"

#include <cmath>
#include <vector>

#include "qfcs/error.hpp"
#include "qfcs/quadrature.hpp"

namespace qfcs {

Operator heisenberg(const Operator& a, const Operator& h, double t) {
  require_square(a, "heisenberg");
  if (a.rows() != h.rows()) throw ShapeError("heisenberg: dimension mismatch");
  const Operator u = unitary_exp(h, t);
  return u * a * u.adjoint();
}

FluxObservables flux_observables(const Scenario& scn) {
  const Operator& v = scn.coupling();
  const double lam = scn.lambda();
  const Operator& hs = scn.h_system_full();
  const Operator& hr = scn.h_reservoir_full();
  return FluxObservables{hermitian_part(lam * kI * (hs * v - v * hs)),
                         hermitian_part(lam * kI * (hr * v - v * hr))};
}

HeatChange delta_q_direct(const Scenario& scn, double t) {
  const DensityMatrix& omega = scn.initial_state();
  const Operator& hs = scn.h_system_full();
  const Operator& hr = scn.h_reservoir_full();
  return HeatChange{omega.expect(scn.evolve(hs, t)) - omega.expect(hs),
                    omega.expect(hr) - omega.expect(scn.evolve(hr, t))};
}

FluxHeatChange delta_q_flux(const Scenario& scn, double t, double quad_tol) {
  if (!(quad_tol > 0.0)) throw Error("delta_q_flux: quad_tol must be positive");
  const FluxObservables flux = flux_observables(scn);
  // In the eigenbasis of H_λ: ω(τ^s(φ)) = Σ_ij ρ̃_ji φ̃_ij e^{is(E_i − E_j)}.
  const Eigensystem& es = scn.coupled_eigensystem();
  const Operator rho = es.vectors.adjoint() * scn.initial_state().op() * es.vectors;
  const Operator phi_s = es.vectors.adjoint() * flux.phi_system * es.vectors;
  const Operator phi_r = es.vectors.adjoint() * flux.phi_reservoir * es.vectors;
  const Operator ws = rho.transpose().cwiseProduct(phi_s);
  const Operator wr = rho.transpose().cwiseProduct(phi_r);
  const Eigen::Index d = es.values.size();
  auto integrand = [&](double s) {
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const Complex phase = std::exp(kI * (s * (es.values(i) - es.values(j))));
        out(0) += (ws(i, j) * phase).real();
        out(1) += (wr(i, j) * phase).real();
      }
    return out;
  };
  const auto result = integrate_adaptive(integrand, 0.0, t, quad_tol,
                                         [](const Eigen::Vector2d& v) { return v.cwiseAbs().maxCoeff(); });
  return FluxHeatChange{HeatChange{-result.value(0), result.value(1)}, result.error_estimate};
}

double balance_check(const Scenario& scn, double t) {
  const HeatChange dq = delta_q_direct(scn, t);
  const DensityMatrix& omega = scn.initial_state();
  const Operator& v = scn.coupling();
  const double rhs = scn.lambda() * (omega.expect(scn.evolve(v, t)) - omega.expect(v));
  return std::abs((dq.reservoir - dq.system) - rhs);
}

double energy_drift(const Scenario& scn, double t) {
  const DensityMatrix& omega = scn.initial_state();
  const Operator& h = scn.h_coupled();
  return std::abs(omega.expect(scn.evolve(h, t)) - omega.expect(h));
}

Operator exact_cocycle(const Scenario& scn, double t) {
  return scn.coupled_unitary(t) * scn.free_unitary(-t);
}

namespace {

using Terms = std::vector<Operator>;

// Right-hand side of dT_n/ds = iλ T_{n−1}(s) V(s) for n = 1..order, T_0 = 1.
Terms dyson_rhs(const Terms& terms, const Operator& v_s, double lambda) {
  Terms out(terms.size());
  const Complex c = kI * lambda;
  out[0] = c * v_s;
  for (std::size_t n = 1; n < terms.size(); ++n) out[n].noalias() = c * (terms[n - 1] * v_s);
  return out;
}

Terms axpy(const Terms& x, double h, const Terms& k) {
  Terms out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[n] = x[n] + h * k[n];
  return out;
}

// Integrates in the eigenbasis of H_0, where τ_0^s(V) is V with entries
// multiplied by e^{is(E_i − E_j)}.
Terms integrate_dyson(const Scenario& scn, double t, int order, int steps) {
  const int d = scn.dim();
  const Eigensystem& es = scn.free_eigensystem();
  const Operator v = es.vectors.adjoint() * scn.coupling() * es.vectors;
  auto v_at = [&](double s) {
    Operator out(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out(i, j) = v(i, j) * std::exp(kI * (s * (es.values(i) - es.values(j))));
    return out;
  };
  const double lam = scn.lambda();
  Terms terms(order, Operator::Zero(d, d));
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const double s = k * h;
    const Operator vm = v_at(s + 0.5 * h);
    const Terms k1 = dyson_rhs(terms, v_at(s), lam);
    const Terms k2 = dyson_rhs(axpy(terms, 0.5 * h, k1), vm, lam);
    const Terms k3 = dyson_rhs(axpy(terms, 0.5 * h, k2), vm, lam);
    const Terms k4 = dyson_rhs(axpy(terms, h, k3), v_at(s + h), lam);
    for (int n = 0; n < order; ++n) terms[n] += (h / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
  }
  for (auto& term : terms) term = es.vectors * term * es.vectors.adjoint();
  return terms;
}

}  // namespace

DysonSeries dyson_series(const Scenario& scn, double t, int max_order, double tol) {
  if (max_order < 0) throw Error("dyson_series: order must be non-negative");
  const int d = scn.dim();
  if (max_order == 0 || t == 0.0 || scn.lambda() == 0.0)
    return DysonSeries{Terms(max_order, Operator::Zero(d, d)), 0.0, 0, true};

  const double spread = scn.free_eigensystem().values.maxCoeff() - scn.free_eigensystem().values.minCoeff();
  const double rate = spread + std::abs(scn.lambda()) * op_norm(scn.coupling());
  int steps = std::max(8, static_cast<int>(std::ceil(4.0 * std::abs(t) * rate)));
  constexpr int kMaxSteps = 1 << 16;

  Terms coarse = integrate_dyson(scn, t, max_order, steps);
  while (true) {
    Terms fine = integrate_dyson(scn, t, max_order, 2 * steps);
    // RK4 is fourth order: the fine result's error is ≈ |fine − coarse| / 15.
    double err = 0.0;
    for (int n = 0; n < max_order; ++n) err = std::max(err, op_norm(fine[n] - coarse[n]) / 15.0);
    steps *= 2;
    if (err <= tol || 2 * steps > kMaxSteps) return DysonSeries{std::move(fine), err, steps, err <= tol};
    coarse = std::move(fine);
  }
}

Operator DysonSeries::partial_sum(int order) const {
  if (order < 0 || order > static_cast<int>(terms.size())) throw Error("DysonSeries: order out of range");
  const int d = terms.empty() ? 0 : static_cast<int>(terms[0].rows());
  Operator gamma = identity(d);
  for (int n = 0; n < order; ++n) gamma += terms[n];
  return gamma;
}

DysonResult dyson_gamma(const Scenario& scn, double t, int order, double tol) {
  if (order == 0 || t == 0.0 || scn.lambda() == 0.0) {
    if (order < 0) throw Error("dyson_gamma: order must be non-negative");
    return DysonResult{identity(scn.dim()), 0.0, 0, true};
  }
  const DysonSeries series = dyson_series(scn, t, order, tol);
  return DysonResult{series.partial_sum(order), series.integration_error, series.steps, series.converged};
}

double dyson_error_bound(const Scenario& scn, double t, int order) {
  const double x = std::abs(scn.lambda()) * op_norm(scn.coupling()) * std::abs(t);
  return std::pow(x, order + 1) * std::exp(x) / std::tgamma(order + 2.0);
}

}  // namespace qfcs
