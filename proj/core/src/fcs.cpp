#include "qfcs/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qfcs/dynamics.hpp"
#include "qfcs/error.hpp"
#include "qfcs/quadrature.hpp"

namespace qfcs {

namespace {

constexpr int kMomentOrders = 4;

FcsResult finish(const Scenario& scn, AtomicMeasure measure) {
  FcsResult out;
  out.measure = measure.pruned(kAtomWeightFloor);
  out.mean = out.measure.mean();
  for (int k = 1; k <= kMomentOrders; ++k) out.moments.push_back(out.measure.moment(k));
  for (double g : default_gamma_grid(scn)) out.char_samples.push_back({g, out.measure.characteristic(g)});
  return out;
}

SpectralDecomposition clustered(const Operator& h, const Scenario& scn) {
  return eig_hermitian(h, scn.tolerances().cluster_tol);
}

}  // namespace

std::vector<double> default_gamma_grid(const Scenario& scn, int points) {
  if (points < 1) throw Error("default_gamma_grid: need at least one point");
  const auto sd = clustered(scn.h_system(), scn);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < sd.size(); ++k) gap = std::min(gap, sd.eigenvalues[k] - sd.eigenvalues[k - 1]);
  if (!std::isfinite(gap)) gap = 1.0;
  const double half = std::numbers::pi / gap;
  std::vector<double> grid;
  if (points == 1) return {0.0};
  for (int k = 0; k < points; ++k) grid.push_back(-half + 2.0 * half * k / (points - 1));
  return grid;
}

FcsResult system_fcs(const Scenario& scn, double t) {
  const auto sd = clustered(scn.h_system(), scn);
  const int dr = scn.dim_reservoir();
  const Operator& rho_s = scn.rho_system().op();
  const Operator& rho_r = scn.rho_reservoir().op();
  const Operator u = scn.coupled_unitary(t);
  std::vector<Operator> finals;
  for (const auto& p : sd.projectors) finals.push_back(u * tensor(p, identity(dr)) * u.adjoint());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < sd.size(); ++i) {
    const Operator& p = sd.projectors[i];
    const Operator prepared = tensor(p * rho_s * p, rho_r);
    for (std::size_t j = 0; j < sd.size(); ++j) {
      const double w = (prepared.transpose().cwiseProduct(finals[j])).sum().real();
      atoms.push_back(Atom{sd.eigenvalues[j] - sd.eigenvalues[i], w});
    }
  }
  return finish(scn, AtomicMeasure(std::move(atoms), scn.tolerances().cluster_tol));
}

FcsResult reservoir_fcs(const Scenario& scn, double t) {
  const RelativeModular rel(eta_evolved(scn, t), eta_weight(scn));
  const AtomicMeasure m =
      rel.log_spectral_measure(omega_initial(scn), 1.0 / scn.beta(), scn.tolerances().cluster_tol);
  return finish(scn, m);
}

FcsResult reservoir_protocol_fcs(const Scenario& scn, double t) {
  const auto sd = clustered(scn.h_reservoir(), scn);
  const int ds = scn.dim_system();
  const Operator& rho_s = scn.rho_system().op();
  const Operator& rho_r = scn.rho_reservoir().op();
  const Operator u = scn.coupled_unitary(t);
  std::vector<Operator> finals;
  for (const auto& p : sd.projectors) finals.push_back(u * tensor(identity(ds), p) * u.adjoint());
  std::vector<Atom> atoms;
  for (std::size_t e = 0; e < sd.size(); ++e) {
    const Operator& p = sd.projectors[e];
    const Operator prepared = tensor(rho_s, p * rho_r * p);
    for (std::size_t f = 0; f < sd.size(); ++f) {
      const double w = (prepared.transpose().cwiseProduct(finals[f])).sum().real();
      atoms.push_back(Atom{sd.eigenvalues[e] - sd.eigenvalues[f], w});
    }
  }
  return finish(scn, AtomicMeasure(std::move(atoms), scn.tolerances().cluster_tol));
}

Complex system_char_limit(const Scenario& scn, double gamma) {
  const Eigensystem& es = scn.system_eigensystem();
  const Operator forward = unitary_exp(es, gamma);
  return scn.rho_system_gibbs().expectation(forward) * scn.rho_system().expectation(forward.adjoint());
}

StripFunction::StripFunction(const Scenario& scn, double t)
    : t_(t),
      beta_(scn.beta()),
      support_radius_(0.0),
      rel_(eta_evolved(scn, t), eta_weight(scn)),
      omega_(omega_initial(scn)) {
  const RealVector& nu = scn.rho_reservoir().op().rows() > 0 ? eigensystem(scn.rho_reservoir().op()).values
                                                              : RealVector{};
  support_radius_ = (std::log(nu.maxCoeff()) - std::log(std::max(nu.minCoeff(), 1e-300))) / beta_;
}

Complex StripFunction::operator()(Complex alpha) const {
  if (alpha.real() < 0.0 || alpha.real() > 1.0) {
    std::ostringstream msg;
    msg << "strip function evaluated outside 0 <= Re(alpha) <= 1 (Re(alpha) = " << alpha.real() << ")";
    throw DomainError(msg.str(), alpha.real());
  }
  return extended(alpha);
}

Complex StripFunction::extended(Complex alpha) const { return rel_.expectation_power(alpha, omega_); }

Complex reservoir_char(const Scenario& scn, double t, Complex alpha) { return StripFunction(scn, t)(alpha); }

std::vector<double> derivative_moments(const StripFunction& f, int max_order, int nodes) {
  if (max_order < 1 || nodes <= 2 * max_order) throw Error("derivative_moments: invalid order/nodes");
  const double beta = f.beta();
  const double radius = 1.0 / (1.0 + beta * f.support_radius());
  std::vector<Complex> samples(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / nodes;
    samples[k] = f.extended(radius * std::exp(kI * theta));
  }
  std::vector<double> moments;
  double factorial = 1.0;
  for (int n = 1; n <= max_order; ++n) {
    factorial *= n;
    Complex coeff = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / nodes;
      coeff += samples[k] * std::exp(-kI * (n * theta));
    }
    coeff /= static_cast<double>(nodes) * std::pow(radius, n);
    moments.push_back(factorial * coeff.real() / std::pow(beta, n));
  }
  return moments;
}

double mean_identity_check(const Scenario& scn, double t, double quad_tol) {
  const FcsResult fcs = reservoir_fcs(scn, t);
  const FluxHeatChange dq = delta_q_flux(scn, t, quad_tol);
  return std::abs(fcs.mean - dq.value.reservoir);
}

double balance_operator_check(const Scenario& scn, double t, double quad_tol) {
  if (!(quad_tol > 0.0)) throw Error("balance_operator_check: quad_tol must be positive");
  const RelativeModular evolved(eta_evolved(scn, t), eta_weight(scn));
  auto log_of = [](const Eigensystem& es) { return es.apply([](double mu) { return Complex(std::log(mu), 0.0); }); };
  const Operator log_evolved = log_of(evolved.eta_eigensystem());
  const Operator log_eta = log_of(evolved.omega_eigensystem());
  const Operator phi_r = flux_observables(scn).phi_reservoir;
  const auto flux_integral = integrate_adaptive(
      [&](double s) -> Operator { return scn.evolve(phi_r, s); }, 0.0, t, quad_tol,
      [](const Operator& m) { return max_abs_entry(m); });
  const Operator q = scn.beta() * flux_integral.value;
  // log Δ_{η∘τ^{−t}|η} X − (log Δ_η X + Q X) = (log ρ_{η,t} − log ρ_η − Q) X − X (log ρ_η − log ρ_η).
  return unit_basis_commutator_residual(log_evolved - log_eta - q, Operator::Zero(scn.dim(), scn.dim()));
}

HalfLineResult lemma_half_line_check(const Scenario& scn, double t, double s) {
  const StripFunction f(scn, t);
  const Complex lhs = f(Complex(0.5, s));
  const Liouvilleans liou(scn);
  const double bs = scn.beta() * s;
  const Operator right = liou.evolve_coupled(t, liou.evolve_hat(bs, omega_eta(scn).mat()));
  auto residual = [&](const HSVector& omega_hat) {
    const Operator left = liou.evolve_hat(bs, omega_hat.mat());
    return std::abs(lhs - hs_inner(left, right));
  };
  return HalfLineResult{residual(omega_hat_statement(scn)), residual(omega_hat_proof(scn))};
}

StripBoundsReport strip_bounds_check(const Scenario& scn, double t, std::span<const Complex> grid) {
  const StripFunction f(scn, t);
  const double ds = scn.dim_system();
  StripBoundsReport r{};
  r.max_violation = -std::numeric_limits<double>::infinity();
  for (const Complex& alpha : grid) {
    const double bound = 1.0 + (ds - 1.0) * alpha.real();
    r.max_violation = std::max(r.max_violation, std::abs(f(alpha)) - bound);
  }
  r.min_slack = -r.max_violation;
  r.f_at_one = f(1.0);
  r.f_at_one_violation =
      std::max({std::abs(r.f_at_one.imag()), -r.f_at_one.real(), r.f_at_one.real() - ds});
  r.points = static_cast<int>(grid.size());
  r.pass = r.max_violation <= 1e-10 && r.f_at_one_violation <= 1e-10;
  return r;
}

std::vector<Complex> default_strip_grid() {
  std::vector<Complex> grid;
  for (double re : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double im : {-2.0, -1.0, 0.0, 1.0, 2.0}) grid.emplace_back(re, im);
  return grid;
}

}  // namespace qfcs
