#include "qfcs/modular.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfcs/error.hpp"

namespace qfcs {

namespace {

Operator apply_power(const Eigensystem& es, Complex alpha, double zero_tol) {
  return es.apply([=](double mu) -> Complex {
    if (mu <= zero_tol) {
      if (alpha == Complex(0.0, 0.0)) return 1.0;
      if (alpha.real() > 0.0) return 0.0;
      std::ostringstream msg;
      msg << "power with Re(alpha) <= 0 of a zero eigenvalue " << mu;
      throw DomainError(msg.str(), mu);
    }
    return std::exp(alpha * std::log(mu));
  });
}

Operator apply_log(const Eigensystem& es, double zero_tol) {
  return es.apply([=](double mu) -> Complex {
    if (mu <= zero_tol) {
      std::ostringstream msg;
      msg << "logarithm of a zero eigenvalue " << mu;
      throw DomainError(msg.str(), mu);
    }
    return std::log(mu);
  });
}

Eigensystem faithful_eigensystem(const Operator& rho, double rank_tol, const char* what) {
  Eigensystem es = eigensystem(rho);
  if (!(es.values(0) > rank_tol)) {
    std::ostringstream msg;
    msg << what << ": reference is not faithful, minimum eigenvalue " << es.values(0);
    throw RankDeficientError(msg.str(), es.values(0));
  }
  return es;
}

}  // namespace

Complex StandardGns::expectation(const Operator& a) const {
  return hs_inner(omega.mat(), a * omega.mat());
}

StandardGns standard_gns(const DensityMatrix& rho) { return StandardGns{HSVector(positive_sqrt(rho.op()))}; }

ModularStructure::ModularStructure(const Operator& rho_ref, double rank_tol)
    : rho_(hermitian_part(rho_ref)), eig_(faithful_eigensystem(rho_ref, rank_tol, "modular_pair")) {
  sqrt_rho_ = eig_.apply([](double mu) { return Complex(std::sqrt(mu), 0.0); });
}

Operator ModularStructure::delta(const Operator& x) const { return delta_power(1.0, x); }

Operator ModularStructure::delta_power(Complex alpha, const Operator& x) const {
  return apply_power(eig_, alpha, 0.0) * x * apply_power(eig_, -alpha, 0.0);
}

Operator ModularStructure::log_delta(const Operator& x) const {
  const Operator log_rho = apply_log(eig_, 0.0);
  return log_rho * x - x * log_rho;
}

Operator ModularStructure::tomita(const Operator& x) const {
  return conjugation(delta_power(0.5, x));
}

Operator ModularStructure::tomita_adjoint(const Operator& x) const {
  return conjugation(delta_power(-0.5, x));
}

ModularStructure modular_pair(const Operator& rho_ref, double rank_tol) {
  return ModularStructure(rho_ref, rank_tol);
}

RelativeModular::RelativeModular(const Operator& rho_eta, const Operator& rho_omega, double rank_tol)
    : eta_(eigensystem(rho_eta)),
      omega_(faithful_eigensystem(rho_omega, rank_tol, "relative_modular")),
      eta_rank_tol_(rank_tol) {
  const double floor = -1e-12 * std::max(1.0, eta_.values.cwiseAbs().maxCoeff());
  if (eta_.values(0) < floor) {
    std::ostringstream msg;
    msg << "relative_modular: eta weight is not positive, eigenvalue " << eta_.values(0);
    throw NotPositiveError(msg.str(), eta_.values(0));
  }
}

Operator RelativeModular::apply(const Operator& x) const { return power(1.0, x); }

Operator RelativeModular::power(Complex alpha, const Operator& x) const {
  return apply_power(eta_, alpha, eta_rank_tol_) * x * apply_power(omega_, -alpha, 0.0);
}

Operator RelativeModular::log(const Operator& x) const {
  return apply_log(eta_, eta_rank_tol_) * x - x * apply_log(omega_, 0.0);
}

Complex RelativeModular::expectation_power(Complex alpha, const HSVector& xi) const {
  return hs_inner(xi.mat(), power(alpha, xi.mat()));
}

AtomicMeasure RelativeModular::log_spectral_measure(const HSVector& xi, double scale,
                                                    double cluster_tol) const {
  const Operator overlap = eta_.vectors.adjoint() * xi.mat() * omega_.vectors;
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(overlap.size()));
  for (Eigen::Index i = 0; i < overlap.rows(); ++i) {
    const double mu = eta_.values(i);
    for (Eigen::Index j = 0; j < overlap.cols(); ++j) {
      const double w = std::norm(overlap(i, j));
      if (mu <= eta_rank_tol_) {
        if (w > 1e-24) {
          std::ostringstream msg;
          msg << "log_spectral_measure: vector has weight " << w
              << " on the kernel of the eta weight (eigenvalue " << mu << ")";
          throw RankDeficientError(msg.str(), mu);
        }
        continue;
      }
      atoms.push_back(Atom{scale * (std::log(mu) - std::log(omega_.values(j))), w});
    }
  }
  return AtomicMeasure(std::move(atoms), cluster_tol);
}

RelativeModular relative_modular(const Operator& rho_eta, const Operator& rho_omega, double rank_tol) {
  return RelativeModular(rho_eta, rho_omega, rank_tol);
}

bool cone_membership(const HSVector& x, double tol) {
  const Operator& m = x.mat();
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  if (max_abs_entry(m - m.adjoint()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Operator> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0) >= -tol;
}

Liouvilleans::Liouvilleans(const Scenario& scn) : scn_(scn) {}

Operator Liouvilleans::uncoupled(const Operator& x) const {
  const Operator& h = scn_.h_free();
  return h * x - x * h;
}

Operator Liouvilleans::coupled(const Operator& x) const {
  const Operator& h = scn_.h_coupled();
  return h * x - x * h;
}

Operator Liouvilleans::hat(const Operator& x) const {
  return scn_.h_coupled() * x - x * scn_.h_reservoir_full();
}

Operator Liouvilleans::perturbed_generator(const Operator& x) const {
  return scn_.h_coupled() * x - x * scn_.h_free();
}

Operator Liouvilleans::coupled_from_formula(const Operator& x) const {
  const Operator& v = scn_.coupling();
  const double lam = scn_.lambda();
  // J π(V) J X = (V X*)* = X V
  const Operator jvj = (v * x.adjoint()).adjoint();
  return uncoupled(x) + lam * (v * x) - lam * jvj;
}

Operator Liouvilleans::evolve_uncoupled(double t, const Operator& x) const {
  const Operator u = scn_.free_unitary(t);
  return u * x * u.adjoint();
}

Operator Liouvilleans::evolve_coupled(double t, const Operator& x) const {
  const Operator u = scn_.coupled_unitary(t);
  return u * x * u.adjoint();
}

Operator Liouvilleans::evolve_hat(double t, const Operator& x) const {
  const Operator ur = tensor(identity(scn_.dim_system()), unitary_exp(scn_.reservoir_eigensystem(), t));
  return scn_.coupled_unitary(t) * x * ur.adjoint();
}

Operator Liouvilleans::evolve_perturbed(double t, const Operator& x) const {
  return scn_.coupled_unitary(t) * x * scn_.free_unitary(-t);
}

HSVector omega_equilibrium(const Scenario& scn) {
  return HSVector(positive_sqrt(scn.equilibrium_state().op()));
}

HSVector omega_initial(const Scenario& scn) {
  return HSVector(tensor(positive_sqrt(scn.rho_system().op()), positive_sqrt(scn.rho_reservoir().op())));
}

HSVector omega_eta(const Scenario& scn) {
  return HSVector(tensor(identity(scn.dim_system()), positive_sqrt(scn.rho_reservoir().op())));
}

namespace {

Operator r_operator(const Scenario& scn) {
  return tensor(positive_sqrt(scn.rho_system().op()), identity(scn.dim_reservoir()));
}

}  // namespace

HSVector omega_hat_statement(const Scenario& scn) {
  return HSVector(r_operator(scn) * omega_initial(scn).mat());
}

HSVector omega_hat_proof(const Scenario& scn) {
  // J R J X = (R X*)*
  const Operator omega = omega_initial(scn).mat();
  return HSVector((r_operator(scn) * omega.adjoint()).adjoint());
}

Operator eta_weight(const Scenario& scn) {
  return tensor(identity(scn.dim_system()), scn.rho_reservoir().op());
}

Operator eta_evolved(const Scenario& scn, double t) {
  const Operator u = scn.coupled_unitary(t);
  return hermitian_part(u * eta_weight(scn) * u.adjoint());
}

HSVector araki_vector(const Scenario& scn) {
  // e^{−β(L_0+λπ(V))/2} X = e^{−βH_λ/2} X e^{βH_0/2}; the exponents are
  // shifted by the ground energies, which only rescales before normalizing.
  const double b = scn.beta();
  const Eigensystem& hl = scn.coupled_eigensystem();
  const Eigensystem& h0 = scn.free_eigensystem();
  const double el = hl.values.minCoeff();
  const double e0 = h0.values.minCoeff();
  const Operator left = hl.apply([=](double e) { return Complex(std::exp(-0.5 * b * (e - el)), 0.0); });
  const Operator right = h0.apply([=](double e) { return Complex(std::exp(0.5 * b * (e - e0)), 0.0); });
  Operator v = left * omega_equilibrium(scn).mat() * right;
  v /= v.norm();
  return HSVector(std::move(v));
}

Cocycle cocycle(const Scenario& scn, double t) {
  // e^{−itL_0} X = e^{−itH_0} X e^{itH_0} and e^{it(L_0+λπ(V))} Y = e^{itH_λ} Y e^{−itH_0},
  // so the composite is X ↦ (e^{itH_λ}e^{−itH_0}) X (e^{itH_0}e^{−itH_0}).
  const Operator u0 = scn.free_unitary(t);
  const Operator left = scn.coupled_unitary(t) * u0.adjoint();
  const Operator right = u0 * u0.adjoint();
  const int d = scn.dim();
  return Cocycle{left, unit_basis_sandwich_residual(left, right - identity(d))};
}

double cocycle_identity_residual(const Scenario& scn, double t) {
  // Δ_{η∘τ^{−t}|η} X = ρ_{η,t} X ρ_η^{−1} and ΓΔ_ηΓ* X = W ρ_η W* X ρ_η^{−1}.
  const RelativeModular evolved(eta_evolved(scn, t), eta_weight(scn));
  const Eigensystem& eta = evolved.omega_eigensystem();
  const Operator rho_eta = eta.apply([](double mu) { return Complex(mu, 0.0); });
  const Operator rho_eta_inv = eta.apply([](double mu) { return Complex(1.0 / mu, 0.0); });
  const Operator rho_evolved = evolved.eta_eigensystem().apply([](double mu) { return Complex(mu, 0.0); });
  const Operator w = cocycle(scn, t).left_factor;
  return unit_basis_sandwich_residual(rho_evolved - w * rho_eta * w.adjoint(), rho_eta_inv);
}

std::vector<Operator> gell_mann_basis(int dim) {
  std::vector<Operator> basis;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      Operator sym = Operator::Zero(dim, dim);
      sym(i, j) = sym(j, i) = 1.0;
      basis.push_back(sym);
      Operator anti = Operator::Zero(dim, dim);
      anti(i, j) = -kI;
      anti(j, i) = kI;
      basis.push_back(anti);
    }
  for (int k = 1; k < dim; ++k) {
    Operator diag = Operator::Zero(dim, dim);
    const double norm = std::sqrt(2.0 / (k * (k + 1.0)));
    for (int m = 0; m < k; ++m) diag(m, m) = norm;
    diag(k, k) = -k * norm;
    basis.push_back(diag);
  }
  return basis;
}

KoopmanReport koopman_diagnostic(const Scenario& scn, std::pair<double, double> window, int grid,
                                 double threshold) {
  if (grid < 2) throw Error("koopman_diagnostic: grid must have at least 2 points");
  if (window.second < window.first) throw Error("koopman_diagnostic: window end precedes start");
  const Eigensystem& es = scn.coupled_eigensystem();
  const Operator omega = araki_vector(scn).mat();
  const Operator omega_eig = es.vectors.adjoint() * omega * es.vectors;
  std::vector<Operator> vecs;
  for (const auto& g : gell_mann_basis(scn.dim_system())) {
    Operator x = tensor(g, identity(scn.dim_reservoir())) * omega;
    x /= x.norm();
    vecs.push_back(es.vectors.adjoint() * x * es.vectors);
  }
  const std::size_t n = vecs.size();
  const Eigen::Index d = es.values.size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double span = window.second - window.first;
  for (int k = 0; k < grid; ++k) {
    const double t = window.first + span * k / (grid - 1);
    Operator phase(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) phase(i, j) = std::exp(kI * (t * (es.values(i) - es.values(j))));
    for (std::size_t b = 0; b < n; ++b) {
      const Operator evolved = vecs[b].cwiseProduct(phase);
      const Complex proj_b = hs_inner(omega_eig, vecs[b]);
      for (std::size_t a = 0; a < n; ++a) {
        const Complex dev = hs_inner(vecs[a], evolved) - hs_inner(vecs[a], omega_eig) * proj_b;
        acc(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += std::abs(dev);
      }
    }
  }
  const double distance = n == 0 ? 0.0 : acc.maxCoeff() / grid;
  return KoopmanReport{distance, threshold, distance < threshold, static_cast<int>(n), grid};
}

}  // namespace qfcs
