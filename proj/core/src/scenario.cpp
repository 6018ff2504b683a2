#include "qfcs/scenario.hpp"

#include <cmath>
#include <sstream>

#include "qfcs/error.hpp"

namespace qfcs {

struct Scenario::Data {
  Operator h_system;
  Operator h_reservoir;
  Operator coupling;
  double lambda;
  double beta;
  DensityMatrix rho_system;
  Tolerances tolerances;

  Operator h_system_full;
  Operator h_reservoir_full;
  Operator h_free;
  Operator h_coupled;
  Eigensystem system_eig;
  Eigensystem reservoir_eig;
  Eigensystem free_eig;
  Eigensystem coupled_eig;
  DensityMatrix rho_reservoir;
  DensityMatrix rho_system_gibbs;
  DensityMatrix initial_state;
  DensityMatrix equilibrium_state;
  double energy_scale;
};

namespace {

void check_dims(const Operator& h_system, const Operator& h_reservoir, const Operator& coupling,
                const DensityMatrix& rho_system) {
  require_hermitian(h_system, "system Hamiltonian");
  require_hermitian(h_reservoir, "reservoir Hamiltonian");
  require_hermitian(coupling, "coupling");
  const long d = h_system.rows() * h_reservoir.rows();
  if (coupling.rows() != d) {
    std::ostringstream msg;
    msg << "coupling: expected dimension " << d << " (system x reservoir), got " << coupling.rows();
    throw ShapeError(msg.str());
  }
  if (rho_system.dim() != h_system.rows()) {
    std::ostringstream msg;
    msg << "initial system state: expected dimension " << h_system.rows() << ", got "
        << rho_system.dim();
    throw ShapeError(msg.str());
  }
}

}  // namespace

Scenario::Scenario(Operator h_system, Operator h_reservoir, Operator coupling, double lambda,
                   double beta, DensityMatrix rho_system, Tolerances tolerances) {
  check_dims(h_system, h_reservoir, coupling, rho_system);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error("scenario: beta must be positive and finite");
  if (!std::isfinite(lambda)) throw Error("scenario: lambda must be finite");
  if (!(tolerances.cluster_tol > 0.0) || !(tolerances.quad_tol > 0.0))
    throw Error("scenario: tolerances must be positive");

  const int ds = static_cast<int>(h_system.rows());
  const int dr = static_cast<int>(h_reservoir.rows());
  h_system = hermitian_part(h_system);
  h_reservoir = hermitian_part(h_reservoir);
  coupling = hermitian_part(coupling);

  Operator hs_full = tensor(h_system, identity(dr));
  Operator hr_full = tensor(identity(ds), h_reservoir);
  Operator h_free = hs_full + hr_full;
  Operator h_coupled = h_free + lambda * coupling;

  Eigensystem system_eig = eigensystem(h_system);
  Eigensystem reservoir_eig = eigensystem(h_reservoir);
  DensityMatrix rho_r = gibbs(reservoir_eig, beta);
  DensityMatrix rho_beta = gibbs(system_eig, beta);
  DensityMatrix initial(tensor(rho_system.op(), rho_r.op()), 1e-10);
  DensityMatrix equilibrium(tensor(rho_beta.op(), rho_r.op()), 1e-10);
  const double scale =
      std::max(1.0, op_norm(h_system) + op_norm(h_reservoir) + std::abs(lambda) * op_norm(coupling));

  data_ = std::make_shared<const Data>(Data{
      std::move(h_system), std::move(h_reservoir), std::move(coupling), lambda, beta,
      std::move(rho_system), tolerances, std::move(hs_full), std::move(hr_full), h_free, h_coupled,
      std::move(system_eig), std::move(reservoir_eig), eigensystem(h_free), eigensystem(h_coupled),
      std::move(rho_r), std::move(rho_beta), std::move(initial), std::move(equilibrium), scale});
}

const Operator& Scenario::h_system() const { return data_->h_system; }
const Operator& Scenario::h_reservoir() const { return data_->h_reservoir; }
const Operator& Scenario::coupling() const { return data_->coupling; }
double Scenario::lambda() const { return data_->lambda; }
double Scenario::beta() const { return data_->beta; }
const DensityMatrix& Scenario::rho_system() const { return data_->rho_system; }
const Tolerances& Scenario::tolerances() const { return data_->tolerances; }
int Scenario::dim_system() const { return static_cast<int>(data_->h_system.rows()); }
int Scenario::dim_reservoir() const { return static_cast<int>(data_->h_reservoir.rows()); }
int Scenario::dim() const { return dim_system() * dim_reservoir(); }
const Operator& Scenario::h_system_full() const { return data_->h_system_full; }
const Operator& Scenario::h_reservoir_full() const { return data_->h_reservoir_full; }
const Operator& Scenario::h_free() const { return data_->h_free; }
const Operator& Scenario::h_coupled() const { return data_->h_coupled; }
const Eigensystem& Scenario::system_eigensystem() const { return data_->system_eig; }
const Eigensystem& Scenario::reservoir_eigensystem() const { return data_->reservoir_eig; }
const Eigensystem& Scenario::free_eigensystem() const { return data_->free_eig; }
const Eigensystem& Scenario::coupled_eigensystem() const { return data_->coupled_eig; }
const DensityMatrix& Scenario::rho_reservoir() const { return data_->rho_reservoir; }
const DensityMatrix& Scenario::rho_system_gibbs() const { return data_->rho_system_gibbs; }
const DensityMatrix& Scenario::initial_state() const { return data_->initial_state; }
const DensityMatrix& Scenario::equilibrium_state() const { return data_->equilibrium_state; }
double Scenario::energy_scale() const { return data_->energy_scale; }

Operator Scenario::coupled_unitary(double t) const { return unitary_exp(data_->coupled_eig, t); }
Operator Scenario::free_unitary(double t) const { return unitary_exp(data_->free_eig, t); }

Operator Scenario::evolve(const Operator& a, double t) const {
  const Operator u = coupled_unitary(t);
  return u * a * u.adjoint();
}

Operator Scenario::evolve_free(const Operator& a, double t) const {
  const Operator u = free_unitary(t);
  return u * a * u.adjoint();
}

Scenario Scenario::with_lambda(double lambda) const {
  return Scenario(data_->h_system, data_->h_reservoir, data_->coupling, lambda, data_->beta,
                  data_->rho_system, data_->tolerances);
}

}  // namespace qfcs
