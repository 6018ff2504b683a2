#include "qfcs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qfcs/dynamics.hpp"
#include "qfcs/error.hpp"
#include "qfcs/fcs.hpp"
#include "qfcs/states.hpp"

namespace qfcs {

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names{"all", "operator", "states", "dynamics", "modular", "fcs"};
  return names;
}

namespace {

class Checks {
 public:
  explicit Checks(std::vector<CheckResult>& out) : out_(out) {}
  void add(std::string name, double residual, double tol) {
    out_.push_back({std::move(name), residual, tol, std::isfinite(residual) && residual <= tol});
  }

 private:
  std::vector<CheckResult>& out_;
};

Operator unit_random(RandomOperators& rng, int d) {
  Operator a = rng.ginibre(d);
  return a / op_norm(a);
}

// Frobenius norms bound the operator norms from above. Orthogonality is
// checked as ‖P_i Σ_{j≠i} P_j‖, which bounds every ‖P_iP_j‖ up to roundoff
// and costs one product per projector instead of one per pair.
double decomposition_residual(const Operator& a, const SpectralDecomposition& sd) {
  const int d = static_cast<int>(a.rows());
  double worst = (sd.reconstruct() - a).norm() / std::max(op_norm(a), 1.0);
  Operator sum = Operator::Zero(d, d);
  for (const auto& p : sd.projectors) sum += p;
  for (const auto& p : sd.projectors) {
    worst = std::max(worst, (p * p - p).norm());
    worst = std::max(worst, (p * (sum - p)).norm());
  }
  return std::max(worst, (sum - identity(d)).norm());
}

void operator_suite(const Scenario& scn, const VerifyOptions& opt, Checks& c) {
  c.add("eig_hermitian.coupled", decomposition_residual(scn.h_coupled(), eig_hermitian(scn.h_coupled())), 1e-12);
  c.add("eig_hermitian.reservoir", decomposition_residual(scn.h_reservoir(), eig_hermitian(scn.h_reservoir())),
        1e-12);

  const Operator& rho = scn.initial_state().op();
  const Operator root = positive_sqrt(rho);
  c.add("positive_sqrt.initial_state", op_norm(root * root - rho) / std::max(op_norm(rho), 1e-300), 1e-10);

  const NormSpectral ns = norm_spectral_check(scn.h_coupled());
  c.add("norm_equals_spectral_radius", std::abs(ns.op_norm - ns.spectral_radius) / std::max(ns.op_norm, 1.0),
        1e-12);

  const Operator u = unitary_exp(scn.h_coupled(), opt.t);
  c.add("func_calc.unitary_exp", op_norm(u * u.adjoint() - identity(scn.dim())), 1e-12);

  RandomOperators rng(opt.seed);
  const Operator h = rng.hermitian(scn.dim_system());
  c.add("func_calc.spectral_mapping",
        op_norm(func_calc(h, [](double x) { return Complex(x * x, 0.0); }) - h * h) / std::max(op_norm(h * h), 1.0),
        1e-12);

  const int dims[2] = {scn.dim_system(), scn.dim_reservoir()};
  c.add("partial_trace.reservoir", op_norm(partial_trace(rho, dims, 1) - scn.rho_system().op()), 1e-12);
  c.add("partial_trace.system", op_norm(partial_trace(rho, dims, 0) - scn.rho_reservoir().op()), 1e-12);
}

void states_suite(const Scenario& scn, const VerifyOptions& opt, Checks& c) {
  c.add("state.initial_trace", std::abs(scn.initial_state().op().trace() - 1.0), 1e-12);

  const VariationalReport var = gibbs_variational_check(scn.h_system(), scn.beta(), 50, opt.seed);
  c.add("gibbs.variational_maximizer", var.gibbs_gap, 1e-10);
  c.add("gibbs.variational_upper_bound", std::max(var.max_violation, 0.0), 1e-10);

  RandomOperators rng(opt.seed + 1);
  std::vector<OperatorPair> pairs_r, pairs_c;
  for (int k = 0; k < opt.random_samples; ++k) {
    pairs_r.emplace_back(unit_random(rng, scn.dim_reservoir()), unit_random(rng, scn.dim_reservoir()));
    pairs_c.emplace_back(unit_random(rng, scn.dim()), unit_random(rng, scn.dim()));
  }
  c.add("kms.reservoir_gibbs", kms_defect(scn.rho_reservoir(), scn.h_reservoir(), scn.beta(), pairs_r), 1e-10);
  c.add("kms.coupled_gibbs", kms_defect(gibbs(scn.coupled_eigensystem(), scn.beta()), scn.h_coupled(), scn.beta(),
                                        pairs_c),
        1e-10);

  const MeasurementResult m = measure(scn.rho_system(), scn.h_system());
  c.add("measurement.total_probability", std::abs(m.distribution.total_mass() - 1.0), 1e-12);
  double repeat = 0.0;
  for (const Outcome& o : m.outcomes) {
    if (!o.post_state) continue;
    // Repeating the measurement on the post-measurement state returns the same value.
    const MeasurementResult again = measure(*o.post_state, scn.h_system());
    for (const Atom& a : again.distribution.atoms())
      if (std::abs(a.location - o.value) > 1e-9) repeat = std::max(repeat, a.weight);
  }
  c.add("measurement.repeatability", repeat, 1e-12);

  const double s = entropy(scn.rho_reservoir());
  c.add("entropy.bounds", std::max(-s, s - std::log(static_cast<double>(scn.dim_reservoir()))), 1e-12);
}

void dynamics_suite(const Scenario& scn, const VerifyOptions& opt, Checks& c) {
  const double scale = scn.energy_scale();
  const double t = opt.t;
  const HeatChange direct = delta_q_direct(scn, t);
  const FluxHeatChange flux = delta_q_flux(scn, t, scn.tolerances().quad_tol);
  const double qtol = scn.tolerances().quad_tol + 1e-8;
  c.add("heat.reservoir_flux_integral", std::abs(direct.reservoir - flux.value.reservoir), qtol);
  c.add("heat.system_flux_integral", std::abs(direct.system - flux.value.system), qtol);
  c.add("heat.balance", balance_check(scn, t), 1e-10 * scale);
  c.add("energy.conservation", energy_drift(scn, t), 1e-10 * scale);

  const Cocycle cyc = cocycle(scn, t);
  c.add("cocycle.left_multiplication", cyc.left_multiplication_residual, 1e-10);
  c.add("cocycle.closed_form", op_norm(cyc.left_factor - exact_cocycle(scn, t)), 1e-10);

  // Dyson truncation in the regime |λ|‖V‖t ≤ 1.
  const double rate = std::abs(scn.lambda()) * op_norm(scn.coupling());
  const double td = rate > 0.0 ? std::min(std::abs(t), 1.0 / rate) : std::abs(t);
  const Operator exact = exact_cocycle(scn, td);
  double envelope = 0.0, monotone = 0.0, previous = std::numeric_limits<double>::infinity();
  const DysonSeries series = dyson_series(scn, td, 6);
  for (int k = 1; k <= 6; ++k) {
    const double err = op_norm(series.partial_sum(k) - exact);
    envelope = std::max(envelope, err - dyson_error_bound(scn, td, k) - series.integration_error);
    monotone = std::max(monotone, err - previous);
    previous = err;
  }
  c.add("dyson.error_below_bound", std::max(envelope, 0.0), 1e-12);
  c.add("dyson.error_monotone", std::max(monotone, 0.0), 1e-12);
}

void modular_suite(const Scenario& scn, const VerifyOptions& opt, VerifyReport& report, Checks& c) {
  const int d = scn.dim();
  const ModularStructure mod(scn.equilibrium_state().op());
  const Operator omega = mod.vacuum().mat();
  RandomOperators rng(opt.seed + 2);
  const int n = std::max(1, opt.random_samples / 5);

  double anti = 0, fs = 0, sf = 0, fdef = 0, adj = 0, jsa = 0, jsq = 0, half = 0, s_def = 0, kms = 0;
  double tt_comm = 0, tt_flow = 0, cone = 0, rn = 0, rn_norm = 0, herm = 0;
  const Liouvilleans liou(scn);
  RandomOperators eta_rng(opt.seed + 3);
  const DensityMatrix eta_state = eta_rng.density(d);
  const RelativeModular rel(eta_state.op(), mod.reference());
  const Eigensystem rho_eig = eigensystem(mod.reference());
  const Eigensystem eta_eig = eigensystem(eta_state.op());
  const double tt = 0.7;
  const Operator rho_it = unitary_exp(Operator(rho_eig.apply([](double mu) { return Complex(std::log(mu), 0); })), tt);
  const Operator eta_it = unitary_exp(Operator(eta_eig.apply([](double mu) { return Complex(std::log(mu), 0); })), tt);

  for (int k = 0; k < n; ++k) {
    const Operator x = unit_random(rng, d), y = unit_random(rng, d);
    const Operator a = unit_random(rng, d), b = unit_random(rng, d);
    const auto J = [&](const Operator& z) { return mod.conjugation(z); };
    anti = std::max(anti, std::abs(hs_inner(J(x), J(y)) - hs_inner(y, x)));
    fs = std::max(fs, max_abs_entry(mod.tomita_adjoint(mod.tomita(x)) - mod.delta(x)));
    sf = std::max(sf, max_abs_entry(mod.tomita(mod.tomita_adjoint(x)) - mod.delta_power(-1.0, x)));
    fdef = std::max(fdef, max_abs_entry(mod.tomita_adjoint(x) - J(mod.delta_power(-0.5, x))));
    adj = std::max(adj, std::abs(hs_inner(x, mod.tomita(y)) - hs_inner(y, mod.tomita_adjoint(x))));
    jsa = std::max(jsa, std::abs(hs_inner(x, J(y)) - hs_inner(y, J(x))));
    jsq = std::max(jsq, max_abs_entry(J(J(x)) - x));
    half = std::max(half, max_abs_entry(mod.delta_power(-0.5, x) - J(mod.delta_power(0.5, J(x)))));
    s_def = std::max(s_def, max_abs_entry(mod.tomita(a * omega) - a.adjoint() * omega));
    kms = std::max(kms, std::abs(hs_inner(omega, a * mod.delta(b * omega)) - hs_inner(omega, b * a * omega)));

    // J π(A) J commutes with π(B); Δ^{it} π(A) Δ^{−it} = π(ρ^{it} A ρ^{−it}).
    const auto jaj = [&](const Operator& z) { return J(a * J(z)); };
    tt_comm = std::max(tt_comm, max_abs_entry(b * jaj(x) - jaj(b * x)));
    const Operator flowed = mod.delta_power(Complex(0, tt), a * mod.delta_power(Complex(0, -tt), x));
    tt_flow = std::max(tt_flow, max_abs_entry(flowed - rho_it * a * rho_it.adjoint() * x));

    // A J A J Ω lies in the cone.
    const Operator gen = a * J(a * J(omega));
    cone = std::max(cone, cone_membership(HSVector(gen), 1e-10 * std::max(gen.norm(), 1.0)) ? 0.0 : 1.0);

    rn = std::max(rn, std::abs(hs_inner(omega, rel.apply(a * omega)) - eta_state.expectation(a)));
    rn_norm = std::max(rn_norm, std::abs(rel.power(0.5, a * omega).squaredNorm() -
                                         eta_state.expectation(a * a.adjoint()).real()));
    const Operator cocycle_rn = rel.power(Complex(0, tt), mod.delta_power(Complex(0, -tt), x));
    rn_norm = std::max(rn_norm, max_abs_entry(cocycle_rn - eta_it * rho_it.adjoint() * x));

    using Generator = Operator (Liouvilleans::*)(const Operator&) const;
    for (Generator gen_fn : {&Liouvilleans::uncoupled, &Liouvilleans::coupled, &Liouvilleans::hat})
      herm = std::max(herm, std::abs(hs_inner(x, (liou.*gen_fn)(y)) - hs_inner((liou.*gen_fn)(x), y)));
  }
  c.add("modular.J_antiunitary", anti, 1e-10);
  c.add("modular.delta_equals_FS", fs, 1e-10);
  c.add("modular.delta_inverse_equals_SF", sf, 1e-10);
  c.add("modular.F_equals_J_delta_minus_half", fdef, 1e-10);
  c.add("modular.F_is_adjoint_of_S", adj, 1e-10);
  c.add("modular.J_self_adjoint", jsa, 1e-10);
  c.add("modular.J_involution", jsq, 1e-10);
  c.add("modular.delta_minus_half_equals_J_delta_half_J", half, 1e-10);
  c.add("modular.S_on_A_omega", s_def, 1e-10);
  c.add("modular.vacuum_invariance", max_abs_entry(mod.delta(omega) - omega), 1e-10);
  c.add("modular.kms_from_delta", kms, 1e-10);
  c.add("tomita_takesaki.JMJ_commutes_with_M", tt_comm, 1e-10);
  c.add("tomita_takesaki.modular_flow_in_M", tt_flow, 1e-10);
  c.add("cone.AJAJ_omega_generators", cone, 0.0);
  c.add("radon_nikodym.expectation", rn, 1e-10);
  c.add("radon_nikodym.norm_and_cocycle", rn_norm, 1e-10);
  c.add("liouvillean.hermitian", herm, 1e-10 * scn.energy_scale());

  // Matrix-unit basis up to d = 16, random probes beyond (each probe costs O(d³)).
  double formula = 0.0;
  auto probe = [&](const Operator& x) {
    formula = std::max(formula, max_abs_entry(liou.coupled(x) - liou.coupled_from_formula(x)));
  };
  if (d <= 16) {
    Operator unit = Operator::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        unit(i, j) = 1.0;
        probe(unit);
        unit(i, j) = 0.0;
      }
  } else {
    for (int k = 0; k < 32; ++k) probe(unit_random(rng, d));
  }
  c.add("liouvillean.perturbation_formula", formula, 1e-12 * scn.energy_scale());

  const Operator omega_eq = omega_equilibrium(scn).mat();
  c.add("liouvillean.uncoupled_annihilates_omega_eq", liou.uncoupled(omega_eq).norm(), 1e-10);
  const Operator omega_l = araki_vector(scn).mat();
  c.add("araki.annihilated_by_coupled", liou.coupled(omega_l).norm(), 1e-10 * scn.energy_scale());
  c.add("araki.equals_coupled_gibbs_root",
        (omega_l - positive_sqrt(gibbs(scn.coupled_eigensystem(), scn.beta()).op())).norm(), 1e-10);
  c.add("araki.in_cone", cone_membership(HSVector(omega_l), 1e-10) ? 0.0 : 1.0, 0.0);

  double preserve = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Operator g = rng.ginibre(d);
    const Operator evolved = liou.evolve_coupled(opt.t, g * g.adjoint());
    preserve = std::max(preserve, cone_membership(HSVector(evolved), 1e-10 * evolved.norm()) ? 0.0 : 1.0);
  }
  c.add("cone.preserved_by_coupled_dynamics", preserve, 0.0);
  c.add("cocycle.relative_modular_identity", cocycle_identity_residual(scn, opt.t), 1e-10);

  report.koopman = koopman_diagnostic(scn, opt.koopman_window, opt.koopman_grid);
}

Scenario dephased_scenario(const Scenario& scn) {
  const SpectralDecomposition sd = eig_hermitian(scn.h_system(), scn.tolerances().cluster_tol);
  const Operator& rho = scn.rho_system().op();
  Operator out = Operator::Zero(rho.rows(), rho.cols());
  for (const Operator& p : sd.projectors) out += p * rho * p;
  return Scenario(scn.h_system(), scn.h_reservoir(), scn.coupling(), scn.lambda(), scn.beta(),
                  DensityMatrix(hermitian_part(out), 1e-10), scn.tolerances());
}

void fcs_suite(const Scenario& scn, const VerifyOptions& opt, VerifyReport& report, Checks& c) {
  const double t = opt.t;
  const FcsResult res = reservoir_fcs(scn, t);
  const FcsResult proto = reservoir_protocol_fcs(scn, t);
  const FcsResult sys = system_fcs(scn, t);
  const MeasureComparison cmp = compare_measures(res.measure, proto.measure, 1e-8);
  c.add("fcs.modular_matches_protocol", std::max(cmp.max_location_error, cmp.max_weight_error), 1e-10);
  c.add("fcs.reservoir_mass", std::abs(res.measure.total_mass() - 1.0), 1e-10);
  c.add("fcs.system_mass", std::abs(sys.measure.total_mass() - 1.0), 1e-10);

  const double qtol = scn.tolerances().quad_tol;
  c.add("fcs.mean_identity", mean_identity_check(scn, t, qtol), 1e-7);
  const HeatChange direct = delta_q_direct(scn, t);
  // The first H_S measurement dephases ρ_S, so the system FCS mean is the heat
  // of the dephased state; it equals ΔQ_S when [ρ_S, H_S] = 0.
  const HeatChange dephased_heat = delta_q_direct(dephased_scenario(scn), t);
  c.add("fcs.system_mean_equals_heat", std::abs(sys.mean - dephased_heat.system), 1e-10 * scn.energy_scale());
  const double first_law = std::abs(res.mean - direct.system - scn.lambda() * (scn.initial_state().expect(
                                                                              scn.evolve(scn.coupling(), t)) -
                                                                          scn.initial_state().expect(scn.coupling())));
  c.add("fcs.first_law_of_averages", first_law, 1e-8);

  const double phi_norm = op_norm(flux_observables(scn).phi_reservoir);
  c.add("fcs.entropy_balance_operator", balance_operator_check(scn, t, qtol),
        std::max(1e-6, qtol * scn.beta() * phi_norm * std::abs(t) + 1e-8));

  double statement = 0.0, proof = 0.0;
  for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0})
    for (double tt : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const HalfLineResult h = lemma_half_line_check(scn, tt, s);
      statement = std::max(statement, h.residual_statement);
      proof = std::max(proof, h.residual_proof);
    }
  const bool ok_statement = statement <= 1e-8, ok_proof = proof <= 1e-8;
  report.half_line_variant = ok_statement && ok_proof ? "both" : ok_statement ? "statement" : ok_proof ? "proof" : "none";
  c.add("fcs.half_line_identity", std::min(statement, proof), 1e-8);

  const std::vector<Complex> grid = default_strip_grid();
  const StripBoundsReport sb = strip_bounds_check(scn, t, grid);
  c.add("fcs.strip_bound", std::max(sb.max_violation, 0.0), 1e-10);
  c.add("fcs.strip_value_at_one", sb.f_at_one_violation, 1e-10);

  const StripFunction f(scn, t);
  c.add("fcs.strip_value_at_zero", std::abs(f(0.0) - 1.0), 1e-12);
  double conj_sym = 0.0, char_match = 0.0;
  for (double g : default_gamma_grid(scn)) {
    const Complex plus = f(Complex(0.0, g / scn.beta()));
    conj_sym = std::max(conj_sym, std::abs(f(Complex(0.0, -g / scn.beta())) - std::conj(plus)));
    char_match = std::max(char_match, std::abs(plus - proto.measure.characteristic(g)));
  }
  c.add("fcs.conjugate_symmetry", conj_sym, 1e-12);
  c.add("fcs.characteristic_matches_protocol", char_match, 1e-10);

  const std::vector<double> dm = derivative_moments(f, 4);
  double moments = 0.0;
  for (int k = 0; k < 4; ++k) moments = std::max(moments, std::abs(dm[k] - res.moments[k]));
  c.add("fcs.moment_consistency", moments, 1e-6);
}

}  // namespace

VerifyReport run_verification(const Scenario& scn, const std::string& suite, const VerifyOptions& options) {
  const auto& names = verification_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw Error("unknown suite '" + suite + "' (expected all, operator, states, dynamics, modular or fcs)");
  VerifyReport report;
  report.suite = suite;
  Checks c(report.checks);
  const bool all = suite == "all";
  if (all || suite == "operator") operator_suite(scn, options, c);
  if (all || suite == "states") states_suite(scn, options, c);
  if (all || suite == "dynamics") dynamics_suite(scn, options, c);
  if (all || suite == "modular") modular_suite(scn, options, report, c);
  if (all || suite == "fcs") fcs_suite(scn, options, report, c);
  return report;
}

}  // namespace qfcs
