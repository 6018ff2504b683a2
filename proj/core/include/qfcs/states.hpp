#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "qfcs/operator.hpp"

namespace qfcs {

/// Positive semidefinite, unit-trace operator. ω(A) = tr(ρA).
class DensityMatrix {
 public:
  /// Validates Hermiticity, positivity (eigenvalues ≥ −tol) and |tr − 1| ≤ tol.
  explicit DensityMatrix(const Operator& op, double tol = 1e-12);

  /// Builds ρ = X/tr(X) from a non-zero positive operator.
  static DensityMatrix normalized(const Operator& positive);

  const Operator& op() const { return op_; }
  int dim() const { return static_cast<int>(op_.rows()); }

  /// tr(ρA).
  Complex expectation(const Operator& a) const;
  /// Re tr(ρA), for Hermitian A.
  double expect(const Operator& a) const { return expectation(a).real(); }

 private:
  Operator op_;
};

struct Atom {
  double location;
  double weight;
};

/// Finite sum of point masses, sorted by location, with atoms closer than
/// `merge_tol` coalesced.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  AtomicMeasure(std::vector<Atom> atoms, double merge_tol);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double merge_tol() const { return merge_tol_; }
  std::size_t size() const { return atoms_.size(); }

  double total_mass() const;
  double mean() const;
  /// Σ w x^k.
  double moment(int order) const;
  /// ∫ e^{iγx} dμ.
  Complex characteristic(double gamma) const;
  double integrate(const std::function<double(double)>& f) const;

  /// Drops atoms of weight ≤ weight_tol.
  AtomicMeasure pruned(double weight_tol) const;

 private:
  std::vector<Atom> atoms_;
  double merge_tol_ = 0.0;
};

struct MeasureComparison {
  double max_location_error;  // over atoms paired by proximity
  double max_weight_error;    // unmatched atoms count with their full weight
};

/// Pairs atoms of `a` and `b` whose locations lie within `loc_tol` and
/// reports the worst location and weight discrepancies.
MeasureComparison compare_measures(const AtomicMeasure& a, const AtomicMeasure& b, double loc_tol);

/// e^{−βH}/tr e^{−βH}, computed with exponents shifted by the extreme eigenvalue.
DensityMatrix gibbs(const Operator& h, double beta);
DensityMatrix gibbs(const Eigensystem& h, double beta);

/// −Σ λ log λ with 0·log 0 = 0.
double entropy(const DensityMatrix& rho);

/// Seeded source of random test operators.
class RandomOperators {
 public:
  explicit RandomOperators(std::uint64_t seed) : engine_(seed) {}

  /// Entries i.i.d. complex standard normal.
  Operator ginibre(int dim);
  Operator hermitian(int dim);
  /// GG*/tr(GG*).
  DensityMatrix density(int dim);
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

struct VariationalReport {
  double log_partition;     // log tr e^{−βH}
  double max_violation;     // max over trials of S(ν) + tr(νA) − log tr e^{A}
  double min_gap;           // min over trials of the (non-negative) gap
  double gibbs_gap;         // |gap| at ν = gibbs(H, β)
  int trials;
};

/// Checks log tr e^{A} = max_ν (S(ν) + tr(νA)) with A = −βH over random ν.
VariationalReport gibbs_variational_check(const Operator& h, double beta, int trials,
                                          std::uint64_t seed);

/// Gap log tr e^{−βH} − S(ν) − tr(ν(−βH)) for a single state.
double gibbs_variational_gap(const Operator& h, double beta, const DensityMatrix& nu);

struct Outcome {
  double value;
  double probability;
  std::optional<DensityMatrix> post_state;
};

struct MeasurementResult {
  AtomicMeasure distribution;
  std::vector<Outcome> outcomes;
};

/// Projective measurement of A in state ρ with degenerate eigenvalues
/// clustered (cluster_tol ≤ 0 selects the default 1e−9·‖A‖).
MeasurementResult measure(const DensityMatrix& rho, const Operator& a, double cluster_tol = 0.0);

/// μ_{A,ω}: atoms at the eigenvalues of A with weights ω(P_λ).
AtomicMeasure spectral_measure(const Operator& a, const DensityMatrix& omega,
                               double cluster_tol = 0.0);

using OperatorPair = std::pair<Operator, Operator>;

/// max over pairs |tr(ρ A e^{−βH} B e^{βH}) − tr(ρ B A)|.
double kms_defect(const DensityMatrix& rho, const Operator& h, double beta,
                  std::span<const OperatorPair> pairs);

}  // namespace qfcs
