#include "qfcs/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qfcs/error.hpp"

namespace qfcs {

DensityMatrix::DensityMatrix(const Operator& op, double tol) {
  require_hermitian(op, "density matrix");
  const Complex tr = op.trace();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "density matrix: trace is " << tr.real() << " (expected 1)";
    throw InvalidStateError(msg.str());
  }
  const Eigensystem es = eigensystem(op);
  if (es.values(0) < -tol) {
    std::ostringstream msg;
    msg << "density matrix: negative eigenvalue " << es.values(0);
    throw NotPositiveError(msg.str(), es.values(0));
  }
  op_ = hermitian_part(op);
}

DensityMatrix DensityMatrix::normalized(const Operator& positive) {
  const double tr = positive.trace().real();
  if (!(tr > 0.0)) throw InvalidStateError("density matrix: cannot normalize an operator of zero trace");
  return DensityMatrix(positive / tr, 1e-10);
}

Complex DensityMatrix::expectation(const Operator& a) const {
  if (a.rows() != op_.rows() || a.cols() != op_.cols())
    throw ShapeError("expectation: dimension mismatch");
  // tr(ρA) = Σ_ij ρ_ij A_ji
  return (op_.transpose().cwiseProduct(a)).sum();
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms, double merge_tol) : merge_tol_(merge_tol) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  std::size_t start = 0;
  while (start < atoms.size()) {
    std::size_t end = start + 1;
    while (end < atoms.size() && atoms[end].location - atoms[end - 1].location <= merge_tol) ++end;
    double loc = 0.0;
    double weight = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      loc += atoms[k].location;
      weight += atoms[k].weight;
    }
    atoms_.push_back(Atom{loc / static_cast<double>(end - start), weight});
    start = end;
  }
}

double AtomicMeasure::total_mass() const {
  return std::accumulate(atoms_.begin(), atoms_.end(), 0.0,
                         [](double acc, const Atom& a) { return acc + a.weight; });
}

double AtomicMeasure::mean() const { return moment(1); }

double AtomicMeasure::moment(int order) const {
  double acc = 0.0;
  for (const auto& a : atoms_) acc += a.weight * std::pow(a.location, order);
  return acc;
}

Complex AtomicMeasure::characteristic(double gamma) const {
  Complex acc = 0.0;
  for (const auto& a : atoms_) acc += a.weight * std::exp(kI * (gamma * a.location));
  return acc;
}

double AtomicMeasure::integrate(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (const auto& a : atoms_) acc += a.weight * f(a.location);
  return acc;
}

AtomicMeasure AtomicMeasure::pruned(double weight_tol) const {
  AtomicMeasure out;
  out.merge_tol_ = merge_tol_;
  for (const auto& a : atoms_)
    if (a.weight > weight_tol) out.atoms_.push_back(a);
  return out;
}

MeasureComparison compare_measures(const AtomicMeasure& a, const AtomicMeasure& b, double loc_tol) {
  MeasureComparison cmp{0.0, 0.0};
  const auto& xa = a.atoms();
  const auto& xb = b.atoms();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < xa.size() || j < xb.size()) {
    if (i < xa.size() && j < xb.size() && std::abs(xa[i].location - xb[j].location) <= loc_tol) {
      cmp.max_location_error = std::max(cmp.max_location_error, std::abs(xa[i].location - xb[j].location));
      cmp.max_weight_error = std::max(cmp.max_weight_error, std::abs(xa[i].weight - xb[j].weight));
      ++i;
      ++j;
    } else if (j >= xb.size() || (i < xa.size() && xa[i].location < xb[j].location)) {
      cmp.max_weight_error = std::max(cmp.max_weight_error, std::abs(xa[i].weight));
      ++i;
    } else {
      cmp.max_weight_error = std::max(cmp.max_weight_error, std::abs(xb[j].weight));
      ++j;
    }
  }
  return cmp;
}

DensityMatrix gibbs(const Eigensystem& h, double beta) {
  if (!std::isfinite(beta)) throw Error("gibbs: beta must be finite");
  const double shift = beta >= 0.0 ? h.values.minCoeff() : h.values.maxCoeff();
  const Operator unnormalized =
      h.apply([=](double e) { return Complex(std::exp(-beta * (e - shift)), 0.0); });
  return DensityMatrix::normalized(unnormalized);
}

DensityMatrix gibbs(const Operator& h, double beta) { return gibbs(eigensystem(h), beta); }

double entropy(const DensityMatrix& rho) {
  const Eigensystem es = eigensystem(rho.op());
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    const double p = es.values(k);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

Operator RandomOperators::ginibre(int dim) {
  Operator g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double re = normal_(engine_);
      const double im = normal_(engine_);
      g(i, j) = Complex(re, im);
    }
  return g;
}

Operator RandomOperators::hermitian(int dim) {
  const Operator g = ginibre(dim);
  return 0.5 * (g + g.adjoint());
}

DensityMatrix RandomOperators::density(int dim) {
  const Operator g = ginibre(dim);
  return DensityMatrix::normalized(hermitian_part(g * g.adjoint()));
}

double RandomOperators::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int RandomOperators::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

namespace {

double log_trace_exp(const Eigensystem& a) {
  const double top = a.values.maxCoeff();
  return top + std::log((a.values.array() - top).exp().sum());
}

}  // namespace

double gibbs_variational_gap(const Operator& h, double beta, const DensityMatrix& nu) {
  const Operator a = -beta * h;
  const double log_z = log_trace_exp(eigensystem(a));
  return log_z - (entropy(nu) + nu.expect(a));
}

VariationalReport gibbs_variational_check(const Operator& h, double beta, int trials,
                                          std::uint64_t seed) {
  if (trials < 1) throw Error("gibbs_variational_check: trials must be >= 1");
  const Eigensystem es = eigensystem(h);
  const int d = es.dim();
  RandomOperators rng(seed);
  VariationalReport report{};
  report.log_partition = log_trace_exp(eigensystem(-beta * h));
  report.trials = trials;
  report.max_violation = -std::numeric_limits<double>::infinity();
  report.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    const double gap = gibbs_variational_gap(h, beta, rng.density(d));
    report.max_violation = std::max(report.max_violation, -gap);
    report.min_gap = std::min(report.min_gap, gap);
  }
  report.gibbs_gap = std::abs(gibbs_variational_gap(h, beta, gibbs(es, beta)));
  return report;
}

MeasurementResult measure(const DensityMatrix& rho, const Operator& a, double cluster_tol) {
  if (a.rows() != rho.dim()) throw ShapeError("measure: observable and state differ in dimension");
  const SpectralDecomposition sd = cluster_tol > 0.0 ? eig_hermitian(a, cluster_tol) : eig_hermitian(a);
  MeasurementResult result;
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < sd.size(); ++k) {
    const Operator& p = sd.projectors[k];
    const double prob = std::max(rho.expect(p), 0.0);
    std::optional<DensityMatrix> post;
    if (prob > 1e-14) post = DensityMatrix::normalized(hermitian_part(p * rho.op() * p));
    result.outcomes.push_back(Outcome{sd.eigenvalues[k], prob, std::move(post)});
    atoms.push_back(Atom{sd.eigenvalues[k], prob});
  }
  result.distribution = AtomicMeasure(std::move(atoms), 0.0);
  return result;
}

AtomicMeasure spectral_measure(const Operator& a, const DensityMatrix& omega, double cluster_tol) {
  return measure(omega, a, cluster_tol).distribution;
}

double kms_defect(const DensityMatrix& rho, const Operator& h, double beta,
                  std::span<const OperatorPair> pairs) {
  if (pairs.empty()) throw Error("kms_defect: no operator pairs supplied");
  const Eigensystem es = eigensystem(h);
  const Eigen::Index d = es.values.size();
  // e^{−βH} B e^{βH} in the eigenbasis carries the factor e^{−β(E_i − E_j)},
  // which never forms e^{±βE} on its own.
  Eigen::MatrixXd factor(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) factor(i, j) = std::exp(-beta * (es.values(i) - es.values(j)));
  double worst = 0.0;
  for (const auto& [a, b] : pairs) {
    const Operator b_eig = es.vectors.adjoint() * b * es.vectors;
    const Operator shifted = es.vectors * b_eig.cwiseProduct(factor.cast<Complex>()) * es.vectors.adjoint();
    const Complex lhs = rho.expectation(a * shifted);
    const Complex rhs = rho.expectation(b * a);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace qfcs
