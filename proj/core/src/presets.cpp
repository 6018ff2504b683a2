#include "qfcs/presets.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "qfcs/error.hpp"

namespace qfcs {

double chain_matrix_bytes(int n) { return std::ldexp(static_cast<double>(sizeof(Complex)), 2 * n); }

Operator site_operator(const Operator& op, int site, int n) {
  Operator out = identity(1);
  for (int k = 0; k < n; ++k) out = tensor(out, k == site ? op : identity(2));
  return out;
}

ChainReservoir build_chain_reservoir(int n, double coupling_j, double field, std::uint64_t seed,
                                     double disorder) {
  if (n < 1 || n > kMaxChainSites) {
    const double bytes = chain_matrix_bytes(n < 1 ? 0 : n);
    std::ostringstream msg;
    msg << "chain reservoir: n = " << n << " outside [1, " << kMaxChainSites << "]";
    if (n > kMaxChainSites)
      msg << "; a single " << (1LL << std::min(n, 62)) << "-dimensional operator would need about "
          << bytes / (1024.0 * 1024.0 * 1024.0) << " GiB and the composite space far more";
    throw ResourceError(msg.str(), bytes);
  }
  if (!std::isfinite(coupling_j) || !std::isfinite(field) || !std::isfinite(disorder))
    throw Error("chain reservoir: parameters must be finite");

  // Uniform draws taken from the raw 64-bit stream so that a seed gives the
  // same chain on every standard library.
  std::mt19937_64 engine(seed);
  const Operator sx = pauli_x();
  const Operator sz = pauli_z();
  const int d = 1 << n;
  ChainReservoir out{Operator::Zero(d, d), site_operator(sx, 0, n)};
  for (int i = 0; i < n; ++i) {
    const double u = std::ldexp(static_cast<double>(engine() >> 11), -53) * 2.0 - 1.0;
    const double h = disorder == 0.0 ? field : field * (1.0 + disorder * u);
    out.hamiltonian += h * site_operator(sz, i, n);
  }
  if (coupling_j != 0.0)
    for (int i = 0; i + 1 < n; ++i)
      out.hamiltonian += coupling_j * site_operator(sx, i, n) * site_operator(sx, i + 1, n);
  return out;
}

}  // namespace qfcs
