#pragma once

#include <cstdint>

#include "qfcs/operator.hpp"

namespace qfcs {

inline constexpr int kMaxChainSites = 12;

struct ChainReservoir {
  Operator hamiltonian;  // H_R
  Operator edge;         // σ_x on site 0, the site the system couples to
};

/// Open spin chain on n sites, site 0 leftmost in the tensor product:
///   H_R = J Σ_i σ_x^{(i)} σ_x^{(i+1)} + Σ_i h_i σ_z^{(i)},
///   h_i = field · (1 + disorder · u_i),  u_i uniform on [−1, 1) from `seed`.
/// Throws ResourceError with a memory estimate unless 1 ≤ n ≤ 12.
ChainReservoir build_chain_reservoir(int n, double coupling_j, double field, std::uint64_t seed,
                                     double disorder = 0.0);

/// Bytes held by one d×d complex matrix with d = 2^n.
double chain_matrix_bytes(int n);

/// Operator acting as `op` on site `site` of an n-site chain of qubits.
Operator site_operator(const Operator& op, int site, int n);

}  // namespace qfcs
