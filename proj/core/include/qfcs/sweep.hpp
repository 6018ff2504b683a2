#pragma once

#include <array>
#include <utility>
#include <vector>

#include "qfcs/scenario.hpp"

namespace qfcs {

struct SweepRow {
  double lambda;
  double t;
  double distance;  // max over γ of |F_{λ,t}(iγ/β) − ω_β(e^{iγH_S})ω_S(e^{−iγH_S})|
  double mean_reservoir;
  double mean_system;
  std::array<double, 4> moments;             // atom moments of P_R, orders 1..4
  std::array<double, 4> derivative_moments;  // same from α-derivatives of F at 0
  double moment_residual;                    // max_k |moments[k] − derivative_moments[k]|
};

struct SweepVerdict {
  double lambda;
  double baseline;  // distance at t = 0 (F ≡ 1)
  double plateau;   // mean distance over the plateau rows
  int plateau_rows;
  bool below_baseline;
};

struct SweepOptions {
  int workers = 1;
  /// Rows with t in this window form the plateau. When none fall inside, the
  /// second half of the t grid is used instead.
  std::pair<double, double> plateau_window{10.0, 30.0};
  int derivative_nodes = 64;
};

struct SweepResult {
  std::vector<double> gamma_grid;
  std::vector<SweepRow> rows;  // λ-major, then t, in grid order
  std::vector<SweepVerdict> verdicts;
};

/// Evaluates the λ family scn.with_lambda(λ) over the (λ, t) grid. Cells run
/// on a pool of `workers` threads; the result does not depend on the pool size.
SweepResult limit_sweep(const Scenario& scn, const std::vector<double>& t_grid,
                        const std::vector<double>& lambda_grid, const std::vector<double>& gamma_grid,
                        const SweepOptions& options = {});

/// One cell of the sweep.
SweepRow sweep_cell(const Scenario& scn, double t, const std::vector<double>& gamma_grid,
                    int derivative_nodes = 64);

/// max over γ of |1 − ω_β(e^{iγH_S})ω_S(e^{−iγH_S})|
double sweep_baseline(const Scenario& scn, const std::vector<double>& gamma_grid);

}  // namespace qfcs
