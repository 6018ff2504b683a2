#include "qfcs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "qfcs/error.hpp"
#include "qfcs/fcs.hpp"

namespace qfcs {

SweepRow sweep_cell(const Scenario& scn, double t, const std::vector<double>& gamma_grid,
                    int derivative_nodes) {
  SweepRow row{};
  row.lambda = scn.lambda();
  row.t = t;
  const StripFunction f(scn, t);
  for (double g : gamma_grid) {
    const Complex diff = f(Complex(0.0, g / scn.beta())) - system_char_limit(scn, g);
    row.distance = std::max(row.distance, std::abs(diff));
  }
  const FcsResult res = reservoir_fcs(scn, t);
  row.mean_reservoir = res.mean;
  row.mean_system = system_fcs(scn, t).mean;
  const std::vector<double> dm = derivative_moments(f, 4, derivative_nodes);
  for (int k = 0; k < 4; ++k) {
    row.moments[k] = res.moments[k];
    row.derivative_moments[k] = dm[k];
    row.moment_residual = std::max(row.moment_residual, std::abs(res.moments[k] - dm[k]));
  }
  return row;
}

double sweep_baseline(const Scenario& scn, const std::vector<double>& gamma_grid) {
  double worst = 0.0;
  for (double g : gamma_grid) worst = std::max(worst, std::abs(1.0 - system_char_limit(scn, g)));
  return worst;
}

SweepResult limit_sweep(const Scenario& scn, const std::vector<double>& t_grid,
                        const std::vector<double>& lambda_grid, const std::vector<double>& gamma_grid,
                        const SweepOptions& options) {
  if (t_grid.empty() || lambda_grid.empty() || gamma_grid.empty())
    throw Error("limit_sweep: grids must be nonempty");
  if (options.workers < 1) throw Error("limit_sweep: workers must be at least 1");

  std::vector<Scenario> family;
  for (double lambda : lambda_grid) family.push_back(scn.with_lambda(lambda));

  const std::size_t nt = t_grid.size();
  const std::size_t cells = nt * lambda_grid.size();
  std::vector<SweepRow> rows(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::size_t k = next++; k < cells; k = next++) {
      try {
        rows[k] = sweep_cell(family[k / nt], t_grid[k % nt], gamma_grid, options.derivative_nodes);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells;
      }
    }
  };
  const int pool = static_cast<int>(std::min<std::size_t>(options.workers, cells));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < pool; ++w) threads.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult out;
  out.gamma_grid = gamma_grid;
  const double baseline = sweep_baseline(scn, gamma_grid);
  for (std::size_t l = 0; l < lambda_grid.size(); ++l) {
    SweepVerdict v{lambda_grid[l], baseline, 0.0, 0, false};
    double sum = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      const double t = t_grid[i];
      if (t >= options.plateau_window.first && t <= options.plateau_window.second) {
        sum += rows[l * nt + i].distance;
        ++v.plateau_rows;
      }
    }
    if (v.plateau_rows == 0) {
      for (std::size_t i = nt / 2; i < nt; ++i) {
        sum += rows[l * nt + i].distance;
        ++v.plateau_rows;
      }
    }
    v.plateau = sum / v.plateau_rows;
    v.below_baseline = v.plateau < baseline;
    out.verdicts.push_back(v);
  }
  out.rows = std::move(rows);
  return out;
}

}  // namespace qfcs
