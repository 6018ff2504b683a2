#pragma once

// Globally adaptive Gauss–Kronrod (7/15) integration over a finite interval.
// The value type may be a scalar or an Eigen matrix; the caller supplies the
// norm used for the error estimate.

#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include "qfcs/error.hpp"

namespace qfcs {

struct GaussKronrodRule {
  // Non-negative abscissae of the 15-point Kronrod rule, ascending from 0.
  // Even indices are the embedded 7-point Gauss nodes.
  std::array<double, 8> abscissa;
  std::array<double, 8> kronrod_weights;
  std::array<double, 4> gauss_weights;
};

const GaussKronrodRule& gauss_kronrod_15();

template <class T>
struct QuadratureResult {
  T value;
  double error_estimate;
  int evaluations;
};

namespace detail {

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
};

template <class T, class F, class Norm>
Panel<T> gk15_panel(const F& f, double a, double b, const Norm& norm) {
  const auto& rule = gauss_kronrod_15();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T f0 = f(center);
  T kronrod = rule.kronrod_weights[0] * f0;
  T gauss = rule.gauss_weights[0] * f0;
  for (int k = 1; k < 8; ++k) {
    const double dx = half * rule.abscissa[k];
    const T sum = f(center - dx) + f(center + dx);
    kronrod = kronrod + rule.kronrod_weights[k] * sum;
    if (k % 2 == 0) gauss = gauss + rule.gauss_weights[k / 2] * sum;
  }
  kronrod = half * kronrod;
  gauss = half * gauss;
  const double err = norm(kronrod - gauss);
  return Panel<T>{a, b, kronrod, err};
}

}  // namespace detail

/// Integrates f over [a, b] (b < a allowed) to absolute accuracy `abs_tol`
/// in the supplied norm. Throws QuadratureError with the achieved estimate
/// when `max_panels` bisections do not suffice.
template <class F, class Norm>
auto integrate_adaptive(const F& f, double a, double b, double abs_tol, const Norm& norm,
                        int max_panels = 4000) -> QuadratureResult<decltype(f(a))> {
  using T = decltype(f(a));
  if (!(abs_tol > 0.0)) throw Error("integrate_adaptive: tolerance must be positive");
  if (a == b) return {0.0 * f(a), 0.0, 1};

  auto cmp = [](const detail::Panel<T>& x, const detail::Panel<T>& y) { return x.error < y.error; };
  std::priority_queue<detail::Panel<T>, std::vector<detail::Panel<T>>, decltype(cmp)> panels(cmp);
  auto first = detail::gk15_panel<T>(f, a, b, norm);
  T total = first.value;
  double total_error = first.error;
  panels.push(std::move(first));
  int evaluations = 15;

  while (total_error > abs_tol) {
    if (static_cast<int>(panels.size()) >= max_panels) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge: achieved error " << total_error
          << " > tolerance " << abs_tol;
      throw QuadratureError(msg.str(), total_error);
    }
    detail::Panel<T> worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15_panel<T>(f, worst.a, mid, norm);
    auto right = detail::gk15_panel<T>(f, mid, worst.b, norm);
    evaluations += 30;
    total = total - worst.value + left.value + right.value;
    total_error += left.error + right.error - worst.error;
    panels.push(std::move(left));
    panels.push(std::move(right));
    // Re-sum the error estimates occasionally to avoid drift from cancellation.
    if (panels.size() % 64 == 0) {
      auto copy = panels;
      double e = 0.0;
      while (!copy.empty()) {
        e += copy.top().error;
        copy.pop();
      }
      total_error = e;
    }
  }
  return {total, total_error, evaluations};
}

/// Scalar convenience overload.
template <class F>
QuadratureResult<double> integrate_adaptive(const F& f, double a, double b, double abs_tol) {
  return integrate_adaptive(f, a, b, abs_tol, [](double x) { return std::abs(x); });
}

}  // namespace qfcs
