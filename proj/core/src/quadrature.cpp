#include "qfcs/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qfcs {

const GaussKronrodRule& gauss_kronrod_15() {
  static const GaussKronrodRule rule = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    GaussKronrodRule r{};
    const auto& x = gauss_kronrod<double, 15>::abscissa();
    const auto& wk = gauss_kronrod<double, 15>::weights();
    const auto& wg = gauss<double, 7>::weights();
    for (int k = 0; k < 8; ++k) {
      r.abscissa[k] = x[k];
      r.kronrod_weights[k] = wk[k];
    }
    for (int k = 0; k < 4; ++k) r.gauss_weights[k] = wg[k];
    return r;
  }();
  return rule;
}

}  // namespace qfcs
