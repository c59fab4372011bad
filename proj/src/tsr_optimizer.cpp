#include "wpr/tsr_optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace wpr {

double tsr_constant(const SystemParams& params, const ComplexVector& h,
                    const ComplexVector& g) {
  params.validate();
  const double h2 = squared_norm(h);
  const double g2 = squared_norm(g);
  if (h2 == 0.0) throw std::invalid_argument("zero source-relay channel h");
  if (g2 == 0.0) {
    throw std::invalid_argument("zero relay-destination channel g");
  }
  const double gamma1 = params.ps * h2 / params.sigma_r2;
  return (1.0 + gamma1) * params.sigma_d2 /
         (2.0 * params.eta * params.ps * h2 * g2);
}

double f_z(double z, double gamma1, double c) {
  if (!(z > 0.0)) throw std::invalid_argument("f_z: z must be > 0");
  const long double zl = z;
  const long double g1 = gamma1;
  const long double cl = c;
  const long double growing =
      g1 * cl * zl * std::log(zl) + (cl - 1.0L) * zl * zl;
  const long double linear = zl * (g1 * cl + 2.0L * cl - 2.0L * g1 - 2.0L);
  const long double tail = (g1 + 1.0L) * (g1 + 1.0L - cl);
  return static_cast<double>(growing - linear - tail);
}

double solve_z_star(double gamma1, double c, double tol, RootBracket* bracket) {
  if (!(gamma1 > 0.0)) throw std::invalid_argument("gamma1 must be > 0");
  if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");

  double lo = 1.0;
  double hi = 1.0 + gamma1;
  if (!(f_z(lo, gamma1, c) < 0.0) || !(f_z(hi, gamma1, c) > 0.0)) {
    throw std::logic_error(
        "solve_z_star: bracket sign facts violated at the interval ends");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // hit the double-precision floor
    const double f_mid = f_z(mid, gamma1, c);
    if (f_mid == 0.0) {
      lo = mid;
      hi = mid;
      break;
    }
    if (f_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol * mid) break;
  }
  if (bracket != nullptr) {
    bracket->lo = lo;
    bracket->hi = hi;
  }
  return lo + 0.5 * (hi - lo);
}

TsrSolution solve_tsr(const SystemParams& params, const ComplexVector& h,
                      const ComplexVector& g, double tol) {
  params.validate();
  const double gamma1 = first_hop_snr(params, h);
  if (!(gamma1 > 0.0)) {
    throw std::invalid_argument("solve_tsr: first-hop SNR must be > 0");
  }
  const double c = tsr_constant(params, h, g);

  TsrSolution sol;
  sol.c_const = c;
  sol.z_star = solve_z_star(gamma1, c, tol);
  const double zm1 = sol.z_star - 1.0;
  sol.alpha_star = zm1 * c / (zm1 * c + 1.0 + gamma1 - sol.z_star);
  sol.gamma_d =
      gamma1 / (1.0 + c * (1.0 - sol.alpha_star) / sol.alpha_star);
  sol.rate = 0.5 * (1.0 - sol.alpha_star) * std::log2(1.0 + sol.gamma_d);
  sol.pr = 2.0 * sol.alpha_star * params.eta * params.ps * squared_norm(h) /
           (1.0 - sol.alpha_star);
  return sol;
}

double stationarity_residual(double alpha, double gamma1, double c) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("stationarity_residual: alpha must be in (0, 1)");
  }
  const double mix = alpha + c * (1.0 - alpha);
  const double lhs =
      gamma1 * c * (1.0 - alpha) / ((mix + gamma1 * alpha) * mix);
  return lhs - std::log(1.0 + gamma1 * alpha / mix);
}

}  // namespace wpr
