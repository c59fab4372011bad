#pragma once

#include "wpr/link_model.hpp"

namespace wpr {

/// Optimal time split for the time-switching relaying benchmark.
struct TsrSolution {
  double alpha_star;  // harvesting fraction, in (0, 1)
  double z_star;      // auxiliary root, in (1, 1 + gamma1)
  double c_const;     // C = (1 + gamma1) sigma_d^2 / (2 eta P_s ||h||^2 ||g||^2)
  double pr;          // relay transmit power during forwarding, W
  double gamma_d;     // destination SNR
  double rate;        // (1 - alpha)/2 log2(1 + gamma_d), bps/Hz
};

/// Final bisection bracket, exposed so callers can confirm the sign change.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
};

double tsr_constant(const SystemParams& params, const ComplexVector& h,
                    const ComplexVector& g);

// Auxiliary function whose unique root in (1, 1 + gamma1) locates the
// optimal split:
//   f(z) = gamma1 C z ln z + (C - 1) z^2 - z (gamma1 C + 2C - 2 gamma1 - 2)
//          - (gamma1 + 1)(gamma1 + 1 - C).
// Terms reach ~1e17 at realistic scales while root-neighborhood values are
// small, so evaluation runs in extended precision with the rank-balanced
// grouping (growing terms first, the constant product last).
double f_z(double z, double gamma1, double c);

// Bisection on (1, 1 + gamma1) using f(1) < 0 < f(1 + gamma1). Stops when the
// bracket's relative width falls below tol (or after 200 halvings). Throws
// std::logic_error if the sign facts fail, which indicates corrupted inputs.
double solve_z_star(double gamma1, double c, double tol = 1e-12,
                    RootBracket* bracket = nullptr);

TsrSolution solve_tsr(const SystemParams& params, const ComplexVector& h,
                      const ComplexVector& g, double tol = 1e-12);

// First-order optimality residual for the time-split objective,
//   gamma1 c (1-a) / ((a + c(1-a) + gamma1 a)(a + c(1-a)))
//     - ln(1 + gamma1 a / (a + c(1-a))),
// which vanishes at the optimal split.
double stationarity_residual(double alpha, double gamma1, double c);

}  // namespace wpr
