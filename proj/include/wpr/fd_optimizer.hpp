#pragma once

#include <string>
#include <variant>

#include "wpr/channels.hpp"
#include "wpr/link_model.hpp"

namespace wpr {

// Joint relay power / beamformer optimum for the full-duplex protocol with
// self-energy recycling, solved along two independent routes: a direct
// closed form and a quadratic-transform construction used for
// cross-verification.

struct FdSolution {
  double pr_star;          // optimal relay power, W
  ComplexVector v_r_star;  // unit-norm transmit beamformer
  double gamma2_star;      // second-hop SNR at the optimum
  double gamma_d;          // end-to-end SNR
  double rate;             // bps/Hz
  double alpha1 = 0.0;     // nonnegative weight on the g direction
  double alpha2 = 0.0;     // nonnegative weight on the f direction
  double cos_theta = 0.0;  // effective angle between f and g
  // Set when 1 + 1/gamma1 - eta ||f||^2 is positive but below 1e-12: the
  // optimum is finite but numerically fragile.
  bool near_singular = false;
};

/// The recycling loop returns at least as much energy as transmission
/// spends; no finite optimum exists and none is fabricated.
struct UnboundedPower {
  std::string diagnostic;
};

struct DegenerateChannel {
  std::string diagnostic;
};

using SolveOutcome = std::variant<FdSolution, UnboundedPower, DegenerateChannel>;

inline const FdSolution* solved(const SolveOutcome& o) {
  return std::get_if<FdSolution>(&o);
}

// Finite-optimum margin below which a solution is flagged near-singular.
inline constexpr double kNearSingularMargin = 1e-12;

using ComplexMatrix = std::vector<ComplexVector>;

/// Intermediates of the matrix-transformation route, exposed for
/// verification.
struct MatrixPathIntermediates {
  ComplexVector f_hat;       // f / sqrt(A)
  ComplexMatrix f_matrix;    // I - a f_hat f_hat^H (Hermitian)
  ComplexVector b_vec;       // a F^{-1/2} f_hat
  double beta_scalar = 0.0;  // a + ||b||^2
  double psi = 0.0;          // angle of g^H F^{-1/2} b
  ComplexVector v_unscaled;  // optimizer before unit normalization
};

// Production path: evaluates the closed-form optimum directly (no matrix
// work). Reports UnboundedPower when 1 + 1/gamma1 - eta ||f||^2 <= 0 and
// DegenerateChannel on zero h or g.
SolveOutcome solve_closed_form(const SystemParams& params,
                               const ChannelSet& ch);

// Verification path: builds the optimizer through the rank-one matrix
// transform F = I - a f_hat f_hat^H, with F^{+-1/2} taken analytically
// from the rank-one eigenstructure. Same outcome contract as
// solve_closed_form; the two must agree.
SolveOutcome solve_matrix_path(const SystemParams& params, const ChannelSet& ch,
                               MatrixPathIntermediates* intermediates = nullptr);

struct SisoSolution {
  double pr_star;  // W
};

using SisoOutcome = std::variant<SisoSolution, UnboundedPower, DegenerateChannel>;

// Single-transmit-antenna special case: the loop channel collapses to a
// scalar and only the power allocation remains,
// pr = eta P_s ||h||^2 / (1 - sqrt(eta)|f| / sqrt(1 + 1/gamma1))^2.
// Solved only when sqrt(eta)|f| < sqrt(1 + 1/gamma1).
SisoOutcome siso_optimal_power(const SystemParams& params,
                               const ComplexVector& h, Complex f_scalar);

}  // namespace wpr
