#pragma once

#include <stdexcept>
#include <variant>

#include "wpr/link_model.hpp"

namespace wpr {

/// Brute-force search controls. Each refinement round shrinks the search
/// window 10x around the incumbent and the step sizes by the same factor.
struct GridSpec {
  double angular_resolution = 1e-3;  // radians, step in the polar angle t
  double phase_resolution = 1e-3;    // radians, step in the relative phase
  int refine_rounds = 2;

  void validate() const;  // throws std::invalid_argument
};

/// Raised when the energy-causality constraint admits unbounded power
/// anywhere in the searched region; no finite incumbent is meaningful then.
struct UnboundedRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  double best_value = 0.0;
  std::variant<ComplexVector, double> best_point;  // beamformer or alpha
  // How far the true optimum can exceed best_value, from a Lipschitz bound
  // over the coarsest full-coverage grid. Refinement rounds improve
  // best_value but cannot tighten this certificate.
  double certified_gap_bound = 0.0;

  const ComplexVector& beamformer() const {
    return std::get<ComplexVector>(best_point);
  }
  double alpha() const { return std::get<double>(best_point); }
};

// Exhaustive second-hop SNR search over unit beamformers
// v = cos(t) u1 + sin(t) e^{j phi} u2, t in [0, pi/2], phi in [0, 2pi),
// with {u1, u2} an orthonormal basis of span{g, f}; the power for each v is
// the tight energy-causality value. The span restriction is sufficient for
// any antenna count; full_sphere searches all of C^2 instead (requires
// exactly 2 antennas) and exists to validate the restriction experimentally.
OracleResult grid_search_p1(const SystemParams& params, const ChannelSet& ch,
                            const GridSpec& spec, bool full_sphere = false);

// Dense scan of the time-split objective
// R(alpha) = ((1 - alpha)/2) log2(1 + gamma1 / (1 + c (1 - alpha)/alpha))
// on a uniform interior grid plus one refinement round around the incumbent.
OracleResult scan_p2(double gamma1, double c, int num_points);

}  // namespace wpr
