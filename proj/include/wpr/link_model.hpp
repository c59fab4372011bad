#pragma once

#include <optional>

#include "wpr/channels.hpp"

namespace wpr {

struct SystemParams {
  double ps = 1.0;          // source transmit power, W
  double sigma_r2 = 1e-12;  // relay receiver noise power, W
  double sigma_d2 = 1e-12;  // destination noise power, W
  double eta = 0.8;         // harvesting efficiency, (0, 1]
  double t_block = 1.0;     // block duration, s

  void validate() const;  // throws std::invalid_argument
};

// Beamformers must arrive unit-norm; out-of-tolerance callers are rejected
// rather than silently renormalized.
inline constexpr double kUnitNormTol = 1e-9;

/// First-hop quantities reused across the solvers.
struct LinkBudget {
  double gamma1;         // P_s ||h||^2 / sigma_r^2
  double a_power;        // received-signal power P_s ||h||^2 + sigma_r^2
  double harvest_scale;  // eta P_s ||h||^2
};

LinkBudget link_budget(const SystemParams& params, const ComplexVector& h);

/// Largest relay power admitted by energy causality for one beamformer.
/// Empty pr_max means the recycling loop is non-contractive and the
/// constraint admits arbitrarily large power.
struct FeasiblePower {
  std::optional<double> pr_max;  // W when bounded
  bool is_bounded() const { return pr_max.has_value(); }
};

// Tight power from the causality constraint, in scalar form: with
// a = eta P_s ||h||^2 and A the received power, the constraint
// pr <= a (1 + sqrt(pr/A) |f^H v|)^2 has largest root
// a / (1 - sqrt(a) |f^H v| / sqrt(A))^2 when sqrt(a) |f^H v| / sqrt(A) < 1,
// and no finite bound otherwise. Shared by the solvers and the grid oracle.
std::optional<double> tight_power(double abs_fv, double a, double a_power);

ComplexVector mrt_vector(const ComplexVector& h);

double first_hop_snr(const SystemParams& params, const ComplexVector& h);

double second_hop_snr(double pr, const ComplexVector& v_r,
                      const ComplexVector& g, double sigma_d2);

/// gamma1 gamma2 / (gamma1 + gamma2 + 1), the amplify-and-forward cascade.
double end_to_end_snr(double gamma1, double gamma2);

// Destination SNR evaluated in its direct (non-cascaded) form
// P_s||h||^2 / (sigma_r^2 + sigma_d^2 A / (P_r |g^H v_r|^2)).
// Returns 0 when P_r |g^H v_r|^2 == 0 (continuity limit).
double gamma_d_direct(const SystemParams& params, const ComplexVector& h,
                      const ComplexVector& g, double pr,
                      const ComplexVector& v_r);

/// 0.5 log2(1 + gamma_d) in bps/Hz.
double throughput(double gamma_d);

// Harvested energy per block, (T/2) eta P_s ||h||^2
// (1 + sqrt(P_r/A) |f^H v_r|)^2, i.e. the energy-waveform-matched upper
// bound; receiver noise contributes nothing.
double harvested_energy_bound(const SystemParams& params,
                              const ComplexVector& h, const ComplexVector& f,
                              double pr, const ComplexVector& v_r);

FeasiblePower feasible_max_power(const SystemParams& params,
                                 const ComplexVector& h,
                                 const ComplexVector& f,
                                 const ComplexVector& v_r);

}  // namespace wpr
