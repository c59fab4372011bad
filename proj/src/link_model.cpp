#include "wpr/link_model.hpp"

#include <cmath>
#include <stdexcept>

namespace wpr {

namespace {

void require_unit_norm(const ComplexVector& v_r) {
  if (std::abs(norm(v_r) - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("beamformer must be unit norm (within 1e-9)");
  }
}

}  // namespace

void SystemParams::validate() const {
  if (!(ps >= 0.0) || !std::isfinite(ps)) {
    throw std::invalid_argument("ps must be finite and >= 0");
  }
  if (!(sigma_r2 > 0.0)) throw std::invalid_argument("sigma_r2 must be > 0");
  if (!(sigma_d2 > 0.0)) throw std::invalid_argument("sigma_d2 must be > 0");
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must be in (0, 1]");
  }
  if (!(t_block > 0.0)) throw std::invalid_argument("t_block must be > 0");
}

LinkBudget link_budget(const SystemParams& params, const ComplexVector& h) {
  params.validate();
  const double rx = params.ps * squared_norm(h);
  return LinkBudget{rx / params.sigma_r2, rx + params.sigma_r2,
                    params.eta * rx};
}

std::optional<double> tight_power(double abs_fv, double a, double a_power) {
  const double contraction = std::sqrt(a) * abs_fv / std::sqrt(a_power);
  if (contraction >= 1.0) return std::nullopt;
  const double root = 1.0 - contraction;
  return a / (root * root);
}

ComplexVector mrt_vector(const ComplexVector& h) {
  const double n = norm(h);
  if (n == 0.0) throw std::invalid_argument("mrt_vector: zero channel");
  return scaled(h, Complex{1.0 / n, 0.0});
}

double first_hop_snr(const SystemParams& params, const ComplexVector& h) {
  params.validate();
  return params.ps * squared_norm(h) / params.sigma_r2;
}

double second_hop_snr(double pr, const ComplexVector& v_r,
                      const ComplexVector& g, double sigma_d2) {
  if (pr < 0.0) throw std::invalid_argument("second_hop_snr: pr must be >= 0");
  require_unit_norm(v_r);
  return pr * std::norm(inner(g, v_r)) / sigma_d2;
}

double end_to_end_snr(double gamma1, double gamma2) {
  if (gamma1 < 0.0 || gamma2 < 0.0) {
    throw std::invalid_argument("end_to_end_snr: SNRs must be >= 0");
  }
  return gamma1 * gamma2 / (gamma1 + gamma2 + 1.0);
}

double gamma_d_direct(const SystemParams& params, const ComplexVector& h,
                      const ComplexVector& g, double pr,
                      const ComplexVector& v_r) {
  params.validate();
  if (pr < 0.0) throw std::invalid_argument("gamma_d_direct: pr must be >= 0");
  require_unit_norm(v_r);
  const double rx = params.ps * squared_norm(h);
  const double forwarded = pr * std::norm(inner(g, v_r));
  if (forwarded == 0.0) return 0.0;
  const double a_power = rx + params.sigma_r2;
  return rx / (params.sigma_r2 + params.sigma_d2 * a_power / forwarded);
}

double throughput(double gamma_d) {
  if (gamma_d < 0.0) throw std::invalid_argument("throughput: gamma_d < 0");
  return 0.5 * std::log2(1.0 + gamma_d);
}

double harvested_energy_bound(const SystemParams& params,
                              const ComplexVector& h, const ComplexVector& f,
                              double pr, const ComplexVector& v_r) {
  params.validate();
  if (pr < 0.0) {
    throw std::invalid_argument("harvested_energy_bound: pr must be >= 0");
  }
  require_unit_norm(v_r);
  const double rx = params.ps * squared_norm(h);
  const double a_power = rx + params.sigma_r2;
  const double loop = std::sqrt(pr / a_power) * std::abs(inner(f, v_r));
  return 0.5 * params.t_block * params.eta * rx * (1.0 + loop) * (1.0 + loop);
}

FeasiblePower feasible_max_power(const SystemParams& params,
                                 const ComplexVector& h,
                                 const ComplexVector& f,
                                 const ComplexVector& v_r) {
  require_unit_norm(v_r);
  const LinkBudget budget = link_budget(params, h);
  return FeasiblePower{tight_power(std::abs(inner(f, v_r)),
                                   budget.harvest_scale, budget.a_power)};
}

}  // namespace wpr
