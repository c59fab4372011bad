#include "wpr/fd_optimizer.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

namespace wpr {

namespace {

// Rotate v by a unit scalar so the inner product with the reference channel
// is real and nonnegative: f first, g when the f product vanishes. Makes
// beamformers comparable across solution paths.
void align_global_phase(ComplexVector& v, const ComplexVector& f,
                        const ComplexVector& g) {
  Complex ref = inner(f, v);
  if (std::abs(ref) == 0.0) ref = inner(g, v);
  if (std::abs(ref) == 0.0) return;
  const Complex rot = std::conj(ref) / std::abs(ref);
  for (Complex& c : v) c *= rot;
}

FdSolution finish(const ChannelSet& ch, ComplexVector v_unscaled,
                  double gamma1, double gamma2, double alpha1, double alpha2,
                  double cos_theta, bool near_singular) {
  FdSolution sol;
  sol.pr_star = squared_norm(v_unscaled);
  align_global_phase(v_unscaled, ch.f, ch.g);
  sol.v_r_star = scaled(v_unscaled, Complex{1.0 / norm(v_unscaled), 0.0});
  sol.gamma2_star = gamma2;
  sol.gamma_d = end_to_end_snr(gamma1, gamma2);
  sol.rate = throughput(sol.gamma_d);
  sol.alpha1 = alpha1;
  sol.alpha2 = alpha2;
  sol.cos_theta = cos_theta;
  sol.near_singular = near_singular;
  return sol;
}

// P_s = 0 limit: nothing harvested, nothing forwarded.
FdSolution zero_power_solution(const ChannelSet& ch) {
  FdSolution sol;
  sol.pr_star = 0.0;
  sol.v_r_star = mrt_vector(ch.g);
  sol.gamma2_star = 0.0;
  sol.gamma_d = 0.0;
  sol.rate = 0.0;
  sol.cos_theta = effective_angle_cos(ch.f, ch.g);
  return sol;
}

// f = 0 collapse. pr_star is set to the harvested power expression itself so
// the no-recycling case is exact, not a rounded norm of the constructed v.
FdSolution no_recycling_solution(const SystemParams& params,
                                 const ChannelSet& ch, double h2, double g2,
                                 double gamma1, double alpha1, double alpha2,
                                 bool near_singular) {
  FdSolution sol;
  sol.pr_star = params.eta * params.ps * h2;
  sol.v_r_star = mrt_vector(ch.g);
  sol.gamma2_star = sol.pr_star * g2 / params.sigma_d2;
  sol.gamma_d = end_to_end_snr(gamma1, sol.gamma2_star);
  sol.rate = throughput(sol.gamma_d);
  sol.alpha1 = alpha1;
  sol.alpha2 = alpha2;
  sol.cos_theta = 0.0;
  sol.near_singular = near_singular;
  return sol;
}

}  // namespace

SolveOutcome solve_closed_form(const SystemParams& params,
                               const ChannelSet& ch) {
  params.validate();
  const double h2 = squared_norm(ch.h);
  const double g2 = squared_norm(ch.g);
  if (h2 == 0.0) return DegenerateChannel{"zero source-relay channel h"};
  if (g2 == 0.0) return DegenerateChannel{"zero relay-destination channel g"};
  if (params.ps == 0.0) return zero_power_solution(ch);

  const double f2 = squared_norm(ch.f);
  const double inv_gamma1 = params.sigma_r2 / (params.ps * h2);
  const double one_plus = 1.0 + inv_gamma1;
  const double margin = one_plus - params.eta * f2;
  if (margin <= 0.0) {
    return UnboundedPower{
        "eta ||f||^2 >= 1 + 1/gamma1: recycling loop is non-contractive"};
  }
  const bool near_singular = margin < kNearSingularMargin;
  const double gamma1 = 1.0 / inv_gamma1;

  if (f2 == 0.0) {
    const double alpha1 = std::sqrt(params.eta * params.ps * h2 / g2);
    const double alpha2 =
        params.eta * std::sqrt(h2) * std::sqrt(one_plus * params.ps) / margin;
    return no_recycling_solution(params, ch, h2, g2, gamma1, alpha1, alpha2,
                                 near_singular);
  }

  const double cos_theta = effective_angle_cos(ch.f, ch.g);
  const double sin2_theta = 1.0 - cos_theta * cos_theta;
  const double s_term = std::sqrt(one_plus - params.eta * f2 * sin2_theta);
  const double alpha1 = std::sqrt(h2) *
                        std::sqrt(one_plus * params.eta * params.ps) /
                        (std::sqrt(g2) * s_term);
  const double alpha2 =
      params.eta * std::sqrt(h2) * std::sqrt(one_plus * params.ps) / margin *
      (1.0 + std::sqrt(params.eta) * std::sqrt(f2) * cos_theta / s_term);

  const Complex phase = std::polar(1.0, std::arg(inner(ch.g, ch.f)));
  ComplexVector v(ch.g.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = alpha1 * phase * ch.g[i] + alpha2 * ch.f[i];
  }

  const double aligned =
      std::sqrt(params.eta) * std::sqrt(f2) * cos_theta + s_term;
  const double gamma2 = one_plus * params.eta * params.ps * h2 * g2 /
                        (params.sigma_d2 * margin * margin) * aligned * aligned;
  return finish(ch, std::move(v), gamma1, gamma2, alpha1, alpha2, cos_theta,
                near_singular);
}

SolveOutcome solve_matrix_path(const SystemParams& params, const ChannelSet& ch,
                               MatrixPathIntermediates* intermediates) {
  params.validate();
  const double h2 = squared_norm(ch.h);
  const double g2 = squared_norm(ch.g);
  if (h2 == 0.0) return DegenerateChannel{"zero source-relay channel h"};
  if (g2 == 0.0) return DegenerateChannel{"zero relay-destination channel g"};
  if (params.ps == 0.0) return zero_power_solution(ch);

  const double a_power = params.ps * h2 + params.sigma_r2;
  const double a = params.eta * params.ps * h2;
  const std::size_t n = ch.f.size();

  ComplexVector f_hat = scaled(ch.f, Complex{1.0 / std::sqrt(a_power), 0.0});
  const double fhat2 = squared_norm(f_hat);
  const double shrink = a * fhat2;
  if (shrink >= 1.0) {
    return UnboundedPower{
        "a ||f_hat||^2 >= 1: recycling loop is non-contractive"};
  }
  const double lambda = 1.0 - shrink;  // eigenvalue of F along f_hat
  const double inv_gamma1 = params.sigma_r2 / (params.ps * h2);
  const double gamma1 = 1.0 / inv_gamma1;
  const bool near_singular =
      (1.0 + inv_gamma1 - params.eta * squared_norm(ch.f)) <
      kNearSingularMargin;

  const auto fill_dense_matrix = [&]() {
    intermediates->f_matrix.assign(n, ComplexVector(n, Complex{0.0, 0.0}));
    for (std::size_t i = 0; i < n; ++i) {
      intermediates->f_matrix[i][i] = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        intermediates->f_matrix[i][j] -= a * f_hat[i] * std::conj(f_hat[j]);
      }
    }
  };

  if (fhat2 == 0.0) {
    if (intermediates != nullptr) {
      intermediates->f_hat = f_hat;
      fill_dense_matrix();
      intermediates->b_vec = ComplexVector(n, Complex{0.0, 0.0});
      intermediates->beta_scalar = a;
      intermediates->psi = 0.0;
      intermediates->v_unscaled =
          scaled(mrt_vector(ch.g), Complex{std::sqrt(a), 0.0});
    }
    const double alpha1 = std::sqrt(a / g2);
    return no_recycling_solution(params, ch, h2, g2, gamma1, alpha1, 0.0,
                                 near_singular);
  }

  // F^p x = x + (lambda^p - 1)(u^H x) u with u the f_hat direction.
  const double fhat_norm = std::sqrt(fhat2);
  const ComplexVector u = scaled(f_hat, Complex{1.0 / fhat_norm, 0.0});
  const auto apply_f_power = [&](double p, const ComplexVector& x) {
    ComplexVector y = x;
    const Complex proj = inner(u, x) * (std::pow(lambda, p) - 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += proj * u[i];
    return y;
  };

  const ComplexVector b = scaled(apply_f_power(-0.5, f_hat), Complex{a, 0.0});
  const double beta = a + squared_norm(b);
  const ComplexVector f_inv_half_b = apply_f_power(-0.5, b);
  const Complex g_dot_fb = inner(ch.g, f_inv_half_b);
  const double psi = std::abs(g_dot_fb) == 0.0 ? 0.0 : std::arg(g_dot_fb);
  const ComplexVector f_inv_half_g = apply_f_power(-0.5, ch.g);
  const double f_inv_half_g_norm = norm(f_inv_half_g);
  const ComplexVector f_inv_g = apply_f_power(-1.0, ch.g);
  const ComplexVector f_inv_fhat = apply_f_power(-1.0, f_hat);

  const Complex g_weight = std::polar(std::sqrt(beta) / f_inv_half_g_norm, psi);
  ComplexVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = a * f_inv_fhat[i] + g_weight * f_inv_g[i];
  }

  // Second-hop SNR from the constructed beamformer, not the closed-form
  // expression, so the two paths stay independent.
  const double gamma2 = std::norm(inner(ch.g, v)) / params.sigma_d2;

  const double alpha1 = std::sqrt(beta) / f_inv_half_g_norm;
  const double alpha2 = a / (lambda * std::sqrt(a_power)) *
                        (1.0 + std::sqrt(beta) * std::abs(inner(ch.g, f_hat)) /
                                   f_inv_half_g_norm);
  const double cos_theta = effective_angle_cos(ch.f, ch.g);

  if (intermediates != nullptr) {
    intermediates->f_hat = f_hat;
    fill_dense_matrix();
    intermediates->b_vec = b;
    intermediates->beta_scalar = beta;
    intermediates->psi = psi;
    intermediates->v_unscaled = v;
  }

  return finish(ch, std::move(v), gamma1, gamma2, alpha1, alpha2, cos_theta,
                near_singular);
}

SisoOutcome siso_optimal_power(const SystemParams& params,
                               const ComplexVector& h, Complex f_scalar) {
  params.validate();
  const double h2 = squared_norm(h);
  if (h2 == 0.0) return DegenerateChannel{"zero source-relay channel h"};
  if (params.ps == 0.0) return SisoSolution{0.0};

  const double inv_gamma1 = params.sigma_r2 / (params.ps * h2);
  const double ratio = std::sqrt(params.eta) * std::abs(f_scalar) /
                       std::sqrt(1.0 + inv_gamma1);
  if (ratio >= 1.0) {
    return UnboundedPower{
        "sqrt(eta)|f| >= sqrt(1 + 1/gamma1): recycling loop is "
        "non-contractive"};
  }
  const double root = 1.0 - ratio;
  return SisoSolution{params.eta * params.ps * h2 / (root * root)};
}

}  // namespace wpr
