#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <variant>

#include "doctest.h"
#include "wpr/channels.hpp"
#include "wpr/fd_optimizer.hpp"
#include "wpr/harness.hpp"
#include "wpr/link_model.hpp"

using namespace wpr;

namespace {

doctest::Approx rel(double value, double tol) {
  return doctest::Approx(value).epsilon(tol).scale(0.0);
}

ChannelSet default_channels() { return make_channel_set(GeometryConfig{}); }

double rel_diff(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  if (scale == 0.0) return 0.0;
  return std::abs(x - y) / scale;
}

// Distance from v to the span of {g, f} after orthonormalizing the pair.
double span_residual(const ComplexVector& v, const ComplexVector& g,
                     const ComplexVector& f) {
  const ComplexVector u1 = mrt_vector(g);
  ComplexVector w = f;
  const Complex c1 = inner(u1, w);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c1 * u1[i];
  ComplexVector r = v;
  const Complex p1 = inner(u1, v);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p1 * u1[i];
  if (norm(w) > 1e-12 * norm(f)) {
    const ComplexVector u2 = scaled(w, Complex{1.0 / norm(w), 0.0});
    const Complex p2 = inner(u2, v);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p2 * u2[i];
  }
  return norm(r);
}

}  // namespace

TEST_CASE("closed form at the default operating point") {
  const SystemParams params;
  const ChannelSet ch = default_channels();
  const SolveOutcome out = solve_closed_form(params, ch);
  const FdSolution* sol = solved(out);
  REQUIRE(sol != nullptr);

  CHECK(sol->pr_star == rel(2.6547665374836465e-6, 1e-12));
  CHECK(sol->gamma2_star == rel(5.304529356246596, 1e-12));
  CHECK(sol->gamma2_star == rel(5.3045, 1e-3));
  CHECK(sol->gamma_d == rel(5.304512635018782, 1e-12));
  CHECK(sol->rate == rel(1.3281924242761278, 1e-12));
  CHECK(sol->alpha1 == rel(0.8948489444543976, 1e-12));
  CHECK(sol->alpha2 == rel(0.0014573304937730608, 1e-12));
  CHECK(sol->cos_theta == rel(0.9906432861328254, 1e-12));
  CHECK_FALSE(sol->near_singular);

  CHECK(norm(sol->v_r_star) == rel(1.0, 1e-12));
  CHECK(sol->alpha1 >= 0.0);
  CHECK(sol->alpha2 >= 0.0);

  SUBCASE("internal consistency of the reported fields") {
    const double gamma2_eval =
        second_hop_snr(sol->pr_star, sol->v_r_star, ch.g, params.sigma_d2);
    CHECK(rel_diff(gamma2_eval, sol->gamma2_star) <= 1e-10);
    const double gamma1 = first_hop_snr(params, ch.h);
    CHECK(rel_diff(sol->gamma_d, end_to_end_snr(gamma1, sol->gamma2_star)) <=
          1e-12);
    CHECK(sol->rate == rel(throughput(sol->gamma_d), 1e-15));
  }

  SUBCASE("phase alignment and subspace structure") {
    const Complex fv = inner(ch.f, sol->v_r_star);
    CHECK(fv.real() >= 0.0);
    CHECK(std::abs(fv.imag()) <= 1e-12);
    CHECK(span_residual(sol->v_r_star, ch.g, ch.f) <= 1e-10);
  }

  SUBCASE("causality constraint is tight at the optimum") {
    const FeasiblePower fp =
        feasible_max_power(params, ch.h, ch.f, sol->v_r_star);
    REQUIRE(fp.is_bounded());
    CHECK(rel_diff(sol->pr_star, *fp.pr_max) <= 1e-9);
  }

  SUBCASE("recycling strictly beats the no-loop harvest") {
    CHECK(sol->pr_star > params.eta * params.ps * squared_norm(ch.h));
  }
}

TEST_CASE("zero loop channel collapses to matched filtering, exactly") {
  const SystemParams params;
  GeometryConfig geom;
  geom.beta_rr_db = -std::numeric_limits<double>::infinity();
  const ChannelSet ch = make_channel_set(geom);
  REQUIRE(is_zero_vector(ch.f));

  const double expected_pr = params.eta * params.ps * squared_norm(ch.h);
  const ComplexVector mrt = mrt_vector(ch.g);

  for (const SolveOutcome& out :
       {solve_closed_form(params, ch), solve_matrix_path(params, ch)}) {
    const FdSolution* sol = solved(out);
    REQUIRE(sol != nullptr);
    CHECK(sol->pr_star == expected_pr);
    REQUIRE(sol->v_r_star.size() == mrt.size());
    for (std::size_t i = 0; i < mrt.size(); ++i) {
      CHECK(sol->v_r_star[i] == mrt[i]);
    }
    CHECK(sol->gamma2_star ==
          rel(expected_pr * squared_norm(ch.g) / params.sigma_d2, 1e-15));
    CHECK(sol->cos_theta == 0.0);
    CHECK_FALSE(sol->near_singular);
  }
}

TEST_CASE("orthogonal loop still helps through its alpha2 component") {
  SystemParams params;
  ChannelSet ch;
  ch.h = make_los_channel(2, 0.5, 10.0, -60.0);
  ch.g = ComplexVector{{1e-3, 0.0}, {1e-3, 0.0}};
  ch.f = ComplexVector{{0.17782794100389226, 0.0}, {-0.17782794100389226, 0.0}};
  REQUIRE(std::abs(inner(ch.f, ch.g)) == 0.0);

  const SolveOutcome out = solve_closed_form(params, ch);
  const FdSolution* sol = solved(out);
  REQUIRE(sol != nullptr);
  CHECK(sol->cos_theta == 0.0);
  CHECK(sol->alpha2 > 0.0);
  CHECK(std::abs(inner(ch.f, sol->v_r_star)) > 0.0);

  // At 90 degrees the aligned term drops out and gamma2 reduces to
  // (1 + 1/gamma1) a ||g||^2 / (sigma_d^2 margin).
  const double h2 = squared_norm(ch.h);
  const double one_plus = 1.0 + params.sigma_r2 / (params.ps * h2);
  const double a = params.eta * params.ps * h2;
  const double margin = one_plus - params.eta * squared_norm(ch.f);
  const double direct =
      one_plus * a * squared_norm(ch.g) / (params.sigma_d2 * margin);
  CHECK(sol->gamma2_star == rel(direct, 1e-12));

  // Strictly better than severing the loop.
  const double no_loop = a * squared_norm(ch.g) / params.sigma_d2;
  CHECK(no_loop == rel(3.2, 1e-9));
  CHECK(sol->gamma2_star > no_loop * (1.0 + 1e-3));
}

TEST_CASE("non-contractive recycling reports unbounded, never a number") {
  const SystemParams params;
  GeometryConfig geom;
  geom.beta_rr_db = 3.0;
  const ChannelSet ch = make_channel_set(geom);

  const SolveOutcome cf = solve_closed_form(params, ch);
  const SolveOutcome mp = solve_matrix_path(params, ch);
  REQUIRE(std::holds_alternative<UnboundedPower>(cf));
  REQUIRE(std::holds_alternative<UnboundedPower>(mp));
  CHECK_FALSE(std::get<UnboundedPower>(cf).diagnostic.empty());
  CHECK_FALSE(std::get<UnboundedPower>(mp).diagnostic.empty());
}

TEST_CASE("near-singular margin is flagged but still solved") {
  SystemParams params;
  params.eta = 1.0;
  ChannelSet ch;
  ch.h = ComplexVector{{1.0, 0.0}};
  ch.g = ComplexVector{{1e-3, 0.0}};
  ch.f = ComplexVector{{std::sqrt(1.0 + 5e-13), 0.0}};

  for (const SolveOutcome& out :
       {solve_closed_form(params, ch), solve_matrix_path(params, ch)}) {
    const FdSolution* sol = solved(out);
    REQUIRE(sol != nullptr);
    CHECK(sol->near_singular);
    CHECK(std::isfinite(sol->pr_star));
    CHECK(sol->pr_star > 0.0);
  }

  const SolveOutcome base_out =
      solve_closed_form(SystemParams{}, default_channels());
  const FdSolution* base = solved(base_out);
  REQUIRE(base != nullptr);
  CHECK_FALSE(base->near_singular);
}

TEST_CASE("degenerate channels are rejected as such") {
  const SystemParams params;
  ChannelSet ch = default_channels();
  ch.h = ComplexVector{{0.0, 0.0}, {0.0, 0.0}};
  CHECK(std::holds_alternative<DegenerateChannel>(solve_closed_form(params, ch)));
  CHECK(std::holds_alternative<DegenerateChannel>(solve_matrix_path(params, ch)));

  ch = default_channels();
  ch.g = ComplexVector{{0.0, 0.0}, {0.0, 0.0}};
  CHECK(std::holds_alternative<DegenerateChannel>(solve_closed_form(params, ch)));
  CHECK(std::holds_alternative<DegenerateChannel>(solve_matrix_path(params, ch)));
}

TEST_CASE("zero source power yields the silent solution") {
  SystemParams params;
  params.ps = 0.0;
  const ChannelSet ch = default_channels();
  for (const SolveOutcome& out :
       {solve_closed_form(params, ch), solve_matrix_path(params, ch)}) {
    const FdSolution* sol = solved(out);
    REQUIRE(sol != nullptr);
    CHECK(sol->pr_star == 0.0);
    CHECK(sol->gamma2_star == 0.0);
    CHECK(sol->rate == 0.0);
    CHECK(norm(sol->v_r_star) == rel(1.0, 1e-12));
  }
}

TEST_CASE("the two solution paths agree on 200 random instances") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const GeometryConfig geom = random_geometry(rng);
    const ChannelSet ch = make_channel_set(geom);
    const SystemParams params;

    const SolveOutcome cf_out = solve_closed_form(params, ch);
    const SolveOutcome mp_out = solve_matrix_path(params, ch);
    const FdSolution* cf = solved(cf_out);
    const FdSolution* mp = solved(mp_out);
    REQUIRE(cf != nullptr);
    REQUIRE(mp != nullptr);

    CHECK(rel_diff(cf->gamma2_star, mp->gamma2_star) <= 1e-9);
    CHECK(rel_diff(cf->pr_star, mp->pr_star) <= 1e-9);
    CHECK(rel_diff(cf->alpha1, mp->alpha1) <= 1e-9);
    CHECK(rel_diff(cf->alpha2, mp->alpha2) <= 1e-9);
    CHECK(cf->alpha1 >= 0.0);
    CHECK(cf->alpha2 >= 0.0);
    CHECK(std::abs(inner(cf->v_r_star, mp->v_r_star)) >= 1.0 - 1e-9);

    CHECK(std::abs(inner(ch.f, cf->v_r_star).imag()) <= 1e-9);
    CHECK(std::abs(inner(ch.f, mp->v_r_star).imag()) <= 1e-9);
    CHECK(span_residual(cf->v_r_star, ch.g, ch.f) <= 1e-10);

    const FeasiblePower fp =
        feasible_max_power(params, ch.h, ch.f, cf->v_r_star);
    REQUIRE(fp.is_bounded());
    CHECK(rel_diff(cf->pr_star, *fp.pr_max) <= 1e-9);
  }
}

TEST_CASE("matrix-path intermediates satisfy the rank-one identities") {
  const SystemParams params;
  const ChannelSet ch = default_channels();
  MatrixPathIntermediates mid;
  const SolveOutcome out = solve_matrix_path(params, ch, &mid);
  const FdSolution* sol = solved(out);
  REQUIRE(sol != nullptr);

  const double a = params.eta * params.ps * squared_norm(ch.h);
  const double lambda = 1.0 - a * squared_norm(mid.f_hat);
  REQUIRE(lambda > 0.0);

  SUBCASE("b is the scaled half-inverse of f_hat") {
    const double scale = a / std::sqrt(lambda);
    REQUIRE(mid.b_vec.size() == mid.f_hat.size());
    for (std::size_t i = 0; i < mid.b_vec.size(); ++i) {
      CHECK(std::abs(mid.b_vec[i] - scale * mid.f_hat[i]) <=
            1e-12 * std::abs(scale * mid.f_hat[i]) + 1e-30);
    }
    CHECK(mid.beta_scalar == rel(a + squared_norm(mid.b_vec), 1e-12));
    CHECK(mid.beta_scalar == rel(a / lambda, 1e-12));
  }

  SUBCASE("psi equals the angle of g^H f") {
    CHECK(std::abs(mid.psi - std::arg(inner(ch.g, ch.f))) <= 1e-12);
  }

  SUBCASE("dense F times the unnormalized optimizer matches the construction") {
    const std::size_t n = ch.g.size();
    REQUIRE(mid.f_matrix.size() == n);
    const Complex g_weight = std::polar(sol->alpha1, mid.psi);
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex fv{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) {
        fv += mid.f_matrix[i][j] * mid.v_unscaled[j];
      }
      const Complex expected = a * mid.f_hat[i] + g_weight * ch.g[i];
      worst = std::max(worst, std::abs(fv - expected));
      scale = std::max(scale, std::abs(expected));
    }
    CHECK(worst <= 1e-12 * scale);
  }

  SUBCASE("zero loop intermediates are the identity transform") {
    ChannelSet zch = ch;
    zch.f = ComplexVector{{0.0, 0.0}, {0.0, 0.0}};
    MatrixPathIntermediates zid;
    const SolveOutcome zout = solve_matrix_path(params, zch, &zid);
    const FdSolution* zsol = solved(zout);
    REQUIRE(zsol != nullptr);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(zid.f_matrix[i][j] == (i == j ? Complex{1.0, 0.0}
                                            : Complex{0.0, 0.0}));
      }
    }
    CHECK(is_zero_vector(zid.b_vec));
    CHECK(zid.beta_scalar == a);
    CHECK(zid.psi == 0.0);
    CHECK(squared_norm(zid.v_unscaled) == rel(a, 1e-12));
  }
}

TEST_CASE("gains grow with the loop-destination alignment") {
  const SystemParams params;
  ChannelSet ch;
  ch.h = make_los_channel(2, 0.5, 10.0, -60.0);
  ch.g = ComplexVector{{1e-3, 0.0}, {0.0, 0.0}};

  double prev_gamma2 = 0.0;
  double prev_pr = 0.0;
  for (const double c : {0.0, 0.3, 0.6, 0.9, 0.99}) {
    ch.f = ComplexVector{{0.2 * c, 0.0},
                         {0.2 * std::sqrt(1.0 - c * c), 0.0}};
    const SolveOutcome out = solve_closed_form(params, ch);
    const FdSolution* sol = solved(out);
    REQUIRE(sol != nullptr);
    CHECK(sol->cos_theta == rel(c, 1e-12).scale(1e-15));
    CHECK(sol->gamma2_star > prev_gamma2);
    CHECK(sol->pr_star > prev_pr);
    prev_gamma2 = sol->gamma2_star;
    prev_pr = sol->pr_star;
  }
}

TEST_CASE("scalar relay power allocation") {
  SystemParams params;
  const ComplexVector h{Complex{std::sqrt(2.0e-6), 0.0}};

  SUBCASE("reference point") {
    const SisoOutcome out =
        siso_optimal_power(params, h, Complex{0.17782794100389226, 0.0});
    const SisoSolution* sol = std::get_if<SisoSolution>(&out);
    REQUIRE(sol != nullptr);
    CHECK(sol->pr_star == rel(2.2625e-6, 1e-3));
    CHECK(sol->pr_star == rel(2.262475441640456e-6, 1e-9));
  }

  SUBCASE("only the loop magnitude matters") {
    const SisoOutcome real_out =
        siso_optimal_power(params, h, Complex{0.17782794100389226, 0.0});
    const SisoOutcome rot_out = siso_optimal_power(
        params, h, std::polar(0.17782794100389226, 1.1));
    const SisoSolution* a = std::get_if<SisoSolution>(&real_out);
    const SisoSolution* b = std::get_if<SisoSolution>(&rot_out);
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(a->pr_star == rel(b->pr_star, 1e-14));
  }

  SUBCASE("agrees with the feasibility bound under a trivial beamformer") {
    const Complex f{0.17782794100389226, 0.0};
    const SisoOutcome out = siso_optimal_power(params, h, f);
    const SisoSolution* sol = std::get_if<SisoSolution>(&out);
    REQUIRE(sol != nullptr);
    const FeasiblePower fp = feasible_max_power(
        params, h, ComplexVector{f}, ComplexVector{Complex{1.0, 0.0}});
    REQUIRE(fp.is_bounded());
    CHECK(rel_diff(sol->pr_star, *fp.pr_max) <= 1e-12);
  }

  SUBCASE("zero loop returns the base harvest exactly") {
    const SisoOutcome out = siso_optimal_power(params, h, Complex{0.0, 0.0});
    const SisoSolution* sol = std::get_if<SisoSolution>(&out);
    REQUIRE(sol != nullptr);
    CHECK(sol->pr_star == params.eta * params.ps * squared_norm(h));
  }

  SUBCASE("non-contractive loop and degenerate channel") {
    const SisoOutcome unbounded =
        siso_optimal_power(params, h, Complex{1.2, 0.0});
    CHECK(std::holds_alternative<UnboundedPower>(unbounded));
    const SisoOutcome degen = siso_optimal_power(
        params, ComplexVector{Complex{0.0, 0.0}}, Complex{0.1, 0.0});
    CHECK(std::holds_alternative<DegenerateChannel>(degen));
  }

  SUBCASE("zero source power") {
    params.ps = 0.0;
    const SisoOutcome out = siso_optimal_power(params, h, Complex{0.1, 0.0});
    const SisoSolution* sol = std::get_if<SisoSolution>(&out);
    REQUIRE(sol != nullptr);
    CHECK(sol->pr_star == 0.0);
  }
}
