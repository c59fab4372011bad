#include "wpr/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <thread>
#include <vector>

namespace wpr {

void GridSpec::validate() const {
  if (!(angular_resolution > 0.0)) {
    throw std::invalid_argument("angular_resolution must be > 0");
  }
  if (!(phase_resolution > 0.0)) {
    throw std::invalid_argument("phase_resolution must be > 0");
  }
  if (refine_rounds < 0) {
    throw std::invalid_argument("refine_rounds must be >= 0");
  }
}

namespace {

struct Incumbent {
  double value = -1.0;
  double t = 0.0;
  double phi = 0.0;
};

struct ScanTables {
  std::vector<double> t_vals;
  std::vector<double> phi_vals;
  std::vector<double> cos_phi;
  std::vector<double> sin_phi;
};

// One full pass over the (t, phi) grid. Workers take contiguous t ranges and
// scan them in index order; chunks merge in ascending order with a strict
// improvement test, so the result is the same as a sequential scan for any
// worker count: on ties the lowest t, then the lowest phi, wins.
Incumbent scan_grid(const ScanTables& tab, Complex fu1, Complex fu2,
                    Complex gu1, Complex gu2, double a, double sa,
                    double inv_sd, std::atomic<bool>& unbounded_hit) {
  const std::size_t nt = tab.t_vals.size();
  const std::size_t np = tab.phi_vals.size();

  const auto scan_range = [&](std::size_t i0, std::size_t i1) {
    Incumbent best;
    for (std::size_t i = i0; i < i1; ++i) {
      const double ct = std::cos(tab.t_vals[i]);
      const double st = std::sin(tab.t_vals[i]);
      const double kf = ct * ct * std::norm(fu1) + st * st * std::norm(fu2);
      const double kg = ct * ct * std::norm(gu1) + st * st * std::norm(gu2);
      const Complex mf = std::conj(fu1) * fu2 * (ct * st);
      const Complex mg = std::conj(gu1) * gu2 * (ct * st);
      for (std::size_t j = 0; j < np; ++j) {
        const double cp = tab.cos_phi[j];
        const double sp = tab.sin_phi[j];
        const double fv2 =
            std::max(kf + 2.0 * (mf.real() * cp - mf.imag() * sp), 0.0);
        const double s = sa * std::sqrt(fv2);
        if (s >= 1.0) {
          unbounded_hit.store(true, std::memory_order_relaxed);
          return best;
        }
        const double root = 1.0 - s;
        const double gv2 =
            std::max(kg + 2.0 * (mg.real() * cp - mg.imag() * sp), 0.0);
        const double value = a / (root * root) * gv2 * inv_sd;
        if (value > best.value) {
          best.value = value;
          best.t = tab.t_vals[i];
          best.phi = tab.phi_vals[j];
        }
      }
    }
    return best;
  };

  unsigned workers = std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, 16u);
  if (static_cast<std::size_t>(workers) > nt) {
    workers = static_cast<unsigned>(nt);
  }
  if (workers <= 1) return scan_range(0, nt);

  std::vector<Incumbent> partial(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (nt + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t i0 = std::min(static_cast<std::size_t>(w) * chunk, nt);
    const std::size_t i1 = std::min(i0 + chunk, nt);
    pool.emplace_back([&, w, i0, i1] { partial[w] = scan_range(i0, i1); });
  }
  for (auto& th : pool) th.join();

  Incumbent best;
  for (const Incumbent& p : partial) {
    if (p.value > best.value) best = p;
  }
  return best;
}

std::vector<double> uniform_points(double lo, double width, std::size_t steps,
                                   bool include_end) {
  std::vector<double> pts;
  const std::size_t count = include_end ? steps + 1 : steps;
  pts.reserve(count);
  const double step = width / static_cast<double>(steps);
  for (std::size_t i = 0; i < count; ++i) {
    pts.push_back(lo + static_cast<double>(i) * step);
  }
  return pts;
}

std::size_t step_count(double width, double resolution) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(width / resolution)));
}

}  // namespace

OracleResult grid_search_p1(const SystemParams& params, const ChannelSet& ch,
                            const GridSpec& spec, bool full_sphere) {
  params.validate();
  spec.validate();
  if (is_zero_vector(ch.g)) {
    throw std::invalid_argument("grid_search_p1: zero relay-destination g");
  }

  const LinkBudget budget = link_budget(params, ch.h);
  const double a = budget.harvest_scale;
  const double a_power = budget.a_power;
  const double sa = std::sqrt(a / a_power);
  const double inv_sd = 1.0 / params.sigma_d2;

  // The loop term is maximized at v = f/||f||, which the search region
  // contains, so an unbounded regime is decidable before scanning.
  const double s_max = sa * norm(ch.f);
  if (s_max >= 1.0) {
    throw UnboundedRegime(
        "energy-causality constraint admits unbounded power in the search "
        "region");
  }

  ComplexVector u1, u2;
  bool one_dim = false;
  if (full_sphere) {
    if (ch.g.size() != 2) {
      throw std::invalid_argument(
          "full-sphere search requires exactly 2 antennas");
    }
    u1 = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
    u2 = {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
  } else {
    u1 = mrt_vector(ch.g);
    ComplexVector w = ch.f;
    const Complex proj = inner(u1, ch.f);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * u1[i];
    const double wn = norm(w);
    const double fn = norm(ch.f);
    if (fn == 0.0 || wn <= 1e-12 * fn) {
      // f vanishes or is parallel to g within tolerance: the span is one
      // dimensional and a single representative exhausts it exactly.
      one_dim = true;
    } else {
      u2 = scaled(w, Complex{1.0 / wn, 0.0});
    }
  }

  if (one_dim) {
    const double s = sa * std::abs(inner(ch.f, u1));
    const double root = 1.0 - s;
    const double pr = a / (root * root);
    OracleResult res;
    res.best_value = pr * std::norm(inner(ch.g, u1)) * inv_sd;
    res.best_point = u1;
    res.certified_gap_bound = 0.0;
    return res;
  }

  const Complex fu1 = inner(ch.f, u1);
  const Complex fu2 = inner(ch.f, u2);
  const Complex gu1 = inner(ch.g, u1);
  const Complex gu2 = inner(ch.g, u2);

  constexpr double kHalfPi = std::numbers::pi / 2.0;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  double t_lo = 0.0;
  double t_width = kHalfPi;
  double phi_lo = 0.0;
  double phi_width = kTwoPi;
  double res_t = spec.angular_resolution;
  double res_p = spec.phase_resolution;

  std::atomic<bool> unbounded_hit{false};
  Incumbent best;
  double gap = 0.0;

  for (int round = 0; round <= spec.refine_rounds; ++round) {
    ScanTables tab;
    const std::size_t nt_steps = step_count(t_width, res_t);
    const std::size_t np_steps = step_count(phi_width, res_p);
    tab.t_vals = uniform_points(t_lo, t_width, nt_steps, true);
    // Round 0 covers the full period, so the endpoint would duplicate the
    // start; refinement windows are not periodic and keep both ends.
    tab.phi_vals = uniform_points(phi_lo, phi_width, np_steps, round > 0);
    tab.cos_phi.resize(tab.phi_vals.size());
    tab.sin_phi.resize(tab.phi_vals.size());
    for (std::size_t j = 0; j < tab.phi_vals.size(); ++j) {
      tab.cos_phi[j] = std::cos(tab.phi_vals[j]);
      tab.sin_phi[j] = std::sin(tab.phi_vals[j]);
    }

    if (round == 0) {
      // Certificate from the only pass guaranteed to cover the region: the
      // objective's slope in t and phi is bounded by L, and no point lies
      // farther than half a step from a sample in each coordinate.
      const double step_t = t_width / static_cast<double>(nt_steps);
      const double step_p = phi_width / static_cast<double>(np_steps);
      const double shrink = 1.0 - s_max;
      const double lips = a * inv_sd * 2.0 * squared_norm(ch.g) *
                          (1.0 / (shrink * shrink) +
                           s_max / (shrink * shrink * shrink));
      gap = lips * 0.5 * (step_t + step_p);
    }

    const Incumbent round_best =
        scan_grid(tab, fu1, fu2, gu1, gu2, a, sa, inv_sd, unbounded_hit);
    if (unbounded_hit.load()) {
      throw UnboundedRegime(
          "energy-causality constraint admits unbounded power at a grid "
          "point");
    }
    if (round_best.value > best.value) best = round_best;

    t_width /= 10.0;
    phi_width /= 10.0;
    res_t /= 10.0;
    res_p /= 10.0;
    t_lo = std::clamp(best.t - t_width / 2.0, 0.0, kHalfPi);
    const double t_hi = std::clamp(best.t + t_width / 2.0, 0.0, kHalfPi);
    t_width = t_hi - t_lo;
    phi_lo = best.phi - phi_width / 2.0;
  }

  const double ct = std::cos(best.t);
  const double st = std::sin(best.t);
  const Complex rot = std::polar(st, best.phi);
  ComplexVector v(u1.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = ct * u1[i] + rot * u2[i];
  }

  OracleResult res;
  res.best_value = best.value;
  res.best_point = std::move(v);
  res.certified_gap_bound = gap;
  return res;
}

OracleResult scan_p2(double gamma1, double c, int num_points) {
  if (num_points < 100) {
    throw std::invalid_argument("scan_p2: num_points must be >= 100");
  }
  if (!(gamma1 > 0.0)) throw std::invalid_argument("scan_p2: gamma1 must be > 0");
  if (!(c > 0.0)) throw std::invalid_argument("scan_p2: c must be > 0");

  const auto rate = [&](double alpha) {
    const double gd = gamma1 / (1.0 + c * (1.0 - alpha) / alpha);
    return 0.5 * (1.0 - alpha) * std::log2(1.0 + gd);
  };
  // The objective extends continuously to 0 at both interval ends.
  const auto rate_or_limit = [&](double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0) return 0.0;
    return rate(alpha);
  };

  const double spacing = 1.0 / static_cast<double>(num_points + 1);
  double best_alpha = spacing;
  double best_value = rate(spacing);
  for (int i = 2; i <= num_points; ++i) {
    const double alpha = static_cast<double>(i) * spacing;
    const double value = rate(alpha);
    if (value > best_value) {
      best_value = value;
      best_alpha = alpha;
    }
  }

  const double lo = std::max(best_alpha - spacing, 0.0);
  const double hi = std::min(best_alpha + spacing, 1.0);
  const double step = (hi - lo) / static_cast<double>(num_points + 1);
  for (int j = 1; j <= num_points; ++j) {
    const double alpha = lo + static_cast<double>(j) * step;
    const double value = rate(alpha);
    if (value > best_value) {
      best_value = value;
      best_alpha = alpha;
    }
  }

  // Chord bound for a concave objective: the true maximum cannot exceed the
  // incumbent by more than its rise over either refined-grid neighbor.
  const double left = rate_or_limit(best_alpha - step);
  const double right = rate_or_limit(best_alpha + step);
  const double gap =
      std::max({best_value - left, best_value - right, 0.0});

  OracleResult res;
  res.best_value = best_value;
  res.best_point = best_alpha;
  res.certified_gap_bound = gap;
  return res;
}

}  // namespace wpr
