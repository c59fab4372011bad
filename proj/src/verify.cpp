#include <cmath>
#include <cstdio>
#include <sstream>

#include "wpr/harness.hpp"

namespace wpr {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string dev(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

double rel_diff(double x, double y) {
  const double scale = std::max(std::abs(x), std::abs(y));
  if (scale == 0.0) return 0.0;
  return std::abs(x - y) / scale;
}

std::string instance_label(std::uint64_t seed, int index,
                           const GeometryConfig& geo, double ps_dbm) {
  std::ostringstream out;
  out << "seed=" << seed << " instance=" << index
      << " aod_h=" << num(geo.aod_h_deg) << " aod_g=" << num(geo.aod_g_deg)
      << " beta_sr=" << num(geo.beta_sr_db)
      << " beta_rd=" << num(geo.beta_rd_db)
      << " beta_rr=" << num(geo.beta_rr_db) << " ps_dbm=" << num(ps_dbm);
  return out.str();
}

}  // namespace

GeometryConfig random_geometry(std::mt19937_64& rng) {
  GeometryConfig geo;
  std::uniform_real_distribution<double> aod(-90.0, 90.0);
  std::uniform_real_distribution<double> forward_loss(-80.0, -40.0);
  std::uniform_real_distribution<double> loop_loss(-30.0, -10.0);
  geo.aod_h_deg = aod(rng);
  geo.aod_g_deg = aod(rng);
  geo.beta_sr_db = forward_loss(rng);
  geo.beta_rd_db = forward_loss(rng);
  geo.beta_rr_db = loop_loss(rng);
  return geo;
}

OracleCheck check_candidate_against_oracle(const SystemParams& params,
                                           const ChannelSet& ch,
                                           double candidate_gamma2,
                                           const GridSpec& grid,
                                           std::string_view label) {
  OracleCheck check;
  try {
    const OracleResult oracle = grid_search_p1(params, ch, grid);
    check.oracle_best = oracle.best_value;
    check.gap_bound = oracle.certified_gap_bound;
  } catch (const UnboundedRegime& e) {
    check.failure = std::string(label) +
                    ": oracle reports an unbounded regime against a finite "
                    "candidate (" +
                    e.what() + ")";
    return check;
  }
  check.rel_dev = rel_diff(candidate_gamma2, check.oracle_best);
  if (check.rel_dev > kOracleRelTol) {
    check.failure = std::string(label) + ": claimed gamma2 " +
                    num(candidate_gamma2) + " vs oracle " +
                    num(check.oracle_best) + " deviates " +
                    dev(check.rel_dev) + " relative (tolerance " +
                    dev(kOracleRelTol) + ")";
  } else if (check.oracle_best - candidate_gamma2 > check.gap_bound) {
    check.failure = std::string(label) + ": oracle " + num(check.oracle_best) +
                    " exceeds the claim " + num(candidate_gamma2) +
                    " by more than the certified gap bound " +
                    num(check.gap_bound);
  }
  return check;
}

InstanceOutcome verify_instance(const SystemParams& params,
                                const ChannelSet& ch, const Tolerances& tol,
                                std::string_view label) {
  InstanceOutcome out;
  const std::string tag(label);

  const SolveOutcome fd = solve_closed_form(params, ch);
  if (const UnboundedPower* ub = std::get_if<UnboundedPower>(&fd)) {
    out.skipped = true;
    out.skip_reason = tag + ": skipped, " + ub->diagnostic;
    return out;
  }
  if (std::holds_alternative<DegenerateChannel>(fd)) {
    out.failures.push_back(
        tag + ": degenerate channel where a solution was expected");
    return out;
  }
  const FdSolution& sol = *solved(fd);

  const OracleCheck check = check_candidate_against_oracle(
      params, ch, sol.gamma2_star, tol.grid, label);
  out.oracle_rel_dev = check.rel_dev;
  if (check.failure) out.failures.push_back(*check.failure);

  const SolveOutcome mp = solve_matrix_path(params, ch);
  if (const FdSolution* msol = solved(mp)) {
    out.cross_gamma2_rel_dev = rel_diff(sol.gamma2_star, msol->gamma2_star);
    if (out.cross_gamma2_rel_dev > kCrossPathTol) {
      out.failures.push_back(tag + ": solution paths disagree on gamma2, " +
                             num(sol.gamma2_star) + " vs " +
                             num(msol->gamma2_star));
    }
    out.cross_overlap = std::abs(inner(sol.v_r_star, msol->v_r_star));
    if (out.cross_overlap < 1.0 - kCrossPathTol) {
      out.failures.push_back(tag +
                             ": solution paths disagree on the beamformer, "
                             "overlap " +
                             num(out.cross_overlap));
    }
  } else {
    out.failures.push_back(tag + ": solution paths disagree on the regime");
  }

  const FeasiblePower fp =
      feasible_max_power(params, ch.h, ch.f, sol.v_r_star);
  if (!fp.is_bounded()) {
    out.failures.push_back(tag + ": feasible power unbounded at the optimum");
  } else if (rel_diff(sol.pr_star, *fp.pr_max) > kTightnessTol) {
    out.failures.push_back(tag + ": optimum power " + num(sol.pr_star) +
                           " is not tight against the constraint bound " +
                           num(*fp.pr_max));
  }

  const double im_part = std::abs(std::imag(inner(ch.f, sol.v_r_star)));
  if (im_part > kImagTol) {
    out.failures.push_back(tag + ": loop inner product not phase aligned, Im=" +
                           num(im_part));
  }

  {
    ComplexVector rest = sol.v_r_star;
    const ComplexVector u1 = mrt_vector(ch.g);
    const Complex p1 = inner(u1, rest);
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= p1 * u1[i];
    ComplexVector w = ch.f;
    const Complex fp1 = inner(u1, ch.f);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= fp1 * u1[i];
    const double wn = norm(w);
    if (wn > 0.0) {
      const ComplexVector u2 = scaled(w, Complex{1.0 / wn, 0.0});
      const Complex p2 = inner(u2, rest);
      for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= p2 * u2[i];
    }
    const double resid = norm(rest);
    if (resid > kSpanTol) {
      out.failures.push_back(
          tag + ": beamformer leaves the g/f span, residual " + num(resid));
    }
  }

  const double gamma1 = first_hop_snr(params, ch.h);
  const double c = tsr_constant(params, ch.h, ch.g);
  const TsrSolution tsr = solve_tsr(params, ch.h, ch.g, tol.bisection_tol);
  const OracleResult scan = scan_p2(gamma1, c, kTsrScanPoints);
  out.tsr_grid_excess = std::max(scan.best_value - tsr.rate, 0.0);
  if (out.tsr_grid_excess > kTsrGridTol) {
    out.failures.push_back(tag + ": dense scan rate " + num(scan.best_value) +
                           " beats the time-split solver rate " +
                           num(tsr.rate));
  }
  out.tsr_stationarity =
      std::abs(stationarity_residual(tsr.alpha_star, gamma1, c));
  if (out.tsr_stationarity > kStationarityTol) {
    out.failures.push_back(tag + ": stationarity residual " +
                           dev(out.tsr_stationarity) + " at alpha " +
                           num(tsr.alpha_star));
  }

  return out;
}

VerifyReport run_verify(const RunConfig& config, int num_instances,
                        std::uint64_t seed) {
  if (num_instances < 1) {
    throw std::invalid_argument("run_verify: num_instances must be >= 1");
  }
  config.validate();

  VerifyReport report;
  report.num_instances = num_instances;
  report.seed = seed;

  std::mt19937_64 rng(seed);
  const SystemParams params = config.system();
  for (int k = 0; k < num_instances; ++k) {
    GeometryConfig geo = random_geometry(rng);
    geo.num_source_antennas = config.geometry.num_source_antennas;
    geo.num_relay_tx_antennas = config.geometry.num_relay_tx_antennas;
    geo.element_spacing_over_wavelength =
        config.geometry.element_spacing_over_wavelength;
    const ChannelSet ch = make_channel_set(geo);
    const std::string label = instance_label(seed, k, geo, config.ps_dbm);
    const InstanceOutcome out =
        verify_instance(params, ch, config.tolerances, label);
    if (out.skipped) {
      ++report.skipped_unbounded;
      report.skip_reasons.push_back(out.skip_reason);
      continue;
    }
    ++report.solved;
    report.failures.insert(report.failures.end(), out.failures.begin(),
                           out.failures.end());
    report.max_oracle_rel_dev =
        std::max(report.max_oracle_rel_dev, out.oracle_rel_dev);
    report.max_cross_gamma2_rel_dev =
        std::max(report.max_cross_gamma2_rel_dev, out.cross_gamma2_rel_dev);
    report.min_cross_overlap =
        std::min(report.min_cross_overlap, out.cross_overlap);
    report.max_tsr_grid_excess =
        std::max(report.max_tsr_grid_excess, out.tsr_grid_excess);
    report.max_tsr_stationarity =
        std::max(report.max_tsr_stationarity, out.tsr_stationarity);
  }
  return report;
}

std::string VerifyReport::summary() const {
  std::ostringstream out;
  out << "verification: " << num_instances << " instances, seed=" << seed
      << "\n";
  out << "  solved: " << solved << "\n";
  out << "  skipped (unbounded regime): " << skipped_unbounded << "\n";
  for (const std::string& reason : skip_reasons) {
    out << "    " << reason << "\n";
  }
  out << "  max closed-form vs oracle relative deviation: "
      << dev(max_oracle_rel_dev) << "\n";
  out << "  max cross-path gamma2 relative deviation: "
      << dev(max_cross_gamma2_rel_dev) << "\n";
  out << "  min cross-path beamformer overlap: "
      << num(min_cross_overlap) << "\n";
  out << "  max time-split grid excess: " << dev(max_tsr_grid_excess) << "\n";
  out << "  max stationarity residual: " << dev(max_tsr_stationarity) << "\n";
  out << "  failures: " << failures.size() << "\n";
  for (const std::string& failure : failures) {
    out << "    " << failure << "\n";
  }
  out << "result: " << (failures.empty() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace wpr
