#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wpr/channels.hpp"
#include "wpr/fd_optimizer.hpp"
#include "wpr/link_model.hpp"
#include "wpr/oracle.hpp"
#include "wpr/tsr_optimizer.hpp"

namespace wpr {

/// Configuration file problems: unreadable file, malformed or unknown keys,
/// rejected invariants. Carries a line or field diagnostic in what().
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSettings {
  double ps_dbm_start = 20.0;
  double ps_dbm_stop = 50.0;
  double ps_dbm_step = 1.0;
};

struct Tolerances {
  double bisection_tol = 1e-12;
  GridSpec grid;
};

// Boundary representation: powers in dBm, path losses in dB, angles in
// degrees. Conversion to linear watts happens in system_at(), nowhere else.
struct RunConfig {
  GeometryConfig geometry;
  // The bandwidth and noise density only document how the default noise
  // power is obtained; computations use the sigma values directly.
  double bandwidth_hz = 1.0e7;
  double noise_psd_dbm_per_hz = -160.0;
  std::optional<double> sigma_r2_dbm;  // derived from the two above if unset
  std::optional<double> sigma_d2_dbm;
  double eta = 0.8;
  double t_block = 1.0;
  double ps_dbm = 30.0;  // single-point commands
  SweepSettings sweep;
  Tolerances tolerances;
  std::string output_path;  // empty means stdout

  double derived_noise_dbm() const;
  double sigma_r2_watts() const;
  double sigma_d2_watts() const;
  SystemParams system_at(double ps_dbm_point) const;
  SystemParams system() const { return system_at(ps_dbm); }
  void validate() const;  // throws ConfigError with named messages
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Effective configuration as key = value lines; parses back to itself.
std::string format_config(const RunConfig& config);

struct SweepRow {
  double ps_dbm = 0.0;
  double rate_fd = 0.0;      // bps/Hz; NaN when the regime is unbounded
  double rate_tsr = 0.0;     // bps/Hz
  double gamma2_star = 0.0;  // NaN when unbounded
  double pr_fd_watts = 0.0;  // NaN when unbounded
  double alpha_star = 0.0;
  double pr_tsr_watts = 0.0;
  std::string regime_flag;  // ok | near-singular | unbounded
};

SweepRow sweep_row_at(const RunConfig& config, const ChannelSet& ch,
                      double ps_dbm_point);
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// Header plus one line per row, floats at 9 significant digits.
std::string format_csv(const std::vector<SweepRow>& rows);

// ---- verification ----

inline constexpr double kOracleRelTol = 1e-3;
inline constexpr double kCrossPathTol = 1e-9;
inline constexpr double kTightnessTol = 1e-9;
inline constexpr double kImagTol = 1e-9;
inline constexpr double kSpanTol = 1e-10;
inline constexpr double kTsrGridTol = 1e-9;
inline constexpr double kStationarityTol = 1e-8;
inline constexpr int kTsrScanPoints = 10000;

/// One random geometry draw: angles of departure uniform in [-90, 90]
/// degrees, forward path losses uniform in [-80, -40] dB, loop path loss
/// uniform in [-30, -10] dB. Antenna counts and spacing keep their defaults.
GeometryConfig random_geometry(std::mt19937_64& rng);

struct OracleCheck {
  double oracle_best = 0.0;
  double gap_bound = 0.0;
  double rel_dev = 0.0;
  std::optional<std::string> failure;  // empty optional means agreement
};

// Compares a claimed second-hop SNR optimum against the brute-force search:
// the claim must match the oracle within kOracleRelTol relative, and the
// oracle may never exceed the claim by more than the certified gap bound.
OracleCheck check_candidate_against_oracle(const SystemParams& params,
                                           const ChannelSet& ch,
                                           double candidate_gamma2,
                                           const GridSpec& grid,
                                           std::string_view label);

struct InstanceOutcome {
  bool skipped = false;
  std::string skip_reason;
  std::vector<std::string> failures;
  double oracle_rel_dev = 0.0;
  double cross_gamma2_rel_dev = 0.0;
  double cross_overlap = 1.0;
  double tsr_grid_excess = 0.0;
  double tsr_stationarity = 0.0;
};

/// Full per-instance battery: closed form vs oracle, closed form vs matrix
/// path, constraint and span invariants, time-split solver vs dense scan.
InstanceOutcome verify_instance(const SystemParams& params,
                                const ChannelSet& ch, const Tolerances& tol,
                                std::string_view label);

struct VerifyReport {
  int num_instances = 0;
  std::uint64_t seed = 0;
  int solved = 0;
  int skipped_unbounded = 0;
  std::vector<std::string> skip_reasons;
  std::vector<std::string> failures;
  double max_oracle_rel_dev = 0.0;
  double max_cross_gamma2_rel_dev = 0.0;
  double min_cross_overlap = 1.0;
  double max_tsr_grid_excess = 0.0;
  double max_tsr_stationarity = 0.0;

  bool passed() const { return failures.empty(); }
  std::string summary() const;
};

VerifyReport run_verify(const RunConfig& config, int num_instances,
                        std::uint64_t seed);

}  // namespace wpr
