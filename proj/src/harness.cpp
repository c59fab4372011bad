#include "wpr/harness.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace wpr {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& value, int line, const char* key) {
  const std::string t = trim(value);
  if (!t.empty()) {
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() + t.size()) return v;
  }
  throw ConfigError("config line " + std::to_string(line) +
                    ": invalid number for '" + key + "'");
}

int parse_int(const std::string& value, int line, const char* key) {
  const std::string t = trim(value);
  if (!t.empty()) {
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end == t.c_str() + t.size() &&
        v >= std::numeric_limits<int>::min() &&
        v <= std::numeric_limits<int>::max()) {
      return static_cast<int>(v);
    }
  }
  throw ConfigError("config line " + std::to_string(line) +
                    ": invalid integer for '" + key + "'");
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be finite");
  }
}

}  // namespace

double RunConfig::derived_noise_dbm() const {
  return noise_psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
}

double RunConfig::sigma_r2_watts() const {
  return dbm_to_watts(sigma_r2_dbm.value_or(derived_noise_dbm()));
}

double RunConfig::sigma_d2_watts() const {
  return dbm_to_watts(sigma_d2_dbm.value_or(derived_noise_dbm()));
}

SystemParams RunConfig::system_at(double ps_dbm_point) const {
  SystemParams params;
  params.ps = dbm_to_watts(ps_dbm_point);
  params.sigma_r2 = sigma_r2_watts();
  params.sigma_d2 = sigma_d2_watts();
  params.eta = eta;
  params.t_block = t_block;
  return params;
}

void RunConfig::validate() const {
  try {
    geometry.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require_finite(bandwidth_hz, "bandwidth_hz");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be > 0");
  require_finite(noise_psd_dbm_per_hz, "noise_psd_dbm_per_hz");
  if (sigma_r2_dbm) require_finite(*sigma_r2_dbm, "sigma_r2_dbm");
  if (sigma_d2_dbm) require_finite(*sigma_d2_dbm, "sigma_d2_dbm");
  require_finite(ps_dbm, "ps_dbm");
  require_finite(t_block, "t_block");
  require_finite(eta, "eta");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must be in (0, 1]");
  if (!(t_block > 0.0)) throw ConfigError("t_block must be > 0");
  require_finite(sweep.ps_dbm_start, "ps_dbm_start");
  require_finite(sweep.ps_dbm_stop, "ps_dbm_stop");
  require_finite(sweep.ps_dbm_step, "ps_dbm_step");
  if (!(sweep.ps_dbm_step > 0.0)) {
    throw ConfigError("ps_dbm_step must be > 0");
  }
  if (sweep.ps_dbm_start > sweep.ps_dbm_stop) {
    throw ConfigError("ps_dbm_start must be <= ps_dbm_stop");
  }
  require_finite(tolerances.bisection_tol, "bisection_tol");
  if (!(tolerances.bisection_tol > 0.0)) {
    throw ConfigError("bisection_tol must be > 0");
  }
  try {
    tolerances.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line) +
                        ": empty key");
    }

    if (key == "num_source_antennas") {
      config.geometry.num_source_antennas = parse_int(value, line, key.c_str());
    } else if (key == "num_relay_tx_antennas") {
      config.geometry.num_relay_tx_antennas =
          parse_int(value, line, key.c_str());
    } else if (key == "element_spacing_over_wavelength") {
      config.geometry.element_spacing_over_wavelength =
          parse_double(value, line, key.c_str());
    } else if (key == "aod_h") {
      config.geometry.aod_h_deg = parse_double(value, line, key.c_str());
    } else if (key == "aod_g") {
      config.geometry.aod_g_deg = parse_double(value, line, key.c_str());
    } else if (key == "beta_sr") {
      config.geometry.beta_sr_db = parse_double(value, line, key.c_str());
    } else if (key == "beta_rd") {
      config.geometry.beta_rd_db = parse_double(value, line, key.c_str());
    } else if (key == "beta_rr") {
      config.geometry.beta_rr_db = parse_double(value, line, key.c_str());
    } else if (key == "bandwidth_hz") {
      config.bandwidth_hz = parse_double(value, line, key.c_str());
    } else if (key == "noise_psd_dbm_per_hz") {
      config.noise_psd_dbm_per_hz = parse_double(value, line, key.c_str());
    } else if (key == "sigma_r2_dbm") {
      config.sigma_r2_dbm = parse_double(value, line, key.c_str());
    } else if (key == "sigma_d2_dbm") {
      config.sigma_d2_dbm = parse_double(value, line, key.c_str());
    } else if (key == "eta") {
      config.eta = parse_double(value, line, key.c_str());
    } else if (key == "t_block") {
      config.t_block = parse_double(value, line, key.c_str());
    } else if (key == "ps_dbm") {
      config.ps_dbm = parse_double(value, line, key.c_str());
    } else if (key == "ps_dbm_start") {
      config.sweep.ps_dbm_start = parse_double(value, line, key.c_str());
    } else if (key == "ps_dbm_stop") {
      config.sweep.ps_dbm_stop = parse_double(value, line, key.c_str());
    } else if (key == "ps_dbm_step") {
      config.sweep.ps_dbm_step = parse_double(value, line, key.c_str());
    } else if (key == "bisection_tol") {
      config.tolerances.bisection_tol = parse_double(value, line, key.c_str());
    } else if (key == "angular_resolution") {
      config.tolerances.grid.angular_resolution =
          parse_double(value, line, key.c_str());
    } else if (key == "phase_resolution") {
      config.tolerances.grid.phase_resolution =
          parse_double(value, line, key.c_str());
    } else if (key == "refine_rounds") {
      config.tolerances.grid.refine_rounds = parse_int(value, line, key.c_str());
    } else if (key == "output_path") {
      config.output_path = value;
    } else {
      throw ConfigError("config line " + std::to_string(line) +
                        ": unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string format_config(const RunConfig& config) {
  std::ostringstream out;
  out << "num_source_antennas = " << config.geometry.num_source_antennas
      << "\n";
  out << "num_relay_tx_antennas = " << config.geometry.num_relay_tx_antennas
      << "\n";
  out << "element_spacing_over_wavelength = "
      << format_double(config.geometry.element_spacing_over_wavelength)
      << "\n";
  out << "aod_h = " << format_double(config.geometry.aod_h_deg) << "\n";
  out << "aod_g = " << format_double(config.geometry.aod_g_deg) << "\n";
  out << "beta_sr = " << format_double(config.geometry.beta_sr_db) << "\n";
  out << "beta_rd = " << format_double(config.geometry.beta_rd_db) << "\n";
  out << "beta_rr = " << format_double(config.geometry.beta_rr_db) << "\n";
  out << "bandwidth_hz = " << format_double(config.bandwidth_hz) << "\n";
  out << "noise_psd_dbm_per_hz = " << format_double(config.noise_psd_dbm_per_hz)
      << "\n";
  out << "sigma_r2_dbm = "
      << format_double(config.sigma_r2_dbm.value_or(config.derived_noise_dbm()))
      << "\n";
  out << "sigma_d2_dbm = "
      << format_double(config.sigma_d2_dbm.value_or(config.derived_noise_dbm()))
      << "\n";
  out << "eta = " << format_double(config.eta) << "\n";
  out << "t_block = " << format_double(config.t_block) << "\n";
  out << "ps_dbm = " << format_double(config.ps_dbm) << "\n";
  out << "ps_dbm_start = " << format_double(config.sweep.ps_dbm_start) << "\n";
  out << "ps_dbm_stop = " << format_double(config.sweep.ps_dbm_stop) << "\n";
  out << "ps_dbm_step = " << format_double(config.sweep.ps_dbm_step) << "\n";
  out << "bisection_tol = " << format_double(config.tolerances.bisection_tol)
      << "\n";
  out << "angular_resolution = "
      << format_double(config.tolerances.grid.angular_resolution) << "\n";
  out << "phase_resolution = "
      << format_double(config.tolerances.grid.phase_resolution) << "\n";
  out << "refine_rounds = " << config.tolerances.grid.refine_rounds << "\n";
  out << "output_path = " << config.output_path << "\n";
  return out.str();
}

SweepRow sweep_row_at(const RunConfig& config, const ChannelSet& ch,
                      double ps_dbm_point) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  const SystemParams params = config.system_at(ps_dbm_point);

  SweepRow row;
  row.ps_dbm = ps_dbm_point;

  const TsrSolution tsr =
      solve_tsr(params, ch.h, ch.g, config.tolerances.bisection_tol);
  row.rate_tsr = tsr.rate;
  row.alpha_star = tsr.alpha_star;
  row.pr_tsr_watts = tsr.pr;

  const SolveOutcome outcome = solve_closed_form(params, ch);
  if (const FdSolution* sol = solved(outcome)) {
    row.rate_fd = sol->rate;
    row.gamma2_star = sol->gamma2_star;
    row.pr_fd_watts = sol->pr_star;
    row.regime_flag = sol->near_singular ? "near-singular" : "ok";
  } else if (std::holds_alternative<UnboundedPower>(outcome)) {
    row.rate_fd = kNaN;
    row.gamma2_star = kNaN;
    row.pr_fd_watts = kNaN;
    row.regime_flag = "unbounded";
  } else {
    // Valid geometry always yields nonzero h and g, so a degenerate channel
    // can only mean an internal inconsistency.
    throw std::logic_error("sweep: degenerate channel from valid geometry");
  }
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  config.validate();
  const ChannelSet ch = make_channel_set(config.geometry);
  const SweepSettings& sw = config.sweep;
  const int count = static_cast<int>(std::floor(
                        (sw.ps_dbm_stop - sw.ps_dbm_start) / sw.ps_dbm_step +
                        1e-9)) +
                    1;
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    rows.push_back(
        sweep_row_at(config, ch, sw.ps_dbm_start + i * sw.ps_dbm_step));
  }
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "ps_dbm,rate_fd_bpshz,rate_tsr_bpshz,gamma2_star,pr_fd_w,alpha_star,"
      "pr_tsr_w,regime\n";
  char buf[256];
  for (const SweepRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,",
                  row.ps_dbm, row.rate_fd, row.rate_tsr, row.gamma2_star,
                  row.pr_fd_watts, row.alpha_star, row.pr_tsr_watts);
    out += buf;
    out += row.regime_flag;
    out += '\n';
  }
  return out;
}

}  // namespace wpr
