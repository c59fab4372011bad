#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpr/harness.hpp"

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

wpr::RunConfig load_or_default(const std::string& config_path) {
  wpr::RunConfig config;
  if (!config_path.empty()) {
    config = wpr::load_config(config_path);
  } else {
    config.validate();
  }
  for (const std::string& warning : config.geometry.warnings()) {
    std::cerr << "warning: " << warning << "\n";
  }
  return config;
}

void echo_config(const wpr::RunConfig& config, std::ostream& out) {
  out << "# effective configuration\n" << wpr::format_config(config);
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return out.good();
}

void print_fd_solution(const wpr::SolveOutcome& outcome,
                       const wpr::SweepRow& row, std::ostream& out) {
  if (const wpr::FdSolution* sol = wpr::solved(outcome)) {
    out << "regime: " << row.regime_flag << "\n";
    out << "pr_star_w = " << fmt9(sol->pr_star) << "\n";
    out << "pr_star_dbm = " << fmt9(wpr::watts_to_dbm(sol->pr_star)) << "\n";
    out << "gamma2_star = " << fmt9(sol->gamma2_star) << "\n";
    out << "gamma_d = " << fmt9(sol->gamma_d) << "\n";
    out << "rate_bpshz = " << fmt9(sol->rate) << "\n";
    out << "alpha1 = " << fmt9(sol->alpha1) << "\n";
    out << "alpha2 = " << fmt9(sol->alpha2) << "\n";
    out << "cos_theta = " << fmt9(sol->cos_theta) << "\n";
    out << "v_r_star =";
    for (const wpr::Complex& c : sol->v_r_star) {
      out << " (" << fmt9(c.real()) << ", " << fmt9(c.imag()) << ")";
    }
    out << "\n";
  } else if (const wpr::UnboundedPower* ub =
                 std::get_if<wpr::UnboundedPower>(&outcome)) {
    out << "regime: unbounded\n";
    out << "diagnostic: " << ub->diagnostic << "\n";
  } else {
    const auto& deg = std::get<wpr::DegenerateChannel>(outcome);
    out << "regime: degenerate\n";
    out << "diagnostic: " << deg.diagnostic << "\n";
  }
}

void print_tsr_solution(const wpr::TsrSolution& sol, std::ostream& out) {
  out << "c_const = " << fmt9(sol.c_const) << "\n";
  out << "z_star = " << fmt9(sol.z_star) << "\n";
  out << "alpha_star = " << fmt9(sol.alpha_star) << "\n";
  out << "gamma_d = " << fmt9(sol.gamma_d) << "\n";
  out << "rate_bpshz = " << fmt9(sol.rate) << "\n";
  out << "pr_w = " << fmt9(sol.pr) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Optimal relay power and transmit beamforming for a wireless-powered "
      "full-duplex relay with self-energy recycling, with a time-switching "
      "benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  int instances = 100;

  CLI::App* solve_fd = app.add_subcommand(
      "solve-fd", "solve the full-duplex problem at ps_dbm");
  CLI::App* solve_tsr = app.add_subcommand(
      "solve-tsr", "solve the time-switching benchmark at ps_dbm");
  CLI::App* sweep =
      app.add_subcommand("sweep", "sweep ps and emit the comparison CSV");
  CLI::App* verify = app.add_subcommand(
      "verify", "check the solvers against brute-force search");

  for (CLI::App* sub : {solve_fd, solve_tsr, sweep, verify}) {
    sub->add_option("--config", config_path,
                    "path to a key = value configuration file");
    sub->add_option("--out", out_path, "output file (default from config)");
  }
  verify->add_option("--seed", seed, "random seed for instance draws");
  verify->add_option("--instances", instances,
                     "number of random instances (>= 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const wpr::RunConfig config = load_or_default(config_path);
    const std::string effective_out =
        out_path.empty() ? config.output_path : out_path;

    if (solve_fd->parsed() || solve_tsr->parsed()) {
      echo_config(config, std::cout);
      const wpr::ChannelSet ch = wpr::make_channel_set(config.geometry);
      const wpr::SweepRow row = wpr::sweep_row_at(config, ch, config.ps_dbm);
      std::cout << "\n";
      if (solve_fd->parsed()) {
        const wpr::SolveOutcome outcome =
            wpr::solve_closed_form(config.system(), ch);
        print_fd_solution(outcome, row, std::cout);
      } else {
        const wpr::TsrSolution sol =
            wpr::solve_tsr(config.system(), ch.h, ch.g,
                           config.tolerances.bisection_tol);
        print_tsr_solution(sol, std::cout);
      }
      if (!effective_out.empty()) {
        if (!write_file(effective_out, wpr::format_csv({row}))) return 1;
        std::cout << "csv row written to " << effective_out << "\n";
      }
      return 0;
    }

    if (sweep->parsed()) {
      const std::vector<wpr::SweepRow> rows = wpr::run_sweep(config);
      const std::string csv = wpr::format_csv(rows);
      if (effective_out.empty()) {
        // Keep stdout machine readable; the echo goes to stderr instead.
        echo_config(config, std::cerr);
        std::cout << csv;
      } else {
        echo_config(config, std::cout);
        if (!write_file(effective_out, csv)) return 1;
        std::cout << "csv written to " << effective_out << "\n";
      }
      return 0;
    }

    // verify
    echo_config(config, std::cout);
    const wpr::VerifyReport report = wpr::run_verify(config, instances, seed);
    const std::string summary = report.summary();
    if (!effective_out.empty()) {
      if (!write_file(effective_out, summary)) return 1;
      std::cout << "report written to " << effective_out << "\n";
    } else {
      std::cout << "\n" << summary;
    }
    return report.passed() ? 0 : 1;
  } catch (const wpr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
