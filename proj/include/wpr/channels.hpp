#pragma once

#include <complex>
#include <string>
#include <vector>

namespace wpr {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// ---- dB / linear conversions ----
// Powers are carried in watts internally; dB and dBm appear only at the
// I/O boundary.

double db_to_linear(double ratio_db);
double linear_to_db(double ratio);
double dbm_to_watts(double power_dbm);
double watts_to_dbm(double power_watts);

// ---- complex vector helpers ----

/// Hermitian inner product x^H y.
Complex inner(const ComplexVector& x, const ComplexVector& y);
double squared_norm(const ComplexVector& x);
double norm(const ComplexVector& x);
bool is_zero_vector(const ComplexVector& x);
ComplexVector scaled(const ComplexVector& x, Complex s);

/// Uniform-linear-array geometry and link budget for the three channels.
struct GeometryConfig {
  int num_source_antennas = 2;               // M
  int num_relay_tx_antennas = 2;             // N
  double element_spacing_over_wavelength = 0.5;
  double aod_h_deg = 10.0;                   // source -> relay angle of departure
  double aod_g_deg = 5.0;                    // relay -> destination angle of departure
  double beta_sr_db = -60.0;                 // source -> relay path loss
  double beta_rd_db = -60.0;                 // relay -> destination path loss
  double beta_rr_db = -15.0;                 // relay loop-link path loss

  /// Throws std::invalid_argument on hard violations (antenna counts,
  /// spacing, non-finite angles).
  void validate() const;
  /// Soft issues only, e.g. positive-dB path losses. Never throws.
  std::vector<std::string> warnings() const;
};

struct ChannelSet {
  ComplexVector h;  // source -> relay receive antenna, length M
  ComplexVector g;  // relay transmit array -> destination, length N
  ComplexVector f;  // relay loop channel, length N
};

// Deterministic line-of-sight channel: entry k has modulus
// sqrt(linear(path_loss_db)) and phase 2*pi*(d/lambda)*k*sin(aod).
ComplexVector make_los_channel(int n, double d_over_lambda, double aod_deg,
                               double path_loss_db);

// Flat loop channel sqrt(linear(beta_rr_db)) * [1, ..., 1]. A -inf dB
// sentinel yields the exact all-zeros vector (no loop path).
ComplexVector make_loop_channel(int n, double beta_rr_db);

ChannelSet make_channel_set(const GeometryConfig& geom);

// |f^H g| / (||f|| * ||g||), clamped to [0, 1]. Zero f returns 0 so the
// downstream closed forms degrade continuously to the no-recycling case.
// Throws on zero g.
double effective_angle_cos(const ComplexVector& f, const ComplexVector& g);

}  // namespace wpr
