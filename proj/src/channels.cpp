#include "wpr/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wpr {

double db_to_linear(double ratio_db) { return std::pow(10.0, ratio_db / 10.0); }

double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

double dbm_to_watts(double power_dbm) {
  return std::pow(10.0, (power_dbm - 30.0) / 10.0);
}

double watts_to_dbm(double power_watts) {
  return 10.0 * std::log10(power_watts) + 30.0;
}

Complex inner(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("inner: size mismatch");
  }
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += std::conj(x[i]) * y[i];
  }
  return acc;
}

double squared_norm(const ComplexVector& x) {
  double acc = 0.0;
  for (const Complex& c : x) {
    acc += std::norm(c);
  }
  return acc;
}

double norm(const ComplexVector& x) { return std::sqrt(squared_norm(x)); }

bool is_zero_vector(const ComplexVector& x) {
  for (const Complex& c : x) {
    if (c != Complex{0.0, 0.0}) return false;
  }
  return true;
}

ComplexVector scaled(const ComplexVector& x, Complex s) {
  ComplexVector y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = s * x[i];
  return y;
}

void GeometryConfig::validate() const {
  if (num_source_antennas < 1) {
    throw std::invalid_argument("num_source_antennas must be >= 1");
  }
  if (num_relay_tx_antennas < 1) {
    throw std::invalid_argument("num_relay_tx_antennas must be >= 1");
  }
  if (!(element_spacing_over_wavelength > 0.0)) {
    throw std::invalid_argument("element_spacing_over_wavelength must be > 0");
  }
  if (!std::isfinite(aod_h_deg) || !std::isfinite(aod_g_deg)) {
    throw std::invalid_argument("angles of departure must be finite");
  }
  if (!std::isfinite(beta_sr_db) || !std::isfinite(beta_rd_db)) {
    throw std::invalid_argument("beta_sr/beta_rd must be finite dB values");
  }
}

std::vector<std::string> GeometryConfig::warnings() const {
  std::vector<std::string> out;
  if (beta_sr_db > 0.0) out.push_back("beta_sr > 0 dB is not a physical path loss");
  if (beta_rd_db > 0.0) out.push_back("beta_rd > 0 dB is not a physical path loss");
  if (beta_rr_db > 0.0) out.push_back("beta_rr > 0 dB is not a physical path loss");
  return out;
}

ComplexVector make_los_channel(int n, double d_over_lambda, double aod_deg,
                               double path_loss_db) {
  if (n < 1) throw std::invalid_argument("make_los_channel: n must be >= 1");
  const double amp = std::sqrt(db_to_linear(path_loss_db));
  const double ramp =
      2.0 * std::numbers::pi * d_over_lambda *
      std::sin(aod_deg * std::numbers::pi / 180.0);
  ComplexVector v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    v[static_cast<std::size_t>(k)] = std::polar(amp, ramp * k);
  }
  return v;
}

ComplexVector make_loop_channel(int n, double beta_rr_db) {
  if (n < 1) throw std::invalid_argument("make_loop_channel: n must be >= 1");
  const double amp = std::sqrt(db_to_linear(beta_rr_db));
  return ComplexVector(static_cast<std::size_t>(n), Complex{amp, 0.0});
}

ChannelSet make_channel_set(const GeometryConfig& geom) {
  geom.validate();
  ChannelSet ch;
  ch.h = make_los_channel(geom.num_source_antennas,
                          geom.element_spacing_over_wavelength, geom.aod_h_deg,
                          geom.beta_sr_db);
  ch.g = make_los_channel(geom.num_relay_tx_antennas,
                          geom.element_spacing_over_wavelength, geom.aod_g_deg,
                          geom.beta_rd_db);
  ch.f = make_loop_channel(geom.num_relay_tx_antennas, geom.beta_rr_db);
  return ch;
}

double effective_angle_cos(const ComplexVector& f, const ComplexVector& g) {
  const double gn = norm(g);
  if (gn == 0.0) throw std::invalid_argument("effective_angle_cos: zero g");
  const double fn = norm(f);
  if (fn == 0.0) return 0.0;
  const double c = std::abs(inner(f, g)) / (fn * gn);
  return std::min(1.0, std::max(0.0, c));
}

}  // namespace wpr
