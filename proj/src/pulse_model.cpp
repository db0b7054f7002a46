#include "ddsim/pulse_model.hpp"

#include <stdexcept>

namespace ddsim {

void ErrorModelConfig::validate() const {
  if (eps0 < 0 || n0 < 0 || delta_omega_width < 0)
    throw std::invalid_argument("ErrorModelConfig: error scales must be non-negative");
  if (t_pulse <= 0 || tau <= 0)
    throw std::invalid_argument("ErrorModelConfig: t_pulse and tau must be positive");
}

namespace {

// Pushforward of the quadratic B1 profile: u uniform on [-1, 1],
// value = scale * (1 - 3 u^2), support [-2*scale, scale], density
// P(v) = (1/2 scale)/sqrt(3 (1 - v/scale)).
double quadratic_profile_draw(double scale, SplitMix64& rng) {
  const double u = rng.next_symmetric();
  return scale * (1.0 - 3.0 * u * u);
}

}  // namespace

PulseErrorSample sample_errors(const ErrorModelConfig& config, SplitMix64& rng) {
  PulseErrorSample s;
  s.delta_omega = config.delta_omega_sigma() * rng.next_gaussian();
  const double eps = quadratic_profile_draw(config.eps0, rng);
  s.eps_x = eps;
  s.eps_y = eps;
  s.n_z = quadratic_profile_draw(config.n0, rng);
  s.m_z = quadratic_profile_draw(config.n0, rng);
  s.n_y = 0.0;
  s.m_x = config.phase_error;  // only the sum n_Y + m_X matters
  return s;
}

Rotationd pulse_propagator_at_offset(const PulseErrorSample& sample, PulseAxis axis,
                                     const ErrorModelConfig& config, double delta_omega) {
  const bool x = (axis == PulseAxis::X);
  const double eps = x ? sample.eps_x : sample.eps_y;
  const double omega1 = (M_PI + eps) / config.t_pulse;
  BlochVector drive = x ? BlochVector(1.0, sample.n_y, sample.n_z)
                        : BlochVector(sample.m_x, 1.0, sample.m_z);
  drive.normalize();
  const BlochVector rotation_vector = omega1 * drive + BlochVector(0.0, 0.0, delta_omega);
  const double rate = rotation_vector.norm();
  if (rate == 0.0) return Rotationd::Identity();
  return from_axis_angle<double>(rotation_vector / rate, rate * config.t_pulse);
}

Rotationd pulse_propagator(const PulseErrorSample& sample, PulseAxis axis,
                           const ErrorModelConfig& config) {
  return pulse_propagator_at_offset(sample, axis, config, sample.delta_omega);
}

Rotationd free_propagator(double delta_omega, double duration) {
  if (duration < 0) throw std::invalid_argument("free_propagator: negative duration");
  const double half = 0.5 * delta_omega * duration;
  return Rotationd(std::cos(half), 0.0, 0.0, std::sin(half));
}

}  // namespace ddsim
