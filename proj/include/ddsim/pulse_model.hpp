#pragma once

#include "ddsim/rng.hpp"
#include "ddsim/su2.hpp"

namespace ddsim {

namespace constants {
// gamma/2pi = 2.8 MHz/G for g ~ 2 electrons, in rad s^-1 T^-1.
inline constexpr double gamma_electron = 2.0 * M_PI * 2.8e10;
inline const double fwhm_to_sigma = 1.0 / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}  // namespace constants

enum class PulseAxis { X, Y };

// Experimentally calibrated error scales. All angular quantities in radians,
// times in seconds, frequencies in rad/s.
struct ErrorModelConfig {
  double delta_omega_width = 0.0;  // Gaussian width of the offset distribution
  bool width_is_fwhm = true;       // width interpreted as FWHM (ESR linewidth) or sigma
  double eps0 = 0.0;               // rotation-angle error scale
  double n0 = 0.0;                 // transient axis-error scale (n_z, m_z)
  double phase_error = 0.0;        // static relative phase error n_Y + m_X
  double t_pulse = 180e-9;         // pi-pulse duration
  double tau = 11e-6;              // inter-pulse delay

  double delta_omega_sigma() const {
    return width_is_fwhm ? delta_omega_width * constants::fwhm_to_sigma : delta_omega_width;
  }
  void validate() const;
};

// One spin's systematic error draw, fixed for the whole sequence. eps_x and
// eps_y come from a single draw (same B1 at the spin's location) but are kept
// separate so deterministic single-direction injections are expressible.
struct PulseErrorSample {
  double delta_omega = 0.0;  // resonance offset, rad/s
  double eps_x = 0.0;        // rotation-angle error of X pulses
  double eps_y = 0.0;        // rotation-angle error of Y pulses
  double n_y = 0.0, n_z = 0.0;  // X-pulse axis errors: n = (1, n_y, n_z)
  double m_x = 0.0, m_z = 0.0;  // Y-pulse axis errors: m = (m_x, 1, m_z)
};

// Draw order is fixed (offset, eps, n_z, m_z) and consumes the same number of
// uniforms regardless of config, so streams stay aligned.
PulseErrorSample sample_errors(const ErrorModelConfig& config, SplitMix64& rng);

// Exact constant-Hamiltonian propagator of one pulse: rotation by |W| t_p
// about W/|W| with W = omega_1 * n_hat + delta_omega * z_hat.
Rotationd pulse_propagator(const PulseErrorSample& sample, PulseAxis axis,
                           const ErrorModelConfig& config);

// Same with the offset overridden (slow-field-noise shots).
Rotationd pulse_propagator_at_offset(const PulseErrorSample& sample, PulseAxis axis,
                                     const ErrorModelConfig& config, double delta_omega);

// Free evolution in the rotating frame: rotation by delta_omega * duration about Z.
Rotationd free_propagator(double delta_omega, double duration);

}  // namespace ddsim
