#pragma once

#include "ddsim/engine.hpp"

#include <span>

namespace ddsim {

// Slow magnetic-field offset trajectory, piecewise constant at spacing dt:
// samples[k] holds the offset (rad/s) on [k*dt, (k+1)*dt).
struct NoiseTrajectory {
  double dt = 0.0;
  std::vector<double> samples;

  double duration() const { return dt * static_cast<double>(samples.size()); }
  double value_at(double t) const;
};

// Brownian (1/f^2) field noise: cumulative sum of Gaussian steps with variance
// sigma_step^2 = amplitude^2 * dt * (pi * 10 Hz)^2, which anchors the
// rectangular-window periodogram at 10 Hz to amplitude^2 (T^2/Hz). A weak
// OU-style decay sets the low-frequency cutoff; cutoff_hz = 0 applies the
// default 1/(10 * duration). Output converted from Tesla to rad/s.
NoiseTrajectory generate_noise(double amplitude_at_10hz, double duration, double dt,
                               SplitMix64& rng, double cutoff_hz = 0.0);

struct ShotPhase {
  double in_phase = 0.0;    // component along the ideal-echo direction of initial S_Y
  double quadrature = 0.0;  // transverse component perpendicular to it
};

// One spin propagated with delta_omega(t) = sample offset + trajectory value,
// piecewise constant per delay sub-step of length <= dt; pulses use the value
// at the pulse start. The shot occupies [shot_start, shot_start + duration].
ShotPhase shot_phase(const SequenceProgram& program, const NoiseTrajectory& trajectory,
                     double shot_start, const PulseErrorSample& sample,
                     const ErrorModelConfig& config);

double magnitude_detect(double in_phase, double quadrature);

struct DecayRow {
  double tau = 0.0;
  double total_time = 0.0;
  double mean_inphase = 0.0;
  double sd_inphase = 0.0;
  double mean_quadrature = 0.0;
  double mean_magnitude = 0.0;
  int n_shots = 0;
};

struct NoiseRunParams {
  double amplitude_at_10hz = 0.0;  // T/sqrt(Hz)
  double dt = 2e-6;                // trajectory resolution, seconds
  double cutoff_hz = 0.0;          // 0 = default 1/(10 * duration)
  int n_shots = 200;
  std::uint64_t seed = 0;
};

// Fixed pulse count, delay scaled: one row per tau. Every shot draws a fresh
// trajectory segment, a random start offset inside it, and its own error
// sample from the shot-indexed stream.
std::vector<DecayRow> decay_scan(Family family, Construction construction,
                                 int level_or_cycles, std::span<const double> taus,
                                 const NoiseRunParams& noise, const ErrorModelConfig& config);

// One-sided rectangular-window periodogram of the field trajectory (in Tesla),
// evaluated at the given frequencies; units T^2/Hz.
std::vector<double> periodogram(const NoiseTrajectory& trajectory,
                                std::span<const double> freqs);

// OLS slope of log10(y) against log10(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace ddsim
