#pragma once

#include "ddsim/sequence.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ddsim {

// Raised when the CPMG-2 normalization reference collapses (pulse errors so
// large the reference itself is meaningless).
struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnsembleResult {
  double raw_signal = 0.0;           // ensemble-mean projection onto the initial state
  double normalized_fidelity = 0.0;  // raw divided by the CPMG-2 reference
  double std_error = 0.0;            // Monte-Carlo standard error of the fidelity
  int n_samples = 0;
  std::uint64_t seed = 0;
};

struct NetRotationStats {
  double mean_delta_phi = 0.0;
  BlochVector axis_mean = BlochVector::Zero();
  double axis_dispersion = 0.0;  // rms angle to the mean axis, radians
  int n_excluded = 0;            // samples outside the linear regime
};

struct RelaxationTimes {
  double t1;  // longitudinal, seconds
  double t2;  // transverse, seconds
};

struct EnsembleOptions {
  int n_samples = 20000;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency; results are thread-count independent
  std::optional<RelaxationTimes> relaxation;
};

// Net unitary of a program under one spin's error sample: fold of compose over
// events (Delay -> free_propagator, Pulse -> pulse_propagator).
Rotationd propagate(const SequenceProgram& program, const PulseErrorSample& sample,
                    const ErrorModelConfig& config);

BlochVector evolve_state(const SequenceProgram& program, const PulseErrorSample& sample,
                         const ErrorModelConfig& config, const BlochVector& initial);

// Bloch vector after every event; size = events + 1, front = initial.
std::vector<BlochVector> evolve_trajectory(const SequenceProgram& program,
                                           const PulseErrorSample& sample,
                                           const ErrorModelConfig& config,
                                           const BlochVector& initial);

// As evolve_state, but each delay also applies phenomenological Bloch
// relaxation (transverse exp(-d/t2), longitudinal exp(-d/t1) toward zero
// equilibrium). Pulses are instantaneous for relaxation.
BlochVector evolve_with_relaxation(const SequenceProgram& program,
                                   const PulseErrorSample& sample,
                                   const ErrorModelConfig& config, const BlochVector& initial,
                                   double t1, double t2);

// Monte-Carlo ensemble fidelity, normalized by the CPMG-2 reference computed
// from the same per-index sample streams (reference always relaxation-free).
// Sample i always consumes stream i, so results are bit-identical for any
// thread count.
EnsembleResult ensemble_fidelity(const SequenceProgram& program, const ErrorModelConfig& config,
                                 const BlochVector& initial, const EnsembleOptions& options);

NetRotationStats net_rotation_stats(const SequenceProgram& program,
                                    const ErrorModelConfig& config, int n_samples,
                                    std::uint64_t seed, const AngleAxisd& reference);

// First-order net-rotation formulas for one periodic cycle.
double first_order_phi_xy(double n_y, double m_x);
double first_order_phi_xz(double n_z, double eps_x, double eps_y, double delta_omega,
                          double tau);

// Reference against which delta-phi carries the conventional coefficient signs under
// this library's right-handed active convention: (2pi, -Z) for XYXY and
// (2pi, -Y) for XZXZ.
AngleAxisd canonical_reference(Family family);

enum class ErrorDirection { PhaseError, Eps, EpsX, EpsY, NZ, MZ, DeltaOmega };

const char* to_string(ErrorDirection d);

struct FirstOrderFit {
  double slope = 0.0;          // fitted d(delta_phi)/d(magnitude), OLS through origin
  double max_residual = 0.0;   // |delta_phi - slope * m| at the largest magnitude
  bool quadratic_decay = false;  // residuals shrink at least quadratically
  bool nonlinear = false;        // residual/slope too large at the largest magnitude
  std::vector<double> magnitudes;
  std::vector<double> delta_phis;
};

// Builds a single deterministic error sample per magnitude with only the named
// direction set (DeltaOmega injects magnitude/tau as the offset so the fitted
// variable is delta_omega * tau), subtracts the zero-magnitude baseline, and
// fits delta-phi against magnitude. base_delta_omega is applied to every
// sample, for formula checks at fixed offset.
FirstOrderFit verify_first_order(Family family, Construction construction,
                                 int level_or_cycles, ErrorDirection direction,
                                 const ErrorModelConfig& config,
                                 std::span<const double> magnitudes,
                                 double base_delta_omega = 0.0);

inline constexpr double kDefaultFitMagnitudes[] = {1e-4, 3e-4, 1e-3, 3e-3};

// Least-squares exponential decay time: fits log(values) = a - t/T, returns T.
double fit_exponential_decay(std::span<const double> times, std::span<const double> values);

}  // namespace ddsim
