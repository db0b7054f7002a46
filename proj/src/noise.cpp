#include "ddsim/noise.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ddsim {

double NoiseTrajectory::value_at(double t) const {
  if (samples.empty()) return 0.0;
  auto k = static_cast<std::ptrdiff_t>(std::floor(t / dt));
  k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(samples.size()) - 1);
  return samples[static_cast<std::size_t>(k)];
}

NoiseTrajectory generate_noise(double amplitude_at_10hz, double duration, double dt,
                               SplitMix64& rng, double cutoff_hz) {
  if (dt <= 0 || duration < dt)
    throw std::invalid_argument("generate_noise: need dt > 0 and duration >= dt");
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  NoiseTrajectory traj;
  traj.dt = dt;
  traj.samples.resize(n);
  const double f_anchor = 10.0;
  const double sigma_step = amplitude_at_10hz * M_PI * f_anchor * std::sqrt(dt);
  if (cutoff_hz <= 0.0) cutoff_hz = 1.0 / (10.0 * duration);
  const double rho = std::exp(-2.0 * M_PI * cutoff_hz * dt);
  double b = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    b = rho * b + sigma_step * rng.next_gaussian();
    traj.samples[k] = b * constants::gamma_electron;
  }
  return traj;
}

namespace {

// Transverse frame of the echo: the direction the nominal error-free program
// returns initial S_Y to, and its in-plane normal.
void echo_frame(const SequenceProgram& program, const ErrorModelConfig& config,
                BlochVector& e_inphase, BlochVector& e_quadrature) {
  const PulseErrorSample ideal{};
  const BlochVector y_hat(0.0, 1.0, 0.0);
  BlochVector f = evolve_state(program, ideal, config, y_hat);
  f.z() = 0.0;
  if (f.norm() < 1e-9)
    throw std::invalid_argument("shot_phase: program has no transverse echo for S_Y");
  e_inphase = f.normalized();
  e_quadrature = BlochVector(0.0, 0.0, 1.0).cross(e_inphase);
}

}  // namespace

ShotPhase shot_phase(const SequenceProgram& program, const NoiseTrajectory& trajectory,
                     double shot_start, const PulseErrorSample& sample,
                     const ErrorModelConfig& config) {
  const double span = total_duration(program, config.t_pulse);
  if (shot_start < 0.0 || shot_start + span > trajectory.duration() + 1e-12)
    throw std::invalid_argument("shot_phase: shot does not fit within the trajectory");

  BlochVector e_i, e_q;
  echo_frame(program, config, e_i, e_q);

  BlochVector s(0.0, 1.0, 0.0);
  double t = shot_start;
  for (const auto& e : program.events) {
    if (e.is_pulse()) {
      s = apply(pulse_propagator_at_offset(sample, e.axis, config,
                                           sample.delta_omega + trajectory.value_at(t)),
                s);
      t += config.t_pulse;
    } else {
      const int nsub = std::max(1, static_cast<int>(std::ceil(e.duration / trajectory.dt)));
      const double sub = e.duration / nsub;
      for (int k = 0; k < nsub; ++k) {
        s = apply(free_propagator(sample.delta_omega + trajectory.value_at(t), sub), s);
        t += sub;
      }
    }
  }
  return {s.dot(e_i), s.dot(e_q)};
}

double magnitude_detect(double in_phase, double quadrature) {
  return std::hypot(in_phase, quadrature);
}

namespace {

SequenceProgram build_scan_program(Family family, Construction construction,
                                   int level_or_cycles, double tau) {
  if (family == Family::Hahn) return build_hahn(tau);
  if (family == Family::CPMG) return build_cpmg(level_or_cycles, tau);
  return construction == Construction::Concatenated
             ? build_concatenated(family, level_or_cycles, tau)
             : build_periodic(family, level_or_cycles, tau);
}

}  // namespace

std::vector<DecayRow> decay_scan(Family family, Construction construction,
                                 int level_or_cycles, std::span<const double> taus,
                                 const NoiseRunParams& noise, const ErrorModelConfig& config) {
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (taus[i] <= taus[i - 1])
      throw std::invalid_argument("decay_scan: tau values must be increasing");

  std::vector<DecayRow> rows;
  rows.reserve(taus.size());
  std::uint64_t shot_counter = 0;
  for (double tau : taus) {
    const SequenceProgram program =
        build_scan_program(family, construction, level_or_cycles, tau);
    const double span = total_duration(program, config.t_pulse);
    const double margin = 16.0 * noise.dt;

    double si = 0, sq = 0, sm = 0, sii = 0;
    for (int shot = 0; shot < noise.n_shots; ++shot, ++shot_counter) {
      SplitMix64 rng = SplitMix64::stream(noise.seed, shot_counter);
      const double start = rng.next_double() * margin;
      const PulseErrorSample sample = sample_errors(config, rng);
      const NoiseTrajectory traj =
          generate_noise(noise.amplitude_at_10hz, span + 2.0 * margin, noise.dt, rng,
                         noise.cutoff_hz);
      const ShotPhase ph = shot_phase(program, traj, start, sample, config);
      si += ph.in_phase;
      sii += ph.in_phase * ph.in_phase;
      sq += ph.quadrature;
      sm += magnitude_detect(ph.in_phase, ph.quadrature);
    }
    const auto n = static_cast<double>(noise.n_shots);
    DecayRow row;
    row.tau = tau;
    row.total_time = span;
    row.mean_inphase = si / n;
    row.sd_inphase =
        noise.n_shots > 1
            ? std::sqrt(std::max(0.0, (sii - si * si / n) / (n - 1.0)))
            : 0.0;
    row.mean_quadrature = sq / n;
    row.mean_magnitude = sm / n;
    row.n_shots = noise.n_shots;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> periodogram(const NoiseTrajectory& trajectory,
                                std::span<const double> freqs) {
  const auto n = trajectory.samples.size();
  if (n == 0) throw std::invalid_argument("periodogram: empty trajectory");
  std::vector<double> out;
  out.reserve(freqs.size());
  for (double f : freqs) {
    std::complex<double> acc(0.0, 0.0);
    const double w = -2.0 * M_PI * f * trajectory.dt;
    // Recurrent phasor; trajectories are short enough that drift is negligible.
    std::complex<double> phase(1.0, 0.0);
    const std::complex<double> step(std::cos(w), std::sin(w));
    for (std::size_t k = 0; k < n; ++k) {
      acc += (trajectory.samples[k] / constants::gamma_electron) * phase;
      phase *= step;
    }
    out.push_back(2.0 * trajectory.dt / static_cast<double>(n) * std::norm(acc));
  }
  return out;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope: need matching series, length >= 2");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log10(x[i]);
    const double ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ddsim
