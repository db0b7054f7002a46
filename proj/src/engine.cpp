#include "ddsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace ddsim {

namespace {

// Per-sample pulse propagators are constant across the program; delays are not
// (durations vary), so those are built per event.
struct SamplePropagators {
  Rotationd x, y;
  double delta_omega;
};

SamplePropagators make_propagators(const PulseErrorSample& sample,
                                   const ErrorModelConfig& config) {
  return {pulse_propagator(sample, PulseAxis::X, config),
          pulse_propagator(sample, PulseAxis::Y, config), sample.delta_omega};
}

double kahan_mean(const std::vector<double>& v) {
  double sum = 0.0, c = 0.0;
  for (double x : v) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(v.size());
}

void run_indexed(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([=, &body] {
      for (int i = begin; i < end; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Rotationd propagate(const SequenceProgram& program, const PulseErrorSample& sample,
                    const ErrorModelConfig& config) {
  const SamplePropagators p = make_propagators(sample, config);
  Rotationd net = Rotationd::Identity();
  for (const auto& e : program.events) {
    const Rotationd step = e.is_pulse() ? (e.axis == PulseAxis::X ? p.x : p.y)
                                        : free_propagator(p.delta_omega, e.duration);
    net = compose(net, step);
  }
  return net;
}

BlochVector evolve_state(const SequenceProgram& program, const PulseErrorSample& sample,
                         const ErrorModelConfig& config, const BlochVector& initial) {
  return apply(propagate(program, sample, config), initial);
}

std::vector<BlochVector> evolve_trajectory(const SequenceProgram& program,
                                           const PulseErrorSample& sample,
                                           const ErrorModelConfig& config,
                                           const BlochVector& initial) {
  const SamplePropagators p = make_propagators(sample, config);
  std::vector<BlochVector> traj;
  traj.reserve(program.events.size() + 1);
  traj.push_back(initial);
  BlochVector s = initial;
  for (const auto& e : program.events) {
    const Rotationd step = e.is_pulse() ? (e.axis == PulseAxis::X ? p.x : p.y)
                                        : free_propagator(p.delta_omega, e.duration);
    s = apply(step, s);
    traj.push_back(s);
  }
  return traj;
}

BlochVector evolve_with_relaxation(const SequenceProgram& program,
                                   const PulseErrorSample& sample,
                                   const ErrorModelConfig& config, const BlochVector& initial,
                                   double t1, double t2) {
  if (!(t1 >= t2) || t2 <= 0)
    throw std::invalid_argument("evolve_with_relaxation: need t1 >= t2 > 0");
  const SamplePropagators p = make_propagators(sample, config);
  BlochVector s = initial;
  for (const auto& e : program.events) {
    if (e.is_pulse()) {
      s = apply(e.axis == PulseAxis::X ? p.x : p.y, s);
    } else {
      s = apply(free_propagator(p.delta_omega, e.duration), s);
      const double f2 = std::exp(-e.duration / t2);
      s.x() *= f2;
      s.y() *= f2;
      s.z() *= std::exp(-e.duration / t1);
    }
  }
  return s;
}

EnsembleResult ensemble_fidelity(const SequenceProgram& program, const ErrorModelConfig& config,
                                 const BlochVector& initial, const EnsembleOptions& options) {
  if (options.n_samples < 1)
    throw std::invalid_argument("ensemble_fidelity: n_samples must be >= 1");
  if (std::abs(initial.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("ensemble_fidelity: initial state must be unit length");
  const int n = options.n_samples;
  const SequenceProgram reference_program = build_cpmg(2, config.tau);
  const BlochVector y_hat(0.0, 1.0, 0.0);

  std::vector<double> signal(static_cast<std::size_t>(n));
  std::vector<double> reference(static_cast<std::size_t>(n));
  run_indexed(n, options.threads, [&](int i) {
    SplitMix64 rng = SplitMix64::stream(options.seed, static_cast<std::uint64_t>(i));
    const PulseErrorSample sample = sample_errors(config, rng);
    const BlochVector fin =
        options.relaxation
            ? evolve_with_relaxation(program, sample, config, initial,
                                     options.relaxation->t1, options.relaxation->t2)
            : evolve_state(program, sample, config, initial);
    signal[static_cast<std::size_t>(i)] = initial.dot(fin);
    reference[static_cast<std::size_t>(i)] =
        y_hat.dot(evolve_state(reference_program, sample, config, y_hat));
  });

  const double raw = kahan_mean(signal);
  const double ref = kahan_mean(reference);
  if (ref <= 0.1)
    throw NormalizationError("ensemble_fidelity: CPMG-2 reference collapsed (<= 0.1)");

  double var = 0.0;
  for (double s : signal) var += (s - raw) * (s - raw);
  var = (n > 1) ? var / static_cast<double>(n - 1) : 0.0;

  EnsembleResult r;
  r.raw_signal = raw;
  r.normalized_fidelity = raw / ref;
  r.std_error = std::sqrt(var / static_cast<double>(n)) / ref;
  r.n_samples = n;
  r.seed = options.seed;
  return r;
}

NetRotationStats net_rotation_stats(const SequenceProgram& program,
                                    const ErrorModelConfig& config, int n_samples,
                                    std::uint64_t seed, const AngleAxisd& reference) {
  if (n_samples < 1)
    throw std::invalid_argument("net_rotation_stats: n_samples must be >= 1");
  std::vector<double> dphi;
  std::vector<BlochVector> axes;
  dphi.reserve(static_cast<std::size_t>(n_samples));
  int excluded = 0;
  for (int i = 0; i < n_samples; ++i) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(i));
    const PulseErrorSample sample = sample_errors(config, rng);
    const Rotationd net = propagate(program, sample, config);
    try {
      dphi.push_back(angle_relative_to(net, reference));
    } catch (const OutOfLinearRegime&) {
      ++excluded;
      continue;
    }
    AngleAxisd aa = to_angle_axis(net);
    if (aa.axis_defined) {
      if (aa.axis.dot(reference.axis) < 0) aa.axis = -aa.axis;
      axes.push_back(aa.axis);
    }
  }

  NetRotationStats out;
  out.n_excluded = excluded;
  if (!dphi.empty()) out.mean_delta_phi = kahan_mean(dphi);
  if (!axes.empty()) {
    BlochVector mean = BlochVector::Zero();
    for (const auto& a : axes) mean += a;
    if (mean.norm() > 1e-12) mean.normalize();
    double ms = 0.0;
    for (const auto& a : axes) {
      const double c = std::clamp(a.dot(mean), -1.0, 1.0);
      const double ang = std::acos(c);
      ms += ang * ang;
    }
    out.axis_mean = mean;
    out.axis_dispersion = std::sqrt(ms / static_cast<double>(axes.size()));
  } else {
    out.axis_mean = reference.axis;  // all residuals ~identity; axis degenerate
  }
  return out;
}

double first_order_phi_xy(double n_y, double m_x) {
  return 2.0 * M_PI + 4.0 * (n_y + m_x);
}

double first_order_phi_xz(double n_z, double eps_x, double eps_y, double delta_omega,
                          double tau) {
  const double th = delta_omega * tau;
  return 2.0 * M_PI + 4.0 * n_z * (1.0 - std::cos(th)) - 2.0 * eps_y +
         2.0 * eps_x * std::sin(th);
}

AngleAxisd canonical_reference(Family family) {
  AngleAxisd ref;
  ref.angle = 2.0 * M_PI;
  ref.axis_defined = true;
  switch (family) {
    case Family::XYXY:
      ref.axis = BlochVector(0.0, 0.0, -1.0);
      return ref;
    case Family::XZXZ:
      ref.axis = BlochVector(0.0, -1.0, 0.0);
      return ref;
    default:
      throw std::invalid_argument("canonical_reference: only XYXY/XZXZ have one");
  }
}

const char* to_string(ErrorDirection d) {
  switch (d) {
    case ErrorDirection::PhaseError: return "phase_error";
    case ErrorDirection::Eps: return "eps";
    case ErrorDirection::EpsX: return "eps_x";
    case ErrorDirection::EpsY: return "eps_y";
    case ErrorDirection::NZ: return "n_z";
    case ErrorDirection::MZ: return "m_z";
    case ErrorDirection::DeltaOmega: return "delta_omega";
  }
  return "?";
}

namespace {

PulseErrorSample direction_sample(ErrorDirection direction, double magnitude, double tau,
                                  double base_delta_omega) {
  PulseErrorSample s;
  s.delta_omega = base_delta_omega;
  switch (direction) {
    case ErrorDirection::PhaseError: s.m_x = magnitude; break;
    case ErrorDirection::Eps: s.eps_x = s.eps_y = magnitude; break;
    case ErrorDirection::EpsX: s.eps_x = magnitude; break;
    case ErrorDirection::EpsY: s.eps_y = magnitude; break;
    case ErrorDirection::NZ: s.n_z = magnitude; break;
    case ErrorDirection::MZ: s.m_z = magnitude; break;
    case ErrorDirection::DeltaOmega: s.delta_omega += magnitude / tau; break;
  }
  return s;
}

}  // namespace

FirstOrderFit verify_first_order(Family family, Construction construction,
                                 int level_or_cycles, ErrorDirection direction,
                                 const ErrorModelConfig& config,
                                 std::span<const double> magnitudes,
                                 double base_delta_omega) {
  if (magnitudes.size() < 3)
    throw std::invalid_argument("verify_first_order: need at least 3 magnitudes");
  for (double m : magnitudes)
    if (!(m > 0.0 && m <= 1e-2))
      throw std::invalid_argument("verify_first_order: magnitudes must be in (0, 1e-2]");

  const SequenceProgram program =
      construction == Construction::Concatenated
          ? build_concatenated(family, level_or_cycles, config.tau)
          : build_periodic(family, level_or_cycles, config.tau);
  const AngleAxisd reference = canonical_reference(family);

  const auto dphi_at = [&](const PulseErrorSample& s) {
    return angle_relative_to(propagate(program, s, config), reference);
  };
  const double baseline =
      dphi_at(direction_sample(direction, 0.0, config.tau, base_delta_omega));

  FirstOrderFit fit;
  std::vector<double> mags(magnitudes.begin(), magnitudes.end());
  std::sort(mags.begin(), mags.end());
  double num = 0.0, den = 0.0;
  for (double m : mags) {
    const double d =
        dphi_at(direction_sample(direction, m, config.tau, base_delta_omega)) - baseline;
    fit.magnitudes.push_back(m);
    fit.delta_phis.push_back(d);
    num += m * d;
    den += m * m;
  }
  fit.slope = num / den;

  const std::size_t last = mags.size() - 1;
  const std::size_t mid = mags.size() - 2;
  fit.max_residual = std::abs(fit.delta_phis[last] - fit.slope * fit.magnitudes[last]);
  fit.nonlinear =
      fit.max_residual > 0.1 * std::max(std::abs(fit.slope) * mags[last], mags[last]);

  // Order check against the small-magnitude linear coefficient (the OLS fit
  // redistributes higher-order terms across its residuals).
  const double s0 = fit.delta_phis.front() / fit.magnitudes.front();
  const auto excess = [&](std::size_t i) {
    return std::abs(fit.delta_phis[i] - s0 * fit.magnitudes[i]);
  };
  const double r_last = excess(last);
  const double r_mid = excess(mid);
  const double growth = std::pow(mags[last] / mags[mid], 1.7);
  fit.quadratic_decay = (r_last <= 1e-9) || (r_mid > 0.0 && r_last / r_mid >= growth);
  return fit;
}

double fit_exponential_decay(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size() || times.size() < 2)
    throw std::invalid_argument("fit_exponential_decay: need matching series, length >= 2");
  double st = 0, sy = 0, stt = 0, sty = 0;
  const auto n = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (values[i] <= 0.0)
      throw std::invalid_argument("fit_exponential_decay: values must be positive");
    const double y = std::log(values[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  if (slope >= 0.0)
    throw std::invalid_argument("fit_exponential_decay: series does not decay");
  return -1.0 / slope;
}

}  // namespace ddsim
