#include "ddsim/experiments.hpp"

#include "ddsim/version.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>

namespace ddsim {

namespace {

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::string header_comment(const RunConfig& config) {
  return fmt("# ddsim %s config_hash=%016llx seed=%llu\n", kVersion,
             static_cast<unsigned long long>(config.config_hash),
             static_cast<unsigned long long>(config.seed));
}

BlochVector cardinal_state(char axis) {
  switch (axis) {
    case 'x': return BlochVector(1.0, 0.0, 0.0);
    case 'y': return BlochVector(0.0, 1.0, 0.0);
    default: return BlochVector(0.0, 0.0, 1.0);
  }
}

SequenceProgram build_variant(Family family, Construction construction, int level_or_cycles,
                              double tau) {
  if (family == Family::Hahn) return build_hahn(tau);
  if (family == Family::CPMG) return build_cpmg(level_or_cycles, tau);
  return construction == Construction::Concatenated
             ? build_concatenated(family, level_or_cycles, tau)
             : build_periodic(family, level_or_cycles, tau);
}

}  // namespace

std::string run_fidelity_csv(const RunConfig& config) {
  std::string out = header_comment(config);
  out += "family,construction,level_or_cycles,n_pulses,initial_state,fidelity,std_error,"
         "n_samples,seed\n";
  EnsembleOptions opts;
  opts.n_samples = config.n_samples;
  opts.seed = config.seed;
  opts.threads = config.threads;
  opts.relaxation = config.relaxation;
  const SequenceSpec& spec = config.sequence;
  for (int level : spec.levels_or_cycles) {
    SequenceProgram program =
        build_variant(spec.family, spec.construction, level, config.error_model.tau);
    if (spec.cancel_adjacent) program = cancel_adjacent_identical(program);
    for (char state : spec.initial_states) {
      const EnsembleResult r =
          ensemble_fidelity(program, config.error_model, cardinal_state(state), opts);
      out += fmt("%s,%s,%d,%d,%c,%.9g,%.3g,%d,%llu\n", to_string(spec.family),
                 to_string(spec.construction), level, pulse_count(program), state,
                 r.normalized_fidelity, r.std_error, r.n_samples,
                 static_cast<unsigned long long>(r.seed));
    }
  }
  return out;
}

VerifyReport run_verify(const RunConfig& config) {
  struct Case {
    ErrorDirection direction;
    double expected;
  };
  std::vector<Case> cases;
  if (config.sequence.family == Family::XYXY) {
    cases = {{ErrorDirection::PhaseError, 4.0},
             {ErrorDirection::Eps, 0.0},
             {ErrorDirection::DeltaOmega, 0.0}};
  } else if (config.sequence.family == Family::XZXZ) {
    cases = {{ErrorDirection::EpsY, -2.0}};
  } else {
    throw ConfigError("verify: sequence family must be xyxy or xzxz");
  }

  VerifyReport report;
  for (const Case& c : cases) {
    for (int level : config.sequence.levels_or_cycles) {
      const FirstOrderFit fit =
          verify_first_order(config.sequence.family, config.sequence.construction, level,
                             c.direction, config.error_model, kDefaultFitMagnitudes);
      VerifyRow row;
      row.family = config.sequence.family;
      row.construction = config.sequence.construction;
      row.level_or_cycles = level;
      row.direction = c.direction;
      row.fitted = fit.slope;
      row.expected = c.expected;
      row.abs_error = std::abs(fit.slope - c.expected);
      row.quadratic_ok = fit.quadratic_decay;
      row.nonlinear = fit.nonlinear;
      const double tol = 1e-2 * std::max(1.0, std::abs(c.expected));
      row.pass = row.abs_error <= tol && row.quadratic_ok && !row.nonlinear;
      report.rows.push_back(row);
      report.all_pass = report.all_pass && row.pass;
    }
  }
  return report;
}

std::string format_verify_report(const VerifyReport& report, const RunConfig& config) {
  std::string out = header_comment(config);
  out += "family,construction,level_or_cycles,direction,fitted_slope,expected_slope,"
         "abs_error,quadratic_decay,status\n";
  for (const VerifyRow& r : report.rows) {
    out += fmt("%s,%s,%d,%s,%.6g,%.6g,%.3g,%s,%s\n", to_string(r.family),
               to_string(r.construction), r.level_or_cycles, to_string(r.direction),
               r.fitted, r.expected, r.abs_error, r.quadratic_ok ? "yes" : "no",
               r.pass ? "PASS" : (r.nonlinear ? "FAIL(nonlinear)" : "FAIL"));
  }
  out += report.all_pass ? "# verdict: PASS\n" : "# verdict: FAIL\n";
  return out;
}

std::string run_noise_csv(const RunConfig& config) {
  if (!config.noise) throw ConfigError("noise: config has no [noise] section");
  const NoiseConfig& nc = *config.noise;
  NoiseRunParams params;
  params.amplitude_at_10hz = nc.amplitude_nt_sqrt_hz * 1e-9;
  params.dt = nc.dt_us * 1e-6;
  params.cutoff_hz = nc.cutoff_hz;
  params.n_shots = nc.n_shots;
  params.seed = config.seed;

  std::vector<double> taus;
  taus.reserve(nc.tau_list_us.size());
  for (double t : nc.tau_list_us) taus.push_back(t * 1e-6);

  std::string out = header_comment(config);
  for (const NoiseSequenceSpec& seq : nc.sequences) {
    out += fmt("# sequence=%s\n", seq.label.c_str());
    out += "tau_s,total_time_s,mean_inphase,sd_inphase,mean_quadrature,mean_magnitude,"
           "n_shots\n";
    const auto rows = decay_scan(seq.family, seq.construction, seq.level_or_cycles, taus,
                                 params, config.error_model);
    for (const DecayRow& r : rows)
      out += fmt("%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d\n", r.tau, r.total_time, r.mean_inphase,
                 r.sd_inphase, r.mean_quadrature, r.mean_magnitude, r.n_shots);
  }
  return out;
}

std::string dump_program_text(Family family, Construction construction, int level_or_cycles,
                              double tau, double t_pulse) {
  const SequenceProgram program = build_variant(family, construction, level_or_cycles, tau);
  std::string out = to_text(program);
  out += fmt("pulses=%d delays=%d duration=%.9g\n", pulse_count(program),
             delay_count(program), total_duration(program, t_pulse));
  return out;
}

std::string dump_config_programs(const RunConfig& config) {
  std::string out;
  for (int level : config.sequence.levels_or_cycles) {
    out += fmt("# %s %s %d\n", to_string(config.sequence.family),
               to_string(config.sequence.construction), level);
    SequenceProgram program = build_variant(config.sequence.family,
                                            config.sequence.construction, level,
                                            config.error_model.tau);
    if (config.sequence.cancel_adjacent) program = cancel_adjacent_identical(program);
    out += to_text(program);
    out += fmt("pulses=%d delays=%d duration=%.9g\n", pulse_count(program),
               delay_count(program),
               total_duration(program, config.error_model.t_pulse));
  }
  return out;
}

}  // namespace ddsim
