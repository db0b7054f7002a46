#pragma once

#include "ddsim/run_config.hpp"

namespace ddsim {

// Experiment runners behind the CLI subcommands. All output is deterministic
// for a fixed config + seed, byte-identical across runs and thread counts.

std::string run_fidelity_csv(const RunConfig& config);

struct VerifyRow {
  Family family;
  Construction construction;
  int level_or_cycles;
  ErrorDirection direction;
  double fitted = 0.0;
  double expected = 0.0;
  double abs_error = 0.0;
  bool quadratic_ok = false;
  bool nonlinear = false;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_pass = true;
};

// Fits delta-phi slopes for the known coefficient cases on the configured
// levels: XYXY phase_error -> 4, eps -> 0, delta_omega -> 0; XZXZ eps_y -> -2.
VerifyReport run_verify(const RunConfig& config);
std::string format_verify_report(const VerifyReport& report, const RunConfig& config);

std::string run_noise_csv(const RunConfig& config);

// Serialized event list plus a "pulses=.. delays=.. duration=.." summary.
std::string dump_program_text(Family family, Construction construction, int level_or_cycles,
                              double tau, double t_pulse);

// Program dumps for every configured sequence variant.
std::string dump_config_programs(const RunConfig& config);

}  // namespace ddsim
