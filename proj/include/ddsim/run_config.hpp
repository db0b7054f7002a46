#pragma once

#include "ddsim/noise.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ddsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One (family, construction) sweep: levels/cycles list x initial states list.
struct SequenceSpec {
  Family family = Family::XYXY;
  Construction construction = Construction::Concatenated;
  std::vector<int> levels_or_cycles = {1, 2, 3, 4};
  std::vector<char> initial_states = {'x', 'y', 'z'};  // cardinal axes
  bool cancel_adjacent = false;
};

// One sequence entry of a noise scan, e.g. "hahn", "cpmg-2", "cdd-xyxy-4",
// "periodic-xzxz-2".
struct NoiseSequenceSpec {
  Family family = Family::Hahn;
  Construction construction = Construction::Periodic;
  int level_or_cycles = 1;
  std::string label;
};

struct NoiseConfig {
  double amplitude_nt_sqrt_hz = 50.0;
  double dt_us = 2.0;
  double cutoff_hz = 0.0;
  int n_shots = 200;
  std::vector<double> tau_list_us;
  std::vector<NoiseSequenceSpec> sequences;
};

struct RunConfig {
  ErrorModelConfig error_model;
  int n_samples = 20000;
  std::uint64_t seed = 0;
  int threads = 0;
  SequenceSpec sequence;
  std::optional<NoiseConfig> noise;
  std::optional<RelaxationTimes> relaxation;
  std::uint64_t config_hash = 0;  // FNV-1a of the raw config text
};

// Strict INI-style parser: [section] headers, key = value lines, '#'/';'
// comments. Unknown sections or keys, duplicates, and malformed values are
// errors with line diagnostics. Physical quantities carry units in key names.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

NoiseSequenceSpec parse_noise_sequence(const std::string& token);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace ddsim
