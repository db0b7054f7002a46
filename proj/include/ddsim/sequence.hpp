#pragma once

#include "ddsim/pulse_model.hpp"

#include <string>
#include <vector>

namespace ddsim {

enum class Family { CPMG, XYXY, XZXZ, Hahn };
enum class Construction { Periodic, Concatenated };

const char* to_string(Family f);
const char* to_string(Construction c);

// Sequence alphabet: delays and nominal pi-pulses. Z pulses never appear as
// primitives; they're always expanded to X immediately followed by Y.
struct SequenceEvent {
  enum class Kind { Delay, Pulse };
  Kind kind;
  double duration = 0.0;  // Delay only, seconds
  PulseAxis axis = PulseAxis::X;

  static SequenceEvent delay(double d) { return {Kind::Delay, d, PulseAxis::X}; }
  static SequenceEvent pulse(PulseAxis a) { return {Kind::Pulse, 0.0, a}; }
  bool is_pulse() const { return kind == Kind::Pulse; }
};

bool operator==(const SequenceEvent& a, const SequenceEvent& b);

struct SequenceMeta {
  Family family = Family::XYXY;
  Construction construction = Construction::Periodic;
  int level_or_cycles = 1;
  double tau = 0.0;
};

struct SequenceProgram {
  std::vector<SequenceEvent> events;
  SequenceMeta meta;
};

// n_echoes repetitions of [tau, Y, tau]; echo read-out points sit after each
// repetition. The preparation pi/2 pulse is not part of the program.
SequenceProgram build_cpmg(int n_echoes, double tau);

// XYXY cycle [tau X tau Y tau X tau Y]; XZXZ cycle [tau X tau (XY) tau X tau (XY)].
SequenceProgram build_periodic(Family family, int cycles, double tau);

// Standard concatenation recursion C_l = C_{l-1} P1 C_{l-1} P2 C_{l-1} P1 C_{l-1} P2
// with C_0 = [tau]; level 1 equals one periodic cycle.
SequenceProgram build_concatenated(Family family, int level, double tau);

// Two-pulse refocusing block [tau, X, tau].
SequenceProgram build_hahn(double tau);

// Removes pairs of identical pulses adjacent with no intervening delay, to
// fixpoint. Delays are never merged or removed.
SequenceProgram cancel_adjacent_identical(const SequenceProgram& program);

int pulse_count(const SequenceProgram& program);
int delay_count(const SequenceProgram& program);
double total_duration(const SequenceProgram& program, double t_pulse);

// One event per line: "D <seconds>" or "P <X|Y>".
std::string to_text(const SequenceProgram& program);

}  // namespace ddsim
