#include "ddsim/sequence.hpp"

#include <cstdio>
#include <stdexcept>

namespace ddsim {

const char* to_string(Family f) {
  switch (f) {
    case Family::CPMG: return "cpmg";
    case Family::XYXY: return "xyxy";
    case Family::XZXZ: return "xzxz";
    case Family::Hahn: return "hahn";
  }
  return "?";
}

const char* to_string(Construction c) {
  return c == Construction::Periodic ? "periodic" : "cdd";
}

bool operator==(const SequenceEvent& a, const SequenceEvent& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == SequenceEvent::Kind::Delay) return a.duration == b.duration;
  return a.axis == b.axis;
}

namespace {

void require_positive_tau(double tau) {
  if (tau <= 0) throw std::invalid_argument("sequence builder: tau must be positive");
}

// The composite Z is X immediately followed by Y, zero delay in between.
void append_z(std::vector<SequenceEvent>& ev) {
  ev.push_back(SequenceEvent::pulse(PulseAxis::X));
  ev.push_back(SequenceEvent::pulse(PulseAxis::Y));
}

std::vector<SequenceEvent> periodic_cycle(Family family, double tau) {
  std::vector<SequenceEvent> cyc;
  for (int half = 0; half < 2; ++half) {
    cyc.push_back(SequenceEvent::delay(tau));
    cyc.push_back(SequenceEvent::pulse(PulseAxis::X));
    cyc.push_back(SequenceEvent::delay(tau));
    if (family == Family::XYXY)
      cyc.push_back(SequenceEvent::pulse(PulseAxis::Y));
    else
      append_z(cyc);
  }
  return cyc;
}

}  // namespace

SequenceProgram build_cpmg(int n_echoes, double tau) {
  if (n_echoes < 1) throw std::invalid_argument("build_cpmg: n_echoes must be >= 1");
  require_positive_tau(tau);
  SequenceProgram p;
  p.meta = {Family::CPMG, Construction::Periodic, n_echoes, tau};
  for (int i = 0; i < n_echoes; ++i) {
    p.events.push_back(SequenceEvent::delay(tau));
    p.events.push_back(SequenceEvent::pulse(PulseAxis::Y));
    p.events.push_back(SequenceEvent::delay(tau));
  }
  return p;
}

SequenceProgram build_periodic(Family family, int cycles, double tau) {
  if (family != Family::XYXY && family != Family::XZXZ)
    throw std::invalid_argument("build_periodic: family must be XYXY or XZXZ");
  if (cycles < 1) throw std::invalid_argument("build_periodic: cycles must be >= 1");
  require_positive_tau(tau);
  SequenceProgram p;
  p.meta = {family, Construction::Periodic, cycles, tau};
  const std::vector<SequenceEvent> cyc = periodic_cycle(family, tau);
  for (int i = 0; i < cycles; ++i) p.events.insert(p.events.end(), cyc.begin(), cyc.end());
  return p;
}

SequenceProgram build_concatenated(Family family, int level, double tau) {
  if (family != Family::XYXY && family != Family::XZXZ)
    throw std::invalid_argument("build_concatenated: family must be XYXY or XZXZ");
  if (level < 1) throw std::invalid_argument("build_concatenated: level must be >= 1");
  require_positive_tau(tau);
  std::vector<SequenceEvent> c = {SequenceEvent::delay(tau)};
  for (int l = 1; l <= level; ++l) {
    std::vector<SequenceEvent> next;
    next.reserve(4 * c.size() + 6);
    for (int block = 0; block < 4; ++block) {
      next.insert(next.end(), c.begin(), c.end());
      const bool p1 = (block % 2 == 0);
      if (p1)
        next.push_back(SequenceEvent::pulse(PulseAxis::X));
      else if (family == Family::XYXY)
        next.push_back(SequenceEvent::pulse(PulseAxis::Y));
      else
        append_z(next);
    }
    c = std::move(next);
  }
  SequenceProgram p;
  p.meta = {family, Construction::Concatenated, level, tau};
  p.events = std::move(c);
  return p;
}

SequenceProgram build_hahn(double tau) {
  require_positive_tau(tau);
  SequenceProgram p;
  p.meta = {Family::Hahn, Construction::Periodic, 1, tau};
  p.events = {SequenceEvent::delay(tau), SequenceEvent::pulse(PulseAxis::X),
              SequenceEvent::delay(tau)};
  return p;
}

SequenceProgram cancel_adjacent_identical(const SequenceProgram& program) {
  SequenceProgram out = program;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < out.events.size(); ++i) {
      if (out.events[i].is_pulse() && out.events[i + 1].is_pulse() &&
          out.events[i].axis == out.events[i + 1].axis) {
        out.events.erase(out.events.begin() + static_cast<std::ptrdiff_t>(i),
                         out.events.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return out;
}

int pulse_count(const SequenceProgram& program) {
  int n = 0;
  for (const auto& e : program.events) n += e.is_pulse() ? 1 : 0;
  return n;
}

int delay_count(const SequenceProgram& program) {
  return static_cast<int>(program.events.size()) - pulse_count(program);
}

double total_duration(const SequenceProgram& program, double t_pulse) {
  double t = 0.0;
  for (const auto& e : program.events)
    t += e.is_pulse() ? t_pulse : e.duration;
  return t;
}

std::string to_text(const SequenceProgram& program) {
  std::string out;
  char buf[64];
  for (const auto& e : program.events) {
    if (e.is_pulse()) {
      out += (e.axis == PulseAxis::X) ? "P X\n" : "P Y\n";
    } else {
      std::snprintf(buf, sizeof buf, "D %.9g\n", e.duration);
      out += buf;
    }
  }
  return out;
}

}  // namespace ddsim
