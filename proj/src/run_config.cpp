#include "ddsim/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace ddsim {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

struct Entry {
  std::string value;
  int line;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') fail(line, "expected a number, got '" + v + "'");
  return x;
}

std::int64_t parse_int(const std::string& v, int line) {
  char* end = nullptr;
  const std::int64_t x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') fail(line, "expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Access helpers; lookups mark entries used so leftovers can be rejected.
class SectionView {
 public:
  SectionView(Section* s, std::string name) : s_(s), name_(std::move(name)) {}

  bool present() const { return s_ != nullptr; }

  const Entry* find(const std::string& key) const {
    if (!s_) return nullptr;
    auto it = s_->find(key);
    if (it == s_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  const Entry& require(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) throw ConfigError("config: [" + name_ + "] is missing required key '" + key + "'");
    return *e;
  }

  double get_double(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e ? parse_double(e->value, e->line) : fallback;
  }

  void reject_unused() const {
    if (!s_) return;
    for (const auto& [key, entry] : *s_)
      if (!entry.used) fail(entry.line, "unknown key '" + key + "' in [" + name_ + "]");
  }

 private:
  Section* s_;
  std::string name_;
};

Family parse_family(const std::string& v, int line) {
  if (v == "xyxy") return Family::XYXY;
  if (v == "xzxz") return Family::XZXZ;
  if (v == "cpmg") return Family::CPMG;
  if (v == "hahn") return Family::Hahn;
  fail(line, "unknown family '" + v + "' (expected xyxy|xzxz|cpmg|hahn)");
}

Construction parse_construction(const std::string& v, int line) {
  if (v == "periodic") return Construction::Periodic;
  if (v == "cdd") return Construction::Concatenated;
  fail(line, "unknown construction '" + v + "' (expected periodic|cdd)");
}

}  // namespace

NoiseSequenceSpec parse_noise_sequence(const std::string& token) {
  NoiseSequenceSpec spec;
  spec.label = token;
  if (token == "hahn") {
    spec.family = Family::Hahn;
    spec.level_or_cycles = 1;
    return spec;
  }
  // forms: cpmg-N, cdd-<family>-L, periodic-<family>-K
  const auto parts = split_list([&] {
    std::string t = token;
    std::replace(t.begin(), t.end(), '-', ',');
    return t;
  }());
  const auto bad = [&] {
    return ConfigError("config: bad noise sequence token '" + token +
                       "' (expected hahn, cpmg-N, cdd-xyxy-L, periodic-xzxz-K, ...)");
  };
  if (parts.size() == 2 && parts[0] == "cpmg") {
    spec.family = Family::CPMG;
    spec.level_or_cycles = static_cast<int>(parse_int(parts[1], 0));
    return spec;
  }
  if (parts.size() == 3 && (parts[0] == "cdd" || parts[0] == "periodic")) {
    spec.construction =
        parts[0] == "cdd" ? Construction::Concatenated : Construction::Periodic;
    if (parts[1] == "xyxy")
      spec.family = Family::XYXY;
    else if (parts[1] == "xzxz")
      spec.family = Family::XZXZ;
    else
      throw bad();
    spec.level_or_cycles = static_cast<int>(parse_int(parts[2], 0));
    return spec;
  }
  throw bad();
}

RunConfig parse_run_config(const std::string& text) {
  static const std::vector<std::string> known_sections = {
      "error_model", "simulation", "sequence", "noise", "relaxation"};

  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "malformed section header '" + raw + "'");
      current = trim(line.substr(1, line.size() - 2));
      if (std::find(known_sections.begin(), known_sections.end(), current) ==
          known_sections.end())
        fail(lineno, "unknown section [" + current + "]");
      if (sections.count(current)) fail(lineno, "duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value', got '" + raw + "'");
    if (current.empty()) fail(lineno, "key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(lineno, "empty key or value");
    auto [it, inserted] = sections[current].emplace(key, Entry{value, lineno});
    if (!inserted) fail(lineno, "duplicate key '" + key + "'");
  }

  const auto view = [&](const char* name) {
    auto it = sections.find(name);
    return SectionView(it == sections.end() ? nullptr : &it->second, name);
  };

  RunConfig cfg;
  cfg.config_hash = fnv1a64(text);

  {
    SectionView em = view("error_model");
    if (!em.present()) throw ConfigError("config: missing [error_model] section");
    const Entry* eps_deg = em.find("eps0_deg");
    const Entry* eps_rad = em.find("eps0_rad");
    if (!!eps_deg == !!eps_rad)
      throw ConfigError("config: [error_model] needs exactly one of eps0_deg | eps0_rad");
    cfg.error_model.eps0 = eps_deg ? parse_double(eps_deg->value, eps_deg->line) * M_PI / 180.0
                                   : parse_double(eps_rad->value, eps_rad->line);
    const Entry* n0_deg = em.find("n0_deg");
    const Entry* n0_rad = em.find("n0_rad");
    if (!!n0_deg == !!n0_rad)
      throw ConfigError("config: [error_model] needs exactly one of n0_deg | n0_rad");
    cfg.error_model.n0 = n0_deg ? parse_double(n0_deg->value, n0_deg->line) * M_PI / 180.0
                                : parse_double(n0_rad->value, n0_rad->line);
    const Entry* fwhm = em.find("delta_omega_fwhm_khz");
    const Entry* sigma = em.find("delta_omega_sigma_khz");
    const Entry* fwhm_mg = em.find("delta_omega_fwhm_mg");
    if (!!fwhm + !!sigma + !!fwhm_mg != 1)
      throw ConfigError(
          "config: [error_model] needs exactly one of delta_omega_fwhm_khz | "
          "delta_omega_sigma_khz | delta_omega_fwhm_mg");
    if (fwhm_mg) {
      // field units: milligauss -> Tesla -> rad/s via the electron gamma
      cfg.error_model.delta_omega_width =
          constants::gamma_electron * 1e-7 * parse_double(fwhm_mg->value, fwhm_mg->line);
    } else {
      const Entry* width = fwhm ? fwhm : sigma;
      cfg.error_model.delta_omega_width =
          2.0 * M_PI * 1e3 * parse_double(width->value, width->line);
    }
    cfg.error_model.width_is_fwhm = (sigma == nullptr);
    cfg.error_model.phase_error = em.get_double("phase_error_rad", 0.0);
    cfg.error_model.t_pulse = 1e-9 * parse_double(em.require("t_pulse_ns").value,
                                                  em.require("t_pulse_ns").line);
    cfg.error_model.tau =
        1e-6 * parse_double(em.require("tau_us").value, em.require("tau_us").line);
    cfg.error_model.validate();
    em.reject_unused();
  }

  {
    SectionView sim = view("simulation");
    if (sim.present()) {
      if (const Entry* e = sim.find("n_samples"))
        cfg.n_samples = static_cast<int>(parse_int(e->value, e->line));
      if (const Entry* e = sim.find("seed"))
        cfg.seed = static_cast<std::uint64_t>(parse_int(e->value, e->line));
      if (const Entry* e = sim.find("threads"))
        cfg.threads = static_cast<int>(parse_int(e->value, e->line));
      if (cfg.n_samples < 1) throw ConfigError("config: n_samples must be >= 1");
      sim.reject_unused();
    }
  }

  {
    SectionView seq = view("sequence");
    if (seq.present()) {
      if (const Entry* e = seq.find("family"))
        cfg.sequence.family = parse_family(e->value, e->line);
      if (const Entry* e = seq.find("construction"))
        cfg.sequence.construction = parse_construction(e->value, e->line);
      const Entry* levels = seq.find("levels");
      const Entry* cycles = seq.find("cycles");
      if (levels && cycles)
        throw ConfigError("config: [sequence] takes levels or cycles, not both");
      if (const Entry* e = levels ? levels : cycles) {
        cfg.sequence.levels_or_cycles.clear();
        for (const auto& item : split_list(e->value))
          cfg.sequence.levels_or_cycles.push_back(
              static_cast<int>(parse_int(item, e->line)));
        if (cfg.sequence.levels_or_cycles.empty())
          fail(e->line, "empty levels/cycles list");
      }
      if (const Entry* e = seq.find("states")) {
        cfg.sequence.initial_states.clear();
        for (const auto& item : split_list(e->value)) {
          if (item != "x" && item != "y" && item != "z")
            fail(e->line, "states must be drawn from x,y,z");
          cfg.sequence.initial_states.push_back(item[0]);
        }
        if (cfg.sequence.initial_states.empty()) fail(e->line, "empty states list");
      }
      if (const Entry* e = seq.find("cancel_adjacent"))
        cfg.sequence.cancel_adjacent = parse_bool(e->value, e->line);
      seq.reject_unused();
    }
  }

  {
    SectionView nz = view("noise");
    if (nz.present()) {
      NoiseConfig n;
      n.amplitude_nt_sqrt_hz = parse_double(nz.require("amplitude_nt_sqrt_hz").value,
                                            nz.require("amplitude_nt_sqrt_hz").line);
      n.dt_us = nz.get_double("dt_us", 2.0);
      n.cutoff_hz = nz.get_double("cutoff_hz", 0.0);
      if (const Entry* e = nz.find("n_shots"))
        n.n_shots = static_cast<int>(parse_int(e->value, e->line));
      {
        const Entry& e = nz.require("tau_list_us");
        for (const auto& item : split_list(e.value))
          n.tau_list_us.push_back(parse_double(item, e.line));
        if (n.tau_list_us.empty()) fail(e.line, "empty tau_list_us");
      }
      {
        const Entry& e = nz.require("sequences");
        for (const auto& item : split_list(e.value))
          n.sequences.push_back(parse_noise_sequence(item));
        if (n.sequences.empty()) fail(e.line, "empty sequences list");
      }
      cfg.noise = std::move(n);
      nz.reject_unused();
    }
  }

  {
    SectionView rx = view("relaxation");
    if (rx.present()) {
      RelaxationTimes r{};
      r.t1 = 1e-3 * parse_double(rx.require("t1_ms").value, rx.require("t1_ms").line);
      r.t2 = 1e-3 * parse_double(rx.require("t2_ms").value, rx.require("t2_ms").line);
      if (!(r.t1 >= r.t2) || r.t2 <= 0)
        throw ConfigError("config: [relaxation] needs t1 >= t2 > 0");
      cfg.relaxation = r;
      rx.reject_unused();
    }
  }

  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace ddsim
