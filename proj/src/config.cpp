#include "ionsense/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace ionsense {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + value);
  }
}

int parse_int(const std::string& value, const std::string& key) {
  const double v = parse_double(value, key);
  if (v != std::floor(v)) {
    throw ConfigError("config: expected integer for '" + key + "'");
  }
  return static_cast<int>(v);
}

// Range syntax "start:step:stop" (inclusive) or comma list "a, b, c".
std::vector<double> parse_range(const std::string& value, const std::string& key) {
  std::vector<double> out;
  if (value.find(':') != std::string::npos) {
    std::stringstream ss(value);
    std::string part;
    std::vector<double> parts;
    while (std::getline(ss, part, ':')) parts.push_back(parse_double(trim(part), key));
    if (parts.size() != 3) {
      throw ConfigError("config: range for '" + key + "' must be start:step:stop");
    }
    const double start = parts[0], step = parts[1], stop = parts[2];
    if (step == 0 || (stop - start) * step < 0) {
      throw ConfigError("config: empty range for '" + key + "'");
    }
    for (double v = start; (step > 0) ? v <= stop + 1e-12 * std::abs(step)
                                      : v >= stop - 1e-12 * std::abs(step);
         v += step) {
      out.push_back(v);
    }
  } else {
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = trim(part);
      if (!part.empty()) out.push_back(parse_double(part, key));
    }
  }
  if (out.empty()) throw ConfigError("config: empty range for '" + key + "'");
  return out;
}

ProbeKind parse_probe(const std::string& v) {
  if (v == "jc") return ProbeKind::JC;
  if (v == "qr") return ProbeKind::QR;
  if (v == "jt") return ProbeKind::JT;
  throw ConfigError("config: unknown probe '" + v + "' (expected jc, qr or jt)");
}

}  // namespace

std::vector<double> ExperimentConfig::time_grid() const {
  std::vector<double> grid;
  grid.reserve(t_points);
  if (t_points == 1) {
    grid.push_back(t_stop);
    return grid;
  }
  for (int i = 0; i < t_points; ++i) {
    grid.push_back(t_start + (t_stop - t_start) * i / double(t_points - 1));
  }
  return grid;
}

HilbertSpace ExperimentConfig::space() const {
  std::vector<int> c = cutoffs;
  if (c.empty()) {
    // Defaults: 30 for single-mode probes, 12 per mode for the two-mode probe.
    c = params.kind == ProbeKind::JT ? std::vector<int>{12, 12}
                                     : std::vector<int>{30};
  }
  return HilbertSpace(c);
}

QuantumState ExperimentConfig::initial_state(const HilbertSpace& space) const {
  switch (initial) {
    case InitialStateKind::Fock: {
      std::vector<int> occ = fock_occupations;
      occ.resize(space.mode_count(), 0);
      return fock_state(space, Spin::Up, occ);
    }
    case InitialStateKind::Thermal:
      return thermal_state(space, 0, nbar);
    case InitialStateKind::Superposition: {
      std::vector<int> occ(space.mode_count(), 0);
      QuantumState ground = fock_state(space, Spin::Up, occ);
      const Complex phase = std::polar(1.0, phi);
      return spin_superposition(space, c_up, c_down * phase, ground);
    }
  }
  throw ConfigError("config: unknown initial state");
}

void ExperimentConfig::validate() const {
  params.validate();
  if (t_points < 1) throw ConfigError("config: grid.points must be >= 1");
  if (t_stop < t_start || t_start < 0) {
    throw ConfigError("config: invalid time grid");
  }
  for (int c : cutoffs) {
    if (c < 2) throw ConfigError("config: cutoffs must be >= 2");
  }
  if (initial == InitialStateKind::Thermal && nbar < 0) {
    throw ConfigError("config: thermal nbar must be >= 0");
  }
  if (initial == InitialStateKind::Superposition) {
    if (std::abs(c_up * c_up + c_down * c_down - 1.0) > 1e-10) {
      throw ConfigError("config: superposition amplitudes must be normalized");
    }
  }
  if (protocol == ProtocolKind::Cpmg && cpmg_order < 1) {
    throw ConfigError("config: cpmg order must be >= 1");
  }
}

namespace {

void set_key(ExperimentConfig& cfg, const std::string& section,
             const std::string& key, const std::string& value) {
  const std::string full = section.empty() ? key : section + "." + key;
  auto& p = cfg.params;

  if (full == "probe") { p.kind = parse_probe(value); return; }

  if (section == "params") {
    if (key == "g") { p.g = parse_double(value, full); return; }
    if (key == "omega") { p.omega = parse_double(value, full); return; }
    if (key == "delta") { p.delta = parse_double(value, full); return; }
    if (key == "drive") { p.drive_omega = parse_double(value, full); return; }
    if (key == "z") { p.z = parse_double(value, full); return; }
    if (key == "mass") { p.mass = parse_double(value, full); return; }
    if (key == "trap_frequency") { p.trap_frequency = parse_double(value, full); return; }
    if (key == "force") { p.force = parse_double(value, full); return; }
    if (key == "force_x") { p.force_x = parse_double(value, full); return; }
    if (key == "force_y") { p.force_y = parse_double(value, full); return; }
    if (key == "heating") { p.heating = parse_double(value, full); return; }
    if (key == "heating_x") { p.heating_x = parse_double(value, full); return; }
    if (key == "heating_y") { p.heating_y = parse_double(value, full); return; }
    if (key == "hbar") { p.hbar = parse_double(value, full); return; }
  }
  if (section == "initial") {
    if (key == "state") {
      if (value == "fock") cfg.initial = InitialStateKind::Fock;
      else if (value == "thermal") cfg.initial = InitialStateKind::Thermal;
      else if (value == "superposition") cfg.initial = InitialStateKind::Superposition;
      else throw ConfigError("config: unknown initial.state '" + value + "'");
      return;
    }
    if (key == "n" || key == "nx") {
      if (cfg.fock_occupations.empty()) cfg.fock_occupations.resize(1, 0);
      cfg.fock_occupations[0] = parse_int(value, full);
      return;
    }
    if (key == "ny") {
      cfg.fock_occupations.resize(2, 0);
      cfg.fock_occupations[1] = parse_int(value, full);
      return;
    }
    if (key == "nbar") { cfg.nbar = parse_double(value, full); return; }
    if (key == "c_up") { cfg.c_up = parse_double(value, full); return; }
    if (key == "c_down") { cfg.c_down = parse_double(value, full); return; }
    if (key == "phi") { cfg.phi = parse_double(value, full); return; }
  }
  if (section == "protocol") {
    if (key == "kind") {
      if (value == "plain") cfg.protocol = ProtocolKind::Plain;
      else if (value == "driven_dd") cfg.protocol = ProtocolKind::DrivenDd;
      else if (value == "cpmg") cfg.protocol = ProtocolKind::Cpmg;
      else if (value == "lindblad") cfg.protocol = ProtocolKind::Lindblad;
      else throw ConfigError("config: unknown protocol.kind '" + value + "'");
      return;
    }
    if (key == "order") { cfg.cpmg_order = parse_int(value, full); return; }
  }
  if (section == "grid") {
    if (key == "start") { cfg.t_start = parse_double(value, full); return; }
    if (key == "stop") { cfg.t_stop = parse_double(value, full); return; }
    if (key == "points") { cfg.t_points = parse_int(value, full); return; }
  }
  if (section == "space") {
    if (key == "cutoff") {
      cfg.cutoffs.assign(1, parse_int(value, full));
      return;
    }
    if (key == "cutoff_x") {
      cfg.cutoffs.resize(std::max<size_t>(cfg.cutoffs.size(), 1), 2);
      cfg.cutoffs[0] = parse_int(value, full);
      return;
    }
    if (key == "cutoff_y") {
      cfg.cutoffs.resize(2, 2);
      cfg.cutoffs[1] = parse_int(value, full);
      return;
    }
  }
  if (section == "output") {
    if (key == "csv") { cfg.csv_path = value; return; }
    if (key == "svg") { cfg.svg_path = value; return; }
    if (key == "metadata") { cfg.metadata_path = value; return; }
  }
  if (section == "sweep") {
    if (key == "metrics") {
      std::stringstream ss(value);
      std::string m;
      while (std::getline(ss, m, ',')) {
        m = trim(m);
        if (!m.empty()) cfg.metrics.push_back(m);
      }
      return;
    }
    cfg.sweeps.push_back(SweepRange{key, parse_range(value, full)});
    return;
  }
  throw ConfigError("config: unknown key '" + full + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": empty key or value");
    }
    set_key(cfg, section, key, value);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(ExperimentConfig& config, const std::string& key,
                    double value) {
  static const std::map<std::string, std::function<void(ExperimentConfig&, double)>>
      setters = {
          {"params.g", [](ExperimentConfig& c, double v) { c.params.g = v; }},
          {"params.omega", [](ExperimentConfig& c, double v) { c.params.omega = v; }},
          {"params.delta", [](ExperimentConfig& c, double v) { c.params.delta = v; }},
          {"params.drive", [](ExperimentConfig& c, double v) { c.params.drive_omega = v; }},
          {"params.z", [](ExperimentConfig& c, double v) { c.params.z = v; }},
          {"params.force", [](ExperimentConfig& c, double v) { c.params.force = v; }},
          {"params.force_x", [](ExperimentConfig& c, double v) { c.params.force_x = v; }},
          {"params.force_y", [](ExperimentConfig& c, double v) { c.params.force_y = v; }},
          {"params.heating", [](ExperimentConfig& c, double v) { c.params.heating = v; }},
          {"params.heating_x", [](ExperimentConfig& c, double v) { c.params.heating_x = v; }},
          {"params.heating_y", [](ExperimentConfig& c, double v) { c.params.heating_y = v; }},
          {"initial.nbar", [](ExperimentConfig& c, double v) { c.nbar = v; }},
          {"initial.phi", [](ExperimentConfig& c, double v) { c.phi = v; }},
          {"grid.stop", [](ExperimentConfig& c, double v) { c.t_stop = v; }},
      };
  const auto it = setters.find(key);
  if (it == setters.end()) {
    throw ConfigError("config: '" + key + "' cannot be swept or overridden");
  }
  it->second(config, value);
}

std::string config_metadata_json(const ExperimentConfig& cfg,
                                 const std::vector<std::string>& warnings,
                                 const std::map<std::string, double>& extras) {
  nlohmann::json j;
  const auto& p = cfg.params;
  j["probe"] = to_string(p.kind);
  j["params"]["g"] = p.g;
  j["params"]["omega"] = p.omega;
  j["params"]["delta"] = p.delta_or_default();
  j["params"]["delta_explicit"] = p.delta.has_value();
  j["params"]["drive"] = p.drive_omega;
  j["params"]["z"] = p.ground_state_spread();
  j["params"]["force"] = p.force;
  j["params"]["force_x"] = p.force_x;
  j["params"]["force_y"] = p.force_y;
  j["params"]["heating"] = p.heating;
  j["params"]["heating_x"] = p.heating_x;
  j["params"]["heating_y"] = p.heating_y;
  j["params"]["hbar"] = p.hbar;
  j["params"]["coupling_ratio"] = p.coupling_ratio();

  switch (cfg.initial) {
    case InitialStateKind::Fock:
      j["initial"]["state"] = "fock";
      j["initial"]["occupations"] = cfg.fock_occupations;
      break;
    case InitialStateKind::Thermal:
      j["initial"]["state"] = "thermal";
      j["initial"]["nbar"] = cfg.nbar;
      break;
    case InitialStateKind::Superposition:
      j["initial"]["state"] = "superposition";
      j["initial"]["c_up"] = cfg.c_up;
      j["initial"]["c_down"] = cfg.c_down;
      j["initial"]["phi"] = cfg.phi;
      break;
  }
  switch (cfg.protocol) {
    case ProtocolKind::Plain: j["protocol"] = "plain"; break;
    case ProtocolKind::DrivenDd: j["protocol"] = "driven_dd"; break;
    case ProtocolKind::Cpmg:
      j["protocol"] = "cpmg";
      j["cpmg_order"] = cfg.cpmg_order;
      break;
    case ProtocolKind::Lindblad: j["protocol"] = "lindblad"; break;
  }
  j["grid"]["start"] = cfg.t_start;
  j["grid"]["stop"] = cfg.t_stop;
  j["grid"]["points"] = cfg.t_points;

  std::vector<int> c = cfg.cutoffs;
  if (c.empty()) {
    c = cfg.params.kind == ProbeKind::JT ? std::vector<int>{12, 12}
                                         : std::vector<int>{30};
  }
  j["space"]["cutoffs"] = c;
  j["warnings"] = warnings;
  for (const auto& [k, v] : extras) j["diagnostics"][k] = v;
  return j.dump(2) + "\n";
}

}  // namespace ionsense
