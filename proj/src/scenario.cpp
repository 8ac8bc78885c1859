#include "mlswe/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mlswe/errors.hpp"

namespace mlswe {

namespace {

constexpr double kPi = 3.14159265358979323846;

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("expected an integer for '" + key + "': " + value);
  }
  return i;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("expected on/off for '" + key + "': " + value);
}

// Accepts both comma and whitespace separated lists.
std::vector<double> to_doubles(const std::string& key, const std::string& value) {
  std::string normalized = value;
  for (char& c : normalized) {
    if (c == ',') c = ' ';
  }
  std::vector<double> out;
  std::string item;
  std::istringstream items(normalized);
  while (items >> item) out.push_back(to_double(key, item));
  return out;
}

BoundaryKind parse_boundary_kind(const std::string& value) {
  if (value == "wall") return BoundaryKind::Wall;
  if (value == "discharge") return BoundaryKind::Discharge;
  if (value == "surface") return BoundaryKind::Surface;
  throw ConfigError("unknown boundary kind: " + value);
}

BathymetryKind parse_bathymetry_kind(const std::string& value) {
  if (value == "flat") return BathymetryKind::Flat;
  if (value == "gaussian_bump") return BathymetryKind::GaussianBump;
  if (value == "cosine_peak") return BathymetryKind::CosinePeak;
  if (value == "tanh_ridge") return BathymetryKind::TanhRidge;
  if (value == "dune") return BathymetryKind::Dune;
  throw ConfigError("unknown bathymetry kind: " + value);
}

std::vector<double> read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (values.empty()) throw ConfigError("empty profile file: " + path);
  return values;
}

}  // namespace

ScenarioConfig build_scenario(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.physics = PhysicsParams{};

  if (name == "free_oscillations") {
    cfg.x_start = 0.0;
    cfg.x_end = 10000.0;
    cfg.cells = 200;
    cfg.layer_regions = {{0.0, 10000.0, 10, {}}};
    cfg.bathymetry = BathymetryKind::GaussianBump;
    cfg.bathymetry_params = {4.0, 5000.0, 1000.0};
    cfg.eta_base = 10.0;
    cfg.eta_slope = 1.0e-4;
    cfg.bc.left.kind = BoundaryKind::Wall;
    cfg.bc.right.kind = BoundaryKind::Wall;
    cfg.physics.u_wind = -1.0;
    cfg.physics.cw = 1.2e-6;
    cfg.physics.dz0 = 3.3e-5;
    cfg.scheme = SchemeKind::Theta;
    cfg.dt = 25.0;
    cfg.theta = 0.55;
    cfg.t_final = 10800.0;
    cfg.snapshots = {2000.0, 4000.0, 6000.0, 8000.0, 10000.0, 10800.0};
    return cfg;
  }

  if (name == "subcritical_peak") {
    cfg.x_start = -25.0;
    cfg.x_end = 25.0;
    cfg.cells = 200;
    cfg.layer_regions = {{-25.0, 25.0, 10, {}}};
    cfg.bathymetry = BathymetryKind::CosinePeak;
    cfg.bathymetry_params = {0.05, -0.001, 2.0, 5.0, 10.0};
    cfg.eta_base = 5.0;
    cfg.q_initial = 4.42;
    cfg.bc.left.kind = BoundaryKind::Discharge;
    cfg.bc.left.q0 = 4.42;
    cfg.bc.right.kind = BoundaryKind::Surface;
    cfg.bc.right.eta0 = 5.0;
    cfg.physics.cw = 0.0;
    cfg.physics.dz0 = 3.3e-5;
    cfg.scheme = SchemeKind::Theta;
    cfg.dt = 0.11;
    cfg.theta = 0.55;
    cfg.t_final = 1000.0;
    return cfg;
  }

  if (name == "tidal_forcing") {
    cfg.x_start = -5000.0;
    cfg.x_end = 20000.0;
    cfg.cells = 500;
    cfg.layer_regions = {{-5000.0, 20000.0, 10, {}}};
    cfg.bathymetry = BathymetryKind::TanhRidge;
    cfg.bathymetry_params = {44.0, -44.0, -1.0 / 3000.0, 7500.0, 70.0, 16000.0, 2000.0};
    cfg.eta_base = 100.0;
    cfg.bc.left.kind = BoundaryKind::Discharge;
    cfg.bc.left.q0 = 1.0;
    cfg.bc.right.kind = BoundaryKind::Surface;
    cfg.bc.right.eta0 = 100.0;
    cfg.bc.right.eta_amplitude = 3.0;
    cfg.bc.right.eta_omega = 2.0 * kPi / 43200.0;
    cfg.physics.dz0 = 3.3e-3;
    cfg.physics.u_wind = 1.0;
    cfg.physics.cw = 1.2e-6;
    cfg.scheme = SchemeKind::Theta;
    cfg.dt = 55.0;
    cfg.theta = 0.55;
    cfg.t_final = 129600.0;
    cfg.snapshots = {43200.0, 86400.0, 129600.0};
    return cfg;
  }

  if (name == "sediment_dune") {
    cfg.x_start = 0.0;
    cfg.x_end = 1000.0;
    cfg.cells = 150;
    cfg.layer_regions = {{0.0, 1000.0, 10, {}}};
    cfg.bathymetry = BathymetryKind::Dune;
    cfg.bathymetry_params = {0.1, 1.0, 300.0, 500.0, 200.0};
    cfg.eta_base = 15.0;
    cfg.q_initial = 15.0;
    cfg.bc.left.kind = BoundaryKind::Discharge;
    cfg.bc.left.q0 = 15.0;
    cfg.bc.right.kind = BoundaryKind::Surface;
    cfg.bc.right.eta0 = 15.0;
    cfg.physics.cw = 0.0;
    cfg.physics.dz0 = 3.3e-5;
    cfg.physics.grass_ag = 0.001;
    cfg.physics.porosity = 0.4;
    cfg.morphodynamics = true;
    cfg.spinup = true;
    cfg.scheme = SchemeKind::Theta;
    cfg.dt = 2.0;
    cfg.theta = 0.55;
    cfg.t_final = 691200.0;
    cfg.snapshots = {86400.0, 172800.0, 259200.0, 345600.0, 432000.0,
                     518400.0, 604800.0, 691200.0};
    return cfg;
  }

  throw ConfigError("unknown scenario: " + name);
}

double bathymetry_at(const ScenarioConfig& cfg, double x) {
  const std::vector<double>& p = cfg.bathymetry_params;
  switch (cfg.bathymetry) {
    case BathymetryKind::Flat:
      return p.empty() ? 0.0 : p[0];
    case BathymetryKind::GaussianBump: {
      const double amp = p[0], x0 = p[1], sigma = p[2];
      const double r = (x - x0) / sigma;
      return amp * std::exp(-r * r);
    }
    case BathymetryKind::CosinePeak: {
      const double a0 = p[0], slope = p[1], amp = p[2], half = p[3], period = p[4];
      double b = a0 + slope * x;
      if (std::abs(x) < half) {
        const double c = std::cos(kPi * x / period);
        b += amp * c * c;
      }
      return b;
    }
    case BathymetryKind::TanhRidge: {
      const double z0 = p[0], z1 = p[1], lambda = p[2], x0 = p[3];
      const double amp = p[4], x1 = p[5], sigma = p[6];
      const double r = (x - x1) / sigma;
      return z0 - z1 * std::tanh(lambda * (x - x0)) + amp * std::exp(-r * r);
    }
    case BathymetryKind::Dune: {
      const double base = p[0], amp = p[1], lo = p[2], hi = p[3], period = p[4];
      if (x >= lo && x <= hi) {
        const double s = std::sin(kPi * (x - lo) / period);
        return base + amp * s * s;
      }
      return base;
    }
  }
  throw ConfigError("unhandled bathymetry kind");
}

SchemeKind parse_scheme(const std::string& name) {
  if (name == "theta") return SchemeKind::Theta;
  if (name == "imex") return SchemeKind::ImexArk2;
  if (name == "rk3") return SchemeKind::Rk3Explicit;
  throw ConfigError("unknown scheme: " + name + " (expected theta|imex|rk3)");
}

std::string scheme_name(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::Theta: return "theta";
    case SchemeKind::ImexArk2: return "imex";
    case SchemeKind::Rk3Explicit: return "rk3";
  }
  return "?";
}

void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "grid.x_start") cfg.x_start = to_double(key, value);
  else if (key == "grid.x_end") cfg.x_end = to_double(key, value);
  else if (key == "grid.cells") cfg.cells = to_int(key, value);
  else if (key == "layers.region") {
    std::vector<double> v = to_doubles(key, value);
    if (v.size() < 3) throw ConfigError("layers.region needs: x_lo x_hi N [fractions]");
    LayerRegion r;
    r.x_lo = v[0];
    r.x_hi = v[1];
    r.layers = static_cast<int>(v[2]);
    r.fractions.assign(v.begin() + 3, v.end());
    cfg.layer_regions.push_back(r);
  }
  else if (key == "bathymetry.kind") cfg.bathymetry = parse_bathymetry_kind(value);
  else if (key == "bathymetry.params") cfg.bathymetry_params = to_doubles(key, value);
  else if (key == "initial.eta_base") cfg.eta_base = to_double(key, value);
  else if (key == "initial.eta_slope") cfg.eta_slope = to_double(key, value);
  else if (key == "initial.discharge") cfg.q_initial = to_double(key, value);
  else if (key == "initial.tracer") cfg.tracer_initial = to_double(key, value);
  else if (key == "physics.g") cfg.physics.g = to_double(key, value);
  else if (key == "physics.kappa") cfg.physics.kappa = to_double(key, value);
  else if (key == "physics.dz0") cfg.physics.dz0 = to_double(key, value);
  else if (key == "physics.cw") cfg.physics.cw = to_double(key, value);
  else if (key == "physics.u_wind") cfg.physics.u_wind = to_double(key, value);
  else if (key == "physics.rho0") cfg.physics.rho0 = to_double(key, value);
  else if (key == "physics.grass_ag") cfg.physics.grass_ag = to_double(key, value);
  else if (key == "physics.porosity") cfg.physics.porosity = to_double(key, value);
  else if (key == "physics.h_min") cfg.physics.h_min = to_double(key, value);
  else if (key == "boundary.left") cfg.bc.left.kind = parse_boundary_kind(value);
  else if (key == "boundary.right") cfg.bc.right.kind = parse_boundary_kind(value);
  else if (key == "boundary.left_q") cfg.bc.left.q0 = to_double(key, value);
  else if (key == "boundary.right_q") cfg.bc.right.q0 = to_double(key, value);
  else if (key == "boundary.left_q_amplitude") cfg.bc.left.q_amplitude = to_double(key, value);
  else if (key == "boundary.right_q_amplitude") cfg.bc.right.q_amplitude = to_double(key, value);
  else if (key == "boundary.left_q_omega") cfg.bc.left.q_omega = to_double(key, value);
  else if (key == "boundary.right_q_omega") cfg.bc.right.q_omega = to_double(key, value);
  else if (key == "boundary.left_eta") cfg.bc.left.eta0 = to_double(key, value);
  else if (key == "boundary.right_eta") cfg.bc.right.eta0 = to_double(key, value);
  else if (key == "boundary.left_eta_amplitude") cfg.bc.left.eta_amplitude = to_double(key, value);
  else if (key == "boundary.right_eta_amplitude") cfg.bc.right.eta_amplitude = to_double(key, value);
  else if (key == "boundary.left_eta_omega") cfg.bc.left.eta_omega = to_double(key, value);
  else if (key == "boundary.right_eta_omega") cfg.bc.right.eta_omega = to_double(key, value);
  else if (key == "boundary.left_profile") cfg.bc.left.profile = to_doubles(key, value);
  else if (key == "boundary.right_profile") cfg.bc.right.profile = to_doubles(key, value);
  else if (key == "boundary.left_profile_file") cfg.bc.left.profile = read_profile_file(value);
  else if (key == "boundary.right_profile_file") cfg.bc.right.profile = read_profile_file(value);
  else if (key == "time.scheme") cfg.scheme = parse_scheme(value);
  else if (key == "time.dt") cfg.dt = to_double(key, value);
  else if (key == "time.theta") cfg.theta = to_double(key, value);
  else if (key == "time.courant") cfg.courant_target = to_double(key, value);
  else if (key == "time.t_final") cfg.t_final = to_double(key, value);
  else if (key == "time.snapshots") cfg.snapshots = to_doubles(key, value);
  else if (key == "run.tracer") cfg.tracer = to_bool(key, value);
  else if (key == "run.morphodynamics") cfg.morphodynamics = to_bool(key, value);
  else if (key == "run.spinup") cfg.spinup = to_bool(key, value);
  else if (key == "output.dir") cfg.out_dir = value;
  else if (key == "output.reference") cfg.reference_dir = value;
  else throw ConfigError("unknown config key: " + key);
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  // First pass: pick up the scenario base, if named.
  std::vector<std::pair<std::string, std::string>> entries;
  std::string section;
  std::string line;
  std::string scenario_name;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "run" && key == "scenario") {
      scenario_name = value;
      continue;
    }
    entries.emplace_back(section.empty() ? key : section + "." + key, value);
  }

  ScenarioConfig cfg =
      scenario_name.empty() ? ScenarioConfig{} : build_scenario(scenario_name);

  bool layers_reset = false;
  for (const auto& [key, value] : entries) {
    if (key == "layers.region" && !layers_reset) {
      cfg.layer_regions.clear();  // the file's regions replace the defaults
      layers_reset = true;
    }
    apply_override(cfg, key, value);
  }
  return cfg;
}

std::vector<LayerRegion> parse_layer_spec(const std::string& spec) {
  {
    std::ifstream probe(spec);
    if (probe) {
      std::vector<LayerRegion> regions;
      std::string line;
      while (std::getline(probe, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> v = to_doubles("layers", line);
        if (v.size() < 3) throw ConfigError("layer file line needs: x_lo x_hi N [f...]");
        LayerRegion r;
        r.x_lo = v[0];
        r.x_hi = v[1];
        r.layers = static_cast<int>(v[2]);
        r.fractions.assign(v.begin() + 3, v.end());
        regions.push_back(r);
      }
      if (regions.empty()) throw ConfigError("no layer regions in file: " + spec);
      return regions;
    }
  }

  std::vector<LayerRegion> regions;
  std::istringstream in(spec);
  std::string segment;
  while (std::getline(in, segment, ';')) {
    if (segment.empty()) continue;
    std::istringstream seg(segment);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(seg, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4) {
      throw ConfigError("layer spec segment must be x_lo:x_hi:N[:f1,f2,...] , got " +
                        segment);
    }
    LayerRegion r;
    r.x_lo = to_double("layers", parts[0]);
    r.x_hi = to_double("layers", parts[1]);
    r.layers = to_int("layers", parts[2]);
    if (parts.size() == 4) r.fractions = to_doubles("layers", parts[3]);
    regions.push_back(r);
  }
  if (regions.empty()) throw ConfigError("empty layer spec");
  return regions;
}

}  // namespace mlswe
