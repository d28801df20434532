#include "aniscat/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/crc.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "aniscat/errors.hpp"

namespace aniscat {

namespace {

namespace pt = boost::property_tree;

constexpr double kPi = std::numbers::pi;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"preset", {"description", "production"}},
      {"potential",
       {"model", "units", "dipolar_length", "U0", "a0", "ax", "ay",
        "edge_width", "alpha", "alpha_pi", "beta", "beta_pi", "gamma",
        "gamma_pi", "strength", "rho_hw"}},
      {"incident", {"q", "Dq", "phi_q", "phi_q_pi"}},
      {"numerics",
       {"M", "N", "rho_0", "rho_N", "phi_q_count", "angle_count", "matching",
        "right_closure", "origin_correction", "rotation"}},
      {"scan", {"variable", "values", "start", "stop", "count"}},
      {"convergence", {"axis", "values"}},
      {"output", {"path", "precision"}},
  };
  return keys;
}

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw Error(ErrorCategory::kConfig, field + ": " + message);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Drops '#' and ';' comments so that both full-line and trailing comments
// are accepted.
std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    out << line << '\n';
  }
  return out.str();
}

double parse_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    fail(field, "expected a number, got '" + t + "'");
  }
  if (used != t.size() || !std::isfinite(value)) {
    fail(field, "expected a finite number, got '" + t + "'");
  }
  return value;
}

int parse_int(const std::string& field, const std::string& text) {
  const double v = parse_double(field, text);
  if (v != std::floor(v) || std::abs(v) > 2e9) {
    fail(field, "expected an integer, got '" + trim(text) + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  fail(field, "expected true or false, got '" + t + "'");
}

std::vector<double> parse_list(const std::string& field,
                               const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) fail(field, "empty list entry");
    out.push_back(parse_double(field, item));
  }
  if (out.empty()) fail(field, "list must not be empty");
  return out;
}

// Typed access to one section with field-qualified errors.
class Section {
 public:
  Section(const pt::ptree& root, std::string name)
      : name_(std::move(name)) {
    if (auto child = root.get_child_optional(name_)) tree_ = *child;
  }

  bool has(const std::string& key) const { return tree_.count(key) > 0; }
  std::string field(const std::string& key) const { return name_ + "." + key; }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? trim(tree_.get<std::string>(key)) : fallback;
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? parse_double(field(key), tree_.get<std::string>(key))
                    : fallback;
  }
  int integer(const std::string& key, int fallback) const {
    return has(key) ? parse_int(field(key), tree_.get<std::string>(key))
                    : fallback;
  }
  bool flag(const std::string& key, bool fallback) const {
    return has(key) ? parse_bool(field(key), tree_.get<std::string>(key))
                    : fallback;
  }
  std::vector<double> list(const std::string& key) const {
    return parse_list(field(key), tree_.get<std::string>(key));
  }
  // Angle from either `key` (radians) or `key_pi` (multiples of pi).
  double angle(const std::string& key, double fallback) const {
    if (has(key) && has(key + "_pi")) {
      fail(field(key), "give either " + key + " or " + key + "_pi, not both");
    }
    if (has(key + "_pi")) return kPi * number(key + "_pi", 0.0);
    return number(key, fallback);
  }

 private:
  std::string name_;
  pt::ptree tree_;
};

void check_keys(const pt::ptree& root) {
  for (const auto& [section, tree] : root) {
    const auto it = allowed_keys().find(section);
    if (it == allowed_keys().end()) {
      if (tree.empty()) fail(section, "keys must belong to a [section]");
      fail(section, "unknown section");
    }
    for (const auto& entry : tree) {
      if (!it->second.count(entry.first)) {
        fail(section + "." + entry.first, "unknown key");
      }
    }
  }
}

struct UnitScales {
  double length = 1.0;
  double wavenumber = 1.0;
  double energy = 1.0;
  double strength = 1.0;
};

UnitScales unit_scales(const PotentialSpec& spec) {
  if (spec.units == Units::kBarrier) return {};
  const double D = spec.dipolar_length;
  // With hbar = mu = 1 and D = mu d^2 / hbar^2: d^2 = D, E_D = 1 / D^2.
  return {D, 1.0 / D, 1.0 / (D * D), D};
}

PotentialSpec parse_potential(const Section& s) {
  PotentialSpec spec;
  const std::string units = s.text("units", "barrier");
  if (units == "barrier") {
    spec.units = Units::kBarrier;
  } else if (units == "dipolar") {
    spec.units = Units::kDipolar;
  } else {
    fail(s.field("units"), "expected barrier or dipolar, got '" + units + "'");
  }
  spec.dipolar_length = s.number("dipolar_length", 1.0);
  if (!(spec.dipolar_length > 0.0)) {
    fail(s.field("dipolar_length"), "must be > 0");
  }
  const UnitScales u = unit_scales(spec);

  const std::string model = s.text("model", "");
  auto require_absent = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (s.has(k)) fail(s.field(k), "not a parameter of model " + model);
    }
  };
  if (model == "barrier") {
    require_absent({"alpha", "alpha_pi", "beta", "beta_pi", "gamma",
                    "gamma_pi", "strength", "rho_hw"});
    EllipticBarrier b;
    b.U0 = s.number("U0", 0.0) * u.energy;
    if (s.has("a0") && (s.has("ax") || s.has("ay"))) {
      fail(s.field("a0"), "give either a0 or ax/ay, not both");
    }
    const double a0 = s.number("a0", 1.0);
    b.ax = s.number("ax", a0) * u.length;
    b.ay = s.number("ay", a0) * u.length;
    b.edge_width = s.number("edge_width", 0.0) * u.length;
    if (!(b.U0 >= 0.0)) fail(s.field("U0"), "must be >= 0");
    if (!(b.ax > 0.0)) fail(s.field(s.has("ax") ? "ax" : "a0"), "must be > 0");
    if (!(b.ay > 0.0)) fail(s.field(s.has("ay") ? "ay" : "a0"), "must be > 0");
    if (!(b.edge_width >= 0.0)) fail(s.field("edge_width"), "must be >= 0");
    spec.model = b;
  } else if (model == "dipole_general" || model == "dipole_tilted" ||
             model == "dipole_isotropic") {
    require_absent({"U0", "a0", "ax", "ay", "edge_width"});
    const double strength = s.number("strength", 1.0) * u.strength;
    const double default_wall = spec.units == Units::kDipolar ? 0.1 : 0.0;
    const double rho_hw = s.number("rho_hw", default_wall) * u.length;
    if (!(rho_hw >= 0.0)) fail(s.field("rho_hw"), "must be >= 0");
    if (model == "dipole_general") {
      spec.model = DipoleGeneral{s.angle("alpha", 0.0), s.angle("beta", 0.0),
                                 s.angle("gamma", 0.0), strength, rho_hw};
    } else if (model == "dipole_tilted") {
      require_absent({"beta", "beta_pi", "gamma", "gamma_pi"});
      spec.model = DipoleTiltedPolarized{s.angle("alpha", 0.0), strength, rho_hw};
    } else {
      require_absent({"alpha", "alpha_pi", "beta", "beta_pi", "gamma",
                      "gamma_pi"});
      spec.model = DipoleIsotropic{strength, rho_hw};
    }
  } else {
    fail(s.field("model"),
         "expected barrier, dipole_general, dipole_tilted or dipole_isotropic, "
         "got '" + model + "'");
  }
  try {
    validate(spec);
  } catch (const Error& e) {
    fail("potential", e.what());
  }
  return spec;
}

ScanVariable scan_variable_from(const std::string& field,
                                const std::string& name, bool& in_pi) {
  static const std::map<std::string, ScanVariable> names{
      {"q", ScanVariable::kQ},         {"phi_q", ScanVariable::kPhiQ},
      {"U0", ScanVariable::kU0},       {"alpha", ScanVariable::kAlpha},
      {"beta", ScanVariable::kBeta},   {"gamma", ScanVariable::kGamma},
      {"alpha_gamma", ScanVariable::kAlphaGamma},
  };
  std::string base = name;
  in_pi = false;
  if (base.size() > 3 && base.ends_with("_pi")) {
    base.resize(base.size() - 3);
    in_pi = true;
  }
  const auto it = names.find(base);
  if (it == names.end()) fail(field, "unknown scan variable '" + name + "'");
  const bool angular = it->second != ScanVariable::kQ &&
                       it->second != ScanVariable::kU0;
  if (in_pi && !angular) fail(field, "'_pi' applies to angles only");
  return it->second;
}

std::vector<double> grid_values(const Section& s) {
  if (s.has("values")) {
    if (s.has("start") || s.has("stop") || s.has("count")) {
      fail(s.field("values"), "give either values or start/stop/count");
    }
    return s.list("values");
  }
  if (!s.has("start") || !s.has("stop") || !s.has("count")) {
    fail(s.field("values"), "missing (give values or start/stop/count)");
  }
  const double start = s.number("start", 0.0);
  const double stop = s.number("stop", 0.0);
  const int count = s.integer("count", 0);
  if (count < 1) fail(s.field("count"), "must be >= 1");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  return out;
}

void check_setup(const RunConfig& config) {
  try {
    const ProblemSetup setup = make_setup(config);
    validate(setup.spec);
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::kConfig) throw;
    fail("numerics", e.what());
  }
}

}  // namespace

const char* scan_variable_name(ScanVariable variable) {
  switch (variable) {
    case ScanVariable::kQ:
      return "q";
    case ScanVariable::kPhiQ:
      return "phi_q";
    case ScanVariable::kU0:
      return "U0";
    case ScanVariable::kAlpha:
      return "alpha";
    case ScanVariable::kBeta:
      return "beta";
    case ScanVariable::kGamma:
      return "gamma";
    case ScanVariable::kAlphaGamma:
      return "alpha_gamma";
  }
  return "?";
}

const char* convergence_axis_name(ConvergenceAxis axis) {
  switch (axis) {
    case ConvergenceAxis::kM:
      return "M";
    case ConvergenceAxis::kN:
      return "N";
    case ConvergenceAxis::kRhoN:
      return "rho_N";
  }
  return "?";
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  const auto dot = text.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq ||
      dot == 0 || dot + 1 == eq) {
    throw Error(ErrorCategory::kConfig,
                "override '" + text + "': expected section.key=value");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig parse_config(const std::string& text, const std::string& name,
                       const ConfigOverrides& overrides) {
  pt::ptree root;
  try {
    std::istringstream in(strip_comments(text));
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCategory::kConfig,
                "line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [path, value] : overrides) {
    root.put(pt::ptree::path_type(path, '.'), value);
  }
  check_keys(root);

  RunConfig config;
  config.name = name;
  const Section preset(root, "preset");
  config.description = preset.text("description", "");
  config.production = preset.flag("production", false);

  config.potential = parse_potential(Section(root, "potential"));
  const UnitScales u = unit_scales(config.potential);

  const Section incident(root, "incident");
  if (incident.has("q") && incident.has("Dq")) {
    fail(incident.field("Dq"), "give either q or Dq, not both");
  }
  if (incident.has("Dq")) {
    if (config.potential.units != Units::kDipolar) {
      fail(incident.field("Dq"), "requires potential.units = dipolar");
    }
    config.q = incident.number("Dq", 0.0) * u.wavenumber;
  } else {
    if (!incident.has("q")) fail(incident.field("q"), "missing");
    config.q = incident.number("q", 0.0) * u.wavenumber;
  }
  if (!(config.q > 0.0)) fail(incident.field(incident.has("Dq") ? "Dq" : "q"), "must be > 0");
  config.phi_q = incident.angle("phi_q", 0.0);

  const Section num(root, "numerics");
  NumericsConfig& n = config.numerics;
  n.M = num.integer("M", n.M);
  n.N = num.integer("N", n.N);
  if (num.has("rho_0")) n.rho0 = num.number("rho_0", 0.0) * u.length;
  n.rhoN = num.number("rho_N", n.rhoN) * u.length;
  n.phi_q_count = num.integer("phi_q_count", 0);
  n.angle_count = num.integer("angle_count", 0);
  if (n.M < 0) fail(num.field("M"), "must be >= 0");
  if (n.N < 8) fail(num.field("N"), "must be >= 8");
  if (n.phi_q_count < 0) fail(num.field("phi_q_count"), "must be >= 0");
  if (n.angle_count < 0) fail(num.field("angle_count"), "must be >= 0");
  const std::string matching = num.text("matching", "hankel");
  if (matching == "hankel") {
    n.options.matching = MatchingMode::kHankel;
  } else if (matching == "asymptotic") {
    n.options.matching = MatchingMode::kAsymptotic;
  } else {
    fail(num.field("matching"), "expected hankel or asymptotic");
  }
  const std::string closure = num.text("right_closure", "extrapolated");
  if (closure == "extrapolated") {
    n.options.right_closure = RightClosure::kExtrapolated;
  } else if (closure == "reduced") {
    n.options.right_closure = RightClosure::kReduced;
  } else {
    fail(num.field("right_closure"), "expected extrapolated or reduced");
  }
  n.options.origin_correction = num.flag("origin_correction", true);
  const std::string rotation = num.text("rotation", "incident");
  if (rotation == "incident") {
    n.rotation = RotationMode::kIncident;
  } else if (rotation == "potential") {
    n.rotation = RotationMode::kPotential;
  } else {
    fail(num.field("rotation"), "expected incident or potential");
  }
  if (n.phi_q_count > 0 && config.phi_q != 0.0) {
    fail(incident.field("phi_q"),
         "must be 0 when numerics.phi_q_count > 0 (directions are the "
         "uniform grid)");
  }
  const double wall = hard_wall_radius(config.potential);
  const double rho0 = n.rho0.value_or(wall);
  if (rho0 < wall) fail(num.field("rho_0"), "lies inside the hard wall");
  if (!(n.rhoN > rho0)) fail(num.field("rho_N"), "must exceed rho_0");

  if (root.get_child_optional("scan")) {
    const Section s(root, "scan");
    ScanConfig scan;
    bool in_pi = false;
    scan.variable = scan_variable_from(s.field("variable"),
                                       s.text("variable", ""), in_pi);
    scan.label = s.text("variable", "");
    scan.given = grid_values(s);
    for (double v : scan.given) {
      switch (scan.variable) {
        case ScanVariable::kQ:
          scan.values.push_back(v * u.wavenumber);
          break;
        case ScanVariable::kU0:
          scan.values.push_back(v * u.energy);
          break;
        default:
          scan.values.push_back(in_pi ? kPi * v : v);
          break;
      }
    }
    const bool barrier = is_barrier(config.potential);
    const bool angle_of_dipole = scan.variable == ScanVariable::kAlpha ||
                                 scan.variable == ScanVariable::kBeta ||
                                 scan.variable == ScanVariable::kGamma ||
                                 scan.variable == ScanVariable::kAlphaGamma;
    if (scan.variable == ScanVariable::kPhiQ && n.phi_q_count > 0) {
      fail(s.field("variable"),
           "phi_q scans need numerics.phi_q_count = 0");
    }
    if (scan.variable == ScanVariable::kU0 && !barrier) {
      fail(s.field("variable"), "U0 scans need the barrier model");
    }
    if (angle_of_dipole && barrier) {
      fail(s.field("variable"), "dipole angles need a dipole model");
    }
    if ((scan.variable == ScanVariable::kBeta ||
         scan.variable == ScanVariable::kGamma ||
         scan.variable == ScanVariable::kAlphaGamma) &&
        !std::holds_alternative<DipoleGeneral>(config.potential.model)) {
      fail(s.field("variable"), "beta/gamma scans need model dipole_general");
    }
    if (scan.variable == ScanVariable::kAlpha &&
        std::holds_alternative<DipoleIsotropic>(config.potential.model)) {
      fail(s.field("variable"), "dipole_isotropic has no tilt angle");
    }
    config.scan = std::move(scan);
  }

  if (root.get_child_optional("convergence")) {
    const Section c(root, "convergence");
    ConvergenceConfig conv;
    const std::string axis = c.text("axis", "");
    if (axis == "M") {
      conv.axis = ConvergenceAxis::kM;
    } else if (axis == "N") {
      conv.axis = ConvergenceAxis::kN;
    } else if (axis == "rho_N") {
      conv.axis = ConvergenceAxis::kRhoN;
    } else {
      fail(c.field("axis"), "expected M, N or rho_N");
    }
    if (!c.has("values")) fail(c.field("values"), "missing");
    conv.values = c.list("values");
    if (conv.values.size() < 3) {
      fail(c.field("values"), "need at least 3 axis values");
    }
    for (size_t i = 1; i < conv.values.size(); ++i) {
      if (!(conv.values[i] > conv.values[i - 1])) {
        fail(c.field("values"), "axis values must increase");
      }
    }
    if (conv.axis != ConvergenceAxis::kRhoN) {
      for (double v : conv.values) {
        if (v != std::floor(v)) fail(c.field("values"), "must be integers");
      }
    } else {
      for (double& v : conv.values) v *= u.length;
    }
    config.convergence = std::move(conv);
  }

  const Section out(root, "output");
  config.output.path = out.text("path", "");
  config.output.precision = out.integer("precision", 17);
  if (config.output.precision < 1 || config.output.precision > 17) {
    fail(out.field("precision"), "must be in 1..17");
  }
  check_setup(config);
  return config;
}

RunConfig load_config(const std::string& path,
                      const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  if (name.ends_with(".ini")) name.resize(name.size() - 4);
  return parse_config(text.str(), name, overrides);
}

ProblemSetup make_setup(const RunConfig& config) {
  const NumericsConfig& n = config.numerics;
  ProblemSetup setup;
  setup.q = config.q;
  setup.phi_q = config.phi_q;
  setup.spec = config.potential;
  setup.ang = AngularGrid(n.M);
  setup.rad = RadialGrid(n.N, n.rho0.value_or(hard_wall_radius(config.potential)),
                         n.rhoN);
  setup.options = n.options;
  return setup;
}

RunConfig with_scan_value(const RunConfig& config, ScanVariable variable,
                          double value) {
  RunConfig out = config;
  auto set_angle = [&](auto setter) {
    std::visit(
        [&](auto& model) {
          using T = std::decay_t<decltype(model)>;
          if constexpr (!std::is_same_v<T, EllipticBarrier>) setter(model);
        },
        out.potential.model);
  };
  switch (variable) {
    case ScanVariable::kQ:
      out.q = value;
      break;
    case ScanVariable::kPhiQ:
      out.phi_q = value;
      break;
    case ScanVariable::kU0:
      std::get<EllipticBarrier>(out.potential.model).U0 = value;
      break;
    case ScanVariable::kAlpha:
      set_angle([&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (!std::is_same_v<T, DipoleIsotropic>) m.alpha = value;
      });
      break;
    case ScanVariable::kBeta:
      std::get<DipoleGeneral>(out.potential.model).beta = value;
      break;
    case ScanVariable::kGamma:
      std::get<DipoleGeneral>(out.potential.model).gamma = value;
      break;
    case ScanVariable::kAlphaGamma: {
      auto& d = std::get<DipoleGeneral>(out.potential.model);
      d.alpha = value;
      d.gamma = value;
      break;
    }
  }
  return out;
}

std::string canonical_listing(const RunConfig& config) {
  std::ostringstream out;
  out.precision(17);
  const NumericsConfig& n = config.numerics;
  out << "potential = " << describe(config.potential) << '\n'
      << "units = "
      << (config.potential.units == Units::kDipolar ? "dipolar" : "barrier")
      << '\n'
      << "dipolar_length = " << config.potential.dipolar_length << '\n'
      << "q = " << config.q << '\n'
      << "phi_q = " << config.phi_q << '\n'
      << "M = " << n.M << '\n'
      << "N = " << n.N << '\n'
      << "rho_0 = " << n.rho0.value_or(hard_wall_radius(config.potential))
      << '\n'
      << "rho_N = " << n.rhoN << '\n'
      << "phi_q_count = " << n.phi_q_count << '\n'
      << "angle_count = " << n.angle_count << '\n'
      << "matching = "
      << (n.options.matching == MatchingMode::kHankel ? "hankel" : "asymptotic")
      << '\n'
      << "right_closure = "
      << (n.options.right_closure == RightClosure::kExtrapolated ? "extrapolated"
                                                                 : "reduced")
      << '\n'
      << "origin_correction = " << (n.options.origin_correction ? "true" : "false")
      << '\n'
      << "rotation = "
      << (n.rotation == RotationMode::kIncident ? "incident" : "potential")
      << '\n';
  if (config.scan) {
    out << "scan.variable = " << scan_variable_name(config.scan->variable)
        << '\n'
        << "scan.values =";
    for (double v : config.scan->values) out << ' ' << v;
    out << '\n';
  }
  if (config.convergence) {
    out << "convergence.axis = "
        << convergence_axis_name(config.convergence->axis) << '\n'
        << "convergence.values =";
    for (double v : config.convergence->values) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

std::string config_hash(const RunConfig& config) {
  const std::string listing = canonical_listing(config);
  boost::crc_32_type crc;
  crc.process_bytes(listing.data(), listing.size());
  char buffer[9];
  std::snprintf(buffer, sizeof buffer, "%08x", crc.checksum());
  return buffer;
}

}  // namespace aniscat
