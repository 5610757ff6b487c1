#include "dtcfd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dtcfd {

namespace {

/// Accepted spellings (whitespace removed) of one physical quantity, with the conversion
/// si = value * scale + offset.
struct UnitSpelling {
  const char* text;
  double scale;
  double offset;
};

struct Quantity {
  const char* canonical;  ///< emitted unit, empty for dimensionless values
  std::vector<UnitSpelling> spellings;
};

const Quantity kNone{"", {}};
const Quantity kLength{"m", {{"m", 1.0, 0.0}, {"cm", 0.01, 0.0}, {"mm", 0.001, 0.0}}};
const Quantity kTemperature{"K", {{"K", 1.0, 0.0}, {"C", 1.0, 273.15}, {"degC", 1.0, 273.15}}};
const Quantity kFlow{"m3/s", {{"m3/s", 1.0, 0.0}, {"m3/h", 1.0 / 3600.0, 0.0}, {"l/s", 1e-3, 0.0}}};
const Quantity kPowerDensity{"W/m3", {{"W/m3", 1.0, 0.0}, {"kW/m3", 1e3, 0.0}}};
const Quantity kConductivity{"W/(m K)", {{"W/(mK)", 1.0, 0.0}, {"W/(m*K)", 1.0, 0.0}, {"W/m/K", 1.0, 0.0}}};
const Quantity kDensity{"kg/m3", {{"kg/m3", 1.0, 0.0}}};
const Quantity kViscosity{"Pa s", {{"Pas", 1.0, 0.0}, {"Pa*s", 1.0, 0.0}, {"kg/(ms)", 1.0, 0.0}, {"kg/m/s", 1.0, 0.0}}};
const Quantity kSpecificHeat{"J/(kg K)", {{"J/(kgK)", 1.0, 0.0}, {"J/(kg*K)", 1.0, 0.0}, {"J/kg/K", 1.0, 0.0}}};
const Quantity kExpansivity{"1/K", {{"1/K", 1.0, 0.0}}};
const Quantity kAcceleration{"m/s2", {{"m/s2", 1.0, 0.0}, {"m/s^2", 1.0, 0.0}}};
const Quantity kTke{"m2/s2", {{"m2/s2", 1.0, 0.0}, {"m^2/s^2", 1.0, 0.0}}};
const Quantity kDissipation{"m2/s3", {{"m2/s3", 1.0, 0.0}, {"m^2/s^3", 1.0, 0.0}}};
const Quantity kTime{"s", {{"s", 1.0, 0.0}}};

enum class Bound { Any, Positive, NonNegative, Unit };

/// Tokenised right-hand side: leading numbers and the unit text after them.
struct RawValue {
  std::vector<double> numbers;
  std::string unit;   ///< whitespace removed
  std::string text;   ///< whole trimmed value
};

using Setter = std::function<std::string(CaseConfig&, const RawValue&)>;
using Getter = std::function<std::string(const CaseConfig&)>;

struct KeySpec {
  std::string key;
  Setter set;
  Getter get;
  bool repeatable = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RawValue tokenize(const std::string& text) {
  RawValue v;
  v.text = trim(text);
  std::istringstream is(v.text);
  std::string tok;
  bool in_unit = false;
  while (is >> tok) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (!in_unit && ec == std::errc() && ptr == tok.data() + tok.size()) {
      v.numbers.push_back(x);
    } else {
      in_unit = true;
      v.unit += tok;
    }
  }
  return v;
}

std::string number(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

std::string with_unit(const std::string& values, const Quantity& q) {
  return q.canonical[0] == '\0' ? values : values + " " + q.canonical;
}

/// Converts the numbers of `v` to SI; returns an error message or "".
std::string convert(const RawValue& v, const std::string& key, const Quantity& q, std::size_t count,
                    std::vector<double>& out) {
  if (count > 0 && v.numbers.size() != count) {
    return "'" + key + "' expects " + std::to_string(count) + (count == 1 ? " number" : " numbers");
  }
  if (count == 0 && v.numbers.empty()) return "'" + key + "' expects at least one number";
  out = v.numbers;
  if (q.spellings.empty()) {
    if (!v.unit.empty()) return "'" + key + "' is dimensionless but has unit '" + v.unit + "'";
    return "";
  }
  if (v.unit.empty()) return "missing unit for '" + key + "' (expected " + q.canonical + ")";
  for (const auto& s : q.spellings) {
    if (v.unit == s.text) {
      for (double& x : out) x = x * s.scale + s.offset;
      return "";
    }
  }
  return "unit '" + v.unit + "' is not valid for '" + key + "' (expected " + q.canonical + ")";
}

std::string check_bound(const std::string& key, double x, Bound b) {
  switch (b) {
    case Bound::Positive:
      if (!(x > 0.0)) return "'" + key + "' must be > 0";
      break;
    case Bound::NonNegative:
      if (!(x >= 0.0)) return "'" + key + "' must be >= 0";
      break;
    case Bound::Unit:
      if (!(x > 0.0 && x <= 1.0)) return "'" + key + "' must lie in (0, 1]";
      break;
    case Bound::Any:
      break;
  }
  return "";
}

KeySpec scalar(const std::string& key, const Quantity& q, Bound bound, std::function<double&(CaseConfig&)> ref) {
  KeySpec k;
  k.key = key;
  k.set = [key, &q, bound, ref](CaseConfig& c, const RawValue& v) {
    std::vector<double> x;
    if (auto err = convert(v, key, q, 1, x); !err.empty()) return err;
    if (auto err = check_bound(key, x[0], bound); !err.empty()) return err;
    ref(c) = x[0];
    return std::string();
  };
  k.get = [&q, ref](const CaseConfig& c) { return with_unit(number(ref(const_cast<CaseConfig&>(c))), q); };
  return k;
}

KeySpec integer(const std::string& key, int lo, std::function<int&(CaseConfig&)> ref) {
  KeySpec k;
  k.key = key;
  k.set = [key, lo, ref](CaseConfig& c, const RawValue& v) {
    std::vector<double> x;
    if (auto err = convert(v, key, kNone, 1, x); !err.empty()) return err;
    if (x[0] != static_cast<double>(static_cast<long long>(x[0]))) return "'" + key + "' must be an integer";
    if (x[0] < lo) return "'" + key + "' must be >= " + std::to_string(lo);
    ref(c) = static_cast<int>(x[0]);
    return std::string();
  };
  k.get = [ref](const CaseConfig& c) { return std::to_string(ref(const_cast<CaseConfig&>(c))); };
  return k;
}

KeySpec boolean(const std::string& key, std::function<bool&(CaseConfig&)> ref) {
  KeySpec k;
  k.key = key;
  k.set = [key, ref](CaseConfig& c, const RawValue& v) {
    if (v.text == "true") {
      ref(c) = true;
    } else if (v.text == "false") {
      ref(c) = false;
    } else {
      return "'" + key + "' expects true or false";
    }
    return std::string();
  };
  k.get = [ref](const CaseConfig& c) { return std::string(ref(const_cast<CaseConfig&>(c)) ? "true" : "false"); };
  return k;
}

KeySpec vector3(const std::string& key, const Quantity& q, std::function<Vec3&(CaseConfig&)> ref) {
  KeySpec k;
  k.key = key;
  k.set = [key, &q, ref](CaseConfig& c, const RawValue& v) {
    std::vector<double> x;
    if (auto err = convert(v, key, q, 3, x); !err.empty()) return err;
    ref(c) = {x[0], x[1], x[2]};
    return std::string();
  };
  k.get = [&q, ref](const CaseConfig& c) {
    const Vec3 v = ref(const_cast<CaseConfig&>(c));
    return with_unit(number(v.x) + " " + number(v.y) + " " + number(v.z), q);
  };
  return k;
}

template <class E>
KeySpec choice(const std::string& key, std::vector<std::pair<std::string, E>> options, std::function<E&(CaseConfig&)> ref) {
  KeySpec k;
  k.key = key;
  k.set = [key, options, ref](CaseConfig& c, const RawValue& v) {
    std::string known;
    for (const auto& [name, value] : options) {
      if (v.text == name) {
        ref(c) = value;
        return std::string();
      }
      known += (known.empty() ? "" : ", ") + name;
    }
    return "'" + key + "' expects one of: " + known;
  };
  k.get = [options, ref](const CaseConfig& c) {
    const E e = ref(const_cast<CaseConfig&>(c));
    for (const auto& [name, value] : options) {
      if (value == e) return name;
    }
    return std::string();
  };
  return k;
}

const std::vector<std::pair<std::string, AdvectionScheme>> kSchemes{{"upwind", AdvectionScheme::Upwind},
                                                                    {"high-resolution", AdvectionScheme::HighResolution}};
const std::vector<std::pair<std::string, Limiter>> kLimiters{{"van-leer", Limiter::VanLeer},
                                                             {"minmod", Limiter::Minmod},
                                                             {"superbee", Limiter::Superbee},
                                                             {"van-albada", Limiter::VanAlbada}};

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> r;
    auto geo = [&](const std::string& name, Bound b, double TransformerCaseParams::*m) {
      r.push_back(scalar("geometry." + name, kLength, b, [m](CaseConfig& c) -> double& { return c.transformer.*m; }));
    };
    using P = TransformerCaseParams;

    r.push_back(integer("schema_version", 1, [](CaseConfig& c) -> int& { return c.schema_version; }));
    {
      KeySpec k;
      k.key = "name";
      k.set = [](CaseConfig& c, const RawValue& v) {
        if (v.text.empty() || v.text.find_first_of(" \t") != std::string::npos) {
          return std::string("'name' must be a single word");
        }
        c.name = v.text;
        return std::string();
      };
      k.get = [](const CaseConfig& c) { return c.name; };
      r.push_back(k);
    }
    geo("length", Bound::Positive, &P::length);
    geo("height", Bound::Positive, &P::height);
    geo("depth", Bound::Positive, &P::depth);
    {
      KeySpec k;
      k.key = "geometry.cells";
      k.set = [](CaseConfig& c, const RawValue& v) {
        std::vector<double> x;
        if (auto err = convert(v, "geometry.cells", kNone, 3, x); !err.empty()) return err;
        for (int a = 0; a < 3; ++a) {
          if (x[static_cast<std::size_t>(a)] < 1 || x[static_cast<std::size_t>(a)] != static_cast<int>(x[static_cast<std::size_t>(a)])) {
            return std::string("'geometry.cells' expects three integers >= 1");
          }
          c.transformer.cells[static_cast<std::size_t>(a)] = static_cast<int>(x[static_cast<std::size_t>(a)]);
        }
        return std::string();
      };
      k.get = [](const CaseConfig& c) {
        const auto& n = c.transformer.cells;
        return std::to_string(n[0]) + " " + std::to_string(n[1]) + " " + std::to_string(n[2]);
      };
      r.push_back(k);
    }
    r.push_back(boolean("geometry.full_model", [](CaseConfig& c) -> bool& { return c.transformer.full_model; }));
    geo("phase_pitch", Bound::Positive, &P::phase_pitch);
    geo("core_half_width", Bound::Positive, &P::core_half_width);
    geo("inner_channel", Bound::Positive, &P::inner_channel);
    geo("lv_thickness", Bound::Positive, &P::lv_thickness);
    geo("duct_width", Bound::Positive, &P::duct_width);
    geo("hv_thickness", Bound::Positive, &P::hv_thickness);
    geo("winding_bottom", Bound::NonNegative, &P::winding_bottom);
    geo("winding_top", Bound::Positive, &P::winding_top);
    geo("core_bottom", Bound::NonNegative, &P::core_bottom);
    geo("core_top", Bound::Positive, &P::core_top);
    geo("yoke_height", Bound::Positive, &P::yoke_height);
    r.push_back(boolean("geometry.baffle", [](CaseConfig& c) -> bool& { return c.transformer.baffle; }));
    geo("baffle_y", Bound::Positive, &P::baffle_y);
    geo("baffle_thickness", Bound::Positive, &P::baffle_thickness);
    r.push_back(boolean("geometry.beams", [](CaseConfig& c) -> bool& { return c.transformer.beams; }));
    geo("beam_bottom", Bound::NonNegative, &P::beam_bottom);
    geo("beam_top", Bound::Positive, &P::beam_top);
    geo("beam_length", Bound::Positive, &P::beam_length);
    {
      KeySpec k;
      k.key = "geometry.beam_z";
      k.set = [](CaseConfig& c, const RawValue& v) {
        std::vector<double> x;
        if (auto err = convert(v, "geometry.beam_z", kLength, 0, x); !err.empty()) return err;
        if (x.size() % 2 != 0) return std::string("'geometry.beam_z' expects pairs of z_lo z_hi");
        c.transformer.beam_z.clear();
        for (std::size_t i = 0; i < x.size(); i += 2) {
          if (!(x[i] < x[i + 1])) return std::string("'geometry.beam_z' needs z_lo < z_hi in every pair");
          c.transformer.beam_z.emplace_back(x[i], x[i + 1]);
        }
        return std::string();
      };
      k.get = [](const CaseConfig& c) {
        std::string s;
        for (const auto& [lo, hi] : c.transformer.beam_z) s += (s.empty() ? "" : " ") + number(lo) + " " + number(hi);
        return with_unit(s, kLength);
      };
      r.push_back(k);
    }

    r.push_back(integer("fans.count", 2, [](CaseConfig& c) -> int& { return c.transformer.fan_count; }));
    r.push_back(choice<FlowMode>("fans.flow_mode", {{"per-fan", FlowMode::PerFan}, {"total", FlowMode::Total}},
                                 [](CaseConfig& c) -> FlowMode& { return c.transformer.flow_mode; }));
    r.push_back(scalar("fans.flow", kFlow, Bound::Positive, [](CaseConfig& c) -> double& { return c.transformer.fan_flow; }));
    r.push_back(scalar("fans.bottom", kLength, Bound::NonNegative, [](CaseConfig& c) -> double& { return c.transformer.fan_bottom; }));
    r.push_back(scalar("fans.top", kLength, Bound::Positive, [](CaseConfig& c) -> double& { return c.transformer.fan_top; }));
    r.push_back(scalar("fans.width", kLength, Bound::Positive, [](CaseConfig& c) -> double& { return c.transformer.fan_width; }));

    r.push_back(scalar("inlet.bottom", kLength, Bound::NonNegative, [](CaseConfig& c) -> double& { return c.transformer.inlet_bottom; }));
    r.push_back(scalar("inlet.top", kLength, Bound::Positive, [](CaseConfig& c) -> double& { return c.transformer.inlet_top; }));
    r.push_back(scalar("inlet.z_lo", kLength, Bound::NonNegative, [](CaseConfig& c) -> double& { return c.transformer.inlet_z_lo; }));
    r.push_back(scalar("inlet.z_hi", kLength, Bound::Positive, [](CaseConfig& c) -> double& { return c.transformer.inlet_z_hi; }));
    r.push_back(scalar("inlet.temperature", kTemperature, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.inlet_temperature; }));
    r.push_back(scalar("inlet.turbulence_intensity", kNone, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.turbulence_intensity; }));
    r.push_back(scalar("inlet.turbulence_length", kLength, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.turbulence_length; }));

    r.push_back(scalar("solids.winding_source", kPowerDensity, Bound::NonNegative,
                       [](CaseConfig& c) -> double& { return c.transformer.winding_source; }));
    r.push_back(scalar("solids.core_source", kPowerDensity, Bound::NonNegative,
                       [](CaseConfig& c) -> double& { return c.transformer.core_source; }));
    r.push_back(scalar("solids.winding_conductivity_axial", kConductivity, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.winding_conductivity_axial; }));
    r.push_back(scalar("solids.winding_conductivity_radial", kConductivity, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.winding_conductivity_radial; }));
    r.push_back(scalar("solids.core_conductivity_axial", kConductivity, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.core_conductivity_axial; }));
    r.push_back(scalar("solids.core_conductivity_radial", kConductivity, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.core_conductivity_radial; }));

    r.push_back(scalar("fluid.density", kDensity, Bound::Positive, [](CaseConfig& c) -> double& { return c.transformer.fluid.density; }));
    r.push_back(scalar("fluid.viscosity", kViscosity, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.fluid.viscosity; }));
    r.push_back(scalar("fluid.specific_heat", kSpecificHeat, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.fluid.specific_heat; }));
    r.push_back(scalar("fluid.conductivity", kConductivity, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.fluid.conductivity; }));
    r.push_back(scalar("fluid.expansivity", kExpansivity, Bound::NonNegative,
                       [](CaseConfig& c) -> double& { return c.transformer.fluid.expansivity; }));
    r.push_back(scalar("fluid.reference_temperature", kTemperature, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.fluid.reference_temperature; }));
    r.push_back(vector3("fluid.gravity", kAcceleration, [](CaseConfig& c) -> Vec3& { return c.transformer.fluid.gravity; }));
    r.push_back(scalar("initial_temperature", kTemperature, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.transformer.initial_temperature; }));

    r.push_back(boolean("turbulence.enabled", [](CaseConfig& c) -> bool& { return c.transformer.turbulence.enabled; }));
    auto turb = [&](const std::string& name, const Quantity& q, Bound b, std::function<double&(TurbulenceSettings&)> f) {
      r.push_back(scalar("turbulence." + name, q, b, [f](CaseConfig& c) -> double& { return f(c.transformer.turbulence); }));
    };
    turb("c_mu", kNone, Bound::NonNegative, [](TurbulenceSettings& t) -> double& { return t.constants.c_mu; });
    turb("c1", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.constants.c1; });
    turb("c2", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.constants.c2; });
    turb("sigma_k", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.constants.sigma_k; });
    turb("sigma_eps", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.constants.sigma_eps; });
    turb("k_floor", kTke, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.k_floor; });
    turb("eps_floor", kDissipation, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.eps_floor; });
    turb("mut_ratio_max", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.mut_ratio_max; });
    turb("kappa", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.kappa; });
    turb("log_law_e", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.log_law_e; });
    turb("prandtl_turbulent", kNone, Bound::Positive, [](TurbulenceSettings& t) -> double& { return t.prandtl_turbulent; });

    r.push_back(integer("solver.max_iterations", 1, [](CaseConfig& c) -> int& { return c.controls.max_iterations; }));
    for (std::size_t e = 0; e < kEquationCount; ++e) {
      r.push_back(scalar(std::string("solver.target.") + kEquationNames[e], kNone, Bound::Positive,
                         [e](CaseConfig& c) -> double& { return c.controls.targets[e]; }));
    }
    auto relax = [&](const std::string& name, double Relaxation::*m) {
      r.push_back(scalar("relaxation." + name, kNone, Bound::Unit, [m](CaseConfig& c) -> double& { return c.controls.relaxation.*m; }));
    };
    relax("momentum", &Relaxation::momentum);
    relax("pressure", &Relaxation::pressure);
    relax("temperature", &Relaxation::temperature);
    relax("k", &Relaxation::k);
    relax("epsilon", &Relaxation::epsilon);
    auto scheme = [&](const std::string& name, SchemeChoice SchemeSet::*m) {
      r.push_back(choice<AdvectionScheme>("scheme." + name, kSchemes,
                                          [m](CaseConfig& c) -> AdvectionScheme& { return (c.controls.schemes.*m).advection; }));
      r.push_back(choice<Limiter>("limiter." + name, kLimiters,
                                  [m](CaseConfig& c) -> Limiter& { return (c.controls.schemes.*m).limiter; }));
    };
    scheme("momentum", &SchemeSet::momentum);
    scheme("turbulence", &SchemeSet::turbulence);
    scheme("energy", &SchemeSet::energy);
    r.push_back(integer("solver.divergence_window", 1, [](CaseConfig& c) -> int& { return c.controls.divergence_window; }));
    r.push_back(scalar("solver.divergence_factor", kNone, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.controls.divergence_factor; }));
    r.push_back(scalar("solver.pseudo_time_step", kTime, Bound::NonNegative,
                       [](CaseConfig& c) -> double& { return c.controls.pseudo_time_step; }));
    auto linear = [&](const std::string& name, SolveOptions SolverControls::*m) {
      r.push_back(scalar("linear." + name + "_tolerance", kNone, Bound::Positive,
                         [m](CaseConfig& c) -> double& { return (c.controls.*m).tolerance; }));
      r.push_back(integer("linear." + name + "_max_iterations", 1,
                          [m](CaseConfig& c) -> int& { return (c.controls.*m).max_iterations; }));
    };
    linear("flow", &SolverControls::flow_solver);
    linear("pressure", &SolverControls::pressure_solver);
    linear("scalar", &SolverControls::scalar_solver);
    r.push_back(boolean("solver.final_projection", [](CaseConfig& c) -> bool& { return c.controls.final_projection; }));
    r.push_back(scalar("solver.projection_tolerance", kNone, Bound::Positive,
                       [](CaseConfig& c) -> double& { return c.controls.projection_tolerance; }));
    r.push_back(integer("threads", 0, [](CaseConfig& c) -> int& { return c.threads; }));
    {
      KeySpec k;
      k.key = "monitor";
      k.repeatable = true;
      k.set = [](CaseConfig& c, const RawValue& v) {
        std::vector<double> x;
        if (auto err = convert(v, "monitor", kLength, 3, x); !err.empty()) return err;
        c.monitor_points.push_back({x[0], x[1], x[2]});
        return std::string();
      };
      k.get = [](const CaseConfig&) { return std::string(); };
      r.push_back(k);
    }
    return r;
  }();
  return keys;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error([&] {
        std::string s = "configuration error";
        for (const auto& i : issues) {
          s += "\n  ";
          if (i.line > 0) s += "line " + std::to_string(i.line) + ": ";
          s += i.message;
        }
        return s;
      }()),
      issues_(std::move(issues)) {}

CaseConfig parse_config(const std::string& text) {
  std::map<std::string, const KeySpec*> by_name;
  for (const auto& k : registry()) by_name[k.key] = &k;

  CaseConfig cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int> seen;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({lineno, "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const auto it = by_name.find(key);
    if (it == by_name.end()) {
      issues.push_back({lineno, "unknown key '" + key + "'"});
      continue;
    }
    if (!it->second->repeatable) {
      if (const auto prev = seen.find(key); prev != seen.end()) {
        issues.push_back({lineno, "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")"});
        continue;
      }
      seen[key] = lineno;
    }
    const RawValue value = tokenize(line.substr(eq + 1));
    if (value.text.empty()) {
      issues.push_back({lineno, "missing value for '" + key + "'"});
      continue;
    }
    if (auto err = it->second->set(cfg, value); !err.empty()) issues.push_back({lineno, err});
  }
  if (!seen.contains("schema_version")) {
    issues.push_back({0, "missing 'schema_version' (current version is " + std::to_string(kConfigSchemaVersion) + ")"});
  } else if (cfg.schema_version != kConfigSchemaVersion) {
    issues.push_back({seen["schema_version"], "unsupported schema_version " + std::to_string(cfg.schema_version) +
                                                  " (supported: " + std::to_string(kConfigSchemaVersion) + ")"});
  }
  if (issues.empty()) {
    auto check = [&](const auto& f) {
      try {
        f();
      } catch (const Error& e) {
        issues.push_back({0, e.what()});
      }
    };
    check([&] { cfg.transformer.validate(); });
    check([&] { cfg.transformer.fluid.validate(); });
    check([&] { cfg.transformer.turbulence.constants.validate(); });
    check([&] { cfg.controls.validate(); });
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

CaseConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "cannot open configuration file '" + path.string() + "': file not found or unreadable"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const CaseConfig& config) {
  std::ostringstream os;
  for (const auto& k : registry()) {
    if (k.repeatable) continue;
    os << k.key << " = " << k.get(config) << "\n";
  }
  for (const Vec3& p : config.monitor_points) {
    os << "monitor = " << number(p.x) << " " << number(p.y) << " " << number(p.z) << " m\n";
  }
  return os.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& k : registry()) keys.push_back(k.key);
  return keys;
}

Case build_case(const CaseConfig& config) {
  Case c = build_transformer_case(config.transformer);
  c.name = config.name;
  c.monitor_points = config.monitor_points;
  return c;
}

}  // namespace dtcfd
