#include "parablock/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "parablock/errors.hpp"

namespace parablock::experiment {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where + ": cannot parse '" + node.Scalar() + "'");
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, const std::string& where, T& out) {
  if (const YAML::Node n = parent[key]) out = scalar<T>(n, where + "." + key);
}

template <class T>
void read(const YAML::Node& parent, const char* key, const std::string& where, std::optional<T>& out) {
  if (const YAML::Node n = parent[key]) out = scalar<T>(n, where + "." + key);
}

template <class E>
E enum_value(const YAML::Node& n, const std::string& where,
             std::initializer_list<std::pair<const char*, E>> table) {
  const auto s = scalar<std::string>(n, where);
  for (const auto& [name, value] : table)
    if (s == name) return value;
  fail(where + ": invalid value '" + s + "'");
}

ModelKind parse_model(const YAML::Node& n) {
  return enum_value<ModelKind>(n, "model",
                               {{"generic", ModelKind::Generic},
                                {"dipolariton", ModelKind::Dipolariton},
                                {"single-mode-baseline", ModelKind::SingleModeBaseline}});
}

Truncation parse_truncation(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() != 2) fail("truncation: expected [n2, n3]");
  return {scalar<int>(n[0], "truncation[0]"), scalar<int>(n[1], "truncation[1]")};
}

void parse_generic(const YAML::Node& n, GenericConfig& g) {
  const std::string w = "generic";
  check_keys(n, w, {"alpha", "F2", "Delta2", "Delta3", "kappa2", "kappa3", "mean_field"});
  read(n, "alpha", w, g.alpha);
  read(n, "F2", w, g.F2);
  read(n, "Delta2", w, g.Delta2);
  read(n, "Delta3", w, g.Delta3);
  read(n, "kappa2", w, g.kappa2);
  read(n, "kappa3", w, g.kappa3);
  if (const YAML::Node m = n["mean_field"]) {
    const std::string wm = w + ".mean_field";
    check_keys(m, wm, {"alpha0", "P1", "Delta1", "kappa1"});
    MeanField mf;
    read(m, "alpha0", wm, mf.alpha0);
    read(m, "P1", wm, mf.P1);
    read(m, "Delta1", wm, mf.Delta1);
    read(m, "kappa1", wm, mf.kappa1);
    g.mean_field = mf;
  }
}

void parse_dipolariton(const YAML::Node& n, DipolaritonConfig& d) {
  const std::string w = "dipolariton";
  check_keys(n, w,
             {"E_C", "E_DX", "E_IX", "Omega", "J", "alpha_D", "alpha_I", "alpha_DI", "tau_C_ps",
              "tau_X_ps", "psi1", "constants", "Delta1", "Delta2", "F2"});
  auto& p = d.params;
  read(n, "E_C", w, p.E_C);
  read(n, "E_DX", w, p.E_DX);
  read(n, "E_IX", w, p.E_IX);
  read(n, "Omega", w, p.Omega);
  read(n, "J", w, p.J);
  read(n, "alpha_D", w, p.alpha_D);
  read(n, "alpha_I", w, p.alpha_I);
  read(n, "alpha_DI", w, p.alpha_DI);
  std::optional<double> tau;
  read(n, "tau_C_ps", w, tau);
  if (tau) {
    if (!(*tau > 0)) fail("dipolariton.tau_C_ps must be > 0");
    p.Gamma_C = units::lifetime_to_mev(*tau);
  }
  tau.reset();
  read(n, "tau_X_ps", w, tau);
  if (tau) {
    if (!(*tau > 0)) fail("dipolariton.tau_X_ps must be > 0");
    p.Gamma_X = units::lifetime_to_mev(*tau);
  }
  if (const YAML::Node psi = n["psi1"]) {
    if (psi.IsSequence()) {
      if (psi.size() != 2) fail("dipolariton.psi1: expected a number or [re, im]");
      p.psi1 = {scalar<double>(psi[0], "dipolariton.psi1"), scalar<double>(psi[1], "dipolariton.psi1")};
    } else {
      p.psi1 = {scalar<double>(psi, "dipolariton.psi1"), 0.0};
    }
  }
  if (const YAML::Node c = n["constants"])
    d.constants = enum_value<ConstantsSource>(
        c, "dipolariton.constants",
        {{"derived", ConstantsSource::Derived}, {"published", ConstantsSource::Published}});
  read(n, "Delta1", w, d.Delta1);
  read(n, "Delta2", w, d.Delta2);
  read(n, "F2", w, d.F2);
}

std::vector<Axis> parse_sweep(const YAML::Node& n) {
  if (!n.IsSequence()) fail("sweep: expected a list of axes");
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string w = "sweep[" + std::to_string(i) + "]";
    const YAML::Node a = n[i];
    check_keys(a, w, {"name", "start", "stop", "count", "scale"});
    if (!a["name"]) fail(w + ": missing name");
    Axis axis;
    read(a, "name", w, axis.name);
    read(a, "start", w, axis.start);
    read(a, "stop", w, axis.stop);
    read(a, "count", w, axis.count);
    if (const YAML::Node s = a["scale"])
      axis.scale = enum_value<AxisScale>(s, w + ".scale",
                                         {{"linear", AxisScale::Linear}, {"log", AxisScale::Log}});
    axes.push_back(axis);
  }
  return axes;
}

void parse_drive(const YAML::Node& n, Drive& d) {
  const std::string w = "drive";
  check_keys(n, w,
             {"type", "shape", "fwhm_ps", "center_ps", "peak", "target_N2", "window_ps", "dt_ps",
              "repetition_ps"});
  if (const YAML::Node t = n["type"])
    d.kind = enum_value<DriveKind>(t, "drive.type", {{"cw", DriveKind::CW}, {"pulsed", DriveKind::Pulsed}});
  if (const YAML::Node s = n["shape"])
    d.shape = enum_value<PulseShape>(
        s, "drive.shape", {{"gaussian", PulseShape::Gaussian}, {"square", PulseShape::Square}});
  read(n, "fwhm_ps", w, d.fwhm_ps);
  read(n, "center_ps", w, d.center_ps);
  read(n, "peak", w, d.peak);
  read(n, "target_N2", w, d.target_N2);
  read(n, "window_ps", w, d.window_ps);
  read(n, "dt_ps", w, d.dt_ps);
  read(n, "repetition_ps", w, d.repetition_ps);
}

void parse_correlation(const YAML::Node& n, CorrelationConfig& c) {
  check_keys(n, "correlation", {"tau_stop_ps", "tau_count"});
  read(n, "tau_stop_ps", "correlation", c.tau_stop_ps);
  read(n, "tau_count", "correlation", c.tau_count);
}

void finite_or_fail(double v, const std::string& what) {
  if (!std::isfinite(v)) fail(what + " must be finite");
}

}  // namespace

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = start;
    return v;
  }
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    v[static_cast<std::size_t>(i)] = scale == AxisScale::Linear
                                         ? start + (stop - start) * f
                                         : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * f);
  }
  v.back() = stop;
  return v;
}

const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Generic: return "generic";
    case ModelKind::Dipolariton: return "dipolariton";
    case ModelKind::SingleModeBaseline: return "single-mode-baseline";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (truncation && (truncation->n2 < 2 || truncation->n3 < 2)) fail("truncation: each entry must be >= 2");
  std::set<std::string> names;
  for (const Axis& a : sweep) {
    if (a.count < 1) fail("sweep axis '" + a.name + "': count must be >= 1");
    finite_or_fail(a.start, "sweep axis '" + a.name + "' start");
    finite_or_fail(a.stop, "sweep axis '" + a.name + "' stop");
    if (a.scale == AxisScale::Log && (a.start <= 0 || a.stop <= 0))
      fail("sweep axis '" + a.name + "': log scale needs positive bounds");
    if (!names.insert(a.name).second) fail("sweep axis '" + a.name + "' given twice");
  }
  if (!(drive.fwhm_ps > 0)) fail("drive.fwhm_ps must be > 0");
  if (!(drive.dt_ps > 0)) fail("drive.dt_ps must be > 0");
  if (!(drive.window_ps > 0)) fail("drive.window_ps must be > 0");
  if (!(drive.target_N2 > 0)) fail("drive.target_N2 must be > 0");
  if (drive.peak && *drive.peak < 0) fail("drive.peak must be >= 0");
  if (!(correlation.tau_stop_ps > 0)) fail("correlation.tau_stop_ps must be > 0");
  if (correlation.tau_count < 2) fail("correlation.tau_count must be >= 2");
  if (generic.kappa2 <= 0 || generic.kappa3 <= 0) fail("generic: decay rates must be > 0");
  if (generic.mean_field && generic.mean_field->kappa1 <= 0) fail("generic.mean_field.kappa1 must be > 0");
  try {
    dipolariton.params.validate();
  } catch (const InvalidArgument& e) {
    fail(std::string("dipolariton: ") + e.what());
  }
  for (const std::string& o : outputs)
    if (o != "N2" && o != "N3" && o != "g2") fail("outputs: unknown observable '" + o + "'");
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    fail(std::string("config is not valid YAML: ") + e.what());
  }
  ExperimentConfig c;
  if (root.IsNull()) return c;
  try {
    check_keys(root, "config",
               {"model", "truncation", "generic", "dipolariton", "sweep", "drive", "correlation", "outputs"});
    if (const YAML::Node n = root["model"]) c.model = parse_model(n);
    if (const YAML::Node n = root["truncation"]) c.truncation = parse_truncation(n);
    if (const YAML::Node n = root["generic"]) parse_generic(n, c.generic);
    if (const YAML::Node n = root["dipolariton"]) parse_dipolariton(n, c.dipolariton);
    if (const YAML::Node n = root["sweep"]) c.sweep = parse_sweep(n);
    if (const YAML::Node n = root["drive"]) parse_drive(n, c.drive);
    if (const YAML::Node n = root["correlation"]) parse_correlation(n, c.correlation);
    if (const YAML::Node n = root["outputs"]) {
      if (!n.IsSequence()) fail("outputs: expected a list");
      c.outputs.clear();
      for (const auto& o : n) c.outputs.push_back(scalar<std::string>(o, "outputs"));
    }
  } catch (const YAML::Exception& e) {
    fail(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo(const ExperimentConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(15);
  e << YAML::BeginMap;
  if (c.model) e << YAML::Key << "model" << YAML::Value << to_string(*c.model);
  if (c.truncation)
    e << YAML::Key << "truncation" << YAML::Value << YAML::Flow << YAML::BeginSeq << c.truncation->n2
      << c.truncation->n3 << YAML::EndSeq;

  const GenericConfig& g = c.generic;
  e << YAML::Key << "generic" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "alpha" << YAML::Value << g.alpha;
  if (g.F2) e << YAML::Key << "F2" << YAML::Value << *g.F2;
  e << YAML::Key << "Delta2" << YAML::Value << g.Delta2;
  e << YAML::Key << "Delta3" << YAML::Value << g.Delta3;
  e << YAML::Key << "kappa2" << YAML::Value << g.kappa2;
  e << YAML::Key << "kappa3" << YAML::Value << g.kappa3;
  if (g.mean_field) {
    e << YAML::Key << "mean_field" << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "alpha0" << YAML::Value << g.mean_field->alpha0;
    e << YAML::Key << "P1" << YAML::Value << g.mean_field->P1;
    e << YAML::Key << "Delta1" << YAML::Value << g.mean_field->Delta1;
    e << YAML::Key << "kappa1" << YAML::Value << g.mean_field->kappa1;
    e << YAML::EndMap;
  }
  e << YAML::EndMap;

  const DipolaritonConfig& d = c.dipolariton;
  const auto& p = d.params;
  e << YAML::Key << "dipolariton" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "E_C" << YAML::Value << p.E_C;
  e << YAML::Key << "E_DX" << YAML::Value << p.E_DX;
  e << YAML::Key << "E_IX" << YAML::Value << p.E_IX;
  e << YAML::Key << "Omega" << YAML::Value << p.Omega;
  e << YAML::Key << "J" << YAML::Value << p.J;
  e << YAML::Key << "alpha_D" << YAML::Value << p.alpha_D;
  e << YAML::Key << "alpha_I" << YAML::Value << p.alpha_I;
  e << YAML::Key << "alpha_DI" << YAML::Value << p.alpha_DI;
  e << YAML::Key << "tau_C_ps" << YAML::Value << units::kHbarMeVps / p.Gamma_C;
  e << YAML::Key << "tau_X_ps" << YAML::Value << units::kHbarMeVps / p.Gamma_X;
  e << YAML::Key << "psi1" << YAML::Value << YAML::Flow << YAML::BeginSeq << p.psi1.real() << p.psi1.imag()
    << YAML::EndSeq;
  e << YAML::Key << "constants" << YAML::Value
    << (d.constants == ConstantsSource::Derived ? "derived" : "published");
  if (d.Delta1) e << YAML::Key << "Delta1" << YAML::Value << *d.Delta1;
  if (d.Delta2) e << YAML::Key << "Delta2" << YAML::Value << *d.Delta2;
  if (d.F2) e << YAML::Key << "F2" << YAML::Value << *d.F2;
  e << YAML::EndMap;

  if (!c.sweep.empty()) {
    e << YAML::Key << "sweep" << YAML::Value << YAML::BeginSeq;
    for (const Axis& a : c.sweep) {
      e << YAML::Flow << YAML::BeginMap;
      e << YAML::Key << "name" << YAML::Value << a.name;
      e << YAML::Key << "start" << YAML::Value << a.start;
      e << YAML::Key << "stop" << YAML::Value << a.stop;
      e << YAML::Key << "count" << YAML::Value << a.count;
      e << YAML::Key << "scale" << YAML::Value << (a.scale == AxisScale::Linear ? "linear" : "log");
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }

  const Drive& dr = c.drive;
  e << YAML::Key << "drive" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "type" << YAML::Value << (dr.kind == DriveKind::CW ? "cw" : "pulsed");
  e << YAML::Key << "shape" << YAML::Value << (dr.shape == PulseShape::Gaussian ? "gaussian" : "square");
  e << YAML::Key << "fwhm_ps" << YAML::Value << dr.fwhm_ps;
  e << YAML::Key << "center_ps" << YAML::Value << dr.center_ps;
  if (dr.peak) e << YAML::Key << "peak" << YAML::Value << *dr.peak;
  e << YAML::Key << "target_N2" << YAML::Value << dr.target_N2;
  e << YAML::Key << "window_ps" << YAML::Value << dr.window_ps;
  e << YAML::Key << "dt_ps" << YAML::Value << dr.dt_ps;
  e << YAML::Key << "repetition_ps" << YAML::Value << dr.repetition_ps;
  e << YAML::EndMap;

  e << YAML::Key << "correlation" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "tau_stop_ps" << YAML::Value << c.correlation.tau_stop_ps;
  e << YAML::Key << "tau_count" << YAML::Value << c.correlation.tau_count;
  e << YAML::EndMap;

  e << YAML::Key << "outputs" << YAML::Value << YAML::Flow << c.outputs;
  e << YAML::EndMap;
  return e.c_str();
}

}  // namespace parablock::experiment
