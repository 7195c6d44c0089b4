#include "parablock/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parablock/dynamics.hpp"
#include "parablock/errors.hpp"
#include "parablock/generic_model.hpp"
#include "parablock/parallel.hpp"
#include "parablock/tolerances.hpp"

namespace parablock::experiment {

namespace {

constexpr double kConvergenceTolerance = kTolerances.convergence;

std::string fmt(double v) { return format_number(v); }

ModelKind require_model(ExperimentConfig& c, ModelKind fallback, std::initializer_list<ModelKind> allowed,
                        const char* experiment) {
  if (!c.model) c.model = fallback;
  if (std::find(allowed.begin(), allowed.end(), *c.model) == allowed.end())
    throw ConfigError(std::string(experiment) + " does not support model " + to_string(*c.model));
  return *c.model;
}

Truncation resolve_truncation(ExperimentConfig& c, const RunOptions& opt, Truncation fallback) {
  if (opt.truncation) c.truncation = opt.truncation;
  if (!c.truncation) c.truncation = fallback;
  if (c.truncation->n2 < 2 || c.truncation->n3 < 2) throw ConfigError("truncation: each entry must be >= 2");
  return *c.truncation;
}

const Axis& require_axis(const ExperimentConfig& c, const std::string& name, const char* experiment) {
  for (const Axis& a : c.sweep)
    if (a.name == name) return a;
  throw ConfigError(std::string(experiment) + ": sweep needs an axis named " + name);
}

void require_only_axes(const ExperimentConfig& c, std::initializer_list<const char*> names,
                       const char* experiment) {
  for (const Axis& a : c.sweep)
    if (std::none_of(names.begin(), names.end(), [&](const char* n) { return a.name == n; }))
      throw ConfigError(std::string(experiment) + ": unexpected sweep axis " + a.name);
}

std::vector<double> uniform_grid(double stop, double step) {
  const auto n = static_cast<std::size_t>(std::floor(stop / step + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * step;
  return t;
}

std::vector<double> linspace(double a, double b, int n) {
  Axis ax{"", a, b, n, AxisScale::Linear};
  return ax.values();
}

/// Cartesian product of the sweep axes, first axis slowest.
std::vector<std::vector<double>> grid_points(const std::vector<Axis>& axes) {
  std::vector<std::vector<double>> pts{{}};
  for (const Axis& a : axes) {
    std::vector<std::vector<double>> next;
    const auto vals = a.values();
    next.reserve(pts.size() * vals.size());
    for (const auto& p : pts)
      for (double v : vals) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

ExperimentConfig at_point(const ExperimentConfig& c, const std::vector<double>& values) {
  ExperimentConfig out = c;
  for (std::size_t k = 0; k < c.sweep.size(); ++k) out = with_parameter(std::move(out), c.sweep[k].name, values[k]);
  return out;
}

std::optional<double> safe_g2(const DensityMatrix& rho, const Operator& a) {
  try {
    return g2_equal_time(rho, a);
  } catch (const UndefinedCorrelation&) {
    return std::nullopt;
  }
}

double top_level_population(const DensityMatrix& rho) {
  const FockSpace& s = rho.space();
  double worst = 0.0;
  for (int m = 0; m < s.mode_count(); ++m) {
    double p = 0.0;
    for (int i = 0; i < s.total_dim(); ++i)
      if (s.occupations(i)[static_cast<std::size_t>(m)] == s.mode_dim(m) - 1) p += rho(i, i).real();
    worst = std::max(worst, p);
  }
  return worst;
}

double max_occupation(const ModelSystem& sys, double peak, const Drive& d, double t_stop);

Observable expectation_of(const char* name, const Operator& op) {
  return {name, op, Observable::Kind::Expectation};
}

std::function<double(double)> envelope(const Drive& d, double peak) {
  const double fwhm = d.fwhm_ps;
  const double tc = d.center_ps;
  if (d.shape == PulseShape::Gaussian) {
    const double k = 4.0 * std::log(2.0) / (fwhm * fwhm);
    return [=](double t) { return peak * std::exp(-k * (t - tc) * (t - tc)); };
  }
  return [=](double t) { return std::abs(t - tc) <= 0.5 * fwhm ? peak : 0.0; };
}

Evolution pulsed_evolution(const ModelSystem& sys, double peak, const Drive& d, std::span<const double> t,
                           const std::vector<Observable>& obs) {
  IntegratorOptions io;
  if (d.shape == PulseShape::Square) io.max_step = 0.05 * d.fwhm_ps;
  else io.max_step = 0.25 * d.fwhm_ps;
  const TimeDependentHamiltonian h{sys.h0, {{sys.drive, envelope(d, peak)}}};
  return evolve(DensityMatrix::vacuum(sys.space), Generator(h, sys.channels), t, obs, io);
}

double max_occupation(const ModelSystem& sys, double peak, const Drive& d, double t_stop) {
  const auto t = uniform_grid(t_stop, d.dt_ps);
  const Evolution ev = pulsed_evolution(sys, peak, d, t, {expectation_of("N2", sys.a2.dagger() * sys.a2)});
  double m = 0.0;
  for (const auto& v : ev.trace.column("N2")) m = std::max(m, *v);
  return m;
}

/// Monotone scalar inversion f(x) = target on a log scale.
template <class F>
double solve_log_monotone(F f, double target, double x0, const char* what) {
  double lo = x0, hi = x0;
  double f_hi = f(hi);
  int guard = 0;
  if (f_hi < target) {
    while (f_hi < target) {
      lo = hi;
      hi *= 2.0;
      f_hi = f(hi);
      if (++guard > 60) throw ConvergenceError(std::string(what) + ": target occupation not reachable");
    }
  } else {
    double f_lo = f_hi;
    while (f_lo >= target) {
      hi = lo;
      lo *= 0.5;
      f_lo = f(lo);
      if (++guard > 60) throw ConvergenceError(std::string(what) + ": target occupation not reachable");
    }
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double fm = f(mid);
    if (std::abs(fm - target) <= 1e-7 * target || hi / lo - 1.0 < 1e-12) return mid;
    (fm < target ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

struct SweepRow {
  std::vector<double> axes;
  PointResult point;
};

std::vector<SweepRow> sweep(const ExperimentConfig& c, Truncation t, int threads) {
  const auto pts = grid_points(c.sweep);
  auto results = parallel_map(pts.size(), threads, [&](std::size_t i) {
    return SweepRow{pts[i], solve_point(at_point(c, pts[i]), t)};
  });
  return results;
}

Cell cell(const std::optional<double>& v) { return v; }
Cell flag(bool b) { return b ? 1.0 : 0.0; }

Table steady_table(const ExperimentConfig& c, const std::vector<SweepRow>& rows) {
  Table t;
  for (const Axis& a : c.sweep) t.columns.push_back({a.name});
  for (const char* n : {"N2", "N3", "g2", "residual"}) t.columns.push_back({n});
  t.columns.push_back({"converged", true});
  t.columns.push_back({"tail"});
  for (const SweepRow& r : rows) {
    std::vector<Cell> row(r.axes.begin(), r.axes.end());
    row.insert(row.end(), {r.point.N2, r.point.N3, cell(r.point.g2), r.point.residual,
                           flag(r.point.converged), r.point.tail});
    t.add_row(std::move(row));
  }
  return t;
}

void describe_operating_point(Table& t, const OperatingPoint& op) {
  const auto& ec = op.ec;
  t.notes.push_back("constants: c1=" + fmt(ec.c1) + " c2=" + fmt(ec.c2) + " c3=" + fmt(ec.c3) +
                    " c4=" + fmt(ec.c4) + " c5=" + fmt(ec.c5) + " c6=" + fmt(ec.c6) + " meV");
  t.notes.push_back("decay: Gamma2=" + fmt(ec.Gamma2) + " Gamma3=" + fmt(ec.Gamma3) + " meV");
  t.notes.push_back("detunings: Delta1=" + fmt(ec.Delta1) + " Delta2=" + fmt(ec.Delta2) +
                    " Delta3=" + fmt(ec.Delta3) + " meV; E3+E1-2E2=" + fmt(op.offset) + " meV");
}

void stamp_truncation(Table& t, Truncation tr) {
  t.notes.push_back("truncation: n2_max=" + std::to_string(tr.n2) + " n3_max=" + std::to_string(tr.n3));
}

}  // namespace

OperatingPoint operating_point(const DipolaritonConfig& d) {
  const dipolariton::HopfieldDecomposition hd = dipolariton::diagonalize_linear(d.params);
  dipolariton::EffectiveConstants ec = dipolariton::effective_constants(hd, d.params);
  if (d.constants == ConstantsSource::Published) ec = dipolariton::with_published_values(ec, d.params.psi1);
  OperatingPoint op;
  op.psi1 = d.params.psi1;
  op.offset = dipolariton::parametric_offset(hd);
  const double n = std::norm(op.psi1);
  op.intersection_Delta2 = -ec.c1 * n;
  op.intersection_Delta1 = op.offset + 2.0 * op.intersection_Delta2 + ec.c2 * n;
  ec.Delta2 = d.Delta2.value_or(op.intersection_Delta2);
  ec.Delta1 = d.Delta1.value_or(op.offset + 2.0 * ec.Delta2 + ec.c2 * n);
  ec.Delta3 = op.offset - ec.Delta1 + 2.0 * ec.Delta2;
  op.ec = ec;
  return op;
}

ModelSystem build_system(const ExperimentConfig& c, Truncation t) {
  const ModelKind model = c.model.value_or(ModelKind::Generic);
  if (model == ModelKind::Generic) {
    const GenericConfig& g = c.generic;
    generic::ReducedParams rp;
    rp.alpha = g.alpha;
    if (g.mean_field) {
      generic::ModelParams mp;
      mp.alpha0 = g.mean_field->alpha0;
      mp.P1 = g.mean_field->P1;
      mp.E1 = g.mean_field->Delta1;
      mp.kappa1 = g.mean_field->kappa1;
      rp.alpha = generic::reduce(mp).alpha;
    }
    rp.Delta2 = g.Delta2;
    rp.Delta3 = g.Delta3;
    rp.kappa2 = g.kappa2;
    rp.kappa3 = g.kappa3;
    const FockSpace s({t.dim2(), t.dim3()});
    const Operator a2 = embed(annihilation(t.dim2()), 0, s);
    const Operator a3 = embed(annihilation(t.dim3()), 1, s);
    return {s, generic::build_reduced_hamiltonian(rp, s), a2.dagger() + a2, generic::reduced_channels(rp, s),
            a2, a3, g.F2.value_or(0.01)};
  }

  const OperatingPoint op = operating_point(c.dipolariton);
  const double F2 = c.dipolariton.F2.value_or(0.001);
  if (model == ModelKind::SingleModeBaseline) {
    const FockSpace s({t.dim2()});
    const Operator a2 = annihilation(t.dim2());
    return {s, dipolariton::to_rate_units(dipolariton::single_mode_blockade_reference(op.ec, 0.0, s)),
            dipolariton::to_rate_units(a2.dagger() + a2), dipolariton::rate_channels(op.ec, s), a2,
            std::nullopt, F2};
  }
  const FockSpace s({t.dim2(), t.dim3()});
  const Operator a2 = embed(annihilation(t.dim2()), 0, s);
  const Operator a3 = embed(annihilation(t.dim3()), 1, s);
  return {s, dipolariton::to_rate_units(dipolariton::build_effective_hamiltonian(op.ec, op.psi1, 0.0, s)),
          dipolariton::to_rate_units(a2.dagger() + a2), dipolariton::rate_channels(op.ec, s), a2, a3, F2};
}

namespace {

PointResult solve_system(const ModelSystem& sys, double F2) {
  const SteadyState ss = steady_state(build_liouvillian(sys.h0 + Complex{F2} * sys.drive, sys.channels));
  PointResult r;
  r.N2 = expectation(ss.rho, sys.a2.dagger() * sys.a2).real();
  if (sys.a3) r.N3 = expectation(ss.rho, sys.a3->dagger() * *sys.a3).real();
  r.g2 = safe_g2(ss.rho, sys.a2);
  r.residual = ss.residual;
  r.tail = top_level_population(ss.rho);
  r.converged = ss.residual <= kTolerances.steady_residual;
  try {
    ss.rho.validate(kTolerances.hermiticity, kTolerances.trace, kTolerances.min_eigenvalue);
  } catch (const InvalidArgument&) {
    r.converged = false;
  }
  return r;
}

}  // namespace

PointResult solve_point(const ExperimentConfig& c, Truncation t) {
  const ModelSystem sys = build_system(c, t);
  return solve_system(sys, sys.F2);
}

ExperimentConfig with_parameter(ExperimentConfig c, const std::string& name, double v) {
  const ModelKind model = c.model.value_or(ModelKind::Generic);
  if (model == ModelKind::Generic) {
    GenericConfig& g = c.generic;
    auto mf = [&]() -> MeanField& {
      if (!g.mean_field) g.mean_field = MeanField{};
      return *g.mean_field;
    };
    if (name == "alpha") g.alpha = v;
    else if (name == "F2") g.F2 = v;
    else if (name == "Delta2") g.Delta2 = v;
    else if (name == "Delta3") g.Delta3 = v;
    else if (name == "kappa2") g.kappa2 = v;
    else if (name == "kappa3") g.kappa3 = v;
    else if (name == "alpha0") mf().alpha0 = v;
    else if (name == "P1") mf().P1 = v;
    else if (name == "Delta1") mf().Delta1 = v;
    else throw ConfigError("generic model has no sweepable parameter " + name);
    return c;
  }
  DipolaritonConfig& d = c.dipolariton;
  if (name == "F2") d.F2 = v;
  else if (name == "Delta1") d.Delta1 = v;
  else if (name == "Delta2") d.Delta2 = v;
  else if (name == "psi1") d.params.psi1 = {v, 0.0};
  else if (name == "E_C") d.params.E_C = v;
  else if (name == "E_DX") d.params.E_DX = v;
  else if (name == "E_IX") d.params.E_IX = v;
  else if (name == "Omega") d.params.Omega = v;
  else if (name == "J") d.params.J = v;
  else throw ConfigError("dipolariton model has no sweepable parameter " + name);
  return c;
}

double calibrate_cw_drive(const ExperimentConfig& c, Truncation t, double target) {
  const ModelSystem sys = build_system(c, t);
  return solve_log_monotone([&](double f) { return solve_system(sys, f).N2; }, target, 1e-3,
                            "CW drive calibration");
}

RunResult run_fig2(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentConfig c = cfg;
  require_model(c, ModelKind::Generic, {ModelKind::Generic}, "fig2");
  const Truncation tr = resolve_truncation(c, opt, {6, 6});
  if (!c.generic.F2) c.generic.F2 = 0.1;
  if (c.sweep.empty()) c.sweep = {{"alpha", 0.0, 5.0, 51, AxisScale::Linear}};
  require_axis(c, "alpha", "fig2");
  require_only_axes(c, {"alpha"}, "fig2");

  const double kappa = c.generic.kappa2;
  const auto rows = sweep(c, tr, opt.threads);
  Table t;
  t.columns = {{"alpha_over_kappa"}, {"N2"}, {"N3"}, {"g2"}, {"g2_analytic"}, {"residual"},
               {"converged", true}, {"tail"}};
  for (const SweepRow& r : rows) {
    const double a = r.axes[0];
    t.add_row({a / kappa, r.point.N2, r.point.N3, cell(r.point.g2), generic::analytic_g2(a, kappa),
               r.point.residual, flag(r.point.converged), r.point.tail});
  }
  stamp_truncation(t, tr);
  t.notes.push_back("F2/kappa=" + fmt(*c.generic.F2 / kappa));
  return {"fig2", c, {{"fig2.csv", std::move(t)}}, std::nullopt};
}

RunResult run_fig3a(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentConfig c = cfg;
  require_model(c, ModelKind::Dipolariton, {ModelKind::Dipolariton}, "fig3a");
  const Truncation tr = resolve_truncation(c, opt, {6, 6});
  if (c.sweep.empty()) c.sweep = {{"F2", 1e-4, 2e-2, 201, AxisScale::Log}};
  require_axis(c, "F2", "fig3a");
  require_only_axes(c, {"F2"}, "fig3a");

  ExperimentConfig single = c;
  single.model = ModelKind::SingleModeBaseline;
  const auto pts = grid_points(c.sweep);
  struct Pair {
    PointResult three, one;
  };
  const auto res = parallel_map(pts.size(), opt.threads, [&](std::size_t i) {
    return Pair{solve_point(at_point(c, pts[i]), tr), solve_point(at_point(single, pts[i]), tr)};
  });

  Table t;
  t.columns = {{"F2_meV"}, {"N2"}, {"N3"}, {"g2"}, {"residual"}, {"converged", true}, {"tail"},
               {"N2_single"}, {"g2_single"}, {"residual_single"}};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& [p, s] = res[i];
    t.add_row({pts[i][0], p.N2, p.N3, cell(p.g2), p.residual, flag(p.converged && s.converged), p.tail, s.N2,
               cell(s.g2), s.residual});
  }
  stamp_truncation(t, tr);
  describe_operating_point(t, operating_point(c.dipolariton));
  t.notes.push_back("single-mode baseline: psi1=0, Delta2=0, same F2 grid");
  return {"fig3a", c, {{"fig3a.csv", std::move(t)}}, std::nullopt};
}

RunResult run_fig3b(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentConfig c = cfg;
  require_model(c, ModelKind::Dipolariton, {ModelKind::Dipolariton}, "fig3b");
  const Truncation tr = resolve_truncation(c, opt, {4, 4});
  if (!c.dipolariton.F2) c.dipolariton.F2 = 0.001;
  const OperatingPoint op = operating_point(c.dipolariton);
  if (c.sweep.empty())
    c.sweep = {{"Delta1", op.intersection_Delta1 - 3.0, op.intersection_Delta1 + 3.0, 61, AxisScale::Linear},
               {"Delta2", op.intersection_Delta2 - 3.0, op.intersection_Delta2 + 3.0, 61, AxisScale::Linear}};
  require_axis(c, "Delta1", "fig3b");
  require_axis(c, "Delta2", "fig3b");
  require_only_axes(c, {"Delta1", "Delta2"}, "fig3b");
  if (c.sweep[0].name != "Delta1") std::swap(c.sweep[0], c.sweep[1]);

  const auto rows = sweep(c, tr, opt.threads);
  Table t;
  t.columns = {{"Delta1_meV"}, {"Delta2_meV"}, {"Delta3_meV"}, {"N2"}, {"N3"}, {"g2"}, {"residual"},
               {"converged", true}, {"tail"}};
  for (const SweepRow& r : rows) {
    const double d3 = op.offset - r.axes[0] + 2.0 * r.axes[1];
    t.add_row({r.axes[0], r.axes[1], d3, r.point.N2, r.point.N3, cell(r.point.g2), r.point.residual,
               flag(r.point.converged), r.point.tail});
  }
  stamp_truncation(t, tr);
  describe_operating_point(t, op);
  t.notes.push_back("intersection: Delta1=" + fmt(op.intersection_Delta1) +
                    " Delta2=" + fmt(op.intersection_Delta2) + " meV");

  // Track 1: Delta2 + c1|psi1|^2 = 0. Track 2: Delta3 + c2|psi1|^2 = 0.
  Table lines;
  lines.columns = {{"track", true}, {"Delta1_meV"}, {"Delta2_meV"}};
  const double n = std::norm(op.psi1);
  for (double d1 : c.sweep[0].values()) lines.add_row({1.0, d1, -op.ec.c1 * n});
  for (double d2 : c.sweep[1].values()) lines.add_row({2.0, op.offset + 2.0 * d2 + op.ec.c2 * n, d2});
  lines.notes = t.notes;
  return {"fig3b", c, {{"fig3b.csv", std::move(t)}, {"fig3b_lines.csv", std::move(lines)}}, std::nullopt};
}

RunResult run_fig4(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentConfig c = cfg;
  require_model(c, ModelKind::Dipolariton, {ModelKind::Dipolariton}, "fig4");
  const Truncation tr = resolve_truncation(c, opt, {6, 6});
  if (!c.sweep.empty()) throw ConfigError("fig4 takes no sweep axes");
  const double target = c.drive.target_N2;
  if (!c.dipolariton.F2) c.dipolariton.F2 = calibrate_cw_drive(c, tr, target);
  const ModelSystem sys = build_system(c, tr);

  // (a) CW: steady state and quantum regression.
  const Liouvillian l = build_liouvillian(sys.h0 + Complex{sys.F2} * sys.drive, sys.channels);
  const SteadyState ss = steady_state(l);
  const double n_ss = expectation(ss.rho, sys.a2.dagger() * sys.a2).real();
  const auto taus = linspace(0.0, c.correlation.tau_stop_ps, c.correlation.tau_count);
  const auto g = g2_two_time(ss.rho, sys.a2, l, taus);
  Table cw;
  cw.columns = {{"tau_ps"}, {"g2"}, {"N2_cond"}};
  for (const auto& [tau, v] : g) cw.add_row({tau, v, v * n_ss});
  stamp_truncation(cw, tr);
  describe_operating_point(cw, operating_point(c.dipolariton));
  cw.notes.push_back("cw: F2=" + fmt(sys.F2) + " meV N2=" + fmt(n_ss) + " residual=" + fmt(ss.residual));

  // (b) pulsed, from vacuum.
  Drive d = c.drive;
  d.kind = DriveKind::Pulsed;
  if (!d.peak) {
    const double t_stop = std::min(d.window_ps, d.center_ps + 4.0 * d.fwhm_ps);
    d.peak = solve_log_monotone([&](double p) { return max_occupation(sys, p, d, t_stop); }, target, sys.F2,
                                "pulse calibration");
  }
  c.drive = d;
  const auto t = uniform_grid(d.window_ps, d.dt_ps);
  const Evolution ev = pulsed_evolution(
      sys, *d.peak, d, t,
      {expectation_of("N2", sys.a2.dagger() * sys.a2), expectation_of("N3", sys.a3->dagger() * *sys.a3),
       {"g2", sys.a2, Observable::Kind::G2}});
  const auto env = envelope(d, *d.peak);
  Table pulsed;
  pulsed.columns = {{"t_ps"}, {"F2_meV"}, {"N2"}, {"N3"}, {"g2"}};
  const Series& n2 = ev.trace.column("N2");
  const Series& n3 = ev.trace.column("N3");
  const Series& g2 = ev.trace.column("g2");
  for (std::size_t i = 0; i < t.size(); ++i) pulsed.add_row({t[i], env(t[i]), n2[i], n3[i], g2[i]});
  stamp_truncation(pulsed, tr);
  pulsed.notes = cw.notes;
  pulsed.notes.back() = "pulse: peak F2=" + fmt(*d.peak) + " meV; repetition period " + fmt(d.repetition_ps) +
                        " ps (not simulated); max trace drift " + fmt(ev.max_trace_drift);
  return {"fig4", c, {{"cw.csv", std::move(cw)}, {"pulsed.csv", std::move(pulsed)}}, std::nullopt};
}

RunResult run_steady(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentConfig c = cfg;
  require_model(c, ModelKind::Generic,
                {ModelKind::Generic, ModelKind::Dipolariton, ModelKind::SingleModeBaseline}, "steady");
  const Truncation tr = resolve_truncation(c, opt, {6, 6});
  Table t = steady_table(c, sweep(c, tr, opt.threads));
  stamp_truncation(t, tr);
  if (*c.model != ModelKind::Generic) describe_operating_point(t, operating_point(c.dipolariton));
  return {"steady", c, {{"steady.csv", std::move(t)}}, std::nullopt};
}

RunResult run_trace(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentConfig c = cfg;
  require_model(c, ModelKind::Generic,
                {ModelKind::Generic, ModelKind::Dipolariton, ModelKind::SingleModeBaseline}, "trace");
  const Truncation tr = resolve_truncation(c, opt, {6, 6});
  if (!c.sweep.empty()) throw ConfigError("trace takes no sweep axes");
  const ModelSystem sys = build_system(c, tr);

  std::vector<Observable> obs;
  for (const std::string& o : c.outputs) {
    if (o == "N2") obs.push_back(expectation_of("N2", sys.a2.dagger() * sys.a2));
    else if (o == "N3" && sys.a3) obs.push_back(expectation_of("N3", sys.a3->dagger() * *sys.a3));
    else if (o == "g2") obs.push_back({"g2", sys.a2, Observable::Kind::G2});
    else throw ConfigError("trace: observable " + o + " not available for this model");
  }
  Drive& d = c.drive;
  const auto t = uniform_grid(d.window_ps, d.dt_ps);
  std::function<double(double)> env;
  Evolution ev = [&] {
    if (d.kind == DriveKind::CW) {
      const double f = sys.F2;
      env = [f](double) { return f; };
      const Liouvillian l = build_liouvillian(sys.h0 + Complex{f} * sys.drive, sys.channels);
      return evolve(DensityMatrix::vacuum(sys.space), Generator(l), t, obs);
    }
    if (!d.peak) {
      const double t_stop = std::min(d.window_ps, d.center_ps + 4.0 * d.fwhm_ps);
      d.peak = solve_log_monotone([&](double p) { return max_occupation(sys, p, d, t_stop); }, d.target_N2,
                                  sys.F2, "pulse calibration");
    }
    env = envelope(d, *d.peak);
    return pulsed_evolution(sys, *d.peak, d, t, obs);
  }();

  Table table;
  table.columns = {{"t"}, {"F2"}};
  for (const Observable& o : obs) table.columns.push_back({o.name});
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<Cell> row{t[i], env(t[i])};
    for (const Observable& o : obs) row.push_back(ev.trace.column(o.name)[i]);
    table.add_row(std::move(row));
  }
  stamp_truncation(table, tr);
  table.notes.push_back(std::string("time unit: ") + (*c.model == ModelKind::Generic ? "1/kappa" : "ps"));
  table.notes.push_back("max trace drift " + fmt(ev.max_trace_drift));
  return {"trace", c, {{"trace.csv", std::move(table)}}, std::nullopt};
}

RunResult validate_convergence(const ExperimentConfig& cfg, const RunOptions& opt) {
  ExperimentConfig c = cfg;
  require_model(c, ModelKind::Generic,
                {ModelKind::Generic, ModelKind::Dipolariton, ModelKind::SingleModeBaseline}, "validate");
  const Truncation base = resolve_truncation(c, opt, {6, 6});
  const Truncation ref_tr = base.raised(2);
  const auto reference = sweep(c, ref_tr, opt.threads);

  struct Change {
    double N2 = 0.0, g2 = 0.0;
  };
  auto compare = [&](const std::vector<SweepRow>& rows) {
    Change ch;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const PointResult& a = rows[i].point;
      const PointResult& b = reference[i].point;
      const double dn = std::abs(a.N2 - b.N2) / std::max(std::abs(b.N2), 1e-300);
      ch.N2 = std::max(ch.N2, b.N2 == a.N2 ? 0.0 : dn);
      if (a.g2.has_value() != b.g2.has_value()) ch.g2 = std::numeric_limits<double>::infinity();
      else if (a.g2) ch.g2 = std::max(ch.g2, std::abs(*a.g2 - *b.g2) / std::max(std::abs(*b.g2), 1e-300));
    }
    return ch;
  };

  Table t;
  t.columns = {{"n2_max", true}, {"n3_max", true}, {"max_rel_change_N2"}, {"max_rel_change_g2"},
               {"converged", true}};
  const int lowest = 2 - std::min(base.n2, base.n3);
  int min_ok = 99;
  std::optional<std::string> failure;
  for (int k = lowest; k <= 1; ++k) {
    const Truncation tk = base.raised(k);
    const Change ch = compare(sweep(c, tk, opt.threads));
    const bool ok = ch.N2 < kConvergenceTolerance && ch.g2 < kConvergenceTolerance;
    t.add_row({static_cast<double>(tk.n2), static_cast<double>(tk.n3), ch.N2, ch.g2, flag(ok)});
    if (ok && min_ok == 99) min_ok = k;
    if (!ok) min_ok = 99;
    if (k >= 0 && !ok && !failure) {
      const bool n2_bad = !(ch.N2 < kConvergenceTolerance);
      failure = std::string(n2_bad ? "N2" : "g2") + " changes by " + fmt(n2_bad ? ch.N2 : ch.g2) +
                " relative between truncation (" + std::to_string(tk.n2) + "," + std::to_string(tk.n3) +
                ") and (" + std::to_string(ref_tr.n2) + "," + std::to_string(ref_tr.n3) + ")";
    }
  }
  t.add_row({static_cast<double>(ref_tr.n2), static_cast<double>(ref_tr.n3), 0.0, 0.0, std::nullopt});
  t.notes.push_back("reference truncation: (" + std::to_string(ref_tr.n2) + "," + std::to_string(ref_tr.n3) +
                    "); tolerance " + fmt(kConvergenceTolerance) + " relative");
  if (min_ok != 99) {
    const Truncation m = base.raised(min_ok);
    t.notes.push_back("minimum converged truncation: (" + std::to_string(m.n2) + "," + std::to_string(m.n3) + ")");
  } else {
    t.notes.push_back("minimum converged truncation: none below the reference");
  }
  t.notes.push_back(failure ? "status: NOT converged: " + *failure : std::string("status: converged"));
  return {"validate", c, {{"validate.csv", std::move(t)}}, failure};
}

RunResult run(const std::string& experiment, const ExperimentConfig& c, const RunOptions& opt) {
  if (opt.threads < 1) throw ConfigError("--threads must be >= 1");
  if (experiment == "fig2") return run_fig2(c, opt);
  if (experiment == "fig3a") return run_fig3a(c, opt);
  if (experiment == "fig3b") return run_fig3b(c, opt);
  if (experiment == "fig4") return run_fig4(c, opt);
  if (experiment == "steady") return run_steady(c, opt);
  if (experiment == "trace") return run_trace(c, opt);
  if (experiment == "validate") return validate_convergence(c, opt);
  throw ConfigError("unknown experiment " + experiment);
}

void write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  const std::string cfg = echo(r.config);
  for (const OutputFile& f : r.files) write_csv(dir / f.name, f.table, r.experiment, cfg);
}

}  // namespace parablock::experiment
