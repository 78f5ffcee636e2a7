#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "phasedeco/closedform.hpp"
#include "phasedeco/dynamics.hpp"
#include "phasedeco/entanglement.hpp"
#include "phasedeco/errors.hpp"

namespace phasedeco::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kNmax = 2;

const char* method_name(Method m) {
  switch (m) {
    case Method::closed: return "closed";
    case Method::spectral: return "spectral";
    case Method::rk4: return "rk4";
  }
  return "?";
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// key=value pairs for the comment header
class Provenance {
 public:
  Provenance& add(const std::string& key, double value) { return add(key, format_number(value)); }
  Provenance& add(const std::string& key, const std::string& value) {
    if (!line_.empty()) line_ += ' ';
    line_ += key + '=' + value;
    return *this;
  }
  std::string str() const { return line_; }

 private:
  std::string line_;
};

ModelParams make_params(double ga, double gb, double delta, double gamma, double omega) {
  return ModelParams::from_detuning(ga, gb, delta, gamma, omega);
}

void require_positive(const std::optional<double>& v, const char* flag) {
  if (v && !(*v > 0.0)) throw UsageError(std::string(flag) + " must be positive");
}

void reject(bool given, const char* flag, int figure) {
  if (given)
    throw UsageError(std::string(flag) + " does not apply to figure " + std::to_string(figure));
}

void check_common(const RunConfig& cfg) {
  require_positive(cfg.t_max, "--tmax");
  require_positive(cfg.time, "--time");
  require_positive(cfg.gamma_max, "--gamma-max");
  require_positive(cfg.delta_max, "--delta-max");
  if (cfg.points && *cfg.points < 2) throw UsageError("--points must be at least 2");
  if (cfg.points_y && *cfg.points_y < 2) throw UsageError("--points-y must be at least 2");
  if (!(cfg.dt > 0.0)) throw UsageError("--dt must be positive");
}

Observables from_state(const DensityMatrix& rho, double t, const ModelParams& p,
                       const FockAtomBasis& basis, const ComplexMatrix& projector_e) {
  try {
    const auto pair = pairwise_concurrences(rho, p, basis);
    const double p_e = (rho.matrix() * projector_e).trace().real();
    return {t,        rho.trace() - p_e, pair.c_ab, field_concurrence(rho, basis), pair.c_a, pair.c_b,
            rho.purity(), rho.trace()};
  } catch (const SubspaceLeakError& e) {
    std::ostringstream os;
    os << e.what() << " at t = " << format_number(t);
    throw SubspaceLeakError(os.str(), e.residual());
  }
}

Observables at_time(const ModelParams& p, double delta_mix, double t, Method method, double dt) {
  if (method == Method::closed || t == 0.0) return observe(p, delta_mix, {t}, method, dt).front();
  return observe(p, delta_mix, {0.0, t}, method, dt).back();
}

struct Grid {
  double max;
  int points;
};

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

void write_csv(const Table& table, std::ostream& os) {
  for (const auto& c : table.comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

std::vector<Observables> observe(const ModelParams& p, double delta_mix,
                                 const std::vector<double>& t_grid, Method method, double dt) {
  std::vector<Observables> out;
  out.reserve(t_grid.size());
  if (method == Method::closed) {
    for (double t : t_grid) {
      const auto s = closedform::rho_closed(p, t, delta_mix);
      const auto pair = closedform::pairwise_closed(p, t, delta_mix);
      out.push_back({t, closedform::ground_probability(p, t, delta_mix), pair.c_ab,
                     closedform::concurrence_b_closed(p, t, delta_mix), pair.c_a, pair.c_b,
                     s.rho.squaredNorm(), s.rho.trace().real()});
    }
    return out;
  }

  const FockAtomBasis basis(kNmax);
  const ComplexMatrix h = build_hamiltonian(p, basis);
  const ComplexMatrix projector_e = build_elementary_operators(basis).projector_e;
  const auto rho0 = initial_state(InitialKind::thermal_vacuum, basis, delta_mix);
  const Trajectory traj = method == Method::spectral
                              ? SpectralPropagator(h, p.gamma()).trajectory(rho0, t_grid)
                              : integrate_master_equation(h, rho0, p.gamma(), t_grid, {dt});
  for (std::size_t i = 0; i < traj.size(); ++i)
    out.push_back(from_state(traj.state(i), traj.time(i), p, basis, projector_e));
  return out;
}

Table figure_table(const RunConfig& cfg) {
  check_common(cfg);
  const int id = cfg.figure_id;
  const double ga = cfg.g_a.value_or(1.0), gb = cfg.g_b.value_or(1.0);
  const double omega = cfg.omega.value_or(1.0), mix = cfg.delta_mix.value_or(0.0);

  Table table;
  table.comments.push_back("phasedeco figure " + std::to_string(id) + " method=" + method_name(cfg.method) +
                           (cfg.method == Method::rk4 ? " dt=" + format_number(cfg.dt) : ""));
  Provenance prov;
  prov.add("ga", ga).add("gb", gb).add("omega", omega).add("delta_mix", mix);

  auto observable = [&](const Observables& o, bool field) { return field ? o.c_fields : o.c_ab; };

  switch (id) {
    case 1: {
      reject(cfg.time.has_value(), "--time", id);
      reject(cfg.gamma_max.has_value(), "--gamma-max", id);
      reject(cfg.delta_max.has_value(), "--delta-max", id);
      reject(cfg.points_y.has_value(), "--points-y", id);
      const double delta = cfg.delta.value_or(0.0);
      const std::vector<double> gammas =
          cfg.gamma ? std::vector<double>{*cfg.gamma} : std::vector<double>{1.0, 0.0, 0.01, 0.05};
      const auto ts = linspace(0.0, cfg.t_max.value_or(10.0), cfg.points.value_or(1001));
      table.header.push_back("t");
      std::vector<std::vector<Observables>> curves;
      for (double gamma : gammas) {
        table.header.push_back("Pg_gamma" + label(gamma));
        curves.push_back(observe(make_params(ga, gb, delta, gamma, omega), mix, ts, cfg.method, cfg.dt));
      }
      for (std::size_t i = 0; i < ts.size(); ++i) {
        std::vector<double> row{ts[i]};
        for (const auto& c : curves) row.push_back(c[i].p_g);
        table.rows.push_back(std::move(row));
      }
      prov.add("delta", delta).add("tmax", ts.back()).add("points", static_cast<double>(ts.size()));
      break;
    }
    case 2:
    case 5: {
      reject(cfg.gamma.has_value(), "--gamma", id);
      reject(cfg.time.has_value(), "--time", id);
      reject(cfg.delta_max.has_value(), "--delta-max", id);
      const bool field = id == 5;
      const double delta = cfg.delta.value_or(field ? 0.0 : 5.0);
      const auto ts = linspace(0.0, cfg.t_max.value_or(10.0), cfg.points.value_or(101));
      const auto gs = linspace(0.0, cfg.gamma_max.value_or(1.0), cfg.points_y.value_or(51));
      std::vector<std::vector<Observables>> per_gamma;
      for (double gamma : gs)
        per_gamma.push_back(observe(make_params(ga, gb, delta, gamma, omega), mix, ts, cfg.method, cfg.dt));
      table.header = {"t", "gamma", field ? "C_B" : "C_AB"};
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < gs.size(); ++j)
          table.rows.push_back({ts[i], gs[j], observable(per_gamma[j][i], field)});
      prov.add("delta", delta).add("tmax", ts.back()).add("points", static_cast<double>(ts.size()));
      prov.add("gamma_max", gs.back()).add("points_y", static_cast<double>(gs.size()));
      break;
    }
    case 3: {
      reject(cfg.gamma.has_value(), "--gamma", id);
      reject(cfg.delta.has_value(), "--delta", id);
      reject(cfg.t_max.has_value(), "--tmax", id);
      const double t = cfg.time.value_or(10.0);
      const auto ds = linspace(0.0, cfg.delta_max.value_or(10.0), cfg.points.value_or(101));
      const auto gs = linspace(0.0, cfg.gamma_max.value_or(1.0), cfg.points_y.value_or(51));
      table.header = {"delta", "gamma", "C_AB"};
      for (double delta : ds)
        for (double gamma : gs)
          table.rows.push_back(
              {delta, gamma, at_time(make_params(ga, gb, delta, gamma, omega), mix, t, cfg.method, cfg.dt).c_ab});
      prov.add("time", t).add("delta_max", ds.back()).add("points", static_cast<double>(ds.size()));
      prov.add("gamma_max", gs.back()).add("points_y", static_cast<double>(gs.size()));
      break;
    }
    case 4: {
      reject(cfg.delta.has_value(), "--delta", id);
      reject(cfg.t_max.has_value(), "--tmax", id);
      reject(cfg.time.has_value(), "--time", id);
      reject(cfg.gamma_max.has_value(), "--gamma-max", id);
      reject(cfg.points_y.has_value(), "--points-y", id);
      const double gamma = cfg.gamma.value_or(0.1);
      const auto ds = linspace(0.0, cfg.delta_max.value_or(10.0), cfg.points.value_or(1001));
      table.header = {"delta", "C_AB"};
      for (double delta : ds) {
        const auto p = make_params(ga, gb, delta, gamma, omega);
        const double c = cfg.method == Method::closed
                             ? closedform::stationary_values(p, mix).c_ab
                             : at_time(p, mix, closedform::stationary_time(p), cfg.method, cfg.dt).c_ab;
        table.rows.push_back({delta, c});
      }
      prov.add("gamma", gamma).add("delta_max", ds.back()).add("points", static_cast<double>(ds.size()));
      break;
    }
    case 6: {
      reject(cfg.gamma.has_value(), "--gamma", id);
      reject(cfg.t_max.has_value(), "--tmax", id);
      reject(cfg.delta_max.has_value(), "--delta-max", id);
      reject(cfg.points_y.has_value(), "--points-y", id);
      const double t = cfg.time.value_or(2.0);
      const std::vector<double> deltas =
          cfg.delta ? std::vector<double>{*cfg.delta} : std::vector<double>{0.0, 1.0, 2.0};
      const auto gs = linspace(0.0, cfg.gamma_max.value_or(1.0), cfg.points.value_or(1001));
      table.header.push_back("gamma");
      for (double delta : deltas) table.header.push_back("C_B_delta" + label(delta));
      for (double gamma : gs) {
        std::vector<double> row{gamma};
        for (double delta : deltas)
          row.push_back(at_time(make_params(ga, gb, delta, gamma, omega), mix, t, cfg.method, cfg.dt).c_fields);
        table.rows.push_back(std::move(row));
      }
      prov.add("time", t).add("gamma_max", gs.back()).add("points", static_cast<double>(gs.size()));
      break;
    }
    default:
      throw UsageError("unknown figure id " + std::to_string(id) + " (expected 1..6)");
  }
  table.comments.push_back(prov.str());
  return table;
}

Table evolve_table(const RunConfig& cfg) {
  check_common(cfg);
  const auto p = make_params(cfg.g_a.value_or(1.0), cfg.g_b.value_or(1.0), cfg.delta.value_or(0.0),
                             cfg.gamma.value_or(0.1), cfg.omega.value_or(1.0));
  const double mix = cfg.delta_mix.value_or(0.0);
  const auto ts = linspace(0.0, cfg.t_max.value_or(10.0), cfg.points.value_or(101));

  Table table;
  table.comments.push_back(std::string("phasedeco evolve method=") + method_name(cfg.method) +
                           (cfg.method == Method::rk4 ? " dt=" + format_number(cfg.dt) : ""));
  Provenance prov;
  prov.add("ga", p.g_a()).add("gb", p.g_b()).add("delta", p.delta()).add("gamma", p.gamma());
  prov.add("omega", p.omega()).add("delta_mix", mix).add("tmax", ts.back());
  prov.add("points", static_cast<double>(ts.size()));
  table.comments.push_back(prov.str());
  table.header = {"t", "P_g", "C_AB", "C_B", "C_a", "C_b", "purity", "trace"};
  for (const auto& o : observe(p, mix, ts, cfg.method, cfg.dt))
    table.rows.push_back({o.t, o.p_g, o.c_ab, o.c_fields, o.c_a, o.c_b, o.purity, o.trace});
  return table;
}

Table steady_table(const RunConfig& cfg) {
  const auto p = make_params(cfg.g_a.value_or(1.0), cfg.g_b.value_or(1.0), cfg.delta.value_or(0.0),
                             cfg.gamma.value_or(0.1), cfg.omega.value_or(1.0));
  const double mix = cfg.delta_mix.value_or(0.0);
  const auto s = closedform::stationary_values(p, mix);
  Table table;
  table.comments.push_back("phasedeco steady");
  Provenance prov;
  prov.add("ga", p.g_a()).add("gb", p.g_b()).add("delta", p.delta()).add("gamma", p.gamma());
  prov.add("delta_mix", mix);
  table.comments.push_back(prov.str());
  table.header = {"C_AB", "C_B", "P_g"};
  table.rows.push_back({s.c_ab, s.c_b, s.p_g});
  return table;
}

std::vector<CheckResult> run_verification(const RunConfig& cfg) {
  check_common(cfg);
  const auto p = make_params(cfg.g_a.value_or(1.0), cfg.g_b.value_or(1.0), cfg.delta.value_or(1.0),
                             cfg.gamma.value_or(0.1), cfg.omega.value_or(1.0));
  const double mix = cfg.delta_mix.value_or(0.0);
  const auto ts = linspace(0.0, cfg.t_max.value_or(10.0), cfg.points.value_or(101));
  const FockAtomBasis basis(kNmax);
  const ComplexMatrix h = build_hamiltonian(p, basis);
  using linalg::max_abs;

  std::vector<CheckResult> checks;
  auto record = [&](std::string id, std::string name, double dev, double tol, std::string note = {}) {
    checks.push_back({std::move(id), std::move(name), dev, tol, dev <= tol, false, std::move(note)});
  };

  record("a", "Hamiltonian vs algebraic form", max_abs(h - algebraic_hamiltonian(p, basis)), 1e-10);

  const auto km = build_constants_of_motion(p, basis);
  record("b", "[H, K1], [H, K2]",
         std::max(max_abs(linalg::commutator(h, km.k1)), max_abs(linalg::commutator(h, km.k2))), 1e-12);

  const auto s = build_su2_generators(p, basis);
  const ComplexMatrix support = k1_support_projector(p, basis);
  double su2 = max_abs(support * (linalg::commutator(s.s_plus, s.s_minus) - 2.0 * s.s_0) * support);
  su2 = std::max(su2, max_abs(linalg::commutator(s.s_0, s.s_plus) - s.s_plus));
  su2 = std::max(su2, max_abs(linalg::commutator(s.s_0, s.s_minus) + s.s_minus));
  record("c", "SU(2) commutators on the support of K1", su2, 1e-10);

  double m_dev = 0.0;
  for (int k = 0; k <= 3; ++k)
    for (double t : {0.0, ts.back() / 3.0, ts.back()})
      m_dev = std::max(m_dev, max_abs(m_operator_spectral(h, k, t, p.gamma()) -
                                      m_operator_algebraic(p, basis, k, t, p.gamma())));
  record("d", "M^k spectral vs algebraic, k <= 3", m_dev, 1e-9);

  const auto rho0 = initial_state(InitialKind::thermal_vacuum, basis, mix);
  const Trajectory spectral = SpectralPropagator(h, p.gamma()).trajectory(rho0, ts);
  const Trajectory rk4 = integrate_master_equation(h, rho0, p.gamma(), ts, {cfg.dt});
  const auto sign = cfg.inject_coherence_sign_flip ? closedform::CoherenceSign::flipped
                                                   : closedform::CoherenceSign::standard;
  double closed_dev = 0.0, rk4_dev = 0.0, ab_dev = 0.0, b_dev = 0.0, mono_dev = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const ComplexMatrix& exact = spectral.state(i).matrix();
    const ComplexMatrix closed = closedform::embed(closedform::rho_closed(p, ts[i], mix, sign), basis);
    closed_dev = std::max(closed_dev, max_abs(closed - exact));
    rk4_dev = std::max(rk4_dev, max_abs(rk4.state(i).matrix() - exact));

    const auto pair = pairwise_concurrences(spectral.state(i), p, basis);
    ab_dev = std::max(ab_dev, std::abs(pair.c_ab - closedform::concurrence_ab_closed(p, ts[i], mix)));
    b_dev = std::max(b_dev, std::abs(field_concurrence(spectral.state(i), basis) -
                                     closedform::concurrence_b_closed(p, ts[i], mix)));
    mono_dev = std::max(mono_dev, std::abs(pair.c_a * pair.c_a + pair.c_b * pair.c_b - pair.c_ab * pair.c_ab));
  }
  record("e", "closed form vs spectral propagator", closed_dev, 1e-9);
  record("e", "RK4 vs spectral propagator", rk4_dev, 1e-6);
  record("f", "C_AB and C_B formulas vs Wootters", std::max(ab_dev, b_dev), 1e-8);
  record("g", "monogamy C_a^2 + C_b^2 = C_AB^2", mono_dev, 1e-8);

  if (p.gamma() == 0.0) {
    checks.push_back({"h", "stationary limits", 0.0, 1e-4, true, true, "no stationary state at gamma = 0"});
  } else {
    const double t_inf = closedform::stationary_time(p);
    const auto lim = closedform::stationary_values(p, mix);
    const auto o = at_time(p, mix, t_inf, Method::spectral, cfg.dt);
    const double dev = std::max({std::abs(o.c_ab - lim.c_ab), std::abs(o.c_fields - lim.c_b),
                                 std::abs(o.p_g - lim.p_g)});
    record("h", "stationary limits at t = " + format_number(t_inf), dev, 1e-4);
  }
  return checks;
}

void print_report(const std::vector<CheckResult>& checks, std::ostream& os) {
  std::vector<std::string> failed;
  for (const auto& c : checks) {
    char line[200];
    if (c.skipped) {
      std::snprintf(line, sizeof line, "(%s) %-42s skipped: %s", c.id.c_str(), c.name.c_str(), c.note.c_str());
    } else {
      std::snprintf(line, sizeof line, "(%s) %-42s max deviation %.3e  tolerance %.0e  %s", c.id.c_str(),
                    c.name.c_str(), c.deviation, c.tolerance, c.passed ? "PASS" : "FAIL");
      if (!c.passed) failed.push_back("(" + c.id + ") " + c.name);
    }
    os << line << '\n';
  }
  if (failed.empty()) {
    os << "all checks passed\n";
  } else {
    os << "FAILED:";
    for (const auto& f : failed) os << ' ' << f << ';';
    os << '\n';
  }
}

namespace {

void emit(const Table& table, const std::string& path, std::ostream& out) {
  if (path == "-") {
    write_csv(table, out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open " + path + " for writing");
  write_csv(table, file);
  file.flush();
  if (!file) throw IoError("failed writing " + path);
}

void add_model_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--ga", cfg.g_a, "coupling to cavity a");
  cmd->add_option("--gb", cfg.g_b, "coupling to cavity b");
  cmd->add_option("--delta", cfg.delta, "detuning omega0 - omega");
  cmd->add_option("--gamma", cfg.gamma, "phase decoherence rate");
  cmd->add_option("--omega", cfg.omega, "cavity frequency");
  cmd->add_option("--delta-mix", cfg.delta_mix, "initial ground-state weight of the atom");
}

void add_engine_options(CLI::App* cmd, RunConfig& cfg) {
  static const std::map<std::string, Method> methods{
      {"closed", Method::closed}, {"spectral", Method::spectral}, {"rk4", Method::rk4}};
  cmd->add_option("--method", cfg.method, "closed, spectral or rk4")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  cmd->add_option("--dt", cfg.dt, "RK4 step");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Two-mode cavity QED under phase decoherence", "phasedeco"};
  app.require_subcommand(1);

  auto* figure = app.add_subcommand("figure", "write the data behind a figure as CSV");
  figure->add_option("id", cfg.figure_id, "figure number 1..6")->required()->check(CLI::Range(1, 6));
  add_model_options(figure, cfg);
  add_engine_options(figure, cfg);
  figure->add_option("--tmax", cfg.t_max, "end of the time axis");
  figure->add_option("--time", cfg.time, "evaluation time for fixed-time figures");
  figure->add_option("--gamma-max", cfg.gamma_max, "end of the gamma axis");
  figure->add_option("--delta-max", cfg.delta_max, "end of the detuning axis");
  figure->add_option("--points", cfg.points, "points on the first axis");
  figure->add_option("--points-y", cfg.points_y, "points on the second axis");
  figure->add_option("--out", cfg.out_path, "output file, - for stdout");

  auto* verify = app.add_subcommand("verify", "cross-check the engines against each other");
  add_model_options(verify, cfg);
  verify->add_option("--dt", cfg.dt, "RK4 step");
  verify->add_option("--tmax", cfg.t_max, "end of the time grid");
  verify->add_option("--points", cfg.points, "points on the time grid");
  verify->add_flag("--inject-coherence-sign-flip", cfg.inject_coherence_sign_flip)->group("");

  auto* evolve = app.add_subcommand("evolve", "observables along a trajectory as CSV");
  add_model_options(evolve, cfg);
  add_engine_options(evolve, cfg);
  evolve->add_option("--tmax", cfg.t_max, "end of the time grid");
  evolve->add_option("--points", cfg.points, "points on the time grid");
  evolve->add_option("--out", cfg.out_path, "output file, - for stdout");

  auto* steady = app.add_subcommand("steady", "t -> infinity limits of C_AB, C_B and P_g");
  add_model_options(steady, cfg);
  steady->add_option("--out", cfg.out_path, "output file, - for stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (figure->parsed()) {
      emit(figure_table(cfg), cfg.out_path, out);
    } else if (evolve->parsed()) {
      emit(evolve_table(cfg), cfg.out_path, out);
    } else if (steady->parsed()) {
      emit(steady_table(cfg), cfg.out_path, out);
    } else {
      const auto checks = run_verification(cfg);
      print_report(checks, out);
      const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
      return ok ? kOk : kVerificationFailed;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const NoStationaryStateError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IntegrationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

}  // namespace phasedeco::cli
