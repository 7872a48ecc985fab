#include "mardot/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace mardot {

const char* solver_name(SolverKind k) { return k == SolverKind::evolve ? "evolve" : "fourier"; }

SolverKind parse_solver(std::string_view name) {
  if (name == "evolve") return SolverKind::evolve;
  if (name == "fourier") return SolverKind::fourier;
  throw InvalidParameter("unknown solver '" + std::string(name) + "'");
}

PointPipeline build_pipeline(const JunctionParams& p, const SolverSettings& s,
                             const ChannelFlags& channels) {
  PointPipeline pipe;
  pipe.basis = build_floquet_basis(p, s);
  RateTable rates(p, s);
  pipe.generator = assemble_generator(p, pipe.basis, rates, s, channels);
  return pipe;
}

PeriodicState steady_state(const PointPipeline& pipe, const SolverSettings& s, SolverKind solver,
                           const Matrix4c& rho0_bare, double gamma_ref, Trajectory* traj,
                           FourierSolveInfo* info) {
  const PeriodicGenerator& g = pipe.generator;
  if (solver == SolverKind::fourier) {
    const int m = s.m_max < 0 ? default_m_max(g.support, pipe.basis.k_max) : s.m_max;
    return periodic_steady_state_fourier(g.total, g.bias, m, s.samples_per_period, info);
  }
  const Matrix4c rho0 = pipe.basis.modes0.adjoint() * rho0_bare * pipe.basis.modes0;
  Trajectory t = evolve(g.total, g.bias, rho0, evolve_options(s, gamma_ref));
  PeriodicState out = t.final_period;
  if (traj) *traj = std::move(t);
  return out;
}

namespace {

Matrix4c vacuum() {
  Matrix4c r = Matrix4c::Zero();
  r(0, 0) = 1.0;
  return r;
}

}  // namespace

PointResult solve_with(const JunctionParams& p, const SolverSettings& s, const PointPipeline& pipe,
                       SolverKind solver, const std::optional<Matrix4c>& rho0) {
  PointResult r;
  r.params = p;
  r.solver = solver;
  r.warnings = pipe.basis.warnings;
  try {
    PeriodicState state;
    if (solver == SolverKind::fourier) {
      FourierSolveInfo info;
      state = steady_state(pipe, s, solver, vacuum(), p.gamma_ref(), nullptr, &info);
      r.m_max = info.m_max;
      for (const Matrix4c& rho : state.samples)
        r.min_eigenvalue = std::min(r.min_eigenvalue, min_eigenvalue(rho));
      if (info.degenerate) r.status = "degenerate";
      else if (r.min_eigenvalue < s.positivity_floor) r.status = "positivity";
    } else {
      Trajectory traj;
      state = steady_state(pipe, s, solver, rho0.value_or(vacuum()), p.gamma_ref(), &traj);
      r.converged = traj.converged;
      r.min_eigenvalue = traj.min_eigenvalue;
      if (traj.positivity_breach) r.status = "positivity";
      else if (!traj.converged) r.status = "unconverged";
    }
    r.currents = compute_currents(p, pipe.basis, pipe.generator, state);
  } catch (const std::exception& e) {
    r.status = std::string("error: ") + e.what();
  }
  return r;
}

std::vector<PointResult> solve_point(const JunctionParams& p, const SolverSettings& s,
                                     const std::vector<SolverKind>& solvers) {
  std::vector<PointResult> out;
  try {
    const PointPipeline pipe = build_pipeline(p, s);
    for (SolverKind k : solvers) out.push_back(solve_with(p, s, pipe, k));
  } catch (const std::exception& e) {
    out.clear();
    for (SolverKind k : solvers) {
      PointResult r;
      r.params = p;
      r.solver = k;
      r.status = std::string("error: ") + e.what();
      out.push_back(r);
    }
  }
  return out;
}

PointResult solve_point(const JunctionParams& p, const SolverSettings& s, SolverKind solver) {
  return solve_point(p, s, std::vector<SolverKind>{solver}).front();
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = i == count - 1 ? stop : start + (stop - start) * i / (count - 1);
  return v;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw InvalidParameter("sweep must look like param:start:stop:count, got '" + text + "'");
  SweepAxis a;
  a.param = parts[0];
  try {
    std::size_t pos = 0;
    a.start = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("start");
    a.stop = std::stod(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("stop");
    a.count = std::stoi(parts[3], &pos);
    if (pos != parts[3].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw InvalidParameter("cannot parse sweep '" + text + "'");
  }
  if (a.count < 2) throw InvalidParameter("sweep count must be >= 2");
  if (a.start == a.stop) throw InvalidParameter("sweep start and stop must differ");
  JunctionParams probe;
  set_parameter(probe, a.param, a.start);  // rejects unknown names
  return a;
}

std::vector<JunctionParams> sweep_points(const SweepSpec& spec) {
  std::vector<JunctionParams> pts{spec.base};
  for (const SweepAxis& ax : spec.axes) {
    std::vector<JunctionParams> next;
    for (const JunctionParams& p : pts)
      for (double v : ax.values()) {
        JunctionParams q = p;
        set_parameter(q, ax.param, v);
        next.push_back(q);
      }
    pts = std::move(next);
  }
  return pts;
}

std::vector<PointResult> run_sweep(const SweepSpec& spec,
                                   const std::function<void(const PointResult&)>& sink) {
  const std::vector<JunctionParams> pts = sweep_points(spec);
  const std::size_t n = pts.size();
  std::vector<std::vector<PointResult>> done(n);
  std::vector<bool> ready(n, false);
  std::size_t flushed = 0;
  std::mutex mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      std::vector<PointResult> res = solve_point(pts[i], spec.settings, spec.solvers);
      std::lock_guard<std::mutex> lock(mutex);
      done[i] = std::move(res);
      ready[i] = true;
      while (flushed < n && ready[flushed]) {
        if (sink)
          for (const PointResult& r : done[flushed]) sink(r);
        ++flushed;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(n)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  std::vector<PointResult> out;
  out.reserve(n * spec.solvers.size());
  for (auto& v : done)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

std::vector<double> central_difference(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw InvalidParameter("central_difference needs matching grids of size >= 2");
  std::vector<double> d(n);
  d[0] = (y[1] - y[0]) / (x[1] - x[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
  return d;
}

std::vector<std::size_t> find_peaks(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<std::size_t> peaks;
  if (n < 3) return peaks;
  std::vector<double> s(n);
  s[0] = 0.5 * (y[0] + y[1]);
  s[n - 1] = 0.5 * (y[n - 2] + y[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) s[i] = (y[i - 1] + y[i] + y[i + 1]) / 3.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (s[i] > s[i - 1] && s[i] > s[i + 1]) peaks.push_back(i);
  return peaks;
}

ConductanceMap conductance_map(const std::vector<double>& bias, const std::vector<double>& omega,
                               const std::vector<PointResult>& rows) {
  if (rows.size() != bias.size() * omega.size())
    throw InvalidParameter("conductance map needs one row per (V, omega) grid point");
  ConductanceMap m{bias, omega, {}};
  for (std::size_t w = 0; w < omega.size(); ++w) {
    std::vector<double> current(bias.size());
    for (std::size_t v = 0; v < bias.size(); ++v) {
      const PointResult& r = rows[v * omega.size() + w];
      current[v] = r.currents.i_s[index(Lead::right)] / r.params.gamma_ref();
    }
    m.conductance.push_back(central_difference(bias, current));
  }
  return m;
}

ConductanceMap conductance_map(const std::vector<double>& bias, const std::vector<double>& omega,
                               const JunctionParams& p, const SolverSettings& s, SolverKind solver,
                               int jobs) {
  std::vector<JunctionParams> pts;
  for (double v : bias)
    for (double w : omega) {
      JunctionParams q = p;
      q.set_bias(v);
      q.omega = w;
      pts.push_back(q);
    }
  std::vector<PointResult> out(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < pts.size(); i = next.fetch_add(1))
      out[i] = solve_point(pts[i], s, solver);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return conductance_map(bias, omega, out);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

void write_csv_header(std::ostream& os) {
  os << "# currents in units of gamma_ref = (gamma_L + gamma_R)/2; a current is the rate of "
        "particles entering that reservoir (V > 0: source L negative; drain R positive)\n";
  os << "V,omega,U,g_L,g_R,gamma_L,gamma_R,gamma_loss,gamma_deph,I_qd,I_s_L,I_s_R,I_p_L,I_p_R,"
        "I_incoh,pop_even,pop_odd,residual,solver,status\n";
}

void write_csv_row(std::ostream& os, const PointResult& r) {
  const JunctionParams& p = r.params;
  const CurrentRecord& c = r.currents;
  const double u = 1.0 / p.gamma_ref();
  const double vals[] = {p.bias(),
                         p.omega,
                         p.u_int,
                         p.lead(Lead::left).g,
                         p.lead(Lead::right).g,
                         p.lead(Lead::left).gamma,
                         p.lead(Lead::right).gamma,
                         p.gamma_loss,
                         p.gamma_deph,
                         c.i_qd * u,
                         c.i_s[0] * u,
                         c.i_s[1] * u,
                         c.i_p[0] * u,
                         c.i_p[1] * u,
                         c.i_incoh * u,
                         c.pop_even,
                         c.pop_odd,
                         c.residual * u};
  for (double v : vals) os << fmt(v) << ',';
  os << solver_name(r.solver) << ',' << csv_safe(r.status) << '\n';
}

namespace {

nlohmann::json record_json(const PointResult& r) {
  const JunctionParams& p = r.params;
  const CurrentRecord& c = r.currents;
  const double u = 1.0 / p.gamma_ref();
  nlohmann::json j;
  j["V"] = p.bias();
  j["omega"] = p.omega;
  j["U"] = p.u_int;
  j["g_L"] = p.lead(Lead::left).g;
  j["g_R"] = p.lead(Lead::right).g;
  j["gamma_L"] = p.lead(Lead::left).gamma;
  j["gamma_R"] = p.lead(Lead::right).gamma;
  j["gamma_loss"] = p.gamma_loss;
  j["gamma_deph"] = p.gamma_deph;
  j["I_qd"] = c.i_qd * u;
  j["I_s_L"] = c.i_s[0] * u;
  j["I_s_R"] = c.i_s[1] * u;
  j["I_p_L"] = c.i_p[0] * u;
  j["I_p_R"] = c.i_p[1] * u;
  j["I_incoh"] = c.i_incoh * u;
  j["pop_even"] = c.pop_even;
  j["pop_odd"] = c.pop_odd;
  j["residual"] = c.residual * u;
  j["solver"] = solver_name(r.solver);
  j["status"] = r.status;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

}  // namespace

std::string to_json(const PointResult& r) { return record_json(r).dump(); }

std::string to_json(const std::vector<PointResult>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PointResult& r : rows) arr.push_back(record_json(r));
  return arr.dump(1);
}

void write_conductance_csv(std::ostream& os, const ConductanceMap& m) {
  os << "V,omega,dI_s_R_dV\n";
  for (std::size_t v = 0; v < m.bias.size(); ++v)
    for (std::size_t w = 0; w < m.omega.size(); ++w)
      os << fmt(m.bias[v]) << ',' << fmt(m.omega[w]) << ',' << fmt(m.conductance[w][v]) << '\n';
}

std::string point_diagnostics(const JunctionParams& p, const SolverSettings& s,
                              const std::vector<SolverKind>& solvers) {
  nlohmann::json j;
  j["config"] = format_config({p, s});
  try {
    const PointPipeline pipe = build_pipeline(p, s);
    const FloquetBasis& b = pipe.basis;
    j["period"] = b.period;
    j["quasienergies"] = std::vector<double>(b.quasienergies.begin(), b.quasienergies.end());
    j["gram_determinant"] = b.gram_determinant;
    j["unitarity_defect"] = b.unitarity_defect;
    j["periodicity_residual"] = b.periodicity_residual;
    j["max_tail_weight"] = b.max_tail_weight;
    j["warnings"] = b.warnings;
    auto norms = [](const auto& series) {
      std::vector<double> out;
      for (int k = -series.k_max(); k <= series.k_max(); ++k) out.push_back(series[k].norm());
      return out;
    };
    j["fourier_norms"]["c_down"] = norms(b.ops.c_down);
    j["fourier_norms"]["c_up"] = norms(b.ops.c_up);
    j["fourier_norms"]["pair_creation"] = norms(b.ops.pair_creation);
    j["generator_support"] = pipe.generator.support;
    j["generator_norms"] = norms(pipe.generator.total);
    nlohmann::json res = nlohmann::json::array();
    for (SolverKind k : solvers) {
      const PointResult r = solve_with(p, s, pipe, k);
      nlohmann::json rj = record_json(r);
      rj["m_max"] = r.m_max;
      rj["converged"] = r.converged;
      rj["min_eigenvalue"] = r.min_eigenvalue;
      res.push_back(rj);
    }
    j["results"] = res;
  } catch (const std::exception& e) {
    j["error"] = e.what();
  }
  return j.dump(2);
}

}  // namespace mardot
