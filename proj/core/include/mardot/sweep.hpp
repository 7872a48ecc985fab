#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mardot/config.hpp"
#include "mardot/observables.hpp"

namespace mardot {

enum class SolverKind { evolve, fourier };

const char* solver_name(SolverKind k);
SolverKind parse_solver(std::string_view name);

struct PointResult {
  JunctionParams params;
  SolverKind solver = SolverKind::fourier;
  CurrentRecord currents;
  std::string status = "ok";  // ok, degenerate, unconverged, positivity, error: ...
  bool converged = true;
  int m_max = 0;
  double min_eigenvalue = 1.0;
  std::vector<std::string> warnings;

  bool ok() const { return status == "ok" || status == "degenerate"; }
};

/// Everything that is shared between the two solvers at one parameter point.
struct PointPipeline {
  FloquetBasis basis;
  PeriodicGenerator generator;
};

PointPipeline build_pipeline(const JunctionParams& p, const SolverSettings& s,
                             const ChannelFlags& channels = {});

/// Steady-state currents with one or both solvers. Failures never throw; they
/// are reported in PointResult::status.
std::vector<PointResult> solve_point(const JunctionParams& p, const SolverSettings& s,
                                     const std::vector<SolverKind>& solvers);
PointResult solve_point(const JunctionParams& p, const SolverSettings& s, SolverKind solver);

/// Same, reusing an assembled pipeline; rho0 is a bare-basis initial state for evolve.
PointResult solve_with(const JunctionParams& p, const SolverSettings& s, const PointPipeline& pipe,
                       SolverKind solver, const std::optional<Matrix4c>& rho0 = std::nullopt);

/// The periodic state behind a PointResult, for callers that need more than currents.
PeriodicState steady_state(const PointPipeline& pipe, const SolverSettings& s, SolverKind solver,
                           const Matrix4c& rho0_bare, double gamma_ref, Trajectory* traj = nullptr,
                           FourierSolveInfo* info = nullptr);

struct SweepAxis {
  std::string param;
  double start = 0.0;
  double stop = 1.0;
  int count = 2;

  std::vector<double> values() const;
};

/// "param:start:stop:count"; count >= 2 and start != stop.
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepSpec {
  std::vector<SweepAxis> axes;  // grid order: the last axis varies fastest
  JunctionParams base;
  SolverSettings settings;
  std::vector<SolverKind> solvers{SolverKind::fourier};
  int jobs = 1;
};

/// Grid points in row order.
std::vector<JunctionParams> sweep_points(const SweepSpec& spec);

/// Runs every grid point on `jobs` workers. The sink sees rows in grid order
/// (one per solver), as soon as every earlier row is available.
std::vector<PointResult> run_sweep(const SweepSpec& spec,
                                   const std::function<void(const PointResult&)>& sink = {});

/// Central differences of y(x); one-sided at the ends.
std::vector<double> central_difference(const std::vector<double>& x, const std::vector<double>& y);

/// Indices of local maxima of the 3-point moving average of y (interior points
/// strictly greater than both neighbours).
std::vector<std::size_t> find_peaks(const std::vector<double>& y);

/// dI_s/dV of the drain lead along V for each omega of a V x omega map.
struct ConductanceMap {
  std::vector<double> bias;
  std::vector<double> omega;
  std::vector<std::vector<double>> conductance;  // [omega][V], units of gamma per Delta
};

ConductanceMap conductance_map(const std::vector<double>& bias, const std::vector<double>& omega,
                               const std::vector<PointResult>& rows);
ConductanceMap conductance_map(const std::vector<double>& bias, const std::vector<double>& omega,
                               const JunctionParams& p, const SolverSettings& s, SolverKind solver,
                               int jobs);

// Output
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const PointResult& r);
std::string to_json(const PointResult& r);
std::string to_json(const std::vector<PointResult>& rows);
void write_conductance_csv(std::ostream& os, const ConductanceMap& m);

/// Verbose diagnostics for a single point: quasienergies, Fourier and
/// generator harmonic norms, solver status and currents.
std::string point_diagnostics(const JunctionParams& p, const SolverSettings& s,
                              const std::vector<SolverKind>& solvers);

}  // namespace mardot
