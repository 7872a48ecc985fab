#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mardot/generator.hpp"

namespace mardot {

/// One period of a periodic state, sampled uniformly from t0, in the
/// co-moving Floquet frame.
struct PeriodicState {
  double bias = 0.0;
  double period = 0.0;
  double t0 = 0.0;
  std::vector<Matrix4c> samples;

  double time(std::size_t j) const { return t0 + period * static_cast<double>(j) / samples.size(); }
  /// Trapezoidal (periodic) average of rho.
  Matrix4c average() const;
  /// Period average of Tr[O(t) rho(t)] for an operator series O in the same frame.
  cplx expectation(const MatrixSeries& op) const;
  /// Period average of Tr[O(t) (S(t) rho(t))] for a superoperator series S.
  cplx expectation(const MatrixSeries& op, const SuperSeries& s) const;
};

struct EvolveOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double t_final = 1e3;
  double max_time = 4e4;
  double convergence_tol = 1e-7;
  int samples_per_period = 256;
  double positivity_floor = -1e-3;
};

EvolveOptions evolve_options(const SolverSettings& s, double gamma_ref);

struct Trajectory {
  std::vector<double> times;  // period boundaries
  std::vector<Matrix4c> states;
  std::vector<Matrix4c> period_averages;  // average over the period ending at times[i]
  bool converged = false;
  double residual = 0.0;       // trace-norm change between the last two period averages
  double tail_estimate = 0.0;  // geometric extrapolation of the remaining drift
  double periodicity = 0.0;    // ||rho(t_end) - rho(t_end - T)||_1
  double min_eigenvalue = 1.0;
  bool positivity_breach = false;
  long steps = 0;
  long rejected = 0;
  PeriodicState previous_period;  // the two densely sampled final periods
  PeriodicState final_period;
};

/// Integrates d rho/dt = L(t) rho with an adaptive Dormand-Prince 5(4) pair
/// until t_final and then period by period until the period average settles
/// (or max_time is reached), and finally samples two periods densely.
Trajectory evolve(const SuperSeries& generator, double bias, const Matrix4c& rho0,
                  const EvolveOptions& opt);

/// Average over the stored final period; throws NumericalError on an
/// unconverged trajectory unless forced.
Matrix4c period_average(const Trajectory& traj, bool force = false);

struct FourierSolveInfo {
  int m_max = 0;
  int unknowns = 0;
  bool degenerate = false;  // singular system, minimum-norm solution returned
  double residual = 0.0;    // ||A x - b||_inf of the truncated system
};

/// Periodic steady state from its Fourier components rho_m, |m| <= m_max;
/// m_max < 0 selects (generator support + 4) capped at 2 k_max + 4.
PeriodicState periodic_steady_state_fourier(const SuperSeries& generator, double bias, int m_max,
                                            int samples_per_period, FourierSolveInfo* info = nullptr);

int default_m_max(int generator_support, int k_max);

/// Steady state of a time-independent generator (trace one, minimum norm when
/// the null space is degenerate).
Matrix4c static_steady_state(const SuperOp& generator, bool* degenerate = nullptr);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const Matrix4c& rho);

double trace_norm(const Matrix4c& x);

}  // namespace mardot
