#pragma once

namespace mardot {

/// Numerical controls shared by the whole pipeline.
struct SolverSettings {
  // Floquet construction
  int n_steps = 10000;  // propagator sub-steps per period
  int n_grid = 2048;    // Floquet-mode samples per period
  int k_max = 20;       // retained Fourier harmonics of dot operators
  double coefficient_floor = 1e-14;  // Fourier coefficients below this are treated as zero

  // Lamb-shift quadrature
  double quad_rel_tol = 1e-10;
  double quad_abs_tol = 1e-14;

  // Time evolution
  double rtol = 1e-9;
  double atol = 1e-12;
  double t_final_gamma = 10.0;   // t_f = t_final_gamma / gamma
  double max_time_factor = 40.0; // hard stop at max_time_factor * t_f
  double convergence_tol = 1e-7; // trace-norm change of period averages
  int samples_per_period = 256;
  double positivity_floor = -1e-3;

  // Fourier periodic steady state; m_max < 0 selects generator support + 4
  int m_max = -1;
};

}  // namespace mardot
