#pragma once

#include <array>
#include <string>
#include <vector>

#include "mardot/fourier_series.hpp"
#include "mardot/junction.hpp"
#include "mardot/settings.hpp"

namespace mardot {

/// T = 2 pi / |V|. Throws InvalidParameter at zero bias, where the drive has no period.
double drive_period(const JunctionParams& p);

/// U(T) from n_steps fourth-order Magnus steps, each an exact 4x4 exponential.
Matrix4c propagator_over_period(const JunctionParams& p, int n_steps);

struct PeriodPropagation {
  Matrix4c u_period;
  std::vector<Matrix4c> u_grid;  // U(t_j), t_j = j T / n_grid, j = 0..n_grid-1
};

/// Propagates over one period, recording U on the mode grid. The number of
/// sub-steps is n_steps rounded up to a multiple of n_grid.
PeriodPropagation propagate_period(const JunctionParams& p, int n_steps, int n_grid);

struct QuasienergyModes {
  std::array<double, kDotDim> energies{};
  Matrix4c modes = Matrix4c::Identity();  // column a is phi_a(0)
  double gram_determinant = 1.0;
  bool ill_conditioned = false;
};

/// Eigen-decomposition of U(T). Quasienergies are folded into [-pi/T, pi/T).
/// Mode a is the one with the largest overlap with bare state a, taken in the
/// order |0>, |dn>, |up>, |dn up>, and its phase makes that overlap real positive.
QuasienergyModes quasienergies_and_modes(const Matrix4c& u_period, double period);

/// phi_a(t_j) = e^{i E_a t_j} U(t_j) phi_a(0), stored as columns.
std::vector<Matrix4c> modes_on_grid(const PeriodPropagation& prop, const QuasienergyModes& qm,
                                    double period);

struct FourierTable {
  MatrixSeries series;       // (op)^{abk}
  double tail_weight = 0.0;  // max over (a,b) of the power outside |k| <= k_max
};

/// Trapezoidal DFT of <phi_a(t)|op|phi_b(t)> on the mode grid, for a drive
/// of the given sign (the harmonic e^{ikVt} is e^{i sgn 2 pi k j / n} on the grid).
FourierTable fourier_components(const Matrix4c& op, const std::vector<Matrix4c>& mode_grid,
                                int k_max, int bias_sign);

/// Fourier tables used by the generator and the observables.
struct OperatorTables {
  MatrixSeries c_down, c_up;
  MatrixSeries number_down, number_up;
  MatrixSeries number;
  MatrixSeries pair_creation;  // c_up^dag c_dn^dag
  MatrixSeries even_projector;
};

struct FloquetBasis {
  double bias = 0.0;
  double period = 0.0;
  int k_max = 0;
  std::array<double, kDotDim> quasienergies{};
  Matrix4c modes0 = Matrix4c::Identity();
  std::vector<Matrix4c> mode_grid;
  double gram_determinant = 1.0;
  bool ill_conditioned = false;
  double unitarity_defect = 0.0;
  double periodicity_residual = 0.0;
  double max_tail_weight = 0.0;
  std::vector<std::string> warnings;
  OperatorTables ops;

  int bias_sign() const { return bias > 0 ? 1 : -1; }
  /// Delta_abk = E_a - E_b + k V.
  double transition(int a, int b, int k) const {
    return quasienergies[a] - quasienergies[b] + k * bias;
  }
  /// Fourier table of an arbitrary bare-basis operator in this basis.
  MatrixSeries transform(const Matrix4c& op) const;
};

inline constexpr double kTailWarning = 1e-8;
inline constexpr double kGramThreshold = 1e-6;

FloquetBasis build_floquet_basis(const JunctionParams& p, const SolverSettings& s);

}  // namespace mardot
