#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "mardot/types.hpp"

namespace mardot {

/// Parameters of one lead pair (moderate-gap lead plus its large-gap partner).
/// Energies are in units of the reference gap.
struct LeadParams {
  double g = 0.0;            // |g_l|, Cooper-pair tunnelling amplitude of the large-gap lead
  double phase = 0.0;        // phi_l, superconducting phase
  double delta = 1.0;        // Delta_l > 0
  double gamma = 1e-2;       // gamma_l >= 0, single-particle tunnelling rate
  double bias = 0.0;         // V_l
  double temperature = 0.0;  // T_l >= 0

  cplx pair_amplitude() const { return std::polar(g, phase); }
};

/// All physical inputs of the driven dot junction. Defaults are the study
/// point U = 2, omega = -1, gamma = 1e-2, T = 0, Delta = 1 at zero bias.
struct JunctionParams {
  double omega = -1.0;
  double u_int = 2.0;
  std::array<LeadParams, 2> leads{};
  double gamma_loss = 0.0;
  double gamma_deph = 0.0;
  double dos_epsilon = 0.1;
  double cutoff = 100.0;

  const LeadParams& lead(Lead l) const { return leads[index(l)]; }
  LeadParams& lead(Lead l) { return leads[index(l)]; }

  /// Total bias V = V_L - V_R.
  double bias() const { return leads[0].bias - leads[1].bias; }
  /// Sets V_L = -V_R = V/2.
  void set_bias(double v);

  /// Reference rate used to express currents "in units of gamma".
  double gamma_ref() const;
};

/// Throws InvalidParameter when an invariant is violated, including the
/// symmetric-bias restriction V_L = -V_R.
void validate(const JunctionParams& p);

/// Names accepted by set_parameter / get_parameter. Per-lead names carry an
/// _L / _R suffix; the unsuffixed forms (g, phi, delta, gamma, temperature)
/// set both leads, and V sets the symmetric bias.
const std::vector<std::string>& parameter_names();
void set_parameter(JunctionParams& p, std::string_view name, double value);
double get_parameter(const JunctionParams& p, std::string_view name);

struct DotOperators {
  Matrix4c c_down;
  Matrix4c c_up;
};

/// c_dn = |0><dn| + |up><dn up|,  c_up = |0><up| - |dn><dn up|.
DotOperators build_dot_operators();

/// Frequently used dot operators in the bare basis.
namespace ops {
Matrix4c c_down();
Matrix4c c_up();
Matrix4c number_down();
Matrix4c number_up();
Matrix4c number();
Matrix4c pair_creation();  // c_up^dag c_dn^dag
Matrix4c even_projector();
Matrix4c odd_projector();
}  // namespace ops

/// Undriven dot Hamiltonian: omega (n_dn + n_up) + U n_up n_dn.
Matrix4c dot_hamiltonian(const JunctionParams& p);

/// H_QD + sum_l (g_l e^{2 i V_l t} c_dn c_up + h.c.).
Matrix4c hamiltonian_at(double t, const JunctionParams& p);

}  // namespace mardot
