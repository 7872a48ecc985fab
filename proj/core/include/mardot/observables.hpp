#pragma once

#include <array>
#include <utility>

#include "mardot/evolution.hpp"

namespace mardot {

/// Period-averaged currents of one parameter point, in absolute rate units
/// (divide by JunctionParams::gamma_ref() for units of gamma). A current is the
/// rate at which particles enter that reservoir, so at V > 0 the source lead L
/// is negative and the drain R positive.
struct CurrentRecord {
  double bias = 0.0;
  double i_qd = 0.0;                  // period-averaged d<N>/dt of the dot
  std::array<double, 2> i_s{};        // single-particle current into lead l
  std::array<double, 2> i_p{};        // Cooper-pair current into the large-gap lead l
  double i_incoh = 0.0;               // particles removed by the incoherent channel
  double pop_even = 0.0;
  double pop_odd = 0.0;
  double residual = 0.0;  // i_qd + sum i_s + 2 sum i_p + i_incoh

  double total(Lead l) const { return i_s[index(l)] + 2.0 * i_p[index(l)]; }
};

/// -avg Tr[N (L_l rho)] for one lead's generator contribution.
double current_single_particle(const FloquetBasis& basis, const SuperSeries& lead_part,
                               const PeriodicState& state);

/// i (g_l^* e^{-2 i V_l t} <c_up^dag c_dn^dag> - h.c.), period averaged.
double current_pair(const JunctionParams& p, const FloquetBasis& basis, const PeriodicState& state,
                    Lead lead);

/// -avg Tr[N (D_I rho)].
double current_incoherent(const FloquetBasis& basis, const SuperSeries& incoherent,
                          const PeriodicState& state);

/// Period-averaged d<N>/dt: the frame derivative of N, the coherent part and
/// the full dissipative generator.
double current_dot(const FloquetBasis& basis, const PeriodicGenerator& gen,
                   const PeriodicState& state);

std::pair<double, double> parity_populations(const FloquetBasis& basis, const PeriodicState& state);
/// Bare-basis density matrix.
std::pair<double, double> parity_populations(const Matrix4c& rho);

CurrentRecord compute_currents(const JunctionParams& p, const FloquetBasis& basis,
                               const PeriodicGenerator& gen, const PeriodicState& state);

/// Currents of the time-independent reference for a bare-basis steady state.
CurrentRecord static_currents(const JunctionParams& p, const StaticGenerator& gen,
                              const Matrix4c& rho);

}  // namespace mardot
