#include "mardot/observables.hpp"

namespace mardot {

double current_single_particle(const FloquetBasis& basis, const SuperSeries& lead_part,
                               const PeriodicState& state) {
  return -state.expectation(basis.ops.number, lead_part).real();
}

double current_pair(const JunctionParams& p, const FloquetBasis& basis, const PeriodicState& state,
                    Lead lead) {
  const LeadParams& lp = p.lead(lead);
  if (lp.g == 0.0) return 0.0;
  MatrixSeries w = basis.ops.pair_creation.shifted(-drive_sign(lead));
  w *= std::conj(lp.pair_amplitude());
  return -2.0 * state.expectation(w).imag();
}

double current_incoherent(const FloquetBasis& basis, const SuperSeries& incoherent,
                          const PeriodicState& state) {
  return -state.expectation(basis.ops.number, incoherent).real();
}

double current_dot(const FloquetBasis& basis, const PeriodicGenerator& gen,
                   const PeriodicState& state) {
  const MatrixSeries& n = basis.ops.number;
  MatrixSeries n_dot(n.k_max());
  for (int k = -n.k_max(); k <= n.k_max(); ++k) n_dot[k] = (kI * (k * basis.bias)) * n[k];
  SuperSeries drift = gen.dissipative_total();
  drift[0] += gen.coherent;
  return (state.expectation(n_dot) + state.expectation(n, drift)).real();
}

std::pair<double, double> parity_populations(const FloquetBasis& basis, const PeriodicState& state) {
  const double even = state.expectation(basis.ops.even_projector).real();
  const double total = state.average().trace().real();
  return {even, total - even};
}

std::pair<double, double> parity_populations(const Matrix4c& rho) {
  const double even = (rho(0, 0) + rho(3, 3)).real();
  const double odd = (rho(1, 1) + rho(2, 2)).real();
  return {even, odd};
}

CurrentRecord compute_currents(const JunctionParams& p, const FloquetBasis& basis,
                               const PeriodicGenerator& gen, const PeriodicState& state) {
  CurrentRecord r;
  r.bias = basis.bias;
  for (Lead l : kLeads) {
    r.i_s[index(l)] = current_single_particle(basis, gen.lead_total(l), state);
    r.i_p[index(l)] = current_pair(p, basis, state, l);
  }
  r.i_incoh = current_incoherent(basis, gen.incoherent_total(), state);
  r.i_qd = current_dot(basis, gen, state);
  std::tie(r.pop_even, r.pop_odd) = parity_populations(basis, state);
  r.residual = r.i_qd + r.i_s[0] + r.i_s[1] + 2.0 * (r.i_p[0] + r.i_p[1]) + r.i_incoh;
  return r;
}

CurrentRecord static_currents(const JunctionParams& p, const StaticGenerator& gen,
                              const Matrix4c& rho) {
  CurrentRecord r;
  r.bias = p.bias();
  const Matrix4c n = ops::number();
  const LiouvilleVec v = vectorize(rho);
  for (Lead l : kLeads)
    r.i_s[index(l)] = -(n * unvectorize(gen.lead[index(l)] * v)).trace().real();
  r.i_qd = (n * unvectorize(gen.total * v)).trace().real();
  std::tie(r.pop_even, r.pop_odd) = parity_populations(rho);
  r.residual = r.i_qd + r.i_s[0] + r.i_s[1];
  return r;
}

}  // namespace mardot
