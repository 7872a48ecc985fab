#pragma once

#include <array>

#include "mardot/floquet.hpp"
#include "mardot/lead_spectra.hpp"

namespace mardot {

/// rho -> X rho Y in column-major vectorized form.
SuperOp sandwich(const Matrix4c& x, const Matrix4c& y);

/// The map rho -> (S[rho^dag])^dag for a single harmonic; for a series the
/// harmonic index flips sign.
SuperOp conjugate_map(const SuperOp& s);

/// Adds the conjugate partner of every harmonic: out_m += conj-map(in_{-m}).
SuperSeries with_conjugate_partner(const SuperSeries& s);

enum class IncoherentKind { loss, dephasing };

struct ChannelFlags {
  bool single = true;
  bool pair = true;
  bool loss = true;
  bool dephasing = true;
};

/// Single-particle tunnelling contribution of one lead, in the co-moving
/// Floquet-mode frame, as harmonics of e^{i m V t}.
SuperSeries assemble_single_particle(const JunctionParams& p, const FloquetBasis& basis,
                                     RateTable& rates, Lead lead, double coefficient_floor = 1e-14);

/// Cooper-pair tunnelling contribution of one lead (the drive factor of the
/// pair rates shifts the harmonic index by the lead's drive sign).
SuperSeries assemble_pair(const JunctionParams& p, const FloquetBasis& basis, RateTable& rates,
                          Lead lead, double coefficient_floor = 1e-14);

/// gamma_I sum_s (2 L rho L^dag - {L^dag L, rho}) with L = c_s (loss) or n_s (dephasing).
SuperSeries assemble_incoherent(const FloquetBasis& basis, double gamma_i, IncoherentKind kind);

/// -i [diag(E), rho]: the frame's coherent part, time independent.
SuperOp coherent_part(const FloquetBasis& basis);

struct PeriodicGenerator {
  double bias = 0.0;
  double period = 0.0;
  SuperOp coherent = SuperOp::Zero();
  std::array<SuperSeries, 2> single;
  std::array<SuperSeries, 2> pair;
  SuperSeries loss;
  SuperSeries dephasing;
  SuperSeries total;  // coherent + every enabled channel
  int support = 0;    // largest |m| with a non-negligible harmonic of total

  SuperOp at(double t) const { return total.evaluate(bias * t); }
  SuperSeries lead_total(Lead lead) const;
  SuperSeries incoherent_total() const;
  SuperSeries dissipative_total() const;
};

PeriodicGenerator assemble_generator(const JunctionParams& p, const FloquetBasis& basis,
                                     RateTable& rates, const SolverSettings& s,
                                     const ChannelFlags& channels = {});

/// Time-independent g = 0 generator in the bare basis: H_QD plus the
/// single-particle Lamb shift and dissipator of each lead, pair terms dropped.
struct StaticGenerator {
  SuperOp total = SuperOp::Zero();
  std::array<SuperOp, 2> lead{SuperOp::Zero(), SuperOp::Zero()};
};

StaticGenerator assemble_static_reference(const JunctionParams& p, RateTable& rates);

}  // namespace mardot
