#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "mardot/junction.hpp"
#include "mardot/quadrature.hpp"
#include "mardot/settings.hpp"

namespace mardot {

/// Regularized density of states |E| / (sqrt(E^2 - Delta^2) + eps^2) for |E| >= Delta, else 0.
double dos(double e, double delta, double eps);

/// 1 / (1 + e^{E/T}); the zero-temperature limit is a step with value 1/2 at E = 0.
double fermi(double e, double temperature);

/// u* v* = e^{i phi} Delta / (2 w) at quasiparticle energy w >= Delta.
cplx coherence_product(double w, double delta, double phase);

/// Bath scalars of one lead. Single-particle rates Gamma_+ and Gamma_- are the
/// same function of their argument; pair rates carry the lead phase.
class LeadSpectra {
 public:
  LeadSpectra(const LeadParams& lead, double eps, double cutoff, QuadratureOptions quad = {});

  double dos(double e) const;
  double fermi(double e) const;

  /// gamma_l D(E) [1 - n(E)].
  double gamma_single(double e) const;
  /// Real decay part of Gamma_1, without the phase factor:
  /// 2 gamma_l D(E) Delta/(2|E|) [1 - n(E)] sgn(E).
  double gamma_pair_real(double e) const;
  /// e^{i phi} times gamma_pair_real for channel 1; channel 2 is -gamma_1(-E).
  cplx gamma_pair(int channel, double e) const;

  /// Principal-value shifts. Omega_single is Omega_{+-}; Omega_pair(1, E) is
  /// Omega_1 and Omega_pair(2, E) = Omega_1(-E). Throws QuadratureError.
  double lamb_single(double e) const;
  double lamb_pair(int channel, double e) const;

  /// Gamma_{+-}(E) = gamma(E) + i Omega(E).
  cplx rate_single(double e) const;
  /// Gamma_{1,2}(E) = e^{i phi} [gamma_{1,2}(E) + i Omega_{1,2}(E)].
  cplx rate_pair(int channel, double e) const;

  const LeadParams& params() const { return lead_; }

 private:
  // Integral over w in [Delta, cutoff] of D(w) weight(w) after w = Delta cosh u.
  double shift_integral(double e, double (*kernel)(const LeadSpectra&, double e, double w)) const;

  static double single_kernel(const LeadSpectra& s, double e, double w);
  static double pair_kernel(const LeadSpectra& s, double e, double w);

  LeadParams lead_;
  double eps_;
  double cutoff_;
  QuadratureOptions quad_;
};

enum class RateKind : int { single = 0, pair1 = 1, pair2 = 2 };

/// Memoized complex rates for both leads at one parameter point. Lookups that
/// miss are computed on demand by get(); at() treats a miss as a logic error.
class RateTable {
 public:
  RateTable(const JunctionParams& p, const SolverSettings& s);

  cplx get(Lead lead, RateKind kind, double e);
  cplx at(Lead lead, RateKind kind, double e) const;
  std::size_t size() const;

  const LeadSpectra& spectra(Lead lead) const { return spectra_[index(lead)]; }
  double epsilon() const { return eps_; }
  double cutoff() const { return cutoff_; }

 private:
  static std::int64_t key(RateKind kind, double e);

  std::array<LeadSpectra, 2> spectra_;
  double eps_;
  double cutoff_;
  mutable std::mutex mutex_;
  std::array<std::unordered_map<std::int64_t, cplx>, 2> cache_;
};

}  // namespace mardot
