#include "mardot/lead_spectra.hpp"

#include <cmath>
#include <sstream>

namespace mardot {

double dos(double e, double delta, double eps) {
  const double a = std::abs(e);
  if (a < delta) return 0.0;
  return a / (std::sqrt(a * a - delta * delta) + eps * eps);
}

double fermi(double e, double temperature) {
  if (temperature == 0.0) return e < 0.0 ? 1.0 : (e > 0.0 ? 0.0 : 0.5);
  const double x = e / temperature;
  if (x > 0.0) {
    const double ex = std::exp(-x);
    return ex / (1.0 + ex);
  }
  return 1.0 / (1.0 + std::exp(x));
}

cplx coherence_product(double w, double delta, double phase) {
  return std::polar(delta / (2.0 * w), phase);
}

LeadSpectra::LeadSpectra(const LeadParams& lead, double eps, double cutoff, QuadratureOptions quad)
    : lead_(lead), eps_(eps), cutoff_(cutoff), quad_(quad) {}

double LeadSpectra::dos(double e) const { return mardot::dos(e, lead_.delta, eps_); }
double LeadSpectra::fermi(double e) const { return mardot::fermi(e, lead_.temperature); }

double LeadSpectra::gamma_single(double e) const {
  return lead_.gamma * dos(e) * (1.0 - fermi(e));
}

double LeadSpectra::gamma_pair_real(double e) const {
  const double d = dos(e);
  if (d == 0.0) return 0.0;
  const double sgn = e > 0.0 ? 1.0 : -1.0;
  return 2.0 * lead_.gamma * d * (lead_.delta / (2.0 * std::abs(e))) * (1.0 - fermi(e)) * sgn;
}

cplx LeadSpectra::gamma_pair(int channel, double e) const {
  const double g = channel == 1 ? gamma_pair_real(e) : -gamma_pair_real(-e);
  return std::polar(1.0, lead_.phase) * g;
}

namespace {

double lorentz_real(double y, double eps) { return y / (y * y + eps * eps); }

}  // namespace

double LeadSpectra::single_kernel(const LeadSpectra& s, double e, double w) {
  return s.fermi(w) * lorentz_real(e + w, s.eps_) + s.fermi(-w) * lorentz_real(e - w, s.eps_);
}

double LeadSpectra::pair_kernel(const LeadSpectra& s, double e, double w) {
  return (s.lead_.delta / (2.0 * w)) *
         (-s.fermi(w) * lorentz_real(e + w, s.eps_) + (1.0 - s.fermi(w)) * lorentz_real(e - w, s.eps_));
}

double LeadSpectra::shift_integral(double e,
                                   double (*kernel)(const LeadSpectra&, double, double)) const {
  const double delta = lead_.delta;
  const double eps2 = eps_ * eps_;
  const double u_max = std::acosh(cutoff_ / delta);
  // w = Delta cosh u turns the edge singularity of D(w) into a smooth factor.
  auto integrand = [&](double u) {
    const double sh = std::sinh(u);
    const double w = delta * std::cosh(u);
    const double jac_dos = w * delta * sh / (delta * sh + eps2);
    return jac_dos * kernel(*this, e, w);
  };
  std::vector<double> breaks;
  for (double w : {std::abs(e) - eps_, std::abs(e), std::abs(e) + eps_,
                   delta + eps_, delta + 4.0 * eps_}) {
    if (w > delta && w < cutoff_) breaks.push_back(std::acosh(w / delta));
  }
  const QuadratureResult r = integrate(integrand, 0.0, u_max, breaks, quad_);
  if (!r.converged) {
    std::ostringstream os;
    os << "Lamb-shift quadrature did not converge at E=" << e << " (error estimate " << r.error
       << ")";
    throw QuadratureError(os.str(), e);
  }
  return r.value;
}

double LeadSpectra::lamb_single(double e) const {
  if (lead_.gamma == 0.0) return 0.0;
  return lead_.gamma / kPi * shift_integral(e, &LeadSpectra::single_kernel);
}

double LeadSpectra::lamb_pair(int channel, double e) const {
  if (lead_.gamma == 0.0) return 0.0;
  const double x = channel == 1 ? e : -e;
  return 2.0 * lead_.gamma / kPi * shift_integral(x, &LeadSpectra::pair_kernel);
}

cplx LeadSpectra::rate_single(double e) const { return {gamma_single(e), lamb_single(e)}; }

cplx LeadSpectra::rate_pair(int channel, double e) const {
  const double g = channel == 1 ? gamma_pair_real(e) : -gamma_pair_real(-e);
  return std::polar(1.0, lead_.phase) * cplx(g, lamb_pair(channel, e));
}

RateTable::RateTable(const JunctionParams& p, const SolverSettings& s)
    : spectra_{LeadSpectra(p.lead(Lead::left), p.dos_epsilon, p.cutoff,
                           {s.quad_rel_tol, s.quad_abs_tol, 4000}),
               LeadSpectra(p.lead(Lead::right), p.dos_epsilon, p.cutoff,
                           {s.quad_rel_tol, s.quad_abs_tol, 4000})},
      eps_(p.dos_epsilon),
      cutoff_(p.cutoff) {}

std::int64_t RateTable::key(RateKind kind, double e) {
  const std::int64_t q = std::llround(e * 1e12);
  return q * 3 + static_cast<int>(kind);
}

cplx RateTable::get(Lead lead, RateKind kind, double e) {
  const std::int64_t k = key(kind, e);
  auto& cache = cache_[index(lead)];
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }
  const LeadSpectra& sp = spectra_[index(lead)];
  cplx v;
  switch (kind) {
    case RateKind::single: v = sp.rate_single(e); break;
    case RateKind::pair1: v = sp.rate_pair(1, e); break;
    case RateKind::pair2: v = sp.rate_pair(2, e); break;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  cache.emplace(k, v);
  return v;
}

cplx RateTable::at(Lead lead, RateKind kind, double e) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto& cache = cache_[index(lead)];
  if (auto it = cache.find(key(kind, e)); it != cache.end()) return it->second;
  std::ostringstream os;
  os << "rate table has no entry for lead " << lead_name(lead) << ", kind "
     << static_cast<int>(kind) << ", E=" << e;
  throw std::logic_error(os.str());
}

std::size_t RateTable::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_[0].size() + cache_[1].size();
}

}  // namespace mardot
