#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "mardot/lead_spectra.hpp"

using namespace mardot;

namespace {

LeadParams default_lead() {
  LeadParams l;
  l.gamma = 1e-2;
  return l;
}

double lorentz(double x, double eps) { return x / (x * x + eps * eps); }

// Brute-force trapezoid in w = Delta + s^2 on [Delta, cutoff].
template <class F>
double trapezoid_above_gap(F f, double delta, double cutoff, long n) {
  const double smax = std::sqrt(cutoff - delta);
  const double h = smax / n;
  double acc = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double s = i * h;
    const double w = delta + s * s;
    const double v = f(w) * 2.0 * s;
    acc += (i == 0 || i == n) ? 0.5 * v : v;
  }
  return acc * h;
}

}  // namespace

TEST(Dos, Values) {
  EXPECT_EQ(dos(0.5, 1.0, 0.1), 0.0);
  EXPECT_EQ(dos(-0.999, 1.0, 0.1), 0.0);
  EXPECT_NEAR(dos(2.0, 1.0, 1e-8), 2.0 / std::sqrt(3.0), 1e-12);
  const double near_edge = dos(1.0 + 1e-6, 1.0, 0.1);
  EXPECT_TRUE(std::isfinite(near_edge));
  EXPECT_LE(near_edge, (1.0 + 1e-6) / 0.01);
  EXPECT_DOUBLE_EQ(dos(-2.5, 1.0, 0.1), dos(2.5, 1.0, 0.1));
}

TEST(Fermi, Values) {
  EXPECT_EQ(fermi(-0.3, 0.0), 1.0);
  EXPECT_EQ(fermi(0.3, 0.0), 0.0);
  EXPECT_EQ(fermi(0.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(fermi(0.0, 1.0), 0.5);
  for (double t : {0.0, 0.05, 1.0})
    for (double e : {-3.0, -0.2, 0.0, 0.1, 7.0}) EXPECT_NEAR(fermi(e, t) + fermi(-e, t), 1.0, 1e-15);
  EXPECT_NEAR(fermi(800.0, 1.0), 0.0, 1e-300);
  EXPECT_NEAR(fermi(-800.0, 1.0), 1.0, 1e-15);
}

TEST(CoherenceProduct, Values) {
  EXPECT_NEAR(std::abs(coherence_product(1.0, 1.0, 0.0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(coherence_product(1e9, 1.0, 0.0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(coherence_product(2.0, 1.0, kPi / 2) - cplx(0.0, 0.25)), 0.0, 1e-15);
}

TEST(Rates, SingleParticle) {
  LeadParams l = default_lead();
  const LeadSpectra s(l, 1e-8, 100.0);
  EXPECT_EQ(s.gamma_single(-2.0), 0.0);
  EXPECT_NEAR(s.gamma_single(2.0), 1e-2 * 2.0 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(s.gamma_single(0.7), 0.0);
  EXPECT_EQ(s.gamma_single(-0.7), 0.0);
}

TEST(Rates, PartitionIdentity) {
  LeadParams l = default_lead();
  l.temperature = 0.3;
  const LeadSpectra s(l, 0.1, 100.0);
  for (double e = -4.0; e <= 4.0; e += 0.173) {
    const double full = l.gamma * dos(e, l.delta, 0.1);
    EXPECT_NEAR(s.gamma_single(e) + full * fermi(e, l.temperature), full, 1e-15 * (1.0 + full));
    EXPECT_GE(s.gamma_single(e), 0.0);
  }
}

TEST(Rates, PairValuesAndSymmetry) {
  const LeadSpectra sharp(default_lead(), 1e-8, 100.0);
  EXPECT_NEAR(sharp.gamma_pair_real(2.0), 2e-2 * (2.0 / std::sqrt(3.0)) * 0.25, 1e-12);
  EXPECT_EQ(sharp.gamma_pair_real(0.4), 0.0);
  EXPECT_EQ(std::abs(sharp.gamma_pair(2, -0.4)), 0.0);

  LeadParams l = default_lead();
  l.phase = 0.7;
  l.temperature = 0.2;
  const LeadSpectra s(l, 0.1, 100.0);
  for (double e = -3.0; e <= 3.0; e += 0.37) {
    const cplx g1 = s.gamma_pair(1, e);
    const cplx g2 = s.gamma_pair(2, -e);
    EXPECT_NEAR(std::abs(g1 + g2), 0.0, 1e-15);
    EXPECT_NEAR(s.lamb_pair(1, e) - s.lamb_pair(2, -e), 0.0, 1e-15);
    // phase-stripped parts: gamma_1(E) = -gamma_2(-E), Omega_1(E) = Omega_2(-E)
    const cplx r1 = s.rate_pair(1, e) * std::polar(1.0, -l.phase);
    const cplx r2 = s.rate_pair(2, -e) * std::polar(1.0, -l.phase);
    EXPECT_NEAR(r1.real() + r2.real(), 0.0, 1e-15);
    EXPECT_NEAR(r1.imag() - r2.imag(), 0.0, 1e-15);
  }
}

TEST(Rates, LargeGapPairRatesVanish) {
  LeadParams l = default_lead();
  l.delta = 50.0;
  const LeadSpectra s(l, 0.1, 500.0);
  for (double e = -5.0; e <= 5.0; e += 0.5) {
    EXPECT_EQ(s.gamma_pair_real(e), 0.0);
    EXPECT_EQ(s.gamma_single(e), 0.0);
  }
}

TEST(LambShift, ZeroCoupling) {
  LeadParams l = default_lead();
  l.gamma = 0.0;
  const LeadSpectra s(l, 0.1, 100.0);
  EXPECT_EQ(s.lamb_single(0.3), 0.0);
  EXPECT_EQ(s.lamb_pair(1, 0.3), 0.0);
}

TEST(LambShift, SingleMatchesTrapezoidOracle) {
  const LeadParams l = default_lead();
  const double eps = 0.1;
  const LeadSpectra s(l, eps, 100.0);
  for (double e : {0.0, 0.5, -1.7, 2.5}) {
    auto f = [&](double w) {
      return dos(w, 1.0, eps) * (fermi(w, 0.0) * lorentz(e + w, eps) + fermi(-w, 0.0) * lorentz(e - w, eps));
    };
    const double oracle = l.gamma / kPi * trapezoid_above_gap(f, 1.0, 100.0, 1000000);
    EXPECT_NEAR(s.lamb_single(e), oracle, 1e-5 * std::abs(oracle)) << e;
  }
}

TEST(LambShift, PairMatchesTrapezoidOracle) {
  const LeadParams l = default_lead();
  const double eps = 0.1;
  const LeadSpectra s(l, eps, 100.0);
  for (double e : {0.0, 1.2, -2.2}) {
    auto f = [&](double w) {
      return dos(w, 1.0, eps) * (1.0 / (2.0 * w)) *
             (-fermi(w, 0.0) * lorentz(e + w, eps) + (1.0 - fermi(w, 0.0)) * lorentz(e - w, eps));
    };
    const double oracle = 2.0 * l.gamma / kPi * trapezoid_above_gap(f, 1.0, 100.0, 1000000);
    EXPECT_NEAR(s.lamb_pair(1, e), oracle, 1e-5 * std::abs(oracle)) << e;
  }
}

TEST(LambShift, StableUnderRefinement) {
  const LeadParams l = default_lead();
  const LeadSpectra coarse(l, 0.1, 100.0, {1e-7, 1e-14, 4000});
  const LeadSpectra fine(l, 0.1, 100.0, {1e-12, 1e-16, 20000});
  for (double e : {-3.0, -1.05, 0.0, 0.99, 1.0, 1.1, 4.0}) {
    EXPECT_NEAR(coarse.lamb_single(e), fine.lamb_single(e), 1e-6 * std::abs(fine.lamb_single(e))) << e;
    EXPECT_NEAR(coarse.lamb_pair(1, e), fine.lamb_pair(1, e), 1e-6 * std::abs(fine.lamb_pair(1, e))) << e;
  }
}

TEST(LambShift, CutoffDoublingIsLogged) {
  const LeadParams l = default_lead();
  const LeadSpectra a(l, 0.1, 100.0);
  const LeadSpectra b(l, 0.1, 200.0);
  for (double e : {-2.0, 0.0, 2.0}) {
    const double d = b.lamb_single(e) - a.lamb_single(e);
    RecordProperty("cutoff_shift_" + std::to_string(e), std::to_string(d));
    EXPECT_TRUE(std::isfinite(d));
    // the tail of D(w)/w beyond the cutoff is logarithmic
    EXPECT_LT(std::abs(d), 2.0 * l.gamma);
  }
}

TEST(RateTable, MemoizesAndReportsMisses) {
  JunctionParams p;
  set_parameter(p, "g", 0.5);
  RateTable t(p, SolverSettings{});
  const cplx a = t.get(Lead::left, RateKind::single, 1.5);
  EXPECT_EQ(t.at(Lead::left, RateKind::single, 1.5), a);
  EXPECT_EQ(t.at(Lead::left, RateKind::single, 1.5 + 1e-14), a);
  EXPECT_THROW(t.at(Lead::right, RateKind::single, 1.5), std::logic_error);
  EXPECT_THROW(t.at(Lead::left, RateKind::pair1, 1.5), std::logic_error);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(a, t.spectra(Lead::left).rate_single(1.5));
}

TEST(RateTable, ConcurrentInsertIsConsistent) {
  JunctionParams p;
  RateTable t(p, SolverSettings{});
  std::vector<std::thread> pool;
  std::vector<std::vector<cplx>> seen(4);
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] {
      for (int i = 0; i < 40; ++i) seen[w].push_back(t.get(Lead::right, RateKind::pair2, -2.0 + 0.1 * i));
    });
  for (auto& th : pool) th.join();
  EXPECT_EQ(t.size(), 40u);
  for (int w = 1; w < 4; ++w) EXPECT_EQ(seen[w], seen[0]);
}

TEST(Rates, FiniteEverywhere) {
  LeadParams l = default_lead();
  const LeadSpectra s(l, 0.1, 100.0);
  for (double e = -6.0; e <= 6.0; e += 0.0625) {
    EXPECT_TRUE(std::isfinite(std::abs(s.rate_single(e)))) << e;
    EXPECT_TRUE(std::isfinite(std::abs(s.rate_pair(1, e)))) << e;
    EXPECT_TRUE(std::isfinite(std::abs(s.rate_pair(2, e)))) << e;
  }
}
