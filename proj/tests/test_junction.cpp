#include <gtest/gtest.h>

#include "mardot/junction.hpp"

using namespace mardot;

namespace {

Matrix4c anticommutator(const Matrix4c& a, const Matrix4c& b) { return a * b + b * a; }

Vector4c ket(int i) {
  Vector4c v = Vector4c::Zero();
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST(DotOperators, CanonicalAnticommutation) {
  const DotOperators d = build_dot_operators();
  const Matrix4c id = Matrix4c::Identity();
  EXPECT_EQ((anticommutator(d.c_down, d.c_down.adjoint()) - id).norm(), 0.0);
  EXPECT_EQ((anticommutator(d.c_up, d.c_up.adjoint()) - id).norm(), 0.0);
  EXPECT_EQ(anticommutator(d.c_down, d.c_up.adjoint()).norm(), 0.0);
  EXPECT_EQ(anticommutator(d.c_down, d.c_up).norm(), 0.0);
  EXPECT_EQ(anticommutator(d.c_down, d.c_down).norm(), 0.0);
}

TEST(DotOperators, ActionOnBasisStates) {
  const DotOperators d = build_dot_operators();
  EXPECT_EQ((d.c_down * ket(1) - ket(0)).norm(), 0.0);
  EXPECT_EQ((d.c_up * ket(2) - ket(0)).norm(), 0.0);
  // |dn up> = c_dn^dag c_up^dag |0>
  EXPECT_EQ((d.c_down.adjoint() * d.c_up.adjoint() * ket(0) - ket(3)).norm(), 0.0);
  EXPECT_EQ((d.c_down * d.c_up * ket(3) + ket(0)).norm(), 0.0);
  EXPECT_EQ(d.c_up(1, 3), cplx(-1.0));
}

TEST(Hamiltonian, UndrivenIsDiagonal) {
  JunctionParams p;
  p.set_bias(1.7);
  const Matrix4c h = hamiltonian_at(0.37, p);
  Matrix4c expect = Matrix4c::Zero();
  expect.diagonal() << 0.0, p.omega, p.omega, 2.0 * p.omega + p.u_int;
  EXPECT_LT((h - expect).norm(), 1e-15);
}

TEST(Hamiltonian, HermitianAndPeriodic) {
  JunctionParams p;
  set_parameter(p, "g_L", 0.5);
  set_parameter(p, "g_R", 0.3);
  set_parameter(p, "phi_R", 0.8);
  p.set_bias(1.3);
  const double period = 2.0 * kPi / p.bias();
  for (int j = 0; j < 64; ++j) {
    const double t = 0.173 * j;
    const Matrix4c h = hamiltonian_at(t, p);
    EXPECT_LT((h - h.adjoint()).norm(), 1e-15);
    EXPECT_LT((hamiltonian_at(t + period, p) - h).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Hamiltonian, PairElementFromOperatorProduct) {
  JunctionParams p;
  set_parameter(p, "g", 0.5);
  p.set_bias(2.0);
  const DotOperators d = build_dot_operators();
  const Matrix4c pair = (p.leads[0].g + p.leads[1].g) * d.c_down * d.c_up;
  const Matrix4c h = hamiltonian_at(0.0, p);
  EXPECT_NEAR(std::abs(h(0, 3) - pair(0, 3)), 0.0, 1e-15);
  EXPECT_NEAR(h(0, 3).real(), -1.0, 1e-15);
}

TEST(Hamiltonian, ParityBlocksAtZeroPairing) {
  JunctionParams p;
  p.set_bias(0.9);
  const Matrix4c h = hamiltonian_at(1.1, p);
  const Matrix4c pe = ops::even_projector();
  EXPECT_LT((h * pe - pe * h).norm(), 1e-15);
}

TEST(Junction, ValidationRejectsBadInput) {
  JunctionParams p;
  p.set_bias(1.0);
  EXPECT_NO_THROW(validate(p));

  JunctionParams q = p;
  q.leads[0].delta = 0.0;
  EXPECT_THROW(validate(q), InvalidParameter);
  q = p;
  q.leads[1].gamma = -1.0;
  EXPECT_THROW(validate(q), InvalidParameter);
  q = p;
  q.dos_epsilon = 0.0;
  EXPECT_THROW(validate(q), InvalidParameter);
  q = p;
  q.cutoff = 0.5;
  EXPECT_THROW(validate(q), InvalidParameter);
  q = p;
  q.gamma_loss = -1e-3;
  EXPECT_THROW(validate(q), InvalidParameter);
  q = p;
  q.leads[0].bias = 0.7;
  EXPECT_THROW(validate(q), InvalidParameter);
}

TEST(Junction, ParameterNames) {
  JunctionParams p;
  for (const std::string& name : parameter_names()) {
    EXPECT_NO_THROW(set_parameter(p, name, 0.25)) << name;
    EXPECT_NO_THROW(get_parameter(p, name)) << name;
  }
  set_parameter(p, "V", 3.0);
  EXPECT_DOUBLE_EQ(p.leads[0].bias, 1.5);
  EXPECT_DOUBLE_EQ(p.leads[1].bias, -1.5);
  EXPECT_DOUBLE_EQ(get_parameter(p, "V"), 3.0);
  set_parameter(p, "gamma", 0.02);
  EXPECT_DOUBLE_EQ(p.leads[1].gamma, 0.02);
  EXPECT_THROW(set_parameter(p, "bogus", 1.0), InvalidParameter);
  EXPECT_THROW(set_parameter(p, "bias", 1.0), InvalidParameter);
}

TEST(Junction, GammaReference) {
  JunctionParams p;
  set_parameter(p, "gamma_L", 1.5e-2);
  set_parameter(p, "gamma_R", 5e-3);
  EXPECT_DOUBLE_EQ(p.gamma_ref(), 1e-2);
}
