#include "mardot/generator.hpp"

#include <cmath>

namespace mardot {

namespace {

inline int vidx(int a, int b) { return a + kDotDim * b; }

bool negligible(const Matrix4c& m, double floor) { return m.cwiseAbs().maxCoeff() <= floor; }

// out_{i+j} += coeff * (rho -> X_i rho Y_j)
void add_sandwich(SuperSeries& out, const MatrixSeries& x, const MatrixSeries& y, cplx coeff,
                  double floor) {
  for (int i = -x.k_max(); i <= x.k_max(); ++i) {
    if (negligible(x[i], floor)) continue;
    for (int j = -y.k_max(); j <= y.k_max(); ++j) {
      if (negligible(y[j], floor)) continue;
      out[i + j] += coeff * sandwich(x[i], y[j]);
    }
  }
}

// out_m += coeff * (rho -> X_m rho)
void add_left(SuperSeries& out, const MatrixSeries& x, cplx coeff, double floor) {
  const Matrix4c id = Matrix4c::Identity();
  for (int m = -x.k_max(); m <= x.k_max(); ++m) {
    if (negligible(x[m], floor)) continue;
    out[m] += coeff * sandwich(x[m], id);
  }
}

// Redfield term -[A, L rho] for one jump operator A and its dressed partner L
// (the Hermitian-conjugate half is added by the caller).
void add_redfield(SuperSeries& out, const MatrixSeries& a, const MatrixSeries& dressed,
                  double floor) {
  add_left(out, a * dressed, -1.0, floor);
  add_sandwich(out, dressed, a, 1.0, floor);
}

// sum_k e^{ik theta} op^{abk} rate(Delta_abk), skipping negligible coefficients.
template <class Rate>
MatrixSeries dress(const MatrixSeries& op, const FloquetBasis& basis, double floor, Rate rate) {
  MatrixSeries out(op.k_max());
  for (int k = -op.k_max(); k <= op.k_max(); ++k)
    for (int a = 0; a < kDotDim; ++a)
      for (int b = 0; b < kDotDim; ++b) {
        const cplx c = op[k](a, b);
        if (std::abs(c) <= floor) continue;
        out[k](a, b) = c * rate(basis.transition(a, b, k));
      }
  return out;
}

}  // namespace

SuperOp sandwich(const Matrix4c& x, const Matrix4c& y) {
  SuperOp s;
  for (int b = 0; b < kDotDim; ++b)
    for (int a = 0; a < kDotDim; ++a)
      for (int d = 0; d < kDotDim; ++d)
        for (int c = 0; c < kDotDim; ++c) s(vidx(a, b), vidx(c, d)) = x(a, c) * y(d, b);
  return s;
}

SuperOp conjugate_map(const SuperOp& s) {
  SuperOp out;
  for (int b = 0; b < kDotDim; ++b)
    for (int a = 0; a < kDotDim; ++a)
      for (int d = 0; d < kDotDim; ++d)
        for (int c = 0; c < kDotDim; ++c)
          out(vidx(a, b), vidx(c, d)) = std::conj(s(vidx(b, a), vidx(d, c)));
  return out;
}

SuperSeries with_conjugate_partner(const SuperSeries& s) {
  SuperSeries out = s;
  for (int m = -s.k_max(); m <= s.k_max(); ++m) {
    if (s[m].cwiseAbs().maxCoeff() == 0.0) continue;
    out[-m] += conjugate_map(s[m]);
  }
  return out;
}

SuperSeries assemble_single_particle(const JunctionParams& p, const FloquetBasis& basis,
                                     RateTable& rates, Lead lead, double floor) {
  SuperSeries half(2 * basis.k_max);
  if (p.lead(lead).gamma == 0.0) return half;
  const double vl = p.lead(lead).bias;
  auto rate_in = [&](double delta) { return rates.get(lead, RateKind::single, -delta + vl); };
  auto rate_out = [&](double delta) { return rates.get(lead, RateKind::single, -delta - vl); };
  for (const MatrixSeries* c : {&basis.ops.c_down, &basis.ops.c_up}) {
    const MatrixSeries cd = c->adjoint();
    add_redfield(half, *c, dress(cd, basis, floor, rate_in), floor);
    add_redfield(half, cd, dress(*c, basis, floor, rate_out), floor);
  }
  return with_conjugate_partner(half);
}

SuperSeries assemble_pair(const JunctionParams& p, const FloquetBasis& basis, RateTable& rates,
                          Lead lead, double floor) {
  SuperSeries half(2 * basis.k_max + 1);
  if (p.lead(lead).gamma == 0.0) return half;
  const double vl = p.lead(lead).bias;
  const int sigma = drive_sign(lead);
  auto rate1 = [&](double delta) { return rates.get(lead, RateKind::pair1, -delta - vl); };
  auto rate2c = [&](double delta) {
    return std::conj(rates.get(lead, RateKind::pair2, delta - vl));
  };
  const MatrixSeries& cdn = basis.ops.c_down;
  const MatrixSeries& cup = basis.ops.c_up;
  const MatrixSeries cdn_d = cdn.adjoint();
  const MatrixSeries cup_d = cup.adjoint();

  // A = c_dn pairs with M_dn ~ c_up; A = c_up pairs with M_up ~ -c_dn.
  MatrixSeries m_dn = dress(cup, basis, floor, rate1).shifted(sigma);
  MatrixSeries m_up = dress(cdn, basis, floor, rate1).shifted(sigma);
  m_dn *= -1.0;  // the dressed partner enters as -M
  add_redfield(half, cdn, m_dn, floor);
  add_redfield(half, cup, m_up, floor);  // -(-M_up) = +dress(c_dn)

  MatrixSeries n_dn = dress(cup_d, basis, floor, rate2c).shifted(-sigma);
  MatrixSeries n_up = dress(cdn_d, basis, floor, rate2c).shifted(-sigma);
  n_dn *= -1.0;
  add_redfield(half, cdn_d, n_dn, floor);
  add_redfield(half, cup_d, n_up, floor);
  return with_conjugate_partner(half);
}

SuperSeries assemble_incoherent(const FloquetBasis& basis, double gamma_i, IncoherentKind kind) {
  if (gamma_i < 0.0) throw InvalidParameter("incoherent rate must be >= 0");
  const int kk = 2 * basis.k_max;
  SuperSeries half(kk);
  if (gamma_i == 0.0) return half;
  const MatrixSeries* ls[2];
  if (kind == IncoherentKind::loss) {
    ls[0] = &basis.ops.c_down;
    ls[1] = &basis.ops.c_up;
  } else {
    ls[0] = &basis.ops.number_down;
    ls[1] = &basis.ops.number_up;
  }
  for (const MatrixSeries* l : ls) {
    const MatrixSeries ld = l->adjoint();
    add_sandwich(half, *l, ld, gamma_i, 0.0);
    add_left(half, ld * *l, -gamma_i, 0.0);
  }
  return with_conjugate_partner(half);
}

SuperOp coherent_part(const FloquetBasis& basis) {
  Matrix4c e = Matrix4c::Zero();
  for (int a = 0; a < kDotDim; ++a) e(a, a) = basis.quasienergies[a];
  const Matrix4c id = Matrix4c::Identity();
  return -kI * sandwich(e, id) + kI * sandwich(id, e);
}

SuperSeries PeriodicGenerator::lead_total(Lead lead) const {
  return single[index(lead)] + pair[index(lead)];
}

SuperSeries PeriodicGenerator::incoherent_total() const { return loss + dephasing; }

SuperSeries PeriodicGenerator::dissipative_total() const {
  SuperSeries out = incoherent_total();
  for (Lead l : kLeads) out += lead_total(l);
  return out;
}

PeriodicGenerator assemble_generator(const JunctionParams& p, const FloquetBasis& basis,
                                     RateTable& rates, const SolverSettings& s,
                                     const ChannelFlags& channels) {
  PeriodicGenerator g;
  g.bias = basis.bias;
  g.period = basis.period;
  g.coherent = coherent_part(basis);
  const double floor = s.coefficient_floor;
  for (Lead l : kLeads) {
    g.single[index(l)] = channels.single ? assemble_single_particle(p, basis, rates, l, floor)
                                         : SuperSeries(2 * basis.k_max);
    g.pair[index(l)] = channels.pair ? assemble_pair(p, basis, rates, l, floor)
                                     : SuperSeries(2 * basis.k_max + 1);
  }
  g.loss = assemble_incoherent(basis, channels.loss ? p.gamma_loss : 0.0, IncoherentKind::loss);
  g.dephasing = assemble_incoherent(basis, channels.dephasing ? p.gamma_deph : 0.0,
                                    IncoherentKind::dephasing);
  g.total = g.dissipative_total();
  g.total[0] += g.coherent;
  g.support = g.total.support(floor * std::max(1.0, g.total.max_abs()));
  return g;
}

StaticGenerator assemble_static_reference(const JunctionParams& p, RateTable& rates) {
  validate(p);
  for (Lead l : kLeads)
    if (p.lead(l).g != 0.0) throw InvalidParameter("static reference requires g_L = g_R = 0");
  StaticGenerator out;
  const Matrix4c id = Matrix4c::Identity();
  const Matrix4c h0 = dot_hamiltonian(p);
  out.total = -kI * sandwich(h0, id) + kI * sandwich(id, h0);

  // Bare-basis transition operators: sigma_{0s} lowers |s> to |0>, sigma_{s,dn up}
  // lowers |dn up> to |s>; their energies are omega and U + omega.
  auto ket_bra = [](int i, int j) {
    Matrix4c m = Matrix4c::Zero();
    m(i, j) = 1.0;
    return m;
  };
  struct Transition {
    Matrix4c sigma;
    double energy;
  };
  const std::array<Transition, 4> transitions{{{ket_bra(0, 1), p.omega},
                                               {ket_bra(0, 2), p.omega},
                                               {ket_bra(1, 3), p.u_int + p.omega},
                                               {ket_bra(2, 3), p.u_int + p.omega}}};
  for (Lead l : kLeads) {
    const double vl = p.lead(l).bias;
    SuperOp& lo = out.lead[index(l)];
    if (p.lead(l).gamma == 0.0) continue;
    for (const Transition& tr : transitions) {
      const Matrix4c& s = tr.sigma;
      const Matrix4c sd = s.adjoint();
      const cplx out_rate = rates.get(l, RateKind::single, tr.energy - vl);
      const cplx in_rate = rates.get(l, RateKind::single, -tr.energy + vl);
      // electron leaves the dot: sigma rho sigma^dag
      const Matrix4c n_out = sd * s;
      lo += 2.0 * out_rate.real() *
            (sandwich(s, sd) - 0.5 * sandwich(n_out, id) - 0.5 * sandwich(id, n_out));
      // electron enters the dot: sigma^dag rho sigma
      const Matrix4c n_in = s * sd;
      lo += 2.0 * in_rate.real() *
            (sandwich(sd, s) - 0.5 * sandwich(n_in, id) - 0.5 * sandwich(id, n_in));
      const Matrix4c h_ls = out_rate.imag() * n_out + in_rate.imag() * n_in;
      lo += -kI * sandwich(h_ls, id) + kI * sandwich(id, h_ls);
    }
    out.total += lo;
  }
  return out;
}

}  // namespace mardot
