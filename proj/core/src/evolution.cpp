#include "mardot/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

namespace mardot {

Matrix4c PeriodicState::average() const {
  Matrix4c acc = Matrix4c::Zero();
  for (const Matrix4c& r : samples) acc += r;
  return acc / static_cast<double>(samples.size());
}

cplx PeriodicState::expectation(const MatrixSeries& op) const {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j)
    acc += (op.evaluate(bias * time(j)) * samples[j]).trace();
  return acc / static_cast<double>(samples.size());
}

cplx PeriodicState::expectation(const MatrixSeries& op, const SuperSeries& s) const {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double theta = bias * time(j);
    const LiouvilleVec v = s.evaluate(theta) * vectorize(samples[j]);
    acc += (op.evaluate(theta) * unvectorize(v)).trace();
  }
  return acc / static_cast<double>(samples.size());
}

double min_eigenvalue(const Matrix4c& rho) {
  const Matrix4c h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double trace_norm(const Matrix4c& x) {
  Eigen::JacobiSVD<Matrix4c> svd(x);
  return svd.singularValues().sum();
}

EvolveOptions evolve_options(const SolverSettings& s, double gamma_ref) {
  EvolveOptions o;
  o.rtol = s.rtol;
  o.atol = s.atol;
  o.t_final = s.t_final_gamma / gamma_ref;
  o.max_time = s.max_time_factor * o.t_final;
  o.convergence_tol = s.convergence_tol;
  o.samples_per_period = s.samples_per_period;
  o.positivity_floor = s.positivity_floor;
  return o;
}

namespace {

using State = Eigen::Matrix<cplx, 2 * kLiouvilleDim, 1>;

class Rhs {
 public:
  Rhs(const SuperSeries& gen, double bias) : bias_(bias) {
    const double scale = std::max(gen.max_abs(), 1e-300);
    for (int m = -gen.k_max(); m <= gen.k_max(); ++m) {
      if (gen[m].cwiseAbs().maxCoeff() > 1e-15 * scale) {
        harmonics_.push_back(m);
        ops_.push_back(gen[m]);
      }
    }
  }

  // d/dt [rho, int rho] = [L(t) rho, rho]
  void operator()(double t, const State& y, State& dy) const {
    const LiouvilleVec rho = y.head<kLiouvilleDim>();
    LiouvilleVec out = LiouvilleVec::Zero();
    const double theta = bias_ * t;
    for (std::size_t i = 0; i < ops_.size(); ++i)
      out.noalias() += std::exp(kI * (harmonics_[i] * theta)) * (ops_[i] * rho);
    dy.head<kLiouvilleDim>() = out;
    dy.tail<kLiouvilleDim>() = rho;
  }

 private:
  double bias_;
  std::vector<int> harmonics_;
  std::vector<SuperOp> ops_;
};

// Dormand-Prince 5(4) with FSAL and standard step-size control.
class Dopri5 {
 public:
  Dopri5(const Rhs& f, double rtol, double atol) : f_(f), rtol_(rtol), atol_(atol) {}

  long steps = 0;
  long rejected = 0;

  // Advances y from t0 to exactly t1.
  void advance(State& y, double t0, double t1, double& h) {
    double t = t0;
    if (!fsal_valid_ || fsal_t_ != t0) {
      f_(t, y, k1_);
      fsal_valid_ = true;
    }
    while (t < t1) {
      bool last = false;
      double hs = h;
      if (t + hs >= t1 || t + 1.01 * hs >= t1) {
        hs = t1 - t;
        last = true;
      }
      State y_new, err;
      attempt(t, y, hs, y_new, err);
      double norm = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        const double sc = atol_ + rtol_ * std::max(std::abs(y(i)), std::abs(y_new(i)));
        const double r = std::abs(err(i)) / sc;
        norm += r * r;
      }
      norm = std::sqrt(norm / y.size());
      if (!std::isfinite(norm)) throw NumericalError("non-finite state during time evolution");
      if (norm <= 1.0) {
        ++steps;
        t = last ? t1 : t + hs;
        y = y_new;
        k1_ = k7_;
        const double fac = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        // Do not let a short final step shrink the running step size.
        if (!last || hs * fac > h) h = hs * fac;
      } else {
        ++rejected;
        h = hs * std::max(0.2, 0.9 * std::pow(norm, -0.2));
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
          throw NumericalError("step size underflow during time evolution");
      }
    }
    fsal_t_ = t1;
  }

 private:
  void attempt(double t, const State& y, double h, State& y_new, State& err) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    State tmp;
    tmp = y + h * a21 * k1_;
    f_(t + h / 5, tmp, k2_);
    tmp = y + h * (a31 * k1_ + a32 * k2_);
    f_(t + 3 * h / 10, tmp, k3_);
    tmp = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    f_(t + 4 * h / 5, tmp, k4_);
    tmp = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    f_(t + 8 * h / 9, tmp, k5_);
    tmp = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    f_(t + h, tmp, k6_);
    y_new = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    f_(t + h, y_new, k7_);
    err = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
  }

  const Rhs& f_;
  double rtol_, atol_;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_;
  bool fsal_valid_ = false;
  double fsal_t_ = 0.0;
};

Matrix4c rho_of(const State& y) { return unvectorize(y.head<kLiouvilleDim>()); }

}  // namespace

Trajectory evolve(const SuperSeries& generator, double bias, const Matrix4c& rho0,
                  const EvolveOptions& opt) {
  if (bias == 0.0) throw InvalidParameter("evolve needs a nonzero bias to define the period");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(rho0.trace() - 1.0) > 1e-10 || min_eigenvalue(rho0) < -1e-10)
    throw InvalidParameter("initial state must be a Hermitian, unit-trace, positive matrix");

  const double period = 2.0 * kPi / std::abs(bias);
  const Rhs rhs(generator, bias);
  Dopri5 integrator(rhs, opt.rtol, opt.atol);
  Trajectory traj;

  State y = State::Zero();
  y.head<kLiouvilleDim>() = vectorize(rho0);
  double t = 0.0;
  double h = period / 32.0;
  traj.times.push_back(t);
  traj.states.push_back(rho0);
  traj.min_eigenvalue = min_eigenvalue(rho0);

  auto watch = [&](const Matrix4c& rho) {
    const double e = min_eigenvalue(rho);
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, e);
    if (e < opt.positivity_floor) traj.positivity_breach = true;
  };

  double prev_diff = std::numeric_limits<double>::infinity();
  while (true) {
    y.tail<kLiouvilleDim>().setZero();
    integrator.advance(y, t, t + period, h);
    t += period;
    const Matrix4c rho = rho_of(y);
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.period_averages.push_back(unvectorize(y.tail<kLiouvilleDim>()) / period);
    watch(rho);

    const std::size_t n = traj.period_averages.size();
    if (n >= 2) {
      const double diff = trace_norm(traj.period_averages[n - 1] - traj.period_averages[n - 2]);
      const double ratio = diff / prev_diff;
      traj.residual = diff;
      traj.tail_estimate = ratio < 1.0 ? diff * ratio / (1.0 - ratio)
                                       : std::numeric_limits<double>::infinity();
      prev_diff = diff;
      if (t >= opt.t_final && diff < opt.convergence_tol && traj.tail_estimate < opt.convergence_tol) {
        traj.converged = true;
        break;
      }
    }
    if (t >= opt.max_time) break;
  }
  traj.periodicity = trace_norm(traj.states.back() - traj.states[traj.states.size() - 2]);

  const int ns = std::max(2, opt.samples_per_period);
  for (PeriodicState* ps : {&traj.previous_period, &traj.final_period}) {
    ps->bias = bias;
    ps->period = period;
    ps->t0 = t;
    ps->samples.reserve(ns);
    for (int j = 0; j < ns; ++j) {
      const double tj = t + period * (j + 1) / ns;
      ps->samples.push_back(rho_of(y));
      watch(ps->samples.back());
      double hs = std::min(h, period / ns);
      integrator.advance(y, ps->t0 + period * j / ns, tj, hs);
    }
    t += period;
  }
  traj.steps = integrator.steps;
  traj.rejected = integrator.rejected;
  return traj;
}

Matrix4c period_average(const Trajectory& traj, bool force) {
  if (!traj.converged && !force) {
    std::ostringstream os;
    os << "trajectory did not converge (period-average change " << traj.residual << ")";
    throw NumericalError(os.str());
  }
  return traj.final_period.average();
}

int default_m_max(int generator_support, int k_max) {
  return std::min(generator_support + 4, 2 * k_max + 4);
}

PeriodicState periodic_steady_state_fourier(const SuperSeries& generator, double bias, int m_max,
                                            int samples_per_period, FourierSolveInfo* info) {
  if (bias == 0.0) throw InvalidParameter("Fourier steady state needs a nonzero bias");
  if (m_max < 0) throw InvalidParameter("m_max must be >= 0");
  const int nb = 2 * m_max + 1;
  const int n = kLiouvilleDim * nb;
  const double scale = std::max(generator.max_abs(), 1e-300);
  std::vector<Eigen::Triplet<cplx>> trip;
  auto block = [&](int m) { return (m + m_max) * kLiouvilleDim; };
  for (int m = -m_max; m <= m_max; ++m) {
    for (int mp = -m_max; mp <= m_max; ++mp) {
      const int d = m - mp;
      if (!generator.contains(d)) continue;
      const SuperOp& l = generator[d];
      if (l.cwiseAbs().maxCoeff() <= 1e-16 * scale) continue;
      for (int c = 0; c < kLiouvilleDim; ++c)
        for (int r = 0; r < kLiouvilleDim; ++r) {
          if (m == 0 && r == 0) continue;
          const cplx v = l(r, c);
          if (v != 0.0) trip.emplace_back(block(m) + r, block(mp) + c, v);
        }
    }
    if (m != 0)
      for (int r = 0; r < kLiouvilleDim; ++r)
        trip.emplace_back(block(m) + r, block(m) + r, -kI * (m * bias));
  }
  for (int a = 0; a < kDotDim; ++a) trip.emplace_back(block(0), block(0) + a + kDotDim * a, 1.0);

  Eigen::SparseMatrix<cplx> mat(n, n);
  mat.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(block(0)) = 1.0;

  // Near the subgap regime the zero-harmonic block is almost singular and only
  // the weak harmonic couplings fix the steady state, so the sparse solution is
  // refined and checked before it is trusted.
  auto rel_residual = [&](const Eigen::VectorXcd& x) {
    if (!x.allFinite()) return std::numeric_limits<double>::infinity();
    return (mat * x - rhs).cwiseAbs().maxCoeff() / (1.0 + scale * x.cwiseAbs().maxCoeff());
  };
  Eigen::VectorXcd x;
  bool accepted = false;
  bool degenerate = false;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(mat);
  if (lu.info() == Eigen::Success) {
    x = lu.solve(rhs);
    for (int it = 0; it < 4 && x.allFinite() && rel_residual(x) > 1e-14; ++it)
      x += lu.solve(rhs - mat * x);
    // Fourier components of a density matrix are bounded by one; a huge
    // solution means the pivots were noise on a singular system.
    accepted = rel_residual(x) <= 1e-12 && x.cwiseAbs().maxCoeff() <= 4.0;
  }
  if (!accepted) {
    const Eigen::MatrixXcd dense = mat;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(dense);
    cod.setThreshold(1e-11);
    x = cod.solve(rhs);
    degenerate = cod.rank() < n;
  }

  if (info) {
    info->m_max = m_max;
    info->unknowns = n;
    info->degenerate = degenerate;
    info->residual = (mat * x - rhs).cwiseAbs().maxCoeff();
  }

  PeriodicState ps;
  ps.bias = bias;
  ps.period = 2.0 * kPi / std::abs(bias);
  ps.t0 = 0.0;
  const int ns = std::max(2, samples_per_period);
  ps.samples.resize(ns);
  for (int j = 0; j < ns; ++j) {
    const double theta = bias * ps.time(j);
    LiouvilleVec v = LiouvilleVec::Zero();
    for (int m = -m_max; m <= m_max; ++m)
      v += std::exp(kI * (m * theta)) * x.segment<kLiouvilleDim>(block(m));
    ps.samples[j] = unvectorize(v);
  }
  return ps;
}

Matrix4c static_steady_state(const SuperOp& generator, bool* degenerate) {
  SuperOp a = generator;
  LiouvilleVec b = LiouvilleVec::Zero();
  a.row(0).setZero();
  for (int k = 0; k < kDotDim; ++k) a(0, k + kDotDim * k) = 1.0;
  b(0) = 1.0;
  Eigen::FullPivLU<SuperOp> lu(a);
  lu.setThreshold(1e-11);
  LiouvilleVec x;
  const bool singular = lu.rank() < kLiouvilleDim;
  if (!singular) {
    x = lu.solve(b);
  } else {
    Eigen::CompleteOrthogonalDecomposition<SuperOp> cod(a);
    cod.setThreshold(1e-11);
    x = cod.solve(b);
  }
  if (degenerate) *degenerate = singular;
  return unvectorize(x);
}

}  // namespace mardot
