#include "mardot/floquet.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace mardot {

double drive_period(const JunctionParams& p) {
  const double v = p.bias();
  if (v == 0.0) throw InvalidParameter("bias V must be nonzero for the driven problem");
  return 2.0 * kPi / std::abs(v);
}

namespace {

// exp(-i X) for Hermitian X.
Matrix4c expm_hermitian(const Matrix4c& x) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(x);
  const Vector4c phases = (-kI * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// One Magnus-4 step from t to t + h.
Matrix4c magnus_step(const JunctionParams& p, double t, double h) {
  static const double c = std::sqrt(3.0) / 6.0;
  const Matrix4c h1 = hamiltonian_at(t + (0.5 - c) * h, p);
  const Matrix4c h2 = hamiltonian_at(t + (0.5 + c) * h, p);
  const Matrix4c comm = h2 * h1 - h1 * h2;
  Matrix4c x = 0.5 * h * (h1 + h2) - kI * (std::sqrt(3.0) * h * h / 12.0) * comm;
  x = 0.5 * (x + x.adjoint()).eval();
  return expm_hermitian(x);
}

}  // namespace

Matrix4c propagator_over_period(const JunctionParams& p, int n_steps) {
  validate(p);
  if (n_steps < 1) throw InvalidParameter("n_steps must be >= 1");
  const double period = drive_period(p);
  const double h = period / n_steps;
  Matrix4c u = Matrix4c::Identity();
  for (int n = 0; n < n_steps; ++n) u = magnus_step(p, n * h, h) * u;
  return u;
}

PeriodPropagation propagate_period(const JunctionParams& p, int n_steps, int n_grid) {
  validate(p);
  if (n_steps < 1 || n_grid < 2) throw InvalidParameter("need n_steps >= 1 and n_grid >= 2");
  const double period = drive_period(p);
  const int per_cell = (n_steps + n_grid - 1) / n_grid;
  const double h = period / (static_cast<double>(per_cell) * n_grid);
  PeriodPropagation out;
  out.u_grid.reserve(n_grid);
  Matrix4c u = Matrix4c::Identity();
  long step = 0;
  for (int j = 0; j < n_grid; ++j) {
    out.u_grid.push_back(u);
    for (int s = 0; s < per_cell; ++s, ++step) u = magnus_step(p, step * h, h) * u;
  }
  out.u_period = u;
  return out;
}

namespace {

// Connected components of the graph with an edge wherever |U_ij| is non-negligible.
std::vector<std::vector<int>> coupled_blocks(const Matrix4c& u) {
  std::array<int, kDotDim> label{};
  label.fill(-1);
  std::vector<std::vector<int>> blocks;
  for (int seed = 0; seed < kDotDim; ++seed) {
    if (label[seed] >= 0) continue;
    const int id = static_cast<int>(blocks.size());
    blocks.emplace_back();
    std::vector<int> stack{seed};
    label[seed] = id;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      blocks[id].push_back(i);
      for (int j = 0; j < kDotDim; ++j) {
        if (label[j] < 0 && (std::abs(u(i, j)) > 1e-12 || std::abs(u(j, i)) > 1e-12)) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
    std::sort(blocks[id].begin(), blocks[id].end());
  }
  return blocks;
}

double fold(double e, double period) {
  const double zone = 2.0 * kPi / period;
  double f = std::remainder(e, zone);
  if (f >= 0.5 * zone) f -= zone;
  return f;
}

}  // namespace

QuasienergyModes quasienergies_and_modes(const Matrix4c& u_period, double period) {
  if (!(period > 0.0)) throw InvalidParameter("period must be positive");
  std::vector<Vector4c> vecs;
  std::vector<cplx> vals;
  for (const auto& block : coupled_blocks(u_period)) {
    const int n = static_cast<int>(block.size());
    Eigen::MatrixXcd sub(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sub(i, j) = u_period(block[i], block[j]);
    const cplx mean = sub.trace() / static_cast<double>(n);
    const bool scalar =
        (sub - mean * Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12;
    Eigen::MatrixXcd evecs;
    Eigen::VectorXcd evals;
    if (scalar) {
      evecs = Eigen::MatrixXcd::Identity(n, n);
      evals = Eigen::VectorXcd::Constant(n, mean);
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sub);
      if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition of U(T) failed");
      evecs = es.eigenvectors();
      evals = es.eigenvalues();
    }
    for (int c = 0; c < n; ++c) {
      Vector4c v = Vector4c::Zero();
      for (int i = 0; i < n; ++i) v(block[i]) = evecs(i, c);
      vecs.push_back(v.normalized());
      vals.push_back(evals(c));
    }
  }

  QuasienergyModes out;
  Matrix4c raw;
  for (int a = 0; a < kDotDim; ++a) raw.col(a) = vecs[a];
  out.gram_determinant = std::abs((raw.adjoint() * raw).determinant());
  out.ill_conditioned = out.gram_determinant < kGramThreshold;

  // Gram-Schmidt in the given order.
  for (int a = 0; a < kDotDim; ++a) {
    for (int b = 0; b < a; ++b) vecs[a] -= vecs[b].dot(vecs[a]) * vecs[b];
    vecs[a].normalize();
  }

  std::array<bool, kDotDim> used{};
  for (int bare = 0; bare < kDotDim; ++bare) {
    int best = -1;
    double best_overlap = -1.0;
    for (int m = 0; m < kDotDim; ++m) {
      if (used[m]) continue;
      const double ov = std::abs(vecs[m](bare));
      if (ov > best_overlap + 1e-12) {
        best_overlap = ov;
        best = m;
      }
    }
    used[best] = true;
    Vector4c v = vecs[best];
    if (std::abs(v(bare)) > 0.0) v *= std::conj(v(bare)) / std::abs(v(bare));
    out.modes.col(bare) = v;
    out.energies[bare] = fold(-std::arg(vals[best]) / period, period);
  }
  return out;
}

std::vector<Matrix4c> modes_on_grid(const PeriodPropagation& prop, const QuasienergyModes& qm,
                                    double period) {
  const int n = static_cast<int>(prop.u_grid.size());
  std::vector<Matrix4c> grid(n);
  for (int j = 0; j < n; ++j) {
    const double t = period * j / n;
    Vector4c ph;
    for (int a = 0; a < kDotDim; ++a) ph(a) = std::exp(kI * (qm.energies[a] * t));
    grid[j] = prop.u_grid[j] * qm.modes * ph.asDiagonal();
  }
  return grid;
}

FourierTable fourier_components(const Matrix4c& op, const std::vector<Matrix4c>& mode_grid,
                                int k_max, int bias_sign) {
  const int n = static_cast<int>(mode_grid.size());
  if (n < 2 * k_max + 1) throw InvalidParameter("mode grid too coarse for the requested k_max");
  FourierTable out{MatrixSeries(k_max), 0.0};
  Eigen::Matrix<double, kDotDim, kDotDim> power = Eigen::Matrix<double, kDotDim, kDotDim>::Zero();
  std::vector<cplx> twiddle(n);
  for (int j = 0; j < n; ++j) twiddle[j] = std::exp(-kI * (2.0 * kPi * bias_sign * j / n));
  for (int j = 0; j < n; ++j) {
    const Matrix4c f = mode_grid[j].adjoint() * op * mode_grid[j];
    power += f.cwiseAbs2();
    // e^{-i k theta_j} = twiddle[j]^k with the exponent reduced mod n
    for (int k = -k_max; k <= k_max; ++k) {
      const long idx = ((static_cast<long>(k) * j) % n + n) % n;
      out.series[k] += twiddle[idx] * f;
    }
  }
  const double inv = 1.0 / n;
  out.series *= inv;
  power *= inv;
  for (int k = -k_max; k <= k_max; ++k) power -= out.series[k].cwiseAbs2();
  out.tail_weight = std::max(0.0, power.maxCoeff());
  return out;
}

MatrixSeries FloquetBasis::transform(const Matrix4c& op) const {
  return fourier_components(op, mode_grid, k_max, bias_sign()).series;
}

FloquetBasis build_floquet_basis(const JunctionParams& p, const SolverSettings& s) {
  validate(p);
  if (s.k_max < 0) throw InvalidParameter("k_max must be >= 0");
  FloquetBasis fb;
  fb.bias = p.bias();
  fb.period = drive_period(p);
  fb.k_max = s.k_max;

  const PeriodPropagation prop = propagate_period(p, s.n_steps, s.n_grid);
  fb.unitarity_defect =
      (prop.u_period.adjoint() * prop.u_period - Matrix4c::Identity()).cwiseAbs().maxCoeff();
  const QuasienergyModes qm = quasienergies_and_modes(prop.u_period, fb.period);
  fb.quasienergies = qm.energies;
  fb.modes0 = qm.modes;
  fb.gram_determinant = qm.gram_determinant;
  fb.ill_conditioned = qm.ill_conditioned;
  if (qm.ill_conditioned) {
    std::ostringstream os;
    os << "ill-conditioned Floquet eigenbasis (Gram determinant " << qm.gram_determinant << ")";
    fb.warnings.push_back(os.str());
  }
  fb.mode_grid = modes_on_grid(prop, qm, fb.period);

  Vector4c ph;
  for (int a = 0; a < kDotDim; ++a) ph(a) = std::exp(kI * (qm.energies[a] * fb.period));
  const Matrix4c wrapped = prop.u_period * qm.modes * ph.asDiagonal();
  fb.periodicity_residual = (wrapped - qm.modes).colwise().norm().maxCoeff();

  const int sgn = fb.bias_sign();
  auto table = [&](const Matrix4c& op) {
    FourierTable t = fourier_components(op, fb.mode_grid, s.k_max, sgn);
    fb.max_tail_weight = std::max(fb.max_tail_weight, t.tail_weight);
    return t.series;
  };
  fb.ops.c_down = table(ops::c_down());
  fb.ops.c_up = table(ops::c_up());
  fb.ops.number_down = table(ops::number_down());
  fb.ops.number_up = table(ops::number_up());
  fb.ops.number = fb.ops.number_down + fb.ops.number_up;
  fb.ops.pair_creation = table(ops::pair_creation());
  fb.ops.even_projector = table(ops::even_projector());
  if (fb.max_tail_weight > kTailWarning) {
    std::ostringstream os;
    os << "Fourier truncation at k_max=" << s.k_max << " leaves tail weight " << fb.max_tail_weight;
    fb.warnings.push_back(os.str());
  }
  return fb;
}

}  // namespace mardot
