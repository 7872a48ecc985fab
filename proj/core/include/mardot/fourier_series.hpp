#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "mardot/types.hpp"

namespace mardot {

/// A truncated harmonic series X(t) = sum_{|k| <= K} X_k e^{i k V t}, with
/// fixed-size Eigen matrix coefficients. The phase argument everywhere is
/// theta = V t.
template <class M>
class HarmonicSeries {
 public:
  HarmonicSeries() : HarmonicSeries(0) {}
  explicit HarmonicSeries(int k_max) : k_max_(k_max), coeffs_(2 * k_max + 1, M::Zero()) {}

  int k_max() const { return k_max_; }
  bool contains(int k) const { return std::abs(k) <= k_max_; }

  M& operator[](int k) { return coeffs_[k + k_max_]; }
  const M& operator[](int k) const { return coeffs_[k + k_max_]; }

  M coefficient_or_zero(int k) const { return contains(k) ? (*this)[k] : M::Zero(); }

  M evaluate(double theta) const {
    M out = M::Zero();
    for (int k = -k_max_; k <= k_max_; ++k) out += std::exp(kI * (k * theta)) * (*this)[k];
    return out;
  }

  /// (sum X_k e^{ik theta})^dagger = sum X_k^dagger e^{-ik theta}.
  HarmonicSeries adjoint() const {
    HarmonicSeries out(k_max_);
    for (int k = -k_max_; k <= k_max_; ++k) out[-k] = (*this)[k].adjoint();
    return out;
  }

  /// Multiplies by e^{i s theta}; the support grows by |s|.
  HarmonicSeries shifted(int s) const {
    HarmonicSeries out(k_max_ + std::abs(s));
    for (int k = -k_max_; k <= k_max_; ++k) out[k + s] = (*this)[k];
    return out;
  }

  HarmonicSeries& operator+=(const HarmonicSeries& o) {
    if (o.k_max_ > k_max_) *this = resized(o.k_max_);
    for (int k = -o.k_max_; k <= o.k_max_; ++k) (*this)[k] += o[k];
    return *this;
  }

  HarmonicSeries& operator*=(cplx s) {
    for (M& c : coeffs_) c *= s;
    return *this;
  }

  HarmonicSeries resized(int k_max) const {
    HarmonicSeries out(k_max);
    const int kk = std::min(k_max, k_max_);
    for (int k = -kk; k <= kk; ++k) out[k] = (*this)[k];
    return out;
  }

  /// Largest |k| whose coefficient has max-norm above floor (0 if none).
  int support(double floor) const {
    for (int k = k_max_; k > 0; --k)
      if ((*this)[k].cwiseAbs().maxCoeff() > floor || (*this)[-k].cwiseAbs().maxCoeff() > floor)
        return k;
    return 0;
  }

  double max_abs() const {
    double m = 0.0;
    for (const M& c : coeffs_) m = std::max(m, c.cwiseAbs().maxCoeff());
    return m;
  }

 private:
  int k_max_;
  std::vector<M> coeffs_;
};

/// Cauchy product: (A B)_m = sum_k A_k B_{m-k}.
template <class M>
HarmonicSeries<M> operator*(const HarmonicSeries<M>& a, const HarmonicSeries<M>& b) {
  HarmonicSeries<M> out(a.k_max() + b.k_max());
  for (int i = -a.k_max(); i <= a.k_max(); ++i)
    for (int j = -b.k_max(); j <= b.k_max(); ++j) out[i + j].noalias() += a[i] * b[j];
  return out;
}

template <class M>
HarmonicSeries<M> operator+(HarmonicSeries<M> a, const HarmonicSeries<M>& b) {
  a += b;
  return a;
}

using MatrixSeries = HarmonicSeries<Matrix4c>;
using SuperSeries = HarmonicSeries<SuperOp>;

}  // namespace mardot
