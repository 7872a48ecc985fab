#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mardot {

using cplx = std::complex<double>;

// Dot Hilbert space is ordered {|0>, |dn>, |up>, |dn up>} everywhere.
inline constexpr int kDotDim = 4;
inline constexpr int kLiouvilleDim = kDotDim * kDotDim;

using Matrix4c = Eigen::Matrix<cplx, kDotDim, kDotDim>;
using Vector4c = Eigen::Matrix<cplx, kDotDim, 1>;
using SuperOp = Eigen::Matrix<cplx, kLiouvilleDim, kLiouvilleDim>;
using LiouvilleVec = Eigen::Matrix<cplx, kLiouvilleDim, 1>;

// Density matrices are plain 4x4 complex matrices; helpers in evolution.hpp
// check the Hermitian / unit-trace contract where it matters.
using DensityMatrix = Matrix4c;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

enum class Lead : std::size_t { left = 0, right = 1 };
inline constexpr std::array<Lead, 2> kLeads{Lead::left, Lead::right};

constexpr std::size_t index(Lead lead) { return static_cast<std::size_t>(lead); }
constexpr const char* lead_name(Lead lead) { return lead == Lead::left ? "L" : "R"; }

// Drive sign of lead l: exp(2 i V_l t) = exp(i sigma_l V t) with V_L = -V_R = V/2.
constexpr int drive_sign(Lead lead) { return lead == Lead::left ? +1 : -1; }

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Column-major vectorisation: vec(rho)[a + 4 b] = rho(a, b).
inline LiouvilleVec vectorize(const Matrix4c& rho) {
  return Eigen::Map<const LiouvilleVec>(rho.data());
}

inline Matrix4c unvectorize(const LiouvilleVec& v) {
  return Eigen::Map<const Matrix4c>(v.data());
}

}  // namespace mardot
