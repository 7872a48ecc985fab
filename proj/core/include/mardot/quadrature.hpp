#pragma once

#include <functional>
#include <vector>

#include "mardot/types.hpp"

namespace mardot {

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double argument)
      : NumericalError(what), argument_(argument) {}
  /// The rate argument E whose integral failed to converge.
  double argument() const { return argument_; }

 private:
  double argument_;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration over [a, b]. Points in
/// `breaks` that fall strictly inside (a, b) start as panel boundaries.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breaks = {}, const QuadratureOptions& opt = {});

}  // namespace mardot
