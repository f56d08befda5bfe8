#pragma once

#include <stdexcept>
#include <string>

namespace discwitness {

enum class Errc {
  MalformedSpec,
  NotStrictlyConvex,
  InvalidArgument,
  ExtremumNotFound,
  InvalidChart,
  QuadratureNoConvergence,
  OrderTooLarge,
  MaxOnBoundary,
  DegenerateMax,
  Infeasible,
  NoFeasibleStart,
};

const char* to_string(Errc code);

/// Validation errors describe bad input; everything else is a numerical failure.
bool is_validation_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised when h + h'' drops to the convexity margin or below.
class NotStrictlyConvex : public Error {
 public:
  NotStrictlyConvex(double theta, double radius_of_curvature, double margin);
  double theta() const noexcept { return theta_; }
  double radius_of_curvature() const noexcept { return rho_; }

 private:
  double theta_;
  double rho_;
};

}  // namespace discwitness
