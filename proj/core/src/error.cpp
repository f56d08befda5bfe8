#include "discwitness/error.hpp"

#include <cstdio>

namespace discwitness {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::MalformedSpec: return "MalformedSpec";
    case Errc::NotStrictlyConvex: return "NotStrictlyConvex";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ExtremumNotFound: return "ExtremumNotFound";
    case Errc::InvalidChart: return "InvalidChart";
    case Errc::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case Errc::OrderTooLarge: return "OrderTooLarge";
    case Errc::MaxOnBoundary: return "MaxOnBoundary";
    case Errc::DegenerateMax: return "DegenerateMax";
    case Errc::Infeasible: return "Infeasible";
    case Errc::NoFeasibleStart: return "NoFeasibleStart";
  }
  return "Unknown";
}

bool is_validation_error(Errc code) {
  switch (code) {
    case Errc::MalformedSpec:
    case Errc::NotStrictlyConvex:
    case Errc::InvalidArgument:
    case Errc::OrderTooLarge:
    case Errc::Infeasible:
    case Errc::NoFeasibleStart:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {
std::string convexity_message(double theta, double rho, double margin) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "h + h'' = %.17g at theta = %.17g (margin %.3g)", rho, theta,
                margin);
  return buf;
}
}  // namespace

NotStrictlyConvex::NotStrictlyConvex(double theta, double radius_of_curvature, double margin)
    : Error(Errc::NotStrictlyConvex, convexity_message(theta, radius_of_curvature, margin)),
      theta_(theta),
      rho_(radius_of_curvature) {}

}  // namespace discwitness
