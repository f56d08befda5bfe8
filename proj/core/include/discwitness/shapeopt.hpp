#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "discwitness/geometry.hpp"

namespace discwitness {

/// Support-function coefficients searched by the optimizer.
///
/// a0 sets the scale only; every objective first rescales to mean width 2.
/// With pin_translation the first harmonics stay at zero.
struct ShapeVector {
  double a0 = 1.0;
  std::vector<double> cos;  ///< harmonics 1..K
  std::vector<double> sin;
  bool pin_translation = true;
  double margin = kDefaultConvexityMargin;

  int harmonics() const { return static_cast<int>(std::max(cos.size(), sin.size())); }
  FourierSpec to_spec() const { return {a0, cos, sin}; }

  /// Pads or truncates to K harmonics.
  static ShapeVector from_spec(const FourierSpec& spec, int harmonics, bool pin_translation = true);

  /// Coefficients the optimizer moves: harmonics 2..K (1..K when translation is free).
  std::vector<double> free_coordinates() const;
  void set_free_coordinates(std::span<const double> values);
};

/// Minimum of h + h'' on the objective grid.
double min_radius_of_curvature(const ShapeVector& v);

/// Closed integral of (kappa L - 2)^2 ds after rescaling to mean width 2.
/// Throws Infeasible when min(h + h'') <= margin.
double objective_kl(const ShapeVector& v);

struct BracketObjective {
  double value = 0.0;
  bool vacuous = false;  ///< empty direction set
};

/// Sum over frame angles of |term_f - term_g|^2, each pair normalized by its
/// larger magnitude, with the first harmonics dropped (Steiner point at the
/// origin). Throws Infeasible.
BracketObjective objective_bracket(const ShapeVector& v, std::span<const double> directions, int m);

/// Relative spread of kappa (arc-length weighted) plus the relative RMS distance of
/// h from its best-fit circle (mean plus first harmonic).
double circle_distance(const ShapeVector& v);

enum class ObjectiveKind { KL, Bracket };

struct MinimizeOptions {
  int max_iter = 5000;
  std::uint64_t seed = 1;
  int restarts = 4;
  double target = 1e-12;
  double initial_step = 0.05;
  double min_diameter = 1e-10;
  std::vector<double> directions;  ///< bracket objective only; empty means 8 evenly spaced
  int m = 50;                      ///< bracket objective only
};

struct TraceEntry {
  int iter = 0;
  double objective = 0.0;
  double circle_distance = 0.0;
  double min_rho = 0.0;
};

struct OptResult {
  ShapeVector best;
  double objective = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> trace;  ///< best vertex after each iteration
  double circle_distance = 0.0;
  std::string stop_reason;
};

/// Nelder-Mead descent with a convexity penalty. Deterministic for a given seed.
/// Throws NoFeasibleStart.
OptResult minimize(const ShapeVector& start, ObjectiveKind objective, const MinimizeOptions& options);

}  // namespace discwitness
