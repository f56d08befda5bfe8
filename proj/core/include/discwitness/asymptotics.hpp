#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "discwitness/geometry.hpp"
#include "discwitness/scaled.hpp"

namespace discwitness {

/// Value and first two derivatives of a real phase function.
struct PhaseJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// integral_a^b amplitude(x) exp(lambda phase(x)) dx with a non-degenerate interior maximum.
struct LaplaceProblem {
  std::function<std::complex<double>(double)> amplitude;
  std::function<PhaseJet(double)> phase;
  double lambda = 1.0;
  double a = 0.0;
  double b = 1.0;
};

struct InteriorMax {
  double xi = 0.0;
  double value = 0.0;  ///< S(xi)
  double d2 = 0.0;     ///< S''(xi) < 0
};

/// Golden-section bracketing then Newton on S'. Throws MaxOnBoundary or DegenerateMax.
InteriorMax find_interior_max(const std::function<PhaseJet(double)>& phase, double a, double b);

/// (2 pi / (lambda |S''(xi)|))^{1/2} amplitude(xi) exp(lambda S(xi)).
ScaledComplex laplace_leading(const LaplaceProblem& problem);

/// The integral itself by adaptive quadrature, scaled by exp(lambda S(xi)).
ScaledComplex laplace_integral(const LaplaceProblem& problem);

/// Leading Laplace terms of the two arcs for half-order m (2m = n + 1).
struct BracketTerm {
  int m = 1;
  ScaledComplex term_f;  ///< exp(i x1 + 2m ln|f(x1)|) (pi |f(x1)| / (m |f''(x1)|))^{1/2}
  ScaledComplex term_g;
  ScaledComplex bracket;  ///< term_f - term_g
};

BracketTerm bracket_main_term(const ChordChart& chart, int m);

/// Laplace problem for exp(i x) |f(x)|^{2m} on the upper (or lower) arc, restricted
/// to where |f| >= 1e-8 |f(extremum)|. The returned callables reference `chart`.
LaplaceProblem arc_laplace_problem(const ChordChart& chart, bool upper, int m);

struct RatioRow {
  int m = 0;
  std::complex<double> ratio_f;
  std::complex<double> ratio_g;
  std::optional<std::complex<double>> combined;  ///< empty when the bracket vanishes
  double ratio_f_abs_err = 0.0;
  double ratio_g_abs_err = 0.0;
  std::optional<double> combined_abs_err;
};

/// Convergence of the true arc integrals and chord moment to their leading terms.
/// m_list must be ascending with m >= 10.
std::vector<RatioRow> asymptotic_ratio(const SupportCurve& curve, double frame_angle,
                                       std::span<const int> m_list);

}  // namespace discwitness
