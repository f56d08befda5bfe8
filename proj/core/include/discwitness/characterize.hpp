#pragma once

#include <optional>
#include <vector>

#include "discwitness/geometry.hpp"

namespace discwitness {

/// How far a chart is from the equal-height, equal-curvature, phase-locked state.
struct ConstraintResiduals {
  double height = 0.0;     ///< ||f(x1)| - |g(x2)||
  double curvature = 0.0;  ///< ||f''(x1)| - |g''(x2)||
  double phase = 0.0;      ///< distance from x1 - x2 to the nearest multiple of 2 pi
  long p_nearest = 0;
};

ConstraintResiduals constraint_residuals(const ChordChart& chart);

inline constexpr double kDefaultDiscTolerance = 1e-6;

enum class Verdict { Disc, NotDisc };
const char* to_string(Verdict verdict);

struct KLSample {
  double s = 0.0;
  double theta = 0.0;
  double curvature = 0.0;
  double width = 0.0;
  double kl = 0.0;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

struct KLReport {
  std::vector<KLSample> samples;
  double max_dev = 0.0;  ///< max |kappa L - 2|
  Verdict verdict = Verdict::NotDisc;
  std::optional<Circle> fitted_circle;  ///< only with a disc verdict
};

/// kappa * L on a uniform grid of normal angles; requires sample_count >= 16.
KLReport kl_profile(const SupportCurve& curve, int sample_count,
                    double tol = kDefaultDiscTolerance);

/// min over theta of h(theta) - c . u(theta): the distance from c to the nearest
/// support line (negative when c lies outside).
double support_clearance(const SupportCurve& curve, Vec2 center);

/// Chebyshev center and radius: the largest disc inside the curve.
Circle inscribed_disc(const SupportCurve& curve);

struct WitnessInequalities {
  double width_dir = 0.0;
  double two_r = 0.0;
  double two_rho = 0.0;
  bool width_exceeds_diameter = false;  ///< width_dir > two_r
  bool curvature_radius_within = false;  ///< two_rho <= two_r
};

/// A boundary point outside the inscribed disc K together with the support line
/// orthogonal to the ray from K's center through it.
struct Witness {
  Circle inscribed;
  Vec2 x_outside;      ///< boundary point outside K that fixes the ray direction
  double theta_prime = 0.0;  ///< normal angle of the orthogonal support line
  Vec2 x_prime;        ///< its tangency point
  double rho = 0.0;    ///< radius of curvature at x_prime
  WitnessInequalities inequalities;
};

/// None when the curve coincides with its inscribed disc within `tol`.
std::optional<Witness> lemma2_witness(const SupportCurve& curve, double tol = 1e-8,
                                      int grid = 720);

struct IdentitySample {
  double s = 0.0;
  double theta = 0.0;
  double w = 0.0;  ///< (r(q) - r(s)) . t(s)
  double curvature = 0.0;
  double width = 0.0;
  double dq_ds = 0.0;
  double dw_ds = 0.0;  ///< central difference in arc length
  double dwidth_ds = 0.0;
  double residual_w = 0.0;      ///< |w' - (kappa L - 1 - dq/ds)|
  double residual_width = 0.0;  ///< |L' + kappa w|
};

struct IdentityResiduals {
  double step = 0.0;
  std::vector<IdentitySample> samples;
  double max_residual_w = 0.0;
  double max_residual_width = 0.0;
};

/// Checks w' = kappa L - 1 - dq/ds and L' = -kappa w by central differences in s.
IdentityResiduals identity_residuals(const SupportCurve& curve, int sample_count,
                                     double step = 1e-4);

struct PZeroReport {
  double total_curvature = 0.0;    ///< closed integral of kappa ds
  double width_derivative_integral = 0.0;  ///< closed integral of L'(s) ds
  double implied_p = 0.0;  ///< -(integral L') / (2 pi integral kappa)
  long p = 0;
  double max_abs_width_derivative = 0.0;
  double max_w_jump = 0.0;  ///< largest step of w / 2 pi between neighbouring grid angles
  bool periodic_forces_p_zero = false;
};

PZeroReport p_zero_check(const SupportCurve& curve);

}  // namespace discwitness
