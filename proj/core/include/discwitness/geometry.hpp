#pragma once

#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

namespace discwitness {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default lower bound on the radius of curvature h + h''.
inline constexpr double kDefaultConvexityMargin = 1e-3;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Outward unit normal u(theta) = (cos theta, sin theta).
inline Vec2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Shape descriptions accepted by build_curve.
struct CircleSpec {
  Vec2 center;
  double radius = 1.0;
};

struct EllipseSpec {
  double a = 1.0;  ///< semi-axis along the rotated x direction
  double b = 1.0;
  Vec2 center;
  double rotation = 0.0;  ///< radians
};

/// h(theta) = a0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta).
struct FourierSpec {
  double a0 = 1.0;
  std::vector<double> cos;
  std::vector<double> sin;
};

using ShapeSpec = std::variant<CircleSpec, EllipseSpec, FourierSpec>;

/// Support function value and its first two theta derivatives.
struct SupportJet {
  double h = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  double radius_of_curvature() const { return h + d2; }
};

/// Strictly convex closed curve described by its support function h(theta),
/// theta being the outward-normal angle. Immutable once built.
class SupportCurve {
 public:
  /// Validates strict convexity on a dense grid; throws NotStrictlyConvex or MalformedSpec.
  static SupportCurve build(ShapeSpec spec, double margin = kDefaultConvexityMargin);

  SupportJet support(double theta) const;
  double h(double theta) const { return support(theta).h; }
  double radius_of_curvature(double theta) const { return support(theta).radius_of_curvature(); }

  /// Boundary point with outward normal angle theta: r = h u + h' u'.
  Vec2 position(double theta) const;

  const ShapeSpec& spec() const { return spec_; }
  double margin() const { return margin_; }
  /// Smallest h + h'' seen on the validation grid.
  double min_radius_of_curvature() const { return min_rho_; }

  SupportCurve scaled(double factor) const;
  SupportCurve translated(Vec2 offset) const;

 private:
  SupportCurve(ShapeSpec spec, double margin, double min_rho)
      : spec_(std::move(spec)), margin_(margin), min_rho_(min_rho) {}

  ShapeSpec spec_;
  double margin_;
  double min_rho_;
};

/// Same as SupportCurve::build.
SupportCurve build_curve(ShapeSpec spec, double margin = kDefaultConvexityMargin);

/// Minimum of h + h'' over `samples` uniform angles, with the minimizing angle.
struct RhoMinimum {
  double theta;
  double rho;
};
RhoMinimum scan_min_radius_of_curvature(const ShapeSpec& spec, int samples);

struct BoundaryPoint {
  double theta = 0.0;  ///< outward-normal angle in [0, 2pi)
  Vec2 position;
  Vec2 tangent;        ///< counter-clockwise unit tangent u'(theta)
  Vec2 inward_normal;  ///< -u(theta)
  double curvature = 0.0;
  double radius_of_curvature = 0.0;
  double arclength = 0.0;  ///< measured from theta = 0
};

BoundaryPoint point_at(const SupportCurve& curve, double theta);

struct AntipodalPair {
  BoundaryPoint s_point;
  BoundaryPoint q_point;  ///< opposite tangent: normal angle theta + pi
  double width = 0.0;     ///< h(theta) + h(theta + pi)
  double chord_tangent = 0.0;  ///< w = (r(q) - r(s)) . t(s)
  double dq_ds = 0.0;     ///< rho(theta + pi) / rho(theta)
};

AntipodalPair antipodal(const SupportCurve& curve, double theta);

/// Width of the curve between the support lines with normals theta and theta + pi.
inline double width(const SupportCurve& curve, double theta) {
  return curve.h(theta) + curve.h(theta + kPi);
}

/// w(theta) = (r(theta + pi) - r(theta)) . u'(theta) = -(h'(theta) + h'(theta + pi)).
inline double chord_tangent_projection(const SupportCurve& curve, double theta) {
  return -(curve.support(theta).d1 + curve.support(theta + kPi).d1);
}

/// Arc length between normal angles theta0 <= theta1 <= theta0 + 2pi.
double arclength(const SupportCurve& curve, double theta0, double theta1);
double perimeter(const SupportCurve& curve);

/// Value, slope and second derivative of a chart graph at one abscissa.
struct GraphJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// The curve seen in a frame rotated by `frame_angle`: frame coordinates are
/// X = p . u(frame_angle), Y = p . u'(frame_angle). Over [a, b] the boundary
/// splits into an upper graph f (normal angles in (0, pi)) and a lower graph g
/// (normal angles in (pi, 2pi)), both measured in frame angles.
class ChordChart {
 public:
  ChordChart(SupportCurve curve, double frame_angle);

  double frame_angle() const { return frame_angle_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }
  double f_x1() const { return f_x1_; }
  double g_x2() const { return g_x2_; }
  double f_pp_x1() const { return f_pp_x1_; }
  double g_pp_x2() const { return g_pp_x2_; }

  /// f(x) with analytic derivatives via the chain rule through the normal angle.
  GraphJet upper(double x) const;
  GraphJet lower(double x) const;

  /// Frame normal angle of the upper-arc point above x, in [0, pi].
  double upper_angle(double x) const;
  /// Frame normal angle of the lower-arc point below x, in [pi, 2pi].
  double lower_angle(double x) const;

  /// Support data in frame angles: h_frame(phi) = h(phi + frame_angle).
  SupportJet frame_support(double phi) const { return curve_.support(phi + frame_angle_); }
  /// Frame coordinates of the boundary point with frame normal angle phi.
  Vec2 frame_position(double phi) const;

  /// f(x1) > 0 > g(x2); holds when the origin lies strictly inside the chart's y-slab.
  bool straddles_origin() const { return f_x1_ > 0.0 && g_x2_ < 0.0; }

  const SupportCurve& curve() const { return curve_; }

 private:
  double invert(double x, double lo, double hi) const;
  GraphJet graph_at(double phi) const;
  double find_extremum(bool upper) const;

  SupportCurve curve_;
  double frame_angle_;
  double a_ = 0.0, b_ = 0.0;
  double x1_ = 0.0, x2_ = 0.0;
  double f_x1_ = 0.0, g_x2_ = 0.0;
  double f_pp_x1_ = 0.0, g_pp_x2_ = 0.0;
};

ChordChart chord_chart(const SupportCurve& curve, double frame_angle);

}  // namespace discwitness
