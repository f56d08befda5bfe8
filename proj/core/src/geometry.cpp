#include "discwitness/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discwitness/error.hpp"
#include "discwitness/quadrature.hpp"

namespace discwitness {
namespace {

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

SupportJet center_jet(Vec2 c, double theta) {
  const double co = std::cos(theta), si = std::sin(theta);
  return {c.x * co + c.y * si, -c.x * si + c.y * co, -(c.x * co + c.y * si)};
}

struct JetVisitor {
  double theta;

  SupportJet operator()(const CircleSpec& s) const {
    SupportJet j = center_jet(s.center, theta);
    j.h += s.radius;
    return j;
  }

  SupportJet operator()(const EllipseSpec& s) const {
    const double psi = theta - s.rotation;
    const double a2 = s.a * s.a, b2 = s.b * s.b;
    const double p = 0.5 * (a2 + b2) + 0.5 * (a2 - b2) * std::cos(2.0 * psi);
    const double p1 = (b2 - a2) * std::sin(2.0 * psi);
    const double p2 = 2.0 * (b2 - a2) * std::cos(2.0 * psi);
    const double hh = std::sqrt(p);
    SupportJet j = center_jet(s.center, theta);
    j.h += hh;
    j.d1 += p1 / (2.0 * hh);
    j.d2 += p2 / (2.0 * hh) - p1 * p1 / (4.0 * hh * hh * hh);
    return j;
  }

  SupportJet operator()(const FourierSpec& s) const {
    SupportJet j{s.a0, 0.0, 0.0};
    const std::size_t n = std::max(s.cos.size(), s.sin.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(i + 1);
      const double c = i < s.cos.size() ? s.cos[i] : 0.0;
      const double d = i < s.sin.size() ? s.sin[i] : 0.0;
      if (c == 0.0 && d == 0.0) continue;
      const double co = std::cos(k * theta), si = std::sin(k * theta);
      j.h += c * co + d * si;
      j.d1 += k * (-c * si + d * co);
      j.d2 += -k * k * (c * co + d * si);
    }
    return j;
  }
};

bool finite(double v) { return std::isfinite(v); }

void check_well_formed(const ShapeSpec& spec) {
  const auto fail = [](const std::string& what) { throw Error(Errc::MalformedSpec, what); };
  if (const auto* c = std::get_if<CircleSpec>(&spec)) {
    if (!finite(c->center.x) || !finite(c->center.y) || !finite(c->radius))
      fail("circle fields must be finite");
    if (!(c->radius > 0.0)) fail("circle radius must be positive");
  } else if (const auto* e = std::get_if<EllipseSpec>(&spec)) {
    if (!finite(e->a) || !finite(e->b) || !finite(e->center.x) || !finite(e->center.y) ||
        !finite(e->rotation))
      fail("ellipse fields must be finite");
    if (!(e->a > 0.0) || !(e->b > 0.0)) fail("ellipse semi-axes must be positive");
  } else {
    const auto& f = std::get<FourierSpec>(spec);
    if (!finite(f.a0)) fail("a0 must be finite");
    for (double v : f.cos)
      if (!finite(v)) fail("cosine coefficients must be finite");
    for (double v : f.sin)
      if (!finite(v)) fail("sine coefficients must be finite");
  }
}

int validation_samples(const ShapeSpec& spec) {
  if (const auto* f = std::get_if<FourierSpec>(&spec)) {
    const auto k = std::max(f->cos.size(), f->sin.size());
    return std::max<int>(4096, static_cast<int>(128 * k));
  }
  return 4096;
}

}  // namespace

RhoMinimum scan_min_radius_of_curvature(const ShapeSpec& spec, int samples) {
  RhoMinimum best{0.0, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < samples; ++i) {
    const double theta = kTwoPi * i / samples;
    const double rho = std::visit(JetVisitor{theta}, spec).radius_of_curvature();
    if (rho < best.rho) best = {theta, rho};
  }
  return best;
}

SupportCurve SupportCurve::build(ShapeSpec spec, double margin) {
  check_well_formed(spec);
  if (!(margin >= 0.0) || !finite(margin))
    throw Error(Errc::MalformedSpec, "convexity margin must be a non-negative number");
  const RhoMinimum minimum = scan_min_radius_of_curvature(spec, validation_samples(spec));
  if (!(minimum.rho > margin)) throw NotStrictlyConvex(minimum.theta, minimum.rho, margin);
  return SupportCurve(std::move(spec), margin, minimum.rho);
}

SupportCurve build_curve(ShapeSpec spec, double margin) {
  return SupportCurve::build(std::move(spec), margin);
}

SupportJet SupportCurve::support(double theta) const { return std::visit(JetVisitor{theta}, spec_); }

Vec2 SupportCurve::position(double theta) const {
  const SupportJet j = support(theta);
  const double co = std::cos(theta), si = std::sin(theta);
  return {j.h * co - j.d1 * si, j.h * si + j.d1 * co};
}

SupportCurve SupportCurve::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(Errc::InvalidArgument, "scale factor must be positive");
  ShapeSpec spec = std::visit(
      [factor](auto s) -> ShapeSpec {
        using T = decltype(s);
        if constexpr (std::is_same_v<T, CircleSpec>) {
          s.center = factor * s.center;
          s.radius *= factor;
        } else if constexpr (std::is_same_v<T, EllipseSpec>) {
          s.center = factor * s.center;
          s.a *= factor;
          s.b *= factor;
        } else {
          s.a0 *= factor;
          for (auto& v : s.cos) v *= factor;
          for (auto& v : s.sin) v *= factor;
        }
        return s;
      },
      spec_);
  return SupportCurve(std::move(spec), margin_ * factor, min_rho_ * factor);
}

SupportCurve SupportCurve::translated(Vec2 offset) const {
  ShapeSpec spec = std::visit(
      [offset](auto s) -> ShapeSpec {
        using T = decltype(s);
        if constexpr (std::is_same_v<T, FourierSpec>) {
          // A translation adds offset . u(theta), i.e. the first harmonic.
          if (s.cos.empty()) s.cos.resize(1, 0.0);
          if (s.sin.empty()) s.sin.resize(1, 0.0);
          s.cos[0] += offset.x;
          s.sin[0] += offset.y;
        } else {
          s.center = s.center + offset;
        }
        return s;
      },
      spec_);
  return SupportCurve(std::move(spec), margin_, min_rho_);
}

double arclength(const SupportCurve& curve, double theta0, double theta1) {
  if (!(theta1 >= theta0) || theta1 - theta0 > kTwoPi * (1.0 + 1e-15))
    throw Error(Errc::InvalidArgument, "arclength requires theta0 <= theta1 <= theta0 + 2pi");
  if (theta1 == theta0) return 0.0;
  const auto rho = [&curve](double t) { return curve.radius_of_curvature(t); };
  quad::Options opts;
  // 50 eps per panel is the roundoff floor of the error estimate.
  opts.epsrel = 5e-14;
  opts.epsabs = 1e-15;
  const auto r = quad::integrate<double>(rho, theta0, theta1, opts);
  if (!r.converged && r.error > 1e-12 * std::abs(r.value))
    throw Error(Errc::QuadratureNoConvergence, "arclength quadrature");
  return r.value;
}

double perimeter(const SupportCurve& curve) { return arclength(curve, 0.0, kTwoPi); }

BoundaryPoint point_at(const SupportCurve& curve, double theta) {
  const double t = wrap_angle(theta);
  const SupportJet j = curve.support(t);
  BoundaryPoint p;
  p.theta = t;
  p.position = curve.position(t);
  p.tangent = {-std::sin(t), std::cos(t)};
  p.inward_normal = {-std::cos(t), -std::sin(t)};
  p.radius_of_curvature = j.radius_of_curvature();
  p.curvature = 1.0 / p.radius_of_curvature;
  p.arclength = arclength(curve, 0.0, t);
  return p;
}

AntipodalPair antipodal(const SupportCurve& curve, double theta) {
  AntipodalPair pair;
  pair.s_point = point_at(curve, theta);
  pair.q_point = point_at(curve, pair.s_point.theta + kPi);
  pair.width = curve.h(pair.s_point.theta) + curve.h(pair.s_point.theta + kPi);
  pair.chord_tangent = dot(pair.q_point.position - pair.s_point.position, pair.s_point.tangent);
  pair.dq_ds = pair.q_point.radius_of_curvature / pair.s_point.radius_of_curvature;
  return pair;
}

ChordChart::ChordChart(SupportCurve curve, double frame_angle)
    : curve_(std::move(curve)), frame_angle_(frame_angle) {
  b_ = frame_support(0.0).h;
  a_ = -frame_support(kPi).h;
  x1_ = find_extremum(true);
  x2_ = find_extremum(false);
  const GraphJet f = upper(x1_);
  const GraphJet g = lower(x2_);
  f_x1_ = f.value;
  g_x2_ = g.value;
  f_pp_x1_ = f.d2;
  g_pp_x2_ = g.d2;
  if (!(f_pp_x1_ < 0.0) || !(g_pp_x2_ > 0.0))
    throw Error(Errc::ExtremumNotFound, "chart extremum is degenerate");
}

Vec2 ChordChart::frame_position(double phi) const {
  const SupportJet j = frame_support(phi);
  const double co = std::cos(phi), si = std::sin(phi);
  return {j.h * co - j.d1 * si, j.h * si + j.d1 * co};
}

double ChordChart::invert(double x, double lo, double hi) const {
  // X(phi) is strictly monotone on [lo, hi]; keep a sign bracket and take Newton
  // steps while they stay inside it.
  const auto residual = [&](double phi) { return frame_position(phi).x - x; };
  double r_lo = residual(lo);
  if (r_lo == 0.0) return lo;
  double r_hi = residual(hi);
  if (r_hi == 0.0) return hi;
  if ((r_lo > 0.0) == (r_hi > 0.0)) {
    // Outside [a, b] up to rounding: clamp to the nearer endpoint.
    return std::abs(r_lo) < std::abs(r_hi) ? lo : hi;
  }
  const double span = b_ - a_;
  double t = std::clamp(2.0 * (x - a_) / span - 1.0, -1.0, 1.0);
  double phi = lo < kPi ? std::acos(t) : kTwoPi - std::acos(t);
  phi = std::clamp(phi, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const SupportJet j = frame_support(phi);
    const double co = std::cos(phi), si = std::sin(phi);
    const double r = j.h * co - j.d1 * si - x;
    if (r == 0.0) return phi;
    if ((r > 0.0) == (r_lo > 0.0)) {
      lo = phi;
      r_lo = r;
    } else {
      hi = phi;
    }
    const double slope = -j.radius_of_curvature() * si;
    double next = slope != 0.0 ? phi - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - phi) <= 1e-16 * std::max(1.0, std::abs(phi)) || hi - lo <= 4e-16 * hi)
      return next;
    phi = next;
  }
  return phi;
}

double ChordChart::upper_angle(double x) const { return invert(x, 0.0, kPi); }
double ChordChart::lower_angle(double x) const { return invert(x, kPi, kTwoPi); }

GraphJet ChordChart::graph_at(double phi) const {
  const SupportJet j = frame_support(phi);
  const double co = std::cos(phi), si = std::sin(phi);
  GraphJet out;
  out.value = j.h * si + j.d1 * co;
  // dY/dphi = rho cos, dX/dphi = -rho sin.
  out.d1 = -co / si;
  out.d2 = -1.0 / (j.radius_of_curvature() * si * si * si);
  return out;
}

GraphJet ChordChart::upper(double x) const { return graph_at(upper_angle(x)); }
GraphJet ChordChart::lower(double x) const { return graph_at(lower_angle(x)); }

double ChordChart::find_extremum(bool is_upper) const {
  // f' runs from +inf at a to -inf at b; g' from -inf to +inf.
  const auto slope = [&](double x) {
    const GraphJet j = is_upper ? upper(x) : lower(x);
    return is_upper ? j : GraphJet{j.value, -j.d1, -j.d2};
  };
  double lo = a_, hi = b_;
  const double span = b_ - a_;
  for (int iter = 0; iter < 40 && hi - lo > 1e-6 * span; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid).d1 > 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const GraphJet j = slope(x);
    if (j.d1 == 0.0) return x;
    (j.d1 > 0.0 ? lo : hi) = x;
    double next = j.d2 < 0.0 ? x - j.d1 / j.d2 : 0.5 * (lo + hi);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4e-15 * std::max({1.0, span, std::abs(x)})) return x;
  }
  throw Error(Errc::ExtremumNotFound, is_upper ? "maximum of f" : "minimum of g");
}

ChordChart chord_chart(const SupportCurve& curve, double frame_angle) {
  return ChordChart(curve, frame_angle);
}

}  // namespace discwitness
