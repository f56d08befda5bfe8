#include "discwitness/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "discwitness/error.hpp"
#include "discwitness/quadrature.hpp"

namespace discwitness {
namespace {

constexpr double kGolden = 0.6180339887498949;

// Maximizes a unimodal function on [lo, hi] down to `tol`.
template <class F>
double golden_max(const F& fn, double lo, double hi, double tol) {
  double c = hi - kGolden * (hi - lo), d = lo + kGolden * (hi - lo);
  double fc = fn(c), fd = fn(d);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kGolden * (hi - lo);
      fc = fn(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kGolden * (hi - lo);
      fd = fn(d);
    }
  }
  return 0.5 * (lo + hi);
}

void require_samples(int sample_count) {
  if (sample_count < 16) throw Error(Errc::InvalidArgument, "sample_count must be >= 16");
}

}  // namespace

const char* to_string(Verdict verdict) { return verdict == Verdict::Disc ? "disc" : "not_disc"; }

ConstraintResiduals constraint_residuals(const ChordChart& chart) {
  ConstraintResiduals r;
  r.height = std::abs(std::abs(chart.f_x1()) - std::abs(chart.g_x2()));
  r.curvature = std::abs(std::abs(chart.f_pp_x1()) - std::abs(chart.g_pp_x2()));
  const double shift = chart.x1() - chart.x2();
  r.p_nearest = std::lround(shift / kTwoPi);
  r.phase = std::abs(shift - kTwoPi * static_cast<double>(r.p_nearest));
  return r;
}

KLReport kl_profile(const SupportCurve& curve, int sample_count, double tol) {
  require_samples(sample_count);
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  KLReport report;
  report.samples.reserve(sample_count);
  double s = 0.0, mean_h = 0.0, cx = 0.0, cy = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    const double theta = kTwoPi * k / sample_count;
    if (k > 0) s += arclength(curve, kTwoPi * (k - 1) / sample_count, theta);
    KLSample sample;
    sample.s = s;
    sample.theta = theta;
    sample.curvature = 1.0 / curve.radius_of_curvature(theta);
    sample.width = width(curve, theta);
    sample.kl = sample.curvature * sample.width;
    report.max_dev = std::max(report.max_dev, std::abs(sample.kl - 2.0));
    report.samples.push_back(sample);
    const double h = curve.h(theta);
    mean_h += h;
    cx += h * std::cos(theta);
    cy += h * std::sin(theta);
  }
  report.verdict = report.max_dev <= tol ? Verdict::Disc : Verdict::NotDisc;
  if (report.verdict == Verdict::Disc) {
    // A circle's support is r + c . u: the mean and the first harmonic.
    report.fitted_circle = Circle{{2.0 * cx / sample_count, 2.0 * cy / sample_count},
                                  mean_h / sample_count};
  }
  return report;
}

double support_clearance(const SupportCurve& curve, Vec2 center) {
  constexpr int kGrid = 720;
  constexpr int kRefined = 4;
  const auto clearance = [&](double t) { return curve.h(t) - dot(center, unit(t)); };
  double values[kGrid];
  for (int i = 0; i < kGrid; ++i) values[i] = clearance(kTwoPi * i / kGrid);
  // Grid local minima, lowest first.
  std::vector<std::pair<double, int>> minima;
  for (int i = 0; i < kGrid; ++i) {
    const double prev = values[(i + kGrid - 1) % kGrid], next = values[(i + 1) % kGrid];
    if (values[i] <= prev && values[i] <= next) minima.emplace_back(values[i], i);
  }
  std::partial_sort(minima.begin(), minima.begin() + std::min<std::size_t>(kRefined, minima.size()),
                    minima.end());
  double best = minima.front().first;
  const double step = kTwoPi / kGrid;
  for (std::size_t j = 0; j < minima.size() && j < static_cast<std::size_t>(kRefined); ++j) {
    const double t0 = step * minima[j].second;
    const double t = golden_max([&](double u) { return -clearance(u); }, t0 - step, t0 + step,
                                1e-12);
    best = std::min(best, clearance(t));
  }
  return best;
}

Circle inscribed_disc(const SupportCurve& curve) {
  // The clearance is concave in the center, so nested golden searches converge to
  // the max-min. The inner search must be tighter: the clearance has a kink in cy.
  const double x_lo = -curve.h(kPi), x_hi = curve.h(0.0);
  const double y_lo = -curve.h(1.5 * kPi), y_hi = curve.h(0.5 * kPi);
  const double span = std::max(x_hi - x_lo, y_hi - y_lo);
  const auto best_y = [&](double cx) {
    return golden_max([&](double cy) { return support_clearance(curve, {cx, cy}); }, y_lo, y_hi,
                      1e-14 * span);
  };
  const double cx = golden_max(
      [&](double x) { return support_clearance(curve, {x, best_y(x)}); }, x_lo, x_hi,
      1e-10 * span);
  const Vec2 center{cx, best_y(cx)};
  return {center, support_clearance(curve, center)};
}

std::optional<Witness> lemma2_witness(const SupportCurve& curve, double tol, int grid) {
  if (grid < 16) throw Error(Errc::InvalidArgument, "witness grid must have >= 16 points");
  const Circle k = inscribed_disc(curve);
  double max_gap = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = kTwoPi * i / grid;
    max_gap = std::max(max_gap, std::abs(curve.h(t) - dot(k.center, unit(t)) - k.radius));
  }
  if (max_gap <= tol) return std::nullopt;

  const auto distance = [&](double t) { return norm(curve.position(t) - k.center); };
  const auto build = [&](double t) {
    Witness w;
    w.inscribed = k;
    w.x_outside = curve.position(t);
    const Vec2 dir = w.x_outside - k.center;
    w.theta_prime = std::atan2(dir.y, dir.x);
    if (w.theta_prime < 0.0) w.theta_prime += kTwoPi;
    w.x_prime = curve.position(w.theta_prime);
    w.rho = curve.radius_of_curvature(w.theta_prime);
    auto& q = w.inequalities;
    q.width_dir = width(curve, w.theta_prime);
    q.two_r = 2.0 * k.radius;
    q.two_rho = 2.0 * w.rho;
    q.width_exceeds_diameter = q.width_dir > q.two_r;
    q.curvature_radius_within = q.two_rho <= q.two_r;
    return w;
  };

  std::vector<int> outside;
  int farthest = -1;
  double far_dist = -1.0;
  for (int i = 0; i < grid; ++i) {
    const double d = distance(kTwoPi * i / grid);
    if (d > k.radius + tol) {
      outside.push_back(i);
      if (d > far_dist) {
        far_dist = d;
        farthest = i;
      }
    }
  }
  if (outside.empty()) return std::nullopt;

  const double step = kTwoPi / grid;
  const double t0 = step * farthest;
  const double t_best = golden_max(distance, t0 - step, t0 + step, 1e-12);
  if (Witness w = build(t_best); w.inequalities.width_exceeds_diameter) return w;
  for (int i : outside) {
    if (Witness w = build(step * i); w.inequalities.width_exceeds_diameter) return w;
  }
  return std::nullopt;
}

namespace {

double signed_arclength(const SupportCurve& curve, double from, double to) {
  return to >= from ? arclength(curve, from, to) : -arclength(curve, to, from);
}

// Normal angle whose arc length from theta is `offset`.
double angle_at_offset(const SupportCurve& curve, double theta, double offset) {
  double t = theta + offset / curve.radius_of_curvature(theta);
  for (int iter = 0; iter < 50; ++iter) {
    const double miss = signed_arclength(curve, theta, t) - offset;
    const double dt = miss / curve.radius_of_curvature(t);
    t -= dt;
    if (std::abs(dt) <= 1e-16 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

double width_angle_derivative(const SupportCurve& curve, double theta) {
  return curve.support(theta).d1 + curve.support(theta + kPi).d1;
}

}  // namespace

IdentityResiduals identity_residuals(const SupportCurve& curve, int sample_count, double step) {
  require_samples(sample_count);
  if (!(step > 0.0)) throw Error(Errc::InvalidArgument, "step must be positive");
  IdentityResiduals out;
  out.step = step;
  out.samples.reserve(sample_count);
  double s = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    const double theta = kTwoPi * k / sample_count;
    if (k > 0) s += arclength(curve, kTwoPi * (k - 1) / sample_count, theta);
    IdentitySample row;
    row.s = s;
    row.theta = theta;
    row.w = chord_tangent_projection(curve, theta);
    row.curvature = 1.0 / curve.radius_of_curvature(theta);
    row.width = width(curve, theta);
    row.dq_ds = curve.radius_of_curvature(theta + kPi) * row.curvature;
    const double ahead = angle_at_offset(curve, theta, step);
    const double behind = angle_at_offset(curve, theta, -step);
    row.dw_ds = (chord_tangent_projection(curve, ahead) - chord_tangent_projection(curve, behind)) /
                (2.0 * step);
    row.dwidth_ds = (width(curve, ahead) - width(curve, behind)) / (2.0 * step);
    row.residual_w = std::abs(row.dw_ds - (row.curvature * row.width - 1.0 - row.dq_ds));
    row.residual_width = std::abs(row.dwidth_ds + row.curvature * row.w);
    out.max_residual_w = std::max(out.max_residual_w, row.residual_w);
    out.max_residual_width = std::max(out.max_residual_width, row.residual_width);
    out.samples.push_back(row);
  }
  return out;
}

PZeroReport p_zero_check(const SupportCurve& curve) {
  PZeroReport r;
  quad::Options opts;
  opts.epsrel = 1e-13;
  opts.epsabs = 1e-14;
  opts.epsl1 = 1e-13;
  const double pts[] = {0.0, 0.5 * kPi, kPi, 1.5 * kPi, kTwoPi};
  // kappa ds = (1/rho) rho dtheta and L'(s) ds = dL/dtheta dtheta.
  const auto curvature_density = [&](double t) {
    return (1.0 / curve.radius_of_curvature(t)) * curve.radius_of_curvature(t);
  };
  const auto width_density = [&](double t) { return width_angle_derivative(curve, t); };
  const auto kappa =
      quad::integrate<double>(curvature_density, std::span<const double>(pts), opts);
  const auto dwidth = quad::integrate<double>(width_density, std::span<const double>(pts), opts);
  if (!kappa.converged || !dwidth.converged)
    throw Error(Errc::QuadratureNoConvergence, "periodicity integrals");
  r.total_curvature = kappa.value;
  r.width_derivative_integral = dwidth.value;
  // If w were the constant 2 pi p, integral L' = -2 pi p integral kappa.
  r.implied_p = -r.width_derivative_integral / (kTwoPi * r.total_curvature);
  r.p = std::lround(r.implied_p);

  constexpr int kGrid = 720;
  double prev_w = chord_tangent_projection(curve, 0.0);
  const double first_w = prev_w;
  for (int i = 0; i < kGrid; ++i) {
    const double t = kTwoPi * i / kGrid;
    r.max_abs_width_derivative =
        std::max(r.max_abs_width_derivative,
                 std::abs(width_angle_derivative(curve, t) / curve.radius_of_curvature(t)));
    const double w = i + 1 < kGrid ? chord_tangent_projection(curve, kTwoPi * (i + 1) / kGrid)
                                   : first_w;
    r.max_w_jump = std::max(r.max_w_jump, std::abs(w - prev_w) / kTwoPi);
    prev_w = w;
  }
  r.periodic_forces_p_zero = std::abs(r.width_derivative_integral) <= 1e-8 &&
                             std::abs(r.total_curvature - kTwoPi) <= 1e-8 && r.p == 0;
  return r;
}

}  // namespace discwitness
