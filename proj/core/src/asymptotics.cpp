#include "discwitness/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discwitness/error.hpp"
#include "discwitness/moments.hpp"
#include "discwitness/quadrature.hpp"

namespace discwitness {
namespace {

using complex = std::complex<double>;

constexpr double kBoundaryGap = 1e-9;
constexpr double kDegenerateCurvature = 1e-9;
constexpr double kTailCutoff = 1e-8;
constexpr double kBracketFloor = 1e-12;

void require_straddle(const ChordChart& chart) {
  if (!chart.straddles_origin())
    throw Error(Errc::InvalidChart,
                "chart needs f(x1) > 0 > g(x2); the origin must lie inside the frame's y-slab");
}

}  // namespace

InteriorMax find_interior_max(const std::function<PhaseJet(double)>& phase, double a, double b) {
  if (!(b > a)) throw Error(Errc::InvalidArgument, "interval must satisfy a < b");
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = a, hi = b;
  double c = hi - ratio * (hi - lo), d = lo + ratio * (hi - lo);
  double sc = phase(c).value, sd = phase(d).value;
  while (hi - lo > 1e-11 * (b - a)) {
    if (sc >= sd) {
      hi = d;
      d = c;
      sd = sc;
      c = hi - ratio * (hi - lo);
      sc = phase(c).value;
    } else {
      lo = c;
      c = d;
      sc = sd;
      d = lo + ratio * (hi - lo);
      sd = phase(d).value;
    }
  }
  double x = 0.5 * (lo + hi);
  const double gap = kBoundaryGap * std::max(1.0, b - a);
  if (x - a <= gap || b - x <= gap)
    throw Error(Errc::MaxOnBoundary, "maximum at an interval end");

  // Golden section only resolves xi to about sqrt(eps); Newton on S' finishes.
  lo = std::max(a, x - 1e-4 * (b - a));
  hi = std::min(b, x + 1e-4 * (b - a));
  PhaseJet j = phase(x);
  for (int iter = 0; iter < 100; ++iter) {
    if (!(j.d2 < 0.0)) break;
    double next = x - j.d1 / j.d2;
    if (!(next > lo && next < hi)) next = 0.5 * (x + (j.d1 > 0.0 ? hi : lo));
    const double step = std::abs(next - x);
    x = next;
    j = phase(x);
    if (step <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  if (x - a <= gap || b - x <= gap)
    throw Error(Errc::MaxOnBoundary, "maximum at an interval end");
  if (!(j.d2 < 0.0) || std::abs(j.d2) <= kDegenerateCurvature)
    throw Error(Errc::DegenerateMax, "second derivative at the maximum is not negative");
  const double slope_tol = 1e-12 * std::max(1.0, std::abs(j.d2) * (b - a));
  if (std::abs(j.d1) > slope_tol)
    throw Error(Errc::DegenerateMax, "Newton polish did not reach a stationary point");
  return {x, j.value, j.d2};
}

ScaledComplex laplace_leading(const LaplaceProblem& problem) {
  const InteriorMax peak = find_interior_max(problem.phase, problem.a, problem.b);
  const double width = std::sqrt(kTwoPi / (problem.lambda * std::abs(peak.d2)));
  return ScaledComplex(problem.amplitude(peak.xi) * width, problem.lambda * peak.value);
}

ScaledComplex laplace_integral(const LaplaceProblem& problem) {
  const InteriorMax peak = find_interior_max(problem.phase, problem.a, problem.b);
  const double sigma = 1.0 / std::sqrt(problem.lambda * std::abs(peak.d2));
  std::vector<double> pts{problem.a, problem.b, peak.xi};
  for (double k : {3.0, 8.0, 20.0}) {
    for (double x : {peak.xi - k * sigma, peak.xi + k * sigma}) {
      if (x > problem.a && x < problem.b) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  const auto integrand = [&](double x) {
    return problem.amplitude(x) *
           std::exp(problem.lambda * (problem.phase(x).value - peak.value));
  };
  quad::Options opts;
  opts.epsrel = 1e-12;
  opts.epsabs = 1e-16 * (problem.b - problem.a);
  const auto r = quad::integrate<complex>(integrand, std::span<const double>(pts), opts);
  if (!r.converged) throw Error(Errc::QuadratureNoConvergence, "Laplace integral");
  return ScaledComplex(r.value, problem.lambda * peak.value);
}

BracketTerm bracket_main_term(const ChordChart& chart, int m) {
  if (m < 1) throw Error(Errc::InvalidArgument, "bracket requires m >= 1");
  require_straddle(chart);
  const auto term = [m](double x, double height, double curvature) {
    const double mag = std::sqrt(kPi * std::abs(height) / (m * std::abs(curvature)));
    return ScaledComplex(std::polar(mag, x), 2.0 * m * std::log(std::abs(height)));
  };
  BracketTerm out;
  out.m = m;
  out.term_f = term(chart.x1(), chart.f_x1(), chart.f_pp_x1());
  out.term_g = term(chart.x2(), chart.g_x2(), chart.g_pp_x2());
  out.bracket = out.term_f - out.term_g;
  return out;
}

namespace {

// Largest interval around the extremum where |graph| >= cutoff * |extremum|.
std::pair<double, double> significant_range(const ChordChart& chart, bool upper) {
  const double xe = upper ? chart.x1() : chart.x2();
  const double peak = std::abs(upper ? chart.f_x1() : chart.g_x2());
  const auto excess = [&](double x) {
    const double v = upper ? chart.upper(x).value : -chart.lower(x).value;
    return v - kTailCutoff * peak;
  };
  const auto edge = [&](double inside, double outside) {
    if (excess(outside) >= 0.0) return outside;
    for (int i = 0; i < 200 && std::abs(outside - inside) > 1e-15 * std::max(1.0, std::abs(inside));
         ++i) {
      const double mid = 0.5 * (inside + outside);
      (excess(mid) >= 0.0 ? inside : outside) = mid;
    }
    return inside;
  };
  return {edge(xe, chart.a()), edge(xe, chart.b())};
}

}  // namespace

LaplaceProblem arc_laplace_problem(const ChordChart& chart, bool upper, int m) {
  require_straddle(chart);
  const auto [lo, hi] = significant_range(chart, upper);
  LaplaceProblem p;
  p.amplitude = [](double x) { return std::polar(1.0, x); };
  // S = ln|f|: S' = f'/f, S'' = f''/f - (f'/f)^2; the chart keeps f and g away
  // from zero on the significant range.
  p.phase = [&chart, upper](double x) {
    const GraphJet g = upper ? chart.upper(x) : chart.lower(x);
    const double q = g.d1 / g.value;
    return PhaseJet{std::log(std::abs(g.value)), q, g.d2 / g.value - q * q};
  };
  p.lambda = 2.0 * m;
  p.a = lo;
  p.b = hi;
  return p;
}

std::vector<RatioRow> asymptotic_ratio(const SupportCurve& curve, double frame_angle,
                                       std::span<const int> m_list) {
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    if (m_list[i] < 10) throw Error(Errc::InvalidArgument, "asymptotic ratios need m >= 10");
    if (i > 0 && m_list[i] <= m_list[i - 1])
      throw Error(Errc::InvalidArgument, "m_list must be strictly ascending");
  }
  const ChordChart chart(curve, frame_angle);
  require_straddle(chart);
  const auto range_f = significant_range(chart, true);
  const auto range_g = significant_range(chart, false);

  std::vector<RatioRow> rows;
  rows.reserve(m_list.size());
  for (int m : m_list) {
    const BracketTerm bt = bracket_main_term(chart, m);
    const ScaledComplex arc_f =
        arc_power_integral(chart, true, 2 * m, range_f.first, range_f.second);
    const ScaledComplex arc_g =
        arc_power_integral(chart, false, 2 * m, range_g.first, range_g.second);
    RatioRow row;
    row.m = m;
    row.ratio_f = (arc_f / bt.term_f).value();
    row.ratio_g = (arc_g / bt.term_g).value();
    row.ratio_f_abs_err = std::abs(row.ratio_f - 1.0);
    row.ratio_g_abs_err = std::abs(row.ratio_g - 1.0);

    const double scale = std::max(bt.term_f.log_abs(), bt.term_g.log_abs());
    if (bt.bracket.log_abs() - scale > std::log(kBracketFloor)) {
      // Both sides carry the chord reduction's 1/(2m).
      const MomentResult moment = moment_chord(chart, 2 * m - 1);
      ScaledComplex reference = bt.bracket;
      reference *= 1.0 / (2.0 * m);
      row.combined = (moment.value / reference).value();
      row.combined_abs_err = std::abs(*row.combined - 1.0);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace discwitness
