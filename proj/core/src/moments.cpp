#include "discwitness/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "discwitness/quadrature.hpp"

namespace discwitness {
namespace {

using complex = std::complex<double>;

constexpr double kChordRelTol = 1e-10;
// Moments that cancel to zero are resolved to this fraction of the integral of |integrand|.
constexpr double kCancellationTol = 1e-13;

// sign(v)^p * (|v| / peak)^p, computed in the log domain.
double scaled_power(double v, int p, double log_peak) {
  if (v == 0.0) return p == 0 ? 1.0 : 0.0;
  const double mag = std::exp(p * (std::log(std::abs(v)) - log_peak));
  return (v < 0.0 && (p % 2 == 1)) ? -mag : mag;
}

double log_peak_height(const ChordChart& chart) {
  const double top = std::abs(chart.frame_support(0.5 * kPi).h);
  const double bottom = std::abs(chart.frame_support(1.5 * kPi).h);
  return std::log(std::max(top, bottom));
}

// Root of a monotone function on [lo, hi] given opposite end signs.
template <class F>
double bisect(const F& fn, double lo, double hi) {
  const bool lo_positive = fn(lo) > 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    ((fn(mid) > 0.0) == lo_positive ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void add_if_inside(std::vector<double>& pts, double x, double lo, double hi) {
  if (x > lo && x < hi) pts.push_back(x);
}

// Abscissae where the chord integrand changes character: extremum, its Laplace
// width for this power, and sign changes of the graph.
void seed_arc(std::vector<double>& pts, const ChordChart& chart, bool upper, int power, double lo,
              double hi) {
  const double xe = upper ? chart.x1() : chart.x2();
  const double he = upper ? chart.f_x1() : chart.g_x2();
  const double curv = std::abs(upper ? chart.f_pp_x1() : chart.g_pp_x2());
  add_if_inside(pts, xe, lo, hi);
  if (power > 0 && he != 0.0) {
    const double sigma = std::sqrt(std::abs(he) / (power * curv));
    for (double k : {3.0, 8.0, 20.0}) {
      add_if_inside(pts, xe - k * sigma, lo, hi);
      add_if_inside(pts, xe + k * sigma, lo, hi);
    }
  }
  const auto graph = [&](double x) { return upper ? chart.upper(x).value : chart.lower(x).value; };
  const double ya = graph(chart.a()), yb = graph(chart.b());
  if ((ya > 0.0) != (he > 0.0) && ya != 0.0) add_if_inside(pts, bisect(graph, chart.a(), xe), lo, hi);
  if ((yb > 0.0) != (he > 0.0) && yb != 0.0) add_if_inside(pts, bisect(graph, xe, chart.b()), lo, hi);
}

std::vector<double> sorted_unique(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// integral exp(i x) (w_f f^p - w_g g^p) dx / peak^p over [lo, hi].
complex chord_kernel(const ChordChart& chart, int power, double weight_f, double weight_g,
                     double lo, double hi, double log_peak) {
  std::vector<double> pts{lo, hi};
  if (weight_f != 0.0) seed_arc(pts, chart, true, power, lo, hi);
  if (weight_g != 0.0) seed_arc(pts, chart, false, power, lo, hi);
  pts = sorted_unique(std::move(pts));
  const auto integrand = [&](double x) {
    double v = 0.0;
    if (weight_f != 0.0) v += weight_f * scaled_power(chart.upper(x).value, power, log_peak);
    if (weight_g != 0.0) v -= weight_g * scaled_power(chart.lower(x).value, power, log_peak);
    return std::polar(1.0, x) * v;
  };
  // The f and g parts can cancel pointwise, so the absolute floor is set from
  // the size of the parts rather than of their difference.
  const auto magnitude = [&](double x) {
    double v = 0.0;
    if (weight_f != 0.0) v += std::abs(scaled_power(chart.upper(x).value, power, log_peak));
    if (weight_g != 0.0) v += std::abs(scaled_power(chart.lower(x).value, power, log_peak));
    return v;
  };
  quad::Options rough;
  rough.epsrel = 1e-3;
  const double parts =
      quad::integrate<double>(magnitude, std::span<const double>(pts), rough).value;
  quad::Options opts;
  opts.epsrel = kChordRelTol;
  opts.epsabs = std::max(1e-15 * (hi - lo), kCancellationTol * parts);
  const auto r = quad::integrate<complex>(integrand, std::span<const double>(pts), opts);
  if (!r.converged)
    throw Error(Errc::QuadratureNoConvergence,
                "chord integral at power " + std::to_string(power) + " (error " +
                    std::to_string(r.error) + ")");
  return r.value;
}

void require_order(int n) {
  if (n < 0) throw Error(Errc::InvalidArgument, "moment order must be non-negative");
}

}  // namespace

const char* to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::Chord: return "chord";
    case MomentMethod::Green: return "green";
    case MomentMethod::Area: return "area";
  }
  return "unknown";
}

MomentResult moment_chord(const ChordChart& chart, int n) {
  require_order(n);
  const int p = n + 1;
  const double log_peak = log_peak_height(chart);
  const complex raw = chord_kernel(chart, p, 1.0, 1.0, chart.a(), chart.b(), log_peak);
  return {ScaledComplex(raw, p * log_peak - std::log(static_cast<double>(p))), n,
          chart.frame_angle(), MomentMethod::Chord};
}

ScaledComplex arc_power_integral(const ChordChart& chart, bool upper, int power, double lo,
                                 double hi) {
  if (power < 0) throw Error(Errc::InvalidArgument, "power must be non-negative");
  const double log_peak = std::log(std::abs(upper ? chart.f_x1() : chart.g_x2()));
  // Lower-arc values are subtracted by the kernel; flip the weight to get +g^p.
  const complex raw = upper ? chord_kernel(chart, power, 1.0, 0.0, lo, hi, log_peak)
                            : chord_kernel(chart, power, 0.0, -1.0, lo, hi, log_peak);
  return ScaledComplex(raw, power * log_peak);
}

MomentResult moment_green(const SupportCurve& curve, int n, double frame_angle) {
  require_order(n);
  const int p = n + 1;
  const auto frame_jet = [&](double phi) { return curve.support(phi + frame_angle); };
  const double top = std::abs(frame_jet(0.5 * kPi).h);
  const double bottom = std::abs(frame_jet(1.5 * kPi).h);
  const double log_peak = std::log(std::max(top, bottom));

  std::vector<double> pts{0.0, 0.5 * kPi, kPi, 1.5 * kPi, kTwoPi};
  for (double centre : {0.5 * kPi, 1.5 * kPi}) {
    const SupportJet j = frame_jet(centre);
    const double height = std::abs(j.h);
    if (height == 0.0) continue;
    const double sigma = std::sqrt(height / (p * j.radius_of_curvature()));
    for (double k : {3.0, 8.0, 20.0}) {
      add_if_inside(pts, centre - k * sigma, 0.0, kTwoPi);
      add_if_inside(pts, centre + k * sigma, 0.0, kTwoPi);
    }
  }
  pts = sorted_unique(std::move(pts));

  // x(phi) = h cos - h' sin, dx/dphi = -rho sin; the leading minus of the
  // boundary form cancels against dx/dphi.
  const auto integrand = [&](double phi) {
    const SupportJet j = frame_jet(phi);
    const double co = std::cos(phi), si = std::sin(phi);
    const double x = j.h * co - j.d1 * si;
    const double y = j.h * si + j.d1 * co;
    return std::polar(1.0, x) * (scaled_power(y, p, log_peak) * j.radius_of_curvature() * si);
  };
  quad::Options opts;
  opts.epsrel = kChordRelTol;
  opts.epsabs = 1e-15 * kTwoPi;
  opts.epsl1 = kCancellationTol;
  const auto r = quad::integrate<complex>(integrand, std::span<const double>(pts), opts);
  if (!r.converged) throw Error(Errc::QuadratureNoConvergence, "boundary moment integral");
  return {ScaledComplex(r.value, p * log_peak - std::log(static_cast<double>(p))), n, frame_angle,
          MomentMethod::Green};
}

MomentResult moment_area(const SupportCurve& curve, int n, double frame_angle) {
  require_order(n);
  if (n > kMaxAreaOrder)
    throw Error(Errc::OrderTooLarge, "area quadrature supports n <= " +
                                         std::to_string(kMaxAreaOrder));
  const ChordChart chart(curve, frame_angle);
  const double log_peak = log_peak_height(chart);
  const double centre = 0.5 * (chart.a() + chart.b());
  const double half = 0.5 * (chart.b() - chart.a());
  const quad::GaussLegendre outer = quad::gauss_legendre(16);
  const quad::GaussLegendre inner = quad::gauss_legendre(std::max(16, n / 2 + 4));

  // x = centre - half cos(tau) removes the square-root behaviour of f - g at the
  // chart ends.
  const auto strip = [&](double tau) {
    const double x = centre - half * std::cos(tau);
    const double top = chart.upper(x).value;
    const double bottom = chart.lower(x).value;
    const double mid = 0.5 * (top + bottom), rad = 0.5 * (top - bottom);
    double acc = 0.0;
    for (std::size_t k = 0; k < inner.nodes.size(); ++k) {
      acc += inner.weights[k] * scaled_power(mid + rad * inner.nodes[k], n, log_peak);
    }
    return std::polar(1.0, x) * (acc * rad * half * std::sin(tau));
  };
  const auto composite = [&](int panels) {
    complex sum{};
    const double width = kPi / panels;
    for (int i = 0; i < panels; ++i) {
      const double lo = i * width;
      for (std::size_t k = 0; k < outer.nodes.size(); ++k) {
        sum += outer.weights[k] * strip(lo + 0.5 * width * (outer.nodes[k] + 1.0));
      }
    }
    return sum * (0.5 * width);
  };

  complex previous = composite(2);
  for (int panels = 4; panels <= 4096; panels *= 2) {
    const complex current = composite(panels);
    const double diff = std::abs(current - previous);
    if (diff <= std::max(1e-13 * std::abs(current), 1e-15 * (chart.b() - chart.a()))) {
      return {ScaledComplex(current, n * log_peak), n, frame_angle, MomentMethod::Area};
    }
    previous = current;
  }
  throw Error(Errc::QuadratureNoConvergence, "area quadrature did not stabilise");
}

SweepError::SweepError(std::size_t index, const Error& cause)
    : Error(cause.code(), "entry " + std::to_string(index) + ": " + cause.what()), index_(index) {}

std::vector<MomentResult> moment_sweep(const SupportCurve& curve, std::span<const int> orders,
                                       double frame_angle, MomentMethod method,
                                       const SweepOptions& options) {
  std::vector<MomentResult> out(orders.size());
  if (orders.empty()) return out;
  const bool needs_chart = method == MomentMethod::Chord;
  const std::optional<ChordChart> chart =
      needs_chart ? std::optional<ChordChart>(ChordChart(curve, frame_angle)) : std::nullopt;
  std::vector<std::optional<Error>> failures(orders.size());

  const auto evaluate = [&](std::size_t i) {
    try {
      switch (method) {
        case MomentMethod::Chord: out[i] = moment_chord(*chart, orders[i]); break;
        case MomentMethod::Green: out[i] = moment_green(curve, orders[i], frame_angle); break;
        case MomentMethod::Area: out[i] = moment_area(curve, orders[i], frame_angle); break;
      }
    } catch (const Error& e) {
      failures[i] = e;
    }
  };

  const unsigned threads =
      std::clamp<unsigned>(options.threads, 1u, static_cast<unsigned>(orders.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < orders.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < orders.size(); i = next++) evaluate(i);
      });
    }
  }
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i]) throw SweepError(i, *failures[i]);
  }
  return out;
}

}  // namespace discwitness
