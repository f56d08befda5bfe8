#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace discwitness::quad {

struct Options {
  double epsrel = 1e-10;
  double epsabs = 1e-14;
  /// Tolerance relative to the integral of |f|; lets integrals that cancel to
  /// zero terminate above the roundoff floor (about 1e-14 of that integral).
  double epsl1 = 0.0;
  int max_subdivisions = 4000;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// Kronrod abscissae and weights (15 points) with the embedded 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  double lo, hi;
  T value;
  double error;
  double l1;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> gauss_kronrod_15(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  double resabs = kWgk[7] * magnitude(fc);
  T fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const T sum = fv1[j] + fv2[j];
    kronrod += kWgk[j] * sum;
    resabs += kWgk[j] * (magnitude(fv1[j]) + magnitude(fv2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  const T mean = kronrod * 0.5;
  double resasc = kWgk[7] * magnitude(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (magnitude(fv1[j] - mean) + magnitude(fv2[j] - mean));
  }
  const double scale = std::abs(half);
  resabs *= scale;
  resasc *= scale;
  double err = magnitude((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    err = std::max(err, roundoff);
  }
  return {lo, hi, kronrod * half, err, resabs};
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod integration over consecutive breakpoints.
///
/// `breakpoints` must be sorted; every sub-interval seeds the panel queue so that
/// narrow features placed at known abscissae are never missed.
template <class T, class F>
Result<T> integrate(const F& f, std::span<const double> breakpoints, const Options& opts = {}) {
  using detail::Panel;
  std::priority_queue<Panel<T>> panels;
  T total{};
  double total_err = 0.0;
  double total_l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    auto p = detail::gauss_kronrod_15<T>(f, breakpoints[i], breakpoints[i + 1]);
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
    panels.push(p);
  }
  Result<T> result;
  const auto tolerance = [&] {
    return std::max({opts.epsabs, opts.epsrel * detail::magnitude(total), opts.epsl1 * total_l1});
  };
  int count = static_cast<int>(panels.size());
  // Panels whose width can no longer be halved are parked here.
  std::vector<Panel<T>> frozen;
  while (!panels.empty() && total_err > tolerance() && count < opts.max_subdivisions) {
    Panel<T> worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      frozen.push_back(worst);
      continue;
    }
    auto left = detail::gauss_kronrod_15<T>(f, worst.lo, mid);
    auto right = detail::gauss_kronrod_15<T>(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  T sum{};
  double err = 0.0, l1 = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    err += panels.top().error;
    l1 += panels.top().l1;
    panels.pop();
  }
  for (const auto& p : frozen) {
    sum += p.value;
    err += p.error;
    l1 += p.l1;
  }
  result.value = sum;
  result.error = err;
  result.intervals = count;
  result.converged =
      err <= std::max({opts.epsabs, opts.epsrel * detail::magnitude(sum), opts.epsl1 * l1});
  return result;
}

template <class T, class F>
Result<T> integrate(const F& f, double lo, double hi, const Options& opts = {}) {
  const double pts[2] = {lo, hi};
  return integrate<T>(f, std::span<const double>(pts, 2), opts);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int order) {
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Refresh the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

}  // namespace discwitness::quad
