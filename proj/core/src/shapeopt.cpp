#include "discwitness/shapeopt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "discwitness/asymptotics.hpp"
#include "discwitness/error.hpp"

namespace discwitness {
namespace {

constexpr double kPenaltyWeight = 1e6;

int grid_size(const ShapeVector& v) { return std::max(512, 64 * v.harmonics()); }

// h and h + h'' on a uniform grid, rescaled to a0 = 1.
struct Profile {
  std::vector<double> h;
  std::vector<double> rho;
  double scale = 1.0;
};

Profile profile(const ShapeVector& v) {
  const int n = grid_size(v);
  Profile p;
  p.scale = v.a0;
  p.h.assign(n, 1.0);
  p.rho.assign(n, 1.0);
  if (!(v.a0 > 0.0)) throw Error(Errc::Infeasible, "a0 must be positive");
  const int k_max = v.harmonics();
  for (int i = 0; i < n; ++i) {
    const double theta = kTwoPi * i / n;
    double h = 0.0, d2 = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      const double c = k <= static_cast<int>(v.cos.size()) ? v.cos[k - 1] : 0.0;
      const double s = k <= static_cast<int>(v.sin.size()) ? v.sin[k - 1] : 0.0;
      const double term = c * std::cos(k * theta) + s * std::sin(k * theta);
      h += term;
      d2 -= k * k * term;
    }
    p.h[i] = 1.0 + h / v.a0;
    p.rho[i] = p.h[i] + d2 / v.a0;
  }
  return p;
}

double min_of(const std::vector<double>& xs) { return *std::min_element(xs.begin(), xs.end()); }

// Assumes rho > 0 everywhere on the grid.
double kl_integral(const Profile& p) {
  const int n = static_cast<int>(p.h.size());
  const int half = n / 2;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double width = p.h[i] + p.h[(i + half) % n];
    const double dev = width / p.rho[i] - 2.0;
    sum += dev * dev * p.rho[i];
  }
  return sum * kTwoPi / n;
}

void require_feasible(const ShapeVector& v, const Profile& p) {
  const double min_rho = min_of(p.rho) * v.a0;
  if (!(min_rho > v.margin))
    throw Error(Errc::Infeasible, "shape vector violates strict convexity (min rho " +
                                      std::to_string(min_rho) + ")");
}

double bracket_sum(const SupportCurve& curve, std::span<const double> directions, int m) {
  double sum = 0.0;
  for (double angle : directions) {
    const ChordChart chart(curve, angle);
    const BracketTerm bt = bracket_main_term(chart, m);
    const double ref = std::max(bt.term_f.log_abs(), bt.term_g.log_abs());
    sum += std::norm(bt.term_f.value_relative_to(ref) - bt.term_g.value_relative_to(ref));
  }
  return sum;
}

FourierSpec normalized_spec(const ShapeVector& v) {
  FourierSpec spec = v.to_spec();
  for (auto& c : spec.cos) c /= v.a0;
  for (auto& s : spec.sin) s /= v.a0;
  spec.a0 = 1.0;
  return spec;
}

std::vector<double> default_directions() {
  std::vector<double> dirs(8);
  for (int i = 0; i < 8; ++i) dirs[i] = kPi * i / 8.0;
  return dirs;
}

}  // namespace

ShapeVector ShapeVector::from_spec(const FourierSpec& spec, int harmonics, bool pin_translation) {
  ShapeVector v;
  v.a0 = spec.a0;
  v.cos.assign(harmonics, 0.0);
  v.sin.assign(harmonics, 0.0);
  for (int k = 0; k < harmonics; ++k) {
    if (k < static_cast<int>(spec.cos.size())) v.cos[k] = spec.cos[k];
    if (k < static_cast<int>(spec.sin.size())) v.sin[k] = spec.sin[k];
  }
  v.pin_translation = pin_translation;
  return v;
}

std::vector<double> ShapeVector::free_coordinates() const {
  std::vector<double> out;
  const int first = pin_translation ? 2 : 1;
  for (int k = first; k <= harmonics(); ++k) {
    out.push_back(k <= static_cast<int>(cos.size()) ? cos[k - 1] : 0.0);
    out.push_back(k <= static_cast<int>(sin.size()) ? sin[k - 1] : 0.0);
  }
  return out;
}

void ShapeVector::set_free_coordinates(std::span<const double> values) {
  const int k_max = harmonics();
  cos.resize(k_max, 0.0);
  sin.resize(k_max, 0.0);
  const int first = pin_translation ? 2 : 1;
  if (values.size() != static_cast<std::size_t>(2 * (k_max - first + 1)))
    throw Error(Errc::InvalidArgument, "free coordinate count mismatch");
  std::size_t i = 0;
  for (int k = first; k <= k_max; ++k) {
    cos[k - 1] = values[i++];
    sin[k - 1] = values[i++];
  }
}

double min_radius_of_curvature(const ShapeVector& v) { return min_of(profile(v).rho) * v.a0; }

double objective_kl(const ShapeVector& v) {
  const Profile p = profile(v);
  require_feasible(v, p);
  return kl_integral(p);
}

BracketObjective objective_bracket(const ShapeVector& v, std::span<const double> directions,
                                   int m) {
  if (m < 10) throw Error(Errc::InvalidArgument, "bracket objective needs m >= 10");
  require_feasible(v, profile(v));
  if (directions.empty()) return {0.0, true};
  // Chord heights depend on the origin; evaluate with the Steiner point at 0.
  ShapeVector centered = v;
  if (!centered.cos.empty()) centered.cos[0] = 0.0;
  if (!centered.sin.empty()) centered.sin[0] = 0.0;
  const SupportCurve curve = build_curve(normalized_spec(centered), v.margin / v.a0);
  return {bracket_sum(curve, directions, m), false};
}

double circle_distance(const ShapeVector& v) {
  const Profile p = profile(v);
  const int n = static_cast<int>(p.h.size());
  double total_len = 0.0;
  for (double r : p.rho) total_len += r;
  const double mean_kappa = n / total_len;
  double var = 0.0;
  for (double r : p.rho) {
    const double dk = 1.0 / r - mean_kappa;
    var += r * dk * dk;
  }
  var /= total_len;
  double c1 = 0.0, s1 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    c1 += p.h[i] * std::cos(t);
    s1 += p.h[i] * std::sin(t);
  }
  c1 *= 2.0 / n;
  s1 *= 2.0 / n;
  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kTwoPi * i / n;
    const double d = p.h[i] - (1.0 + c1 * std::cos(t) + s1 * std::sin(t));
    resid += d * d;
  }
  return std::sqrt(var) / mean_kappa + std::sqrt(resid / n);
}

OptResult minimize(const ShapeVector& start, ObjectiveKind objective,
                   const MinimizeOptions& options) {
  ShapeVector base = start;
  if (base.pin_translation) {
    // Translation does not change the shape; drop it so it stays pinned.
    if (!base.cos.empty()) base.cos[0] = 0.0;
    if (!base.sin.empty()) base.sin[0] = 0.0;
  }
  double start_rho = 0.0;
  try {
    start_rho = min_radius_of_curvature(base);
  } catch (const Error&) {
    throw Error(Errc::NoFeasibleStart, "a0 must be positive");
  }
  if (!(start_rho > base.margin))
    throw Error(Errc::NoFeasibleStart, "start shape violates strict convexity (min rho " +
                                           std::to_string(start_rho) + ")");

  const std::vector<double> directions =
      options.directions.empty() ? default_directions() : options.directions;

  // Objective on a possibly infeasible vector: raw value plus penalty, or a
  // value above the start when the curve has turned non-convex.
  const auto raw = [&](const ShapeVector& v, double rho_floor) {
    if (objective == ObjectiveKind::KL) return kl_integral(profile(v));
    const SupportCurve curve = build_curve(normalized_spec(v), std::max(0.0, rho_floor));
    return bracket_sum(curve, directions, options.m);
  };
  const double start_value = raw(base, 0.0);
  const auto evaluate = [&](const ShapeVector& v) {
    const double min_rho = min_radius_of_curvature(v);
    const double shortfall = std::max(0.0, v.margin - min_rho);
    const double penalty = kPenaltyWeight * shortfall * shortfall;
    if (min_rho > 0.5 * v.margin) {
      try {
        return raw(v, 0.0) + penalty;
      } catch (const Error&) {
      }
    }
    return start_value + 1.0 + penalty;
  };

  const std::vector<double> x0 = base.free_coordinates();
  const std::size_t dim = x0.size();
  ShapeVector scratch = base;
  const auto value_at = [&](const std::vector<double>& x) {
    scratch.set_free_coordinates(x);
    return evaluate(scratch);
  };
  const auto record = [&](OptResult& res, int iter, const std::vector<double>& x, double value) {
    scratch.set_free_coordinates(x);
    res.trace.push_back({iter, value, circle_distance(scratch), min_radius_of_curvature(scratch)});
  };

  OptResult result;
  result.best = base;
  if (dim == 0 || start_value <= options.target) {
    result.objective = start_value;
    result.circle_distance = circle_distance(base);
    result.stop_reason = dim == 0 ? "no free coordinates" : "target reached";
    record(result, 0, x0, start_value);
    return result;
  }

  // Dimension-adaptive coefficients keep the simplex from stalling in higher dimensions.
  const double n = static_cast<double>(dim);
  const double reflect = 1.0, expand = 1.0 + 2.0 / n;
  const double contract = 0.75 - 1.0 / (2.0 * n), shrink = 1.0 - 1.0 / n;

  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<double>> simplex(dim + 1, x0);
  std::vector<double> values(dim + 1);
  const auto build_simplex = [&](const std::vector<double>& centre, double step, bool randomize) {
    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    if (randomize) std::shuffle(order.begin(), order.end(), rng);
    simplex[0] = centre;
    values[0] = value_at(centre);
    for (std::size_t i = 0; i < dim; ++i) {
      simplex[i + 1] = centre;
      double delta = step;
      if (randomize && (rng() & 1u)) delta = -delta;
      simplex[i + 1][order[i]] += delta;
      values[i + 1] = value_at(simplex[i + 1]);
    }
  };
  build_simplex(x0, options.initial_step, false);

  std::vector<std::size_t> idx(dim + 1);
  const auto sort_simplex = [&] {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2(dim + 1);
    std::vector<double> v2(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      s2[i] = std::move(simplex[idx[i]]);
      v2[i] = values[idx[i]];
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };
  const auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc = std::max(acc, std::abs(simplex[i][j] - simplex[0][j]));
      d = std::max(d, acc);
    }
    return d;
  };

  std::vector<double> best_x = x0;
  double best_value = start_value;
  int restarts_left = options.restarts;
  double restart_step = options.initial_step;
  int iter = 0;
  result.stop_reason = "max_iter";
  record(result, 0, x0, start_value);
  std::vector<double> centroid(dim), trial(dim), second(dim);
  while (iter < options.max_iter) {
    sort_simplex();
    if (values[0] < best_value) {
      best_value = values[0];
      best_x = simplex[0];
    }
    if (best_value <= options.target) {
      result.stop_reason = "target reached";
      break;
    }
    if (diameter() <= options.min_diameter) {
      if (restarts_left-- <= 0) {
        result.stop_reason = "simplex collapsed";
        break;
      }
      restart_step = std::max(options.min_diameter * 100.0,
                              std::min(restart_step, 10.0 * std::sqrt(best_value)));
      build_simplex(best_x, restart_step, true);
      continue;
    }
    ++iter;
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / n;
    const auto& worst = simplex[dim];
    for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + reflect * (centroid[j] - worst[j]);
    const double f_reflect = value_at(trial);
    bool do_shrink = false;
    if (f_reflect < values[0]) {
      for (std::size_t j = 0; j < dim; ++j) second[j] = centroid[j] + expand * (trial[j] - centroid[j]);
      const double f_expand = value_at(second);
      if (f_expand < f_reflect) {
        simplex[dim] = second;
        values[dim] = f_expand;
      } else {
        simplex[dim] = trial;
        values[dim] = f_reflect;
      }
    } else if (f_reflect < values[dim - 1]) {
      simplex[dim] = trial;
      values[dim] = f_reflect;
    } else if (f_reflect < values[dim]) {
      for (std::size_t j = 0; j < dim; ++j) second[j] = centroid[j] + contract * (trial[j] - centroid[j]);
      const double f_c = value_at(second);
      if (f_c <= f_reflect) {
        simplex[dim] = second;
        values[dim] = f_c;
      } else {
        do_shrink = true;
      }
    } else {
      for (std::size_t j = 0; j < dim; ++j) second[j] = centroid[j] + contract * (worst[j] - centroid[j]);
      const double f_c = value_at(second);
      if (f_c < values[dim]) {
        simplex[dim] = second;
        values[dim] = f_c;
      } else {
        do_shrink = true;
      }
    }
    if (do_shrink) {
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j)
          simplex[i][j] = simplex[0][j] + shrink * (simplex[i][j] - simplex[0][j]);
        values[i] = value_at(simplex[i]);
      }
    }
    const double round_best = *std::min_element(values.begin(), values.end());
    if (round_best < best_value) {
      best_value = round_best;
      best_x = simplex[std::min_element(values.begin(), values.end()) - values.begin()];
    }
    record(result, iter, best_x, best_value);
  }

  result.best = base;
  result.best.set_free_coordinates(best_x);
  result.iterations = iter;
  result.objective = best_value;
  result.circle_distance = circle_distance(result.best);
  return result;
}

}  // namespace discwitness
