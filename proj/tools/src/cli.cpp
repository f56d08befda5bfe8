#include "discwitness_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "discwitness/asymptotics.hpp"
#include "discwitness/characterize.hpp"
#include "discwitness/error.hpp"
#include "discwitness/moments.hpp"
#include "discwitness/shape_io.hpp"
#include "discwitness/shapeopt.hpp"
#include "json.hpp"

namespace discwitness::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kDeg = kPi / 180.0;

std::string num(double x) { return fmt::format("{:.17g}", x); }

Json point(Vec2 p) { return Json::array({p.x, p.y}); }

Format default_format(Command c) {
  switch (c) {
    case Command::Moments:
    case Command::Asymptotics:
    case Command::Identities:
    case Command::Optimize: return Format::Csv;
    default: return Format::Json;
  }
}

void invalid(const std::string& message) { throw Error(Errc::InvalidArgument, message); }

void validate(const RunConfig& c) {
  if (c.shape.empty()) invalid("--shape is required");
  if (!(c.tol > 0.0)) invalid("--tol must be positive");
  if (c.samples < 16) invalid("--samples must be at least 16");
  if (!(c.step > 0.0)) invalid("--step must be positive");
  if (!std::isfinite(c.frame_deg)) invalid("--frame-deg must be finite");
  if (c.n_max < 0) invalid("--n-max must be non-negative");
  for (int n : c.n_list)
    if (n < 0) invalid("--n-list entries must be non-negative");
  if (c.harmonics < 1) invalid("--harmonics must be at least 1");
  if (c.max_iter < 0) invalid("--max-iter must be non-negative");
  if (c.restarts < 0) invalid("--restarts must be non-negative");
  if (c.command == Command::Report && c.format == Format::Csv)
    invalid("report is emitted as JSON only");
}

unsigned sweep_threads() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("DISCWITNESS_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) invalid("DISCWITNESS_THREADS must be a positive integer");
  return static_cast<unsigned>(std::min<long>(v, hw));
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) invalid("cannot open " + tmp.string() + " for writing");
    f << text;
    f.flush();
    if (!f) invalid("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    invalid("cannot rename output onto " + path.string());
  }
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out) {
    write_atomically(*c.out, text);
  } else {
    out << text;
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// --- subcommands -------------------------------------------------------------

Json circle_json(const Circle& c) { return {{"center", point(c.center)}, {"radius", c.radius}}; }

Json profile_json(const KLReport& rep, double tol) {
  Json j{{"verdict", to_string(rep.verdict)}, {"max_dev", rep.max_dev}, {"tolerance", tol}};
  if (rep.fitted_circle) j["fitted_circle"] = circle_json(*rep.fitted_circle);
  return j;
}

std::string cmd_profile(const SupportCurve& curve, const RunConfig& c, Format fmt) {
  const KLReport rep = kl_profile(curve, c.samples, c.tol);
  if (fmt == Format::Json) {
    Json j = profile_json(rep, c.tol);
    Json samples = Json::array();
    for (const auto& s : rep.samples)
      samples.push_back(
          {{"s", s.s}, {"theta", s.theta}, {"kappa", s.curvature}, {"width", s.width}, {"kl", s.kl}});
    j["samples"] = std::move(samples);
    return dump(j);
  }
  std::string text = "s,theta,kappa,width,kl\n";
  for (const auto& s : rep.samples)
    text += fmt::format("{},{},{},{},{}\n", num(s.s), num(s.theta), num(s.curvature), num(s.width),
                        num(s.kl));
  return text;
}

std::vector<MomentMethod> parse_methods(const std::string& m) {
  if (m == "all") return {MomentMethod::Chord, MomentMethod::Green, MomentMethod::Area};
  if (m == "chord") return {MomentMethod::Chord};
  if (m == "green") return {MomentMethod::Green};
  if (m == "area") return {MomentMethod::Area};
  invalid("unknown method '" + m + "'");
  return {};
}

std::string cmd_moments(const SupportCurve& curve, const RunConfig& c, Format fmt) {
  std::vector<int> orders = c.n_list;
  if (orders.empty())
    for (int n = 0; n <= c.n_max; ++n) orders.push_back(n);
  const auto methods = parse_methods(c.method);
  const double frame = c.frame_deg * kDeg;
  const SweepOptions sweep{sweep_threads()};

  // rows[i] holds the results for orders[i], in method order.
  std::vector<std::vector<MomentResult>> rows(orders.size());
  for (MomentMethod method : methods) {
    std::vector<int> subset;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (method == MomentMethod::Area && orders[i] > kMaxAreaOrder) continue;
      subset.push_back(orders[i]);
      where.push_back(i);
    }
    const auto results = moment_sweep(curve, subset, frame, method, sweep);
    for (std::size_t k = 0; k < results.size(); ++k) rows[where[k]].push_back(results[k]);
  }

  if (fmt == Format::Json) {
    Json list = Json::array();
    for (const auto& row : rows)
      for (const auto& r : row) {
        const auto mant = r.value.mantissa();
        list.push_back({{"n", r.n},
                        {"frame_deg", c.frame_deg},
                        {"method", to_string(r.method)},
                        {"re", mant.real()},
                        {"im", mant.imag()},
                        {"log_scale", r.value.log_abs()},
                        {"abs", r.value.abs()}});
      }
    return dump(Json{{"moments", std::move(list)}});
  }
  std::string text = "n,frame_deg,method,re,im,log_scale,abs\n";
  for (const auto& row : rows)
    for (const auto& r : row) {
      const auto mant = r.value.mantissa();
      text += fmt::format("{},{},{},{},{},{},{}\n", r.n, num(c.frame_deg), to_string(r.method),
                          num(mant.real()), num(mant.imag()), num(r.value.log_abs()),
                          num(r.value.abs()));
    }
  return text;
}

std::string cmd_asymptotics(const SupportCurve& curve, const RunConfig& c, Format fmt) {
  const auto rows = asymptotic_ratio(curve, c.frame_deg * kDeg, c.m_list);
  if (fmt == Format::Json) {
    Json list = Json::array();
    for (const auto& r : rows) {
      Json j{{"m", r.m}, {"ratio_f_abs_err", r.ratio_f_abs_err}, {"ratio_g_abs_err", r.ratio_g_abs_err}};
      j["combined_abs_err"] = r.combined_abs_err ? Json(*r.combined_abs_err) : Json(nullptr);
      list.push_back(std::move(j));
    }
    return dump(Json{{"frame_deg", c.frame_deg}, {"rows", std::move(list)}});
  }
  std::string text = "m,ratio_f_abs_err,ratio_g_abs_err,combined_abs_err\n";
  for (const auto& r : rows)
    text += fmt::format("{},{},{},{}\n", r.m, num(r.ratio_f_abs_err), num(r.ratio_g_abs_err),
                        r.combined_abs_err ? num(*r.combined_abs_err) : std::string());
  return text;
}

Json witness_json(const Witness& w) {
  const auto& q = w.inequalities;
  return {{"x_outside", point(w.x_outside)},
          {"theta_prime", w.theta_prime},
          {"x_prime", point(w.x_prime)},
          {"rho", w.rho},
          {"width_dir", q.width_dir},
          {"two_r", q.two_r},
          {"two_rho", q.two_rho},
          {"width_exceeds_diameter", q.width_exceeds_diameter},
          {"curvature_radius_within", q.curvature_radius_within}};
}

std::string cmd_inscribed(const SupportCurve& curve, Format fmt) {
  const auto w = lemma2_witness(curve);
  const Circle k = w ? w->inscribed : inscribed_disc(curve);
  if (fmt == Format::Json) {
    Json j{{"inscribed", circle_json(k)}};
    if (w) j["witness"] = witness_json(*w);
    return dump(j);
  }
  return fmt::format("cx,cy,radius\n{},{},{}\n", num(k.center.x), num(k.center.y), num(k.radius));
}

Json p_zero_json(const PZeroReport& r) {
  return {{"total_curvature", r.total_curvature},
          {"width_derivative_integral", r.width_derivative_integral},
          {"implied_p", r.implied_p},
          {"p", r.p},
          {"max_abs_width_derivative", r.max_abs_width_derivative},
          {"max_w_jump", r.max_w_jump},
          {"periodic_forces_p_zero", r.periodic_forces_p_zero}};
}

std::string cmd_identities(const SupportCurve& curve, const RunConfig& c, Format fmt) {
  const auto r = identity_residuals(curve, c.samples, c.step);
  if (fmt == Format::Json) {
    Json samples = Json::array();
    for (const auto& s : r.samples)
      samples.push_back({{"s", s.s},
                         {"theta", s.theta},
                         {"w", s.w},
                         {"kappa", s.curvature},
                         {"width", s.width},
                         {"dq_ds", s.dq_ds},
                         {"dw_ds", s.dw_ds},
                         {"dwidth_ds", s.dwidth_ds},
                         {"residual_w", s.residual_w},
                         {"residual_width", s.residual_width}});
    return dump(Json{{"step", r.step},
                     {"max_residual_w", r.max_residual_w},
                     {"max_residual_width", r.max_residual_width},
                     {"p_zero", p_zero_json(p_zero_check(curve))},
                     {"samples", std::move(samples)}});
  }
  std::string text =
      "s,theta,w,kappa,width,dq_ds,dw_ds,dwidth_ds,residual_w,residual_width\n";
  for (const auto& s : r.samples)
    text += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", num(s.s), num(s.theta), num(s.w),
                        num(s.curvature), num(s.width), num(s.dq_ds), num(s.dw_ds),
                        num(s.dwidth_ds), num(s.residual_w), num(s.residual_width));
  return text;
}

Json residuals_json(const ConstraintResiduals& r) {
  return {{"height", r.height}, {"curv", r.curvature}, {"phase", r.phase}, {"p", r.p_nearest}};
}

std::string cmd_residuals(const SupportCurve& curve, const RunConfig& c, Format fmt) {
  const ChordChart chart = chord_chart(curve, c.frame_deg * kDeg);
  const auto r = constraint_residuals(chart);
  if (fmt == Format::Json) {
    Json j{{"frame_deg", c.frame_deg}};
    j.update(residuals_json(r));
    j["x1"] = chart.x1();
    j["f_x1"] = chart.f_x1();
    j["x2"] = chart.x2();
    j["g_x2"] = chart.g_x2();
    return dump(j);
  }
  return fmt::format("frame_deg,height,curv,phase,p\n{},{},{},{},{}\n", num(c.frame_deg),
                     num(r.height), num(r.curvature), num(r.phase), r.p_nearest);
}

// Support coefficients of the start shape, truncated to `harmonics`.
FourierSpec fourier_start(const ShapeSpec& spec, int harmonics) {
  if (const auto* f = std::get_if<FourierSpec>(&spec)) return *f;
  if (const auto* c = std::get_if<CircleSpec>(&spec)) return {c->radius, {c->center.x}, {c->center.y}};
  // Ellipses have infinitely many harmonics: project with the trapezoid rule.
  const SupportCurve curve = build_curve(spec);
  constexpr int kNodes = 4096;
  FourierSpec f{0.0, std::vector<double>(harmonics), std::vector<double>(harmonics)};
  for (int i = 0; i < kNodes; ++i) {
    const double t = 2 * kPi * i / kNodes;
    const double h = curve.h(t);
    f.a0 += h / kNodes;
    for (int k = 1; k <= harmonics; ++k) {
      f.cos[k - 1] += 2 * h * std::cos(k * t) / kNodes;
      f.sin[k - 1] += 2 * h * std::sin(k * t) / kNodes;
    }
  }
  return f;
}

std::string cmd_optimize(const ShapeSpec& spec, const RunConfig& c, Format fmt) {
  ObjectiveKind kind;
  if (c.objective == "kl") {
    kind = ObjectiveKind::KL;
  } else if (c.objective == "bracket") {
    kind = ObjectiveKind::Bracket;
  } else {
    invalid("unknown objective '" + c.objective + "'");
  }
  MinimizeOptions opts;
  opts.max_iter = c.max_iter;
  opts.seed = c.seed;
  opts.restarts = c.restarts;
  if (kind == ObjectiveKind::Bracket && !c.m_list.empty()) opts.m = c.m_list.front();
  const ShapeVector start =
      ShapeVector::from_spec(fourier_start(spec, c.harmonics), c.harmonics, !c.free_translation);
  const OptResult r = minimize(start, kind, opts);
  const std::string shape = shape_to_json(r.best.to_spec());
  if (c.shape_out) write_atomically(*c.shape_out, shape + "\n");

  if (fmt == Format::Json) {
    Json trace = Json::array();
    for (const auto& t : r.trace)
      trace.push_back({{"iter", t.iter},
                       {"J", t.objective},
                       {"circle_distance", t.circle_distance},
                       {"min_rho", t.min_rho}});
    return dump(Json{{"objective", r.objective},
                     {"iterations", r.iterations},
                     {"circle_distance", r.circle_distance},
                     {"stop_reason", r.stop_reason},
                     {"shape", Json::parse(shape)},
                     {"trace", std::move(trace)}});
  }
  std::string text = "iter,J,circle_distance,min_rho\n";
  for (const auto& t : r.trace)
    text += fmt::format("{},{},{},{}\n", t.iter, num(t.objective), num(t.circle_distance),
                        num(t.min_rho));
  return text;
}

std::string cmd_report(const SupportCurve& curve, const RunConfig& c) {
  const KLReport rep = kl_profile(curve, c.samples, c.tol);
  Json j = profile_json(rep, c.tol);
  j["residuals"] = residuals_json(constraint_residuals(chord_chart(curve, c.frame_deg * kDeg)));
  const auto w = lemma2_witness(curve);
  j["inscribed"] = circle_json(w ? w->inscribed : inscribed_disc(curve));
  if (w) j["witness"] = witness_json(*w);
  const auto id = identity_residuals(curve, c.samples, c.step);
  j["identities"] = {{"step", id.step},
                     {"max_residual_w", id.max_residual_w},
                     {"max_residual_width", id.max_residual_width}};
  j["p_zero"] = p_zero_json(p_zero_check(curve));
  return dump(j);
}

int report_error(std::ostream& err, const Error& e) {
  err << "discwitness: " << e.what() << "\n";
  return is_validation_error(e.code()) ? 2 : 1;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    const Format fmt = c.format.value_or(default_format(c.command));
    const ShapeSpec spec = load_shape_file(c.shape);
    const SupportCurve curve = build_curve(spec);
    std::string text;
    switch (c.command) {
      case Command::Profile: text = cmd_profile(curve, c, fmt); break;
      case Command::Moments: text = cmd_moments(curve, c, fmt); break;
      case Command::Asymptotics: text = cmd_asymptotics(curve, c, fmt); break;
      case Command::Inscribed: text = cmd_inscribed(curve, fmt); break;
      case Command::Identities: text = cmd_identities(curve, c, fmt); break;
      case Command::Residuals: text = cmd_residuals(curve, c, fmt); break;
      case Command::Optimize: text = cmd_optimize(spec, c, fmt); break;
      case Command::Report: text = cmd_report(curve, c); break;
    }
    emit(c, text, out);
    return 0;
  } catch (const SweepError& e) {
    return report_error(err, e);
  } catch (const Error& e) {
    return report_error(err, e);
  } catch (const std::exception& e) {
    err << "discwitness: internal error: " << e.what() << "\n";
    return 1;
  }
}

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Support-function analysis of strictly convex plane curves"};
  app.set_version_flag("--version", "discwitness 0.1.0");
  app.require_subcommand(1);

  RunConfig c;
  std::string shape, outp, shape_out;
  std::string format;
  const std::map<std::string, Command> commands{
      {"profile", Command::Profile},       {"moments", Command::Moments},
      {"asymptotics", Command::Asymptotics}, {"inscribed", Command::Inscribed},
      {"identities", Command::Identities}, {"residuals", Command::Residuals},
      {"optimize", Command::Optimize},     {"report", Command::Report}};
  const std::map<std::string, std::string> help{
      {"profile", "kappa * L profile and disc verdict"},
      {"moments", "complex moments M_n by chord, Green, and area integration"},
      {"asymptotics", "Laplace leading-term ratios for a list of m"},
      {"inscribed", "largest inscribed disc and the outside-point witness"},
      {"identities", "finite-difference checks of the width identities"},
      {"residuals", "height, curvature, and phase residuals of one chord chart"},
      {"optimize", "Nelder-Mead descent of a disc objective"},
      {"report", "profile, residuals, inscribed disc, and identities as one JSON"}};
  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->fallthrough();
    sub->callback([&c, cmd = cmd] { c.command = cmd; });
  }

  app.add_option("--shape", shape, "shape JSON file")->required();
  app.add_option("--out", outp, "output path (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--frame-deg", c.frame_deg, "chart frame angle in degrees");
  app.add_option("--n-max", c.n_max, "largest moment order");
  app.add_option("--n-list", c.n_list, "explicit moment orders")->delimiter(',');
  app.add_option("--m-list", c.m_list, "Laplace parameters m")->delimiter(',');
  app.add_option("--method", c.method, "moment method")
      ->check(CLI::IsMember({"chord", "green", "area", "all"}));
  app.add_option("--tol", c.tol, "disc tolerance on max |kappa L - 2|");
  app.add_option("--samples", c.samples, "sample count");
  app.add_option("--step", c.step, "finite-difference step in arc length");
  app.add_option("--seed", c.seed, "optimizer seed");
  app.add_option("--objective", c.objective, "kl or bracket")->check(CLI::IsMember({"kl", "bracket"}));
  app.add_option("--max-iter", c.max_iter, "optimizer iteration cap");
  app.add_option("--harmonics", c.harmonics, "support harmonics searched by optimize");
  app.add_option("--restarts", c.restarts, "optimizer restarts");
  app.add_flag("--free-translation", c.free_translation, "let optimize move the first harmonics");
  app.add_option("--shape-out", shape_out, "where optimize writes the final shape");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? 0 : 2};
  }
  c.shape = shape;
  if (!outp.empty()) c.out = outp;
  if (!shape_out.empty()) c.shape_out = shape_out;
  if (!format.empty()) c.format = format == "csv" ? Format::Csv : Format::Json;
  return {c, 0};
}

}  // namespace discwitness::cli
