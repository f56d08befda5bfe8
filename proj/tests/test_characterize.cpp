#include <cmath>

#include "discwitness/characterize.hpp"
#include "discwitness/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace discwitness;
using doctest::Approx;

namespace {

SupportCurve circle(double r, Vec2 c = {0, 0}) { return build_curve(CircleSpec{c, r}); }
SupportCurve ellipse21() { return build_curve(EllipseSpec{2.0, 1.0, {0, 0}, 0.0}); }
SupportCurve fourier(double a0, std::vector<double> c, std::vector<double> s = {}) {
  return build_curve(FourierSpec{a0, std::move(c), std::move(s)});
}
SupportCurve asym() { return fourier(1.0, {0.0, 0.05}, {0.0, 0.0, 0.03}); }
SupportCurve trefoil() { return fourier(1.0, {0.0, 0.0, 0.1}); }
SupportCurve constant_width() { return fourier(1.0, {0.0, 0.0, 0.05}); }

oracle::Support support_of(const SupportCurve& curve) {
  return [&curve](double t) { return curve.h(t); };
}

}  // namespace

TEST_CASE("constraint_residuals") {
  SUBCASE("symmetric shapes") {
    for (const auto& curve : {circle(1.0), ellipse21(), build_curve(EllipseSpec{1.3, 0.6, {0, 0}, 0})}) {
      const auto r = constraint_residuals(chord_chart(curve, 0.0));
      CHECK(r.height <= 1e-9);
      CHECK(r.curvature <= 1e-9);
      CHECK(r.phase <= 1e-9);
      CHECK(r.p_nearest == 0);
    }
  }
  SUBCASE("asymmetric shape") {
    // theta-scan oracle at frame 0: f(x1) = 0.92, g(x2) = -0.98.
    const auto r = constraint_residuals(chord_chart(asym(), 0.0));
    CHECK(r.height == Approx(0.06).epsilon(1e-9));
    CHECK(std::max({r.height, r.curvature, r.phase}) > 1e-3);
    const auto r2 = constraint_residuals(chord_chart(asym(), 0.7));
    CHECK(r2.phase == Approx(0.176234042347 + 0.020856417003).epsilon(1e-6));
    CHECK(r2.height == Approx(1.006647025993 - 0.976356259717).epsilon(1e-6));
  }
  SUBCASE("residuals are non-negative everywhere") {
    for (double frame = 0; frame < 2 * kPi; frame += 0.37) {
      const auto r = constraint_residuals(chord_chart(trefoil(), frame));
      CHECK(r.height >= 0);
      CHECK(r.curvature >= 0);
      CHECK(r.phase >= 0);
      CHECK(r.phase <= kPi);
    }
  }
}

TEST_CASE("kl_profile") {
  SUBCASE("circles") {
    for (double r : {0.5, 0.7, 1.0, 2.0}) {
      for (Vec2 c : {Vec2{0, 0}, Vec2{0.3, -0.2}}) {
        const auto rep = kl_profile(circle(r, c), 1000);
        CHECK(rep.samples.size() == 1000);
        CHECK(rep.max_dev <= 1e-9);
        CHECK(rep.verdict == Verdict::Disc);
        REQUIRE(rep.fitted_circle.has_value());
        CHECK(rep.fitted_circle->radius == Approx(r).epsilon(1e-12));
        CHECK(rep.fitted_circle->center.x == Approx(c.x).epsilon(1e-12));
        CHECK(rep.fitted_circle->center.y == Approx(c.y).epsilon(1e-12));
      }
    }
  }
  SUBCASE("ellipse") {
    const auto rep = kl_profile(ellipse21(), 1000);
    CHECK(rep.samples[0].theta == 0.0);
    CHECK(rep.samples[0].curvature == Approx(2.0).epsilon(1e-12));
    CHECK(rep.samples[0].width == Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(rep.samples[0].kl - 8.0) <= 1e-6);
    CHECK(rep.max_dev == Approx(6.0).epsilon(1e-9));
    CHECK(rep.verdict == Verdict::NotDisc);
    CHECK_FALSE(rep.fitted_circle.has_value());
  }
  SUBCASE("constant width is not enough") {
    const auto rep = kl_profile(constant_width(), 1000);
    double width_dev = 0;
    for (const auto& s : rep.samples) width_dev = std::max(width_dev, std::abs(s.width - 2.0));
    CHECK(width_dev <= 1e-10);
    CHECK(rep.max_dev >= 0.5);
    // rho = 1 - 0.4 cos 3 theta, so max kL = 2 / 0.6.
    CHECK(rep.max_dev == Approx(2.0 / 0.6 - 2.0).epsilon(1e-9));
    CHECK(rep.verdict == Verdict::NotDisc);
  }
  SUBCASE("arc length column") {
    const auto rep = kl_profile(ellipse21(), 64);
    CHECK(rep.samples[0].s == 0.0);
    for (std::size_t i = 1; i < rep.samples.size(); ++i)
      CHECK(rep.samples[i].s > rep.samples[i - 1].s);
    CHECK(rep.samples.back().s < 9.6884482205477287);
  }
  SUBCASE("every non-circle separates by at least 1e-2") {
    for (const auto& curve : {ellipse21(), asym(), trefoil(), constant_width(),
                              build_curve(EllipseSpec{1.05, 1.0, {0.1, 0}, 0.3})}) {
      CHECK(kl_profile(curve, 256).max_dev >= 1e-2);
    }
  }
  SUBCASE("scale invariance") {
    const auto base = asym();
    const auto a = kl_profile(base, 200);
    const auto b = kl_profile(base.scaled(3.5), 200);
    CHECK(a.verdict == b.verdict);
    CHECK(a.max_dev == Approx(b.max_dev).epsilon(1e-12));
    const auto c = kl_profile(circle(0.5).scaled(4.0), 100);
    CHECK(c.verdict == Verdict::Disc);
  }
  SUBCASE("tolerance and validation") {
    CHECK(kl_profile(ellipse21(), 100, 10.0).verdict == Verdict::Disc);
    CHECK_THROWS_AS(kl_profile(ellipse21(), 15), Error);
    CHECK_THROWS_AS(kl_profile(ellipse21(), 100, 0.0), Error);
  }
}

TEST_CASE("inscribed_disc") {
  SUBCASE("off-centre circle") {
    const auto k = inscribed_disc(circle(1.0, {0.2, 0.1}));
    CHECK(k.center.x == Approx(0.2).epsilon(1e-8));
    CHECK(k.center.y == Approx(0.1).epsilon(1e-8));
    CHECK(k.radius == Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("ellipse against the grid oracle") {
    const auto curve = ellipse21();
    const auto k = inscribed_disc(curve);
    CHECK(std::abs(k.center.x) <= 1e-6);
    CHECK(std::abs(k.center.y) <= 1e-6);
    CHECK(std::abs(k.radius - 1.0) <= 1e-6);
    const auto g = oracle::grid_inscribed(support_of(curve), -0.5, 0.5, -0.5, 0.5, 100, 2000);
    CHECK(g.r <= k.radius + 1e-9);
    CHECK(g.r == Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("trefoil") {
    const auto curve = trefoil();
    const auto k = inscribed_disc(curve);
    CHECK(k.radius < 1.0);
    CHECK(k.radius == Approx(0.9).epsilon(1e-8));
    CHECK(std::hypot(k.center.x, k.center.y) <= 1e-6);
  }
  SUBCASE("optimality over a probe grid") {
    for (const auto& curve : {asym(), trefoil(), build_curve(EllipseSpec{1.5, 0.8, {0.2, 0.1}, 0.4}),
                              fourier(2.0, {0.1, 0.1, 0.05, 0.02}, {-0.1, 0.03, 0.0, 0.01})}) {
      const auto k = inscribed_disc(curve);
      CHECK(support_clearance(curve, k.center) == Approx(k.radius).epsilon(1e-8));
      const double d = 0.05;
      for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) {
          const Vec2 c{k.center.x + d * i / 4, k.center.y + d * j / 4};
          CHECK(support_clearance(curve, c) <= k.radius + 1e-9);
        }
      const auto g = oracle::grid_inscribed(support_of(curve), k.center.x - 0.1, k.center.x + 0.1,
                                            k.center.y - 0.1, k.center.y + 0.1, 40, 1440);
      // A finite theta grid overestimates the clearance by O(dtheta^2).
      CHECK(g.r <= k.radius + 1e-5);
      CHECK(g.r >= k.radius - 1e-3);
    }
  }
}

TEST_CASE("lemma2_witness") {
  SUBCASE("circles have none") {
    for (const auto& curve : {circle(1.0), circle(0.5, {0.3, -0.2}), circle(2.0, {-1, 4})})
      CHECK_FALSE(lemma2_witness(curve).has_value());
  }
  SUBCASE("ellipse") {
    const auto w = lemma2_witness(ellipse21());
    REQUIRE(w.has_value());
    CHECK(w->inscribed.radius == Approx(1.0).epsilon(1e-6));
    CHECK(w->inequalities.width_dir == Approx(4.0).epsilon(1e-6));
    CHECK(w->inequalities.two_r == Approx(2.0).epsilon(1e-6));
    CHECK(w->inequalities.width_exceeds_diameter);
    // x' is an end of the major axis, where rho = b^2 / a.
    CHECK(std::abs(std::abs(w->x_prime.x) - 2.0) <= 1e-6);
    CHECK(w->rho == Approx(0.5).epsilon(1e-6));
    CHECK(w->inequalities.two_rho == Approx(1.0).epsilon(1e-6));
    CHECK(w->inequalities.curvature_radius_within);
  }
  SUBCASE("trefoil and soundness") {
    for (const auto& curve : {trefoil(), asym(), constant_width()}) {
      const auto w = lemma2_witness(curve);
      REQUIRE(w.has_value());
      const auto& q = w->inequalities;
      CHECK(q.width_exceeds_diameter == (q.width_dir > q.two_r));
      CHECK(q.curvature_radius_within == (q.two_rho <= q.two_r));
      CHECK(q.two_r == Approx(2 * w->inscribed.radius));
      CHECK(q.two_rho == Approx(2 * w->rho));
      CHECK(w->rho == Approx(curve.radius_of_curvature(w->theta_prime)).epsilon(1e-12));
      CHECK(q.width_dir == Approx(width(curve, w->theta_prime)).epsilon(1e-12));
      const Vec2 d = w->x_outside - w->inscribed.center;
      CHECK(norm(d) > w->inscribed.radius);
    }
  }
}

TEST_CASE("identity_residuals") {
  SUBCASE("circle") {
    const auto r = identity_residuals(circle(1.0), 64);
    CHECK(r.samples.size() == 64);
    for (const auto& s : r.samples) {
      CHECK(std::abs(s.w) <= 1e-12);
      CHECK(s.dq_ds == Approx(1.0).epsilon(1e-12));
      CHECK(s.curvature * s.width - 1 == Approx(1.0).epsilon(1e-12));
    }
    CHECK(r.max_residual_w <= 1e-9);
    CHECK(r.max_residual_width <= 1e-9);
  }
  SUBCASE("ellipse and perturbed circles at step 1e-4") {
    for (const auto& curve : {ellipse21(), trefoil(), asym()}) {
      const auto r = identity_residuals(curve, 128, 1e-4);
      CHECK(r.max_residual_w <= 1e-5);
      CHECK(r.max_residual_width <= 1e-5);
    }
  }
  SUBCASE("constant width: L' vanishes") {
    const auto r = identity_residuals(trefoil(), 128);
    for (const auto& s : r.samples) {
      CHECK(std::abs(s.dwidth_ds) <= 1e-8);
      CHECK(std::abs(s.curvature * s.w) <= 1e-5);
    }
  }
  SUBCASE("second-order convergence in the step") {
    for (const auto& curve : {ellipse21(), asym()}) {
      const auto coarse = identity_residuals(curve, 128, 1e-3);
      const auto fine = identity_residuals(curve, 128, 5e-4);
      const double rw = coarse.max_residual_w / fine.max_residual_w;
      const double rl = coarse.max_residual_width / fine.max_residual_width;
      CHECK(rw >= 3.0);
      CHECK(rw <= 5.0);
      CHECK(rl >= 3.0);
      CHECK(rl <= 5.0);
    }
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(identity_residuals(ellipse21(), 8), Error);
    CHECK_THROWS_AS(identity_residuals(ellipse21(), 32, 0.0), Error);
  }
}

TEST_CASE("p_zero_check") {
  for (const auto& curve : {circle(1.0), circle(0.5, {0.3, -0.2}), ellipse21(), trefoil(), asym()}) {
    const auto r = p_zero_check(curve);
    CHECK(r.total_curvature == Approx(2 * kPi).epsilon(1e-10));
    CHECK(std::abs(r.total_curvature - 2 * kPi) <= 1e-8);
    CHECK(std::abs(r.width_derivative_integral) <= 1e-8);
    CHECK(r.p == 0);
    CHECK(std::abs(r.implied_p) <= 1e-8);
    CHECK(r.periodic_forces_p_zero);
  }
  CHECK(p_zero_check(constant_width()).max_abs_width_derivative <= 1e-10);
  CHECK(p_zero_check(circle(1.0)).max_w_jump <= 1e-12);
  CHECK(p_zero_check(ellipse21()).max_abs_width_derivative > 0.1);
}
