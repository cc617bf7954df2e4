#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "shellspec/geometry.hpp"

using namespace shellspec;

namespace {

// independent curvature oracle: second differences of the position map
double fd_curvature(const Curve& c, double s, double h = 1e-4) {
  Vec2 xm = c.position(s - h), x0 = c.position(s), xp = c.position(s + h);
  Vec2 d1 = (xp - xm) / (2 * h);
  Vec2 d2 = (xp - 2 * x0 + xm) / (h * h);
  return (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3);
}

}  // namespace

TEST_CASE("circle frames") {
  Curve c = Curve::circle(1.0);
  REQUIRE(c.length() == Catch::Approx(2 * kPi).epsilon(1e-12));
  FramePoint fp = c.frame_at(0.0);
  CHECK(fp.x.x() == Catch::Approx(1.0).margin(1e-12));
  CHECK(fp.x.y() == Catch::Approx(0.0).margin(1e-12));
  CHECK(fp.t.x() == Catch::Approx(0.0).margin(1e-12));
  CHECK(fp.t.y() == Catch::Approx(1.0).margin(1e-12));
  CHECK(fp.n.x() == Catch::Approx(1.0).margin(1e-12));
  CHECK(fp.n.y() == Catch::Approx(0.0).margin(1e-12));
  CHECK(fp.kappa == Catch::Approx(1.0).margin(1e-10));

  Curve c2 = Curve::circle(2.0);
  for (double s : {0.3, 1.7, 5.0, 11.0})
    CHECK(c2.frame_at(s).kappa == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("unit speed and closedness") {
  auto curves = {Curve::circle(1.5), Curve::ellipse(2.0, 1.0), Curve::star(1.0, 0.2, 5)};
  for (const auto& c : curves) {
    double l = c.length();
    for (int i = 0; i < 40; ++i) {
      double s = l * i / 40.0;
      double h = 1e-6 * l;
      Vec2 d = (c.position(s + h) - c.position(s - h)) / (2 * h);
      CHECK(d.norm() == Catch::Approx(1.0).margin(1e-7));
    }
    CHECK((c.position(0.0) - c.position(l)).norm() < 1e-10);
    CHECK((c.position(0.3) - c.position(0.3 + l)).norm() < 1e-10);
  }
}

TEST_CASE("ellipse curvature at the tip") {
  Curve c = Curve::ellipse(2.0, 1.0);
  FramePoint fp = c.frame_at(0.0);  // parametrization starts at (2, 0)
  REQUIRE(fp.x.x() == Catch::Approx(2.0).margin(1e-10));
  CHECK(fp.kappa == Catch::Approx(2.0).margin(1e-9));
  CHECK(fd_curvature(c, 0.0) == Catch::Approx(2.0).margin(1e-5));
}

TEST_CASE("frenet residuals with fourth-order differences") {
  auto curves = {Curve::circle(1.0), Curve::ellipse(2.0, 1.0), Curve::star(1.0, 0.2, 5)};
  for (const auto& c : curves) {
    double l = c.length(), h = 1e-4;
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      double s = l * i / 64.0;
      Vec2 tm2 = c.frame_at(s - 2 * h).t, tm1 = c.frame_at(s - h).t;
      Vec2 tp1 = c.frame_at(s + h).t, tp2 = c.frame_at(s + 2 * h).t;
      Vec2 dt = (tm2 - 8 * tm1 + 8 * tp1 - tp2) / (12 * h);
      FramePoint fp = c.frame_at(s);
      worst = std::max(worst, (dt + fp.kappa * fp.n).norm());
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("tubular chart") {
  Curve c = Curve::circle(1.0);
  Vec2 x = c.tubular_to_cartesian(0.0, 0.1);
  CHECK(x.x() == Catch::Approx(1.1).margin(1e-12));
  CHECK(x.y() == Catch::Approx(0.0).margin(1e-12));

  double s = kPi / 2;
  Vec2 y = c.tubular_to_cartesian(s, -0.2);
  CHECK(y.x() == Catch::Approx(0.8 * std::cos(s)).margin(1e-12));
  CHECK(y.y() == Catch::Approx(0.8 * std::sin(s)).margin(1e-12));

  Curve st = Curve::star(1.0, 0.2, 5);
  CHECK((st.tubular_to_cartesian(0.7, 0.0) - st.position(0.7)).norm() < 1e-13);
  CHECK_THROWS_AS(c.tubular_to_cartesian(0.0, 0.95), OutsideTubeError);
}

TEST_CASE("chart inversion") {
  Curve c = Curve::circle(1.0);
  TubularPoint tp = c.cartesian_to_tubular(Vec2(1.3, 0.0));
  CHECK(tp.s == Catch::Approx(0.0).margin(1e-11));
  CHECK(tp.p == Catch::Approx(0.3).margin(1e-11));

  // round-trip property on random in-tube points
  std::mt19937 rng(20240);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const auto& curve : {Curve::circle(1.0), Curve::ellipse(2.0, 1.0), Curve::star(1.0, 0.2, 5)}) {
    double beta = curve.max_tube_halfwidth();
    for (int i = 0; i < 1000; ++i) {
      double s = uni(rng) * curve.length();
      double p = (2 * uni(rng) - 1) * 0.95 * beta;
      Vec2 x = curve.tubular_to_cartesian(s, p);
      TubularPoint q = curve.cartesian_to_tubular(x);
      double ds = std::abs(q.s - reduce_mod(s, curve.length()));
      ds = std::min(ds, curve.length() - ds);
      CHECK(ds < 1e-10);
      CHECK(std::abs(q.p - p) < 1e-10);
      CHECK(q.weight > 0.0);
      CHECK((curve.tubular_to_cartesian(q.s, q.p) - x).norm() < 1e-10);
    }
  }
  CHECK_THROWS_AS(c.cartesian_to_tubular(Vec2(5.0, 5.0)), OutsideTubeError);
}

TEST_CASE("chart inversion agrees with dense nearest-point search") {
  Curve st = Curve::star(1.0, 0.2, 5);
  double l = st.length();
  for (Vec2 x : {Vec2(1.05, 0.2), Vec2(-0.15, 0.95), Vec2(0.4, -0.75)}) {
    TubularPoint tp = st.cartesian_to_tubular(x);
    // brute force over a fine s-grid with parabolic refinement
    int M = 200000;
    double best_s = 0, best_d = 1e300;
    for (int i = 0; i < M; ++i) {
      double s = l * i / M;
      double d = (x - st.position(s)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best_s = s;
      }
    }
    double ds = std::abs(tp.s - best_s);
    ds = std::min(ds, l - ds);
    CHECK(ds < 1e-4);
    CHECK(std::abs(std::abs(tp.p) - std::sqrt(best_d)) < 1e-7);
  }
}

TEST_CASE("tube half-width") {
  CHECK(Curve::circle(1.0).max_tube_halfwidth() == Catch::Approx(0.9).margin(1e-9));
  CHECK(Curve::circle(3.0).max_tube_halfwidth() == Catch::Approx(2.7).margin(1e-8));
  // max curvature of the 2:1 ellipse is a/b^2 = 2
  CHECK(Curve::ellipse(2.0, 1.0).max_tube_halfwidth() == Catch::Approx(0.45).margin(1e-6));
}

TEST_CASE("jacobian positivity in the tube") {
  for (const auto& c : {Curve::ellipse(2.0, 1.0), Curve::star(1.0, 0.2, 5)}) {
    double beta = c.max_tube_halfwidth();
    for (int i = 0; i < 200; ++i) {
      double s = c.length() * i / 200.0;
      for (double p : {-0.99 * beta, -0.5 * beta, 0.5 * beta, 0.99 * beta}) {
        CHECK(1.0 + p * c.frame_at(s).kappa > 0.0);
      }
    }
  }
}

TEST_CASE("equispaced nodes") {
  Curve c = Curve::circle(1.0);
  auto nodes = c.equispaced_nodes(4);
  REQUIRE(nodes.size() == 4);
  for (int j = 0; j < 4; ++j) {
    double ang = j * kPi / 2;
    CHECK((nodes[j].x - Vec2(std::cos(ang), std::sin(ang))).norm() < 1e-12);
  }
  CHECK_THROWS_AS(c.equispaced_nodes(7), InvalidNodeCountError);
  CHECK_THROWS_AS(c.equispaced_nodes(2), InvalidNodeCountError);

  // trapezoid weights integrate constants exactly: sum = l
  for (const auto& curve : {Curve::ellipse(2.0, 1.0), Curve::star(1.0, 0.2, 5)}) {
    auto ns = curve.equispaced_nodes(64);
    double sum = 0.0;
    for (const auto& fp : ns) sum += curve.length() / ns.size();
    CHECK(sum == Catch::Approx(curve.length()).epsilon(1e-14));
  }
}

TEST_CASE("total curvature is 2 pi") {
  for (const auto& c : {Curve::circle(2.0), Curve::ellipse(2.0, 1.0), Curve::star(1.0, 0.2, 5)}) {
    for (int N : {64, 256}) {
      auto nodes = c.equispaced_nodes(N);
      double total = 0.0;
      for (const auto& fp : nodes) total += fp.kappa * c.length() / N;
      CHECK(std::abs(total - 2 * kPi) < 1e-8);
    }
  }
}
