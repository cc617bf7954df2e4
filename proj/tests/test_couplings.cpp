#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "shellspec/couplings.hpp"

using namespace shellspec;

TEST_CASE("classification of landmark couplings") {
  // zig-zag
  ClassificationReport zz = classify(Couplings(0, 0, 2, 0));
  CHECK(zz.d_min == Catch::Approx(-4.0));
  CHECK(zz.confining);
  CHECK(zz.critical);
  CHECK(zz.zigzag);
  CHECK(zz.crit_abs_min == Catch::Approx(0.0).margin(1e-14));

  // infinite mass
  ClassificationReport im = classify(Couplings(0, 2, 0, 0));
  CHECK(im.confining);
  CHECK_FALSE(im.critical);
  CHECK_FALSE(im.zigzag);
  CHECK(im.crit_min == Catch::Approx(4.0));
  REQUIRE(im.theta0.has_value());
  CHECK(*im.theta0 == Catch::Approx(0.0).margin(1e-14));

  // critical but not confining
  ClassificationReport cr = classify(Couplings(2, 0, 0, 0));
  CHECK(cr.d_min == Catch::Approx(4.0));
  CHECK(cr.critical);
  CHECK_FALSE(cr.confining);
}

TEST_CASE("classification with function couplings") {
  Couplings c;
  c.period = 2 * kPi;
  c.eta = CouplingFunction::function([](double s) { return 1.0 + 0.25 * std::cos(s); });
  c.tau = CouplingFunction(0.5);
  c.lambda = CouplingFunction(0.0);
  c.omega = CouplingFunction(0.0);
  ClassificationReport rep = classify(c);
  CHECK_FALSE(rep.d_constant);
  CHECK(rep.d_min == Catch::Approx(0.75 * 0.75 - 0.25).epsilon(1e-3));
  CHECK(rep.d_max == Catch::Approx(1.25 * 1.25 - 0.25).epsilon(1e-3));
}

TEST_CASE("gauge reduction roots") {
  // omega = 0, d not in {0, -4}: X in {1, -4/d}, z in {1, -1}
  auto roots = gauge_reduce(Couplings(2, 0, 0, 0));  // d = 4
  REQUIRE(roots.size() == 2);
  std::vector<double> xs{roots[0].X, roots[1].X};
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == Catch::Approx(-1.0).margin(1e-12));
  CHECK(xs[1] == Catch::Approx(1.0).margin(1e-12));
  for (const auto& g : roots) {
    CHECK(std::abs(std::abs(g.z) - 1.0) < 1e-12);
    double resid = 4.0 * g.X * g.X - 4.0 + (4.0 - 4.0) * g.X;
    CHECK(std::abs(resid) < 1e-12);
    CHECK(std::abs(g.z.imag()) < 1e-12);
  }

  // d = 0, omega = 2: X = 1/2, z = -i
  auto r0 = gauge_reduce(Couplings(1, 1, 0, 2));
  REQUIRE(r0.size() == 1);
  CHECK(r0[0].X == Catch::Approx(0.5).margin(1e-13));
  CHECK(r0[0].z.real() == Catch::Approx(0.0).margin(1e-13));
  CHECK(r0[0].z.imag() == Catch::Approx(-1.0).margin(1e-13));

  // (d, omega) = (-4, 0): unique X = 1, z = 1
  auto rc = gauge_reduce(Couplings(0, 2, 0, 0));
  REQUIRE(rc.size() == 1);
  CHECK(rc[0].X == Catch::Approx(1.0));
  CHECK(rc[0].z == Complex(1.0, 0.0));
}

TEST_CASE("gauge reduction invariants across random couplings") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uni(-2.5, 2.5);
  int done = 0;
  while (done < 200) {
    double eta = uni(rng), tau = uni(rng), lam = uni(rng), w = uni(rng);
    double d = eta * eta - tau * tau - lam * lam;
    if (std::abs(d) < 1e-6) continue;
    ++done;
    for (const auto& g : gauge_reduce(Couplings(eta, tau, lam, w))) {
      double resid = d * g.X * g.X - 4.0 + (4.0 + w * w - d) * g.X;
      CHECK(std::abs(resid) < 1e-12);
      CHECK(std::abs(std::abs(g.z) - 1.0) < 1e-12);
      CHECK(g.X != 0.0);
      CHECK(g.reduced.at(0.0).omega == 0.0);
      CHECK(g.reduced.at(0.0).eta == Catch::Approx(g.X * eta).margin(1e-14));
    }
  }
  // non-constant d rejected
  Couplings bad;
  bad.eta = CouplingFunction::function([](double s) { return std::cos(s); });
  bad.omega = CouplingFunction(1.0);
  CHECK_THROWS_AS(gauge_reduce(bad), DNotConstantError);
}

TEST_CASE("isospectral partner") {
  Couplings c1 = isospectral_partner(Couplings(2, 0, 0));  // d = 4 -> -4/d = -1
  CHECK(c1.at(0.0).eta == Catch::Approx(-2.0));

  Couplings c2 = isospectral_partner(Couplings(0, 3, 0));  // d = -9
  CHECK(c2.at(0.0).tau == Catch::Approx(4.0 / 3.0).margin(1e-14));
  CHECK(c2.d(0.0) == Catch::Approx(-16.0 / 9.0).margin(1e-12));

  // involution
  Couplings c3 = isospectral_partner(isospectral_partner(Couplings(1.2, 0.4, 0.3)));
  CHECK(c3.at(0.0).eta == Catch::Approx(1.2).margin(1e-12));
  CHECK(c3.at(0.0).tau == Catch::Approx(0.4).margin(1e-12));
  CHECK(c3.at(0.0).lambda == Catch::Approx(0.3).margin(1e-12));

  CHECK_THROWS_AS(isospectral_partner(Couplings(0, 2, 0)), ExceptionalCouplingError);
  CHECK_THROWS_AS(isospectral_partner(Couplings(1, 1, 0)), ExceptionalCouplingError);
}

TEST_CASE("charge conjugation") {
  Couplings c = charge_conjugate(Couplings(1, 1, 1));
  CHECK(c.at(0.0).eta == Catch::Approx(-1.0));
  CHECK(c.at(0.0).tau == Catch::Approx(1.0));
  CHECK(c.at(0.0).lambda == Catch::Approx(-1.0));
  // d and criticality invariant
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    Couplings a(uni(rng), uni(rng), uni(rng));
    Couplings b = charge_conjugate(a);
    CHECK(b.d(0.0) == Catch::Approx(a.d(0.0)).margin(1e-14));
    CHECK(b.criticality(0.0) == Catch::Approx(a.criticality(0.0)).margin(1e-13));
    ClassificationReport ra = classify(a), rb = classify(b);
    CHECK(ra.confining == rb.confining);
    CHECK(ra.critical == rb.critical);
  }
}

TEST_CASE("forward renormalization") {
  Couplings f1 = renormalize_forward(Couplings(2, 0, 0));
  CHECK(f1.at(0.0).eta == Catch::Approx(2 * std::tan(1.0)).epsilon(1e-12));
  CHECK(f1.at(0.0).eta == Catch::Approx(3.114815).margin(1e-6));

  Couplings f2 = renormalize_forward(Couplings(0, 2, 0));
  CHECK(f2.at(0.0).tau == Catch::Approx(2 * std::tanh(1.0)).epsilon(1e-12));
  CHECK(f2.at(0.0).tau == Catch::Approx(1.523188).margin(1e-6));

  // d = 0 branch is the identity
  Couplings f3 = renormalize_forward(Couplings(1, 1, 0));
  CHECK(f3.at(0.0).eta == Catch::Approx(1.0));
  CHECK(f3.at(0.0).tau == Catch::Approx(1.0));

  // constants with d = (2 pi)^2 map to zero
  Couplings f4 = renormalize_forward(Couplings(2 * kPi, 0, 0));
  CHECK(std::abs(f4.at(0.0).eta) < 1e-9);

  // odd squares are exceptional
  CHECK_THROWS_AS(renormalize_forward(Couplings(kPi, 0, 0)), ExceptionalCouplingError);
}

TEST_CASE("backward renormalization") {
  Couplings b1 = renormalize_backward(Couplings(2 * std::tan(1.0), 0, 0), 0);
  CHECK(b1.at(0.0).eta == Catch::Approx(2.0).epsilon(1e-12));

  Couplings b2 = renormalize_backward(Couplings(0, 0, 0), 1);
  CHECK(b2.at(0.0).eta == Catch::Approx(2 * kPi));
  CHECK(b2.at(0.0).tau == 0.0);

  // dhat = -1: factor artanh(1/2)/(1/2)
  Couplings b3 = renormalize_backward(Couplings(0, 1, 0), 0);
  CHECK(b3.at(0.0).tau == Catch::Approx(std::atanh(0.5) / 0.5).epsilon(1e-12));

  CHECK_THROWS_AS(renormalize_backward(Couplings(0, 3, 0), 0), ExceptionalCouplingError);
  CHECK_THROWS_AS(renormalize_backward(Couplings(0, 1, 0), 1), ExceptionalCouplingError);
}

TEST_CASE("renormalization round trip and dhat law") {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  int done = 0;
  while (done < 300) {
    double eta = uni(rng), tau = uni(rng), lam = uni(rng);
    double d = eta * eta - tau * tau - lam * lam;
    if (d <= -9.0 || d >= kPi * kPi - 0.2) continue;
    ++done;
    Couplings c(eta, tau, lam);
    Couplings chat = renormalize_forward(c);
    double dhat = chat.d(0.0);
    double expect = d > 1e-12   ? 4.0 * std::pow(std::tan(0.5 * std::sqrt(d)), 2)
                    : d < -1e-12 ? -4.0 * std::pow(std::tanh(0.5 * std::sqrt(-d)), 2)
                                 : 0.0;
    CHECK(std::abs(dhat - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
    CHECK(dhat > -4.0);
    Couplings back = renormalize_backward(chat, 0);
    CHECK(std::abs(back.at(0.0).eta - eta) < 1e-10);
    CHECK(std::abs(back.at(0.0).tau - tau) < 1e-10);
    CHECK(std::abs(back.at(0.0).lambda - lam) < 1e-10);
  }
}

TEST_CASE("forward map with non-constant couplings") {
  Couplings c;
  c.period = 2 * kPi;
  c.eta = CouplingFunction::function([](double s) { return 1.0 + 0.2 * std::cos(s); });
  c.tau = CouplingFunction(0.0);
  c.lambda = CouplingFunction(0.0);
  Couplings chat = renormalize_forward(c);
  for (double s : {0.0, 1.0, 2.5}) {
    double d = c.d(s);
    double f = std::tan(0.5 * std::sqrt(d)) / (0.5 * std::sqrt(d));
    CHECK(chat.eta(s) == Catch::Approx(f * c.eta(s)).epsilon(1e-12));
  }
}

TEST_CASE("confinement split") {
  auto zz = confinement_split(Couplings(0, 0, 2));
  CHECK(zz.kind == ConfinementSplit::Kind::ZigZag);
  CHECK(zz.sign == 1);

  auto im = confinement_split(Couplings(0, 2, 0));
  CHECK(im.kind == ConfinementSplit::Kind::InfiniteMass);
  REQUIRE(im.theta0.has_value());
  CHECK(*im.theta0 == Catch::Approx(0.0).margin(1e-14));

  double th = 0.8;
  auto qd = confinement_split(Couplings(0, 2 * std::cos(th), -2 * std::sin(th)));
  CHECK(qd.kind == ConfinementSplit::Kind::QuantumDot);
  REQUIRE(qd.theta0.has_value());
  CHECK(*qd.theta0 == Catch::Approx(th).epsilon(1e-12));

  CHECK_THROWS_AS(confinement_split(Couplings(1, 0, 0)), NotConfiningError);

  // boundary-condition matrices are singular (rank one) for d = -4
  FramePoint fp;
  fp.s = 0.3;
  fp.x = Vec2(std::cos(0.3), std::sin(0.3));
  fp.t = Vec2(-std::sin(0.3), std::cos(0.3));
  fp.n = Vec2(std::cos(0.3), std::sin(0.3));
  fp.kappa = 1.0;
  for (int side : {+1, -1}) {
    SpinMatrix bc = zz.bc_matrix(fp, side);
    CHECK(std::abs(bc.determinant()) < 1e-13);
    CHECK(bc.cwiseAbs().maxCoeff() > 0.5);
  }
}
