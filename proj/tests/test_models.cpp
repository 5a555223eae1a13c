#include "symplab/models.hpp"
#include "symplab/profiles.hpp"
#include "symplab/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace symplab;

namespace {

double omega_by_hand(const Vec4& u, const Vec4& v) { return u(0) * v(1) - u(1) * v(0) + u(2) * v(3) - u(3) * v(2); }

// Densifies the source polylines and measures exact point-to-segment
// distances to the targets, so it can only underestimate, by at most half the
// sample spacing.
double brute_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b, int per_segment) {
  auto seg = [](const Vec2& p, const Vec2& u, const Vec2& v) {
    const Vec2 w = v - u;
    const double t = std::clamp((p - u).dot(w) / w.squaredNorm(), 0.0, 1.0);
    return (p - u - t * w).norm();
  };
  auto directed = [&](const std::vector<Vec2>& x, const std::vector<Vec2>& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      for (int k = 0; k <= per_segment; ++k) {
        const Vec2 p = x[i] + (x[i + 1] - x[i]) * (static_cast<double>(k) / per_segment);
        double best = 1e300;
        for (std::size_t j = 0; j + 1 < y.size(); ++j) best = std::min(best, seg(p, y[j], y[j + 1]));
        worst = std::max(worst, best);
      }
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace

TEST(SigmaMl, DensityIsOneEverywhere) {
  const ParamPatch sigma = sigma_ml(1.0);
  SplitMix64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double th = rng.uniform(0, two_pi), s = rng.uniform(-1, 1);
    const Frame f = sigma.frame(th, s);
    EXPECT_NEAR(omega_by_hand(f.first().vec, f.second().vec), 1.0, 1e-14);
  }
}

TEST(SigmaMl, ContainsZeroSectionCircleAndDiskBoundary) {
  const ParamPatch sigma = sigma_ml(1.0);
  for (int i = 0; i < 32; ++i) {
    const Vec4 x = sigma.coords(two_pi * i / 32, 0.0);
    EXPECT_NEAR(std::hypot(x(0), x(2)), 1.0, 1e-15);
    EXPECT_EQ(x(1), 0.0);
    EXPECT_EQ(x(3), 0.0);
  }
}

TEST(Pushoffs, DisplayedFramePairings) {
  for (double e : {1e-3, 1e-2, 0.1}) {
    const auto [m1, m2] = pushoff_disk(-1, e).basis();
    const auto [p1, p2] = pushoff_disk(1, e).basis();
    // d/dq1 + e d/dp2 and d/dq2 - e d/dp1 span D-.
    EXPECT_TRUE(m1.isApprox(Vec4(1, 0, 0, e)));
    EXPECT_TRUE(m2.isApprox(Vec4(0, -e, 1, 0)));
    EXPECT_NEAR(omega_by_hand(m1, m2), -2 * e, 1e-15);
    EXPECT_NEAR(omega_by_hand(p1, p2), 2 * e, 1e-15);
    EXPECT_EQ(orientation_sign(p1, p2, m2, m1), 1);
  }
}

TEST(Pushoffs, IntersectionCirclesLieOnBothSurfaces) {
  for (double e : {1e-2, 0.1}) {
    for (const IntersectionCircle& c : intersection_circles(e)) {
      EXPECT_TRUE(circle_membership(c, 90, 1e-12).pass) << c.sign << " " << e;
      // Independent check: the circle point is Sigma^ml at s = sigma_parameter.
      const Vec4 expect = sigma_ml(1.0).coords(0.7, c.sigma_parameter());
      EXPECT_LT((c.at(0.7) - expect).norm(), 1e-15);
    }
  }
}

TEST(Profiles, OrbitDensityEqualsProfileFormula) {
  const ProfileCurve prof = polynomial_profile({1.0, 0.2, 0.3}, {0.1, 1.0, 0.0, 0.2}, {-1.0, 1.0});
  const ParamPatch patch = orbit_surface(prof);
  SplitMix64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const double th = rng.uniform(0, two_pi), s = rng.uniform(-1, 1);
    const double a = 1 + 0.2 * s + 0.3 * s * s, da = 0.2 + 0.6 * s;
    const double b = 0.1 + s + 0.2 * s * s * s, db = 1 + 0.6 * s * s;
    EXPECT_NEAR(symplectic_density(patch, th, s), da * b + db * a, 1e-12);
  }
}

TEST(Profiles, ReversedProfileIsNotAdmissible) {
  const ProfileCurve bad = polynomial_profile({1.0}, {0.0, -1.0}, {-1.0, 1.0});
  const VerificationReport r = profile_admissible(bad, 101);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.witness.empty());
}

TEST(Profiles, DeformationFamilyAdmissibleAndApproachesNodalSlice) {
  double prev = 1e300;
  for (double tau : {0.0, 0.5, 0.7, 0.9, 0.99}) {
    const ProfileCurve prof = deformation_family(tau, 0.1);
    EXPECT_TRUE(profile_admissible(prof, 4001).pass) << tau;
    const double h = hausdorff_distance(profile_polyline(prof, 2001), nodal_slice_polyline(0.1, prof.domain().hi));
    EXPECT_LT(h, prev) << tau;
    prev = h;
  }
}

TEST(Profiles, HausdorffMatchesBruteForce) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec2> a, b;
    for (int i = 0; i < 6; ++i) a.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (int i = 0; i < 5; ++i) b.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    double spacing = 0.0;
    for (const auto* p : {&a, &b}) {
      for (std::size_t i = 0; i + 1 < p->size(); ++i) spacing = std::max(spacing, ((*p)[i + 1] - (*p)[i]).norm() / 2000);
    }
    const double exact = hausdorff_distance(a, b), brute = brute_hausdorff(a, b, 2000);
    EXPECT_LE(brute, exact + 1e-12) << trial;
    EXPECT_GE(brute, exact - spacing / 2 - 1e-12) << trial;
  }
}

TEST(Profiles, NodalizedProfilePositiveOffTheNodeAndOnFillets) {
  const double eps = 0.1;
  const ProfileCurve nod = nodalized_profile(eps, 0.01);
  for (bool upper : {false, true}) {
    const Interval iv = nodalized_fillet_interval(eps, 0.01, upper);
    for (int i = 0; i <= 200; ++i) EXPECT_GT(profile_density(nod(iv.at(i / 200.0))), 0.0);
  }
  // The node itself (a = 0, b = 0) is the only degenerate point.
  const ProfileSample node = nod(0.0);
  EXPECT_NEAR(node.a, 0.0, 1e-15);
  EXPECT_NEAR(node.b, 0.0, 1e-15);
  EXPECT_GT(profile_density(nod(1e-3)), 0.0);
  EXPECT_GT(profile_density(nod(-1e-3)), 0.0);
}

TEST(Profiles, SampledProfileRejectsInconsistentDerivatives) {
  std::vector<std::array<double, 5>> rows;
  for (int i = 0; i <= 20; ++i) {
    const double s = -1 + 0.1 * i;
    rows.push_back({s, 1.0, s, 0.0, 5.0});  // db claims 5, data says 1
  }
  EXPECT_THROW(sampled_profile(rows), std::invalid_argument);
  for (auto& r : rows) r[4] = 1.0;
  const ProfileCurve ok = sampled_profile(rows);
  EXPECT_NEAR(ok(0.35).b, 0.35, 1e-12);
}

TEST(Gamma, DefaultGammaAdmissibleWithCorrectEndpoints) {
  const GammaCurve g = default_gamma();
  EXPECT_TRUE(gamma_admissible(g).pass);
  EXPECT_NEAR(g(0.0).g2, 0.0, 1e-15);
  EXPECT_NEAR(g(1.0).g1, 0.0, 1e-15);
  EXPECT_NEAR(g.eps1(), 1.0, 1e-12);
  EXPECT_NEAR(g.eps2(), 1.0, 1e-12);
  const ParamPatch a = gamma_smoothing(g);
  SplitMix64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const double th = rng.uniform(0, two_pi), s = rng.uniform();
    const GammaSample q = g(s);
    EXPECT_NEAR(symplectic_density(a, th, s), q.g2 * q.dg2 - q.g1 * q.dg1, 1e-12);
  }
}

TEST(Gamma, CoreSatisfiesHyperbola) {
  const GammaCurve g = default_gamma({0.1, 0.3, 0.6, 1.0});
  ASSERT_TRUE(g.core().has_value());
  for (int i = 0; i <= 50; ++i) {
    const GammaSample q = g(g.core()->at(i / 50.0));
    EXPECT_NEAR(q.g1 * q.g2, 0.01, 1e-13);
  }
}

TEST(Smoothing, RotatedReducesAndSatisfiesEquation) {
  const double eps = 0.01;
  const GammaCurve g = default_gamma({0.1, 0.3, 0.6, 1.0});
  const ParamPatch straight = gamma_smoothing(g), r0 = rotated_smoothing(0, 0, g, eps);
  EXPECT_LT(c1_distance(straight, r0, {30, 30}).value, 1e-12);
  const ParamPatch r = rotated_smoothing(0.4, -0.7, g, eps);
  for (int i = 0; i <= 20; ++i) {
    const Vec4 x = r.coords(0.3 * i, g.core()->at(i / 20.0));
    auto [z1, z2] = to_complex(x);
    EXPECT_LT(std::abs((z1 - cplx(0.4, -0.7) * z2) * z2 - eps), 1e-12);
  }
  EXPECT_THROW(rotated_smoothing(0.1, 0.1, g, 0.02), ConstraintViolation);
}

TEST(Smoothing, C1DistanceToComplexCurveShrinksWithEps) {
  double prev = 1e300;
  for (double e : {0.02, 0.01, 0.005}) {
    const GammaCurve g = default_gamma({std::sqrt(e), 0.3, 0.6, 1.0});
    const double d = c1_distance(rotated_smoothing(0.3, -0.2, g, e), complex_curve_target(cplx(0.3, -0.2), e), {24, 24}).value;
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Smoothing, ComplexCurveProjectionLandsOnCurve) {
  const SurfaceTarget t = complex_curve_target(cplx(0.5, 0.5), 0.04);
  const Vec4 x(0.3, 0.1, 0.2, -0.05);
  auto [foot, tangent] = t.project(x);
  auto [z1, z2] = to_complex(foot);
  EXPECT_LT(std::abs((z1 - cplx(0.5, 0.5) * z2) * z2 - 0.04), 1e-10);
  // Foot is orthogonal: x - foot is perpendicular to the tangent plane.
  EXPECT_LT(std::abs((x - foot).dot(tangent.first)), 1e-9);
  EXPECT_LT(std::abs((x - foot).dot(tangent.second)), 1e-9);
}

TEST(CoordinateChange, PullbackConstantIsTwoEps) {
  for (double e : {1e-3, 0.1, 0.5}) {
    const CoordinateChange chg(e);
    const Mat4 m = chg.matrix();
    // Oracle: M^T omega M = kappa omega computed directly.
    const Mat4 pulled = m.transpose() * standard_form_matrix() * m;
    EXPECT_LT((pulled - 2 * e * standard_form_matrix()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((chg.fd_jacobian(Vec4(0.2, 0.1, -0.3, 0.4)) - m).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(CoordinateChange, AnnulusMapsToRotatedCircles) {
  const double e = 0.1;
  const CoordinateChange chg(e);
  const ProfileSample p{0.2, 1.3, -0.4, 0.0, 0.0};
  const double g1 = e * p.a + p.b, g2 = p.b - e * p.a;
  for (double th : {0.0, 1.0, 2.5}) {
    const Vec4 expect(g1 * std::cos(th), g1 * std::sin(th), g2 * std::cos(th), -g2 * std::sin(th));
    EXPECT_LT((chg.apply(annulus_point(p, th)) - expect).norm(), 1e-15);
  }
}

TEST(LagrangianDisk, OmegaVanishesAndBoundaryOnSmoothing) {
  const GammaCurve g = default_gamma();
  const ParamPatch disk = lagrangian_disk_in_smoothing(0.1), ann = gamma_smoothing(g);
  SplitMix64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const double r = rng.uniform(0, 0.1), th = rng.uniform(0, two_pi);
    const Frame f = disk.frame(r, th);
    EXPECT_NEAR(omega_by_hand(f.first().vec, f.second().vec), 0.0, 1e-15);
  }
  const double s = gamma_diagonal_parameter(g);
  EXPECT_LT((disk.coords(0.1, 1.2) - ann.coords(1.2, s)).norm(), 1e-10);
}

TEST(Framing, WindingNumbers) {
  EXPECT_EQ(normal_winding(sigma_ml(1.0), 0.0), 1);
  EXPECT_EQ(normal_winding(double_twist_patch(), 0.0), 2);
  EXPECT_EQ(winding_number([](double t) { return Vec2(std::cos(-3 * t), std::sin(-3 * t)); }), -3);
  EXPECT_THROW(winding_number([](double t) { return Vec2(std::cos(t) - 1, std::sin(t)); }), DegeneracyError);
  EXPECT_THROW(normal_winding(sigma_ml(1.0), 0.5), std::invalid_argument);
}
