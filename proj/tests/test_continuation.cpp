#include <gtest/gtest.h>

#include "radxray/continuation.hpp"
#include "radxray/error.hpp"
#include "radxray/radicalfit.hpp"

using namespace radxray;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::IoError;
}

}  // namespace

TEST(Discriminant, DiskZerosAreTheSupportValues) {
  const DiscriminantSet ds = discriminant_set(make_disk_body(), Direction::from_angle(M_PI / 2));
  ASSERT_EQ(ds.real_zeros.size(), 2u);
  EXPECT_NEAR(ds.real_zeros[0], -1.0, 1e-10);
  EXPECT_NEAR(ds.real_zeros[1], 1.0, 1e-10);
}

TEST(Discriminant, EllipseZerosIncludeSupportValues) {
  const AlgebraicBody k = make_ellipse_body(2.0, 1.0, {0.3, -0.2}, M_PI / 6);
  for (double th : {0.3, 1.9, 3.3}) {
    const Direction d = Direction::from_angle(th);
    const DiscriminantSet ds = discriminant_set(k, d);
    const SupportData sd = support(k, d);
    ASSERT_EQ(ds.real_zeros.size(), 2u);
    EXPECT_NEAR(ds.real_zeros[0], sd.rho_minus, 1e-10);
    EXPECT_NEAR(ds.real_zeros[1], sd.rho_plus, 1e-10);
  }
}

TEST(Discriminant, SuperellipseAxisHasTripleZeros) {
  const DiscriminantSet ds = discriminant_set(make_superellipse_body(), Direction::from_angle(M_PI / 2));
  ASSERT_EQ(ds.zeros.roots.size(), 4u);
  for (const auto& z : ds.zeros.roots) {
    EXPECT_EQ(z.multiplicity, 3);
    EXPECT_NEAR(std::abs(z.value), 1.0, 1e-12);
  }
}

TEST(Discriminant, DegenerateDirectionOfLeadingForm) {
  // Leading form y^4 vanishes at xi^perp = (1, 0), i.e. xi = (0, -1).
  const BiPoly q{{2, 0, 1.0}, {0, 4, 1.0}, {0, 0, -1.0}};
  const AlgebraicBody k = AlgebraicBody::create(q, {0.0, 0.0});
  EXPECT_EQ(kind_of([&] { discriminant_set(k, Direction::from_angle(-M_PI / 2)); }), ErrorKind::DegenerateDirection);
  EXPECT_NO_THROW(discriminant_set(k, Direction::from_angle(0.3)));
}

TEST(Path, DetoursStayInUpperHalfPlaneWithClearance) {
  const DiscriminantSet ds = discriminant_set(make_disk_body(), Direction::from_angle(M_PI / 2));
  const ComplexPath p = build_path(ds, 0.0, 100.0, 0.2);
  ASSERT_GE(p.waypoints.size(), 3u);
  EXPECT_EQ(p.waypoints.front(), cplx(0.0, 0.0));
  EXPECT_NEAR(std::abs(p.waypoints.back()), 100.0, 1e-12);
  EXPECT_GE(p.clearance, 0.2);
  EXPECT_GE(p.real_prefix, 1u);
  for (std::size_t i = 0; i < p.real_prefix; ++i) EXPECT_EQ(p.waypoints[i].imag(), 0.0);
  for (const cplx& w : p.waypoints) EXPECT_GE(w.imag(), 0.0);
}

TEST(Path, StartValidation) {
  const DiscriminantSet ds = discriminant_set(make_disk_body(), Direction::from_angle(M_PI / 2));
  EXPECT_EQ(kind_of([&] { build_path(ds, 0.999, 100.0, 0.2); }), ErrorKind::StartTooCloseToZ);
  EXPECT_EQ(kind_of([&] { build_path(ds, 0.0, 1.5, 0.2); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { build_path(ds, 0.0, 100.0, 0.0); }), ErrorKind::InvalidArgument);
  try {
    build_path(ds, 0.999, 100.0, 0.2);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("perturb"), std::string::npos);
  }
}

TEST(Path, NoZerosGivesStraightSegment) {
  DiscriminantSet ds;
  const ComplexPath p = build_path(ds, 0.5, 10.0, 0.1);
  for (const cplx& w : p.waypoints) EXPECT_EQ(w.imag(), 0.0);
  EXPECT_EQ(p.real_prefix, p.waypoints.size());
}

TEST(Track, DiskBracketSquaredIsTheFittedPolynomial) {
  const AlgebraicBody k = make_disk_body();
  const Direction xi = Direction::from_angle(M_PI / 2);
  const DiscriminantSet ds = discriminant_set(k, xi);
  const ComplexPath p = build_path(ds, 0.0, 100.0, 0.2);
  const TrackedBranches tb = track_branches(ds, k, 0.0, p);
  EXPECT_LE(tb.residual, 1e-9);
  for (std::size_t i = 0; i < p.waypoints.size(); ++i) {
    const cplx t = p.waypoints[i];
    const cplx expected = 4.0 - 4.0 * t * t;
    EXPECT_LE(std::abs(std::pow(tb.bracket(i), 2) - expected), 1e-9 * std::abs(expected)) << i;
  }
  const GrowthReport g = growth_check(tb, 2);
  EXPECT_NEAR(g.plateau, 4.0, 0.2);
  EXPECT_TRUE(g.bounded);
  EXPECT_LT(direction_cluster_deviation(tb, ds.frame_poly, 5.0), 0.1);
}

TEST(Track, EllipseAlongFlatDirection) {
  const AlgebraicBody k = make_ellipse_body(2.0, 1.0);
  const Direction xi = Direction::from_angle(M_PI / 2);
  const DiscriminantSet ds = discriminant_set(k, xi);
  const TrackedBranches tb = track_branches(ds, k, 0.1, build_path(ds, 0.1, 100.0, 0.2));
  EXPECT_LE(tb.residual, 1e-9);
  const GrowthReport g = growth_check(tb, 2);
  EXPECT_NEAR(g.plateau, 16.0, 0.8);
  EXPECT_TRUE(g.bounded);
}

TEST(Track, RotatedEllipseAgreesWithFit) {
  const AlgebraicBody k = make_ellipse_body(2.0, 1.0, {0.3, -0.2}, M_PI / 6);
  const Direction xi = Direction::from_angle(1.1);
  const auto fit = fit_power(sample_chords(k, xi, 64), 2, 2);
  const DiscriminantSet ds = discriminant_set(k, xi);
  const double t0 = support(k, xi).center();
  const ComplexPath p = build_path(ds, t0, default_path_radius(ds), 0.2);
  const TrackedBranches tb = track_branches(ds, k, t0, p);
  EXPECT_LE(tb.residual, 1e-9);
  for (std::size_t i = 0; i < p.waypoints.size(); ++i) {
    const cplx pv = fit.fit(p.waypoints[i]);
    EXPECT_LE(std::abs(pv - std::pow(tb.bracket(i), 2)), 1e-6 * std::abs(pv));
  }
}

TEST(Track, StartMustCutTheBody) {
  const AlgebraicBody k = make_disk_body();
  const DiscriminantSet ds = discriminant_set(k, Direction::from_angle(0.0));
  const ComplexPath p = build_path(ds, 1.5, 100.0, 0.2);
  EXPECT_EQ(kind_of([&] { track_branches(ds, k, 1.5, p); }), ErrorKind::InvalidArgument);
}

TEST(Growth, CubicPerturbationIsUnbounded) {
  std::vector<cplx> ts, good, bad;
  for (double t = 1.0; t <= 100.0; t *= 1.05) {
    ts.emplace_back(t, 0.0);
    good.emplace_back(4.0 - 4.0 * t * t, 0.0);
    bad.emplace_back(4.0 - 4.0 * t * t - 0.04 * t * t * t, 0.0);
  }
  EXPECT_TRUE(growth_check(ts, good, 2).bounded);
  EXPECT_FALSE(growth_check(ts, bad, 2).bounded);
  EXPECT_THROW(growth_check(std::span<const cplx>(ts).first(3), good, 2), Error);
}

TEST(Residues, CountsSumToDegreeAtInfinity) {
  for (const AlgebraicBody& k : {make_disk_body(), make_superellipse_body()}) {
    const BiPoly& q = k.polynomial();
    const LeadingDirections lead = leading_root_directions(q);
    int total = 0;
    for (const auto& w : lead.roots.roots) {
      const ResidueCount rc = log_residue_count(q, w.value, 0.3, 0.0);
      EXPECT_LE(rc.rounding_distance, 0.01);
      EXPECT_EQ(rc.count, w.multiplicity);
      total += rc.count;
    }
    EXPECT_EQ(total, psi_polynomial(q, 0.0).degree());
    EXPECT_EQ(total, q.total_degree());
  }
}

TEST(Residues, SmallPerturbationKeepsCount) {
  const BiPoly& q = make_superellipse_body().polynomial();
  const cplx w = std::polar(1.0, M_PI / 4);
  EXPECT_EQ(log_residue_count(q, w, 0.3, 1e-3).count, 1);
}

TEST(Residues, ZeroOnContourThrows) {
  const BiPoly& q = make_disk_body().polynomial();
  EXPECT_EQ(kind_of([&] { log_residue_count(q, cplx(0.0, 0.5), 0.5, 0.0); }), ErrorKind::ZeroOnContour);
}

TEST(Residues, PsiAtZeroIsLeadingForm) {
  const BiPoly q{{3, 0, 2.0}, {1, 2, -1.0}, {2, 0, 5.0}, {0, 0, -1.0}};
  const ComplexPoly psi = psi_polynomial(q, 0.0);
  ASSERT_EQ(psi.degree(), 3);
  EXPECT_EQ(psi[3], cplx(2.0));
  EXPECT_EQ(psi[1], cplx(-1.0));
  EXPECT_EQ(psi[2], cplx(0.0));
}
