#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "circloids/circloids.hpp"
#include "fixtures.hpp"

using namespace circloids;

namespace {
constexpr int kRes = 1024;
const double kBudget = 2.0 / kRes;

const DenjoyMap& denjoy() {
  static const DenjoyMap d = denjoy_map(fixtures::kGolden, 200, 0.5);
  return d;
}

std::shared_ptr<CircloidOrbitFamily> denjoy_family(int n, int m, int res = kRes) {
  return vertical_circle_family(denjoy().lift, fixtures::kGolden, denjoy().gaps.gap(0).left, n, m, res);
}

const std::shared_ptr<CircloidOrbitFamily>& family50() {
  static const auto f = denjoy_family(50, 50);
  return f;
}

const SemiconjugacyLift& h50() {
  static const SemiconjugacyLift h = build_semiconjugacy(family50());
  return h;
}

std::vector<Vec2> uniform_samples(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> out;
  for (int k = 0; k < n; ++k) out.push_back({u(rng), u(rng)});
  return out;
}

double dist_to_integer(double x) { return std::abs(x - std::round(x)); }
}  // namespace

TEST(OrbitMesh, AgainstBruteForceAndMonotone) {
  double prev = 1.0;
  for (int n = 1; n <= 200; ++n) {
    const double e = orbit_mesh(fixtures::kGolden, n);
    EXPECT_LE(e, prev + 1e-15);
    prev = e;
    // every point of the circle lies within e of some orbit point
    for (int k = 0; k < 50; ++k) {
      const double t = (k + 0.37) / 50.0;
      double best = 1.0;
      for (int j = -n; j <= n; ++j) best = std::min(best, circle_distance(t, j * fixtures::kGolden));
      EXPECT_LE(best, e / 2 + 1e-12);
    }
  }
  EXPECT_NEAR(orbit_mesh(0.5 + 1e-9, 1), 0.5, 1e-6);
}

TEST(Combinatorics, DenjoyFamilyIsIrrational) {
  const auto rep = check_irrational_combinatorics(*family50());
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.rho_fit, fixtures::kGolden);
}

TEST(Combinatorics, WrongRotationNumberGivesOrderViolation) {
  auto fam = vertical_circle_family(denjoy().lift, fixtures::kGolden + 0.1, denjoy().gaps.gap(0).left, 50, 50, kRes);
  try {
    check_irrational_combinatorics(*fam);
    FAIL() << "expected OrderViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderViolation);
  }
}

TEST(Combinatorics, RigidFamily) {
  auto fam = vertical_circle_family(CircleLift::rigid(fixtures::kGolden), fixtures::kGolden, 0.0, 20, 20, kRes);
  EXPECT_TRUE(check_irrational_combinatorics(*fam).ok);
}

TEST(Combinatorics, CoarseGridOverlaps) {
  auto fam = denjoy_family(50, 50, 64);
  try {
    check_irrational_combinatorics(*fam);
    FAIL() << "expected Overlap";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overlap);
  }
}

TEST(Family, Validation) {
  const GridSpec cover(64, 2, -0.5, 0.5);
  EXPECT_THROW(CircloidOrbitFamily(row_raster(cover, 0.0), rigid_translation({0, 0.3}), 0.3, 5, 5), Error);
  const GridSpec spec(64, 1, -0.5, 0.5);
  EXPECT_THROW(CircloidOrbitFamily(RasterSet(spec), rigid_translation({0, 0.3}), 0.3, 5, 5), Error);
  EXPECT_THROW(CircloidOrbitFamily(row_raster(spec, 0.0), rigid_translation({0, 0.3}), 0.3, 0, 5), Error);
  LiftedPlaneMap no_inverse([](Vec2 z) { return Vec2{z.x, z.y + 0.3}; });
  EXPECT_THROW(CircloidOrbitFamily(row_raster(spec, 0.0), no_inverse, 0.3, 5, 5), Error);
  EXPECT_THROW(family50()->member(51), Error);
}

TEST(Semiconjugacy, ConstantOnGaps) {
  const auto& h = h50();
  for (int n = -5; n <= 5; ++n) {
    const Gap g = denjoy().gaps.gap(n);
    ASSERT_GT(g.length(), 8.0 / kRes);
    for (double t : {0.3, 0.5, 0.7}) {
      const double v = g.left + t * g.length();
      const double value = h({0.5, v});
      EXPECT_LT(dist_to_integer(value - n * fixtures::kGolden), 1e-9) << "gap " << n;
      EXPECT_EQ(value, h({0.1, v}));
    }
  }
}

TEST(Semiconjugacy, RigidFamilyRecoversHeight) {
  auto fam = vertical_circle_family(CircleLift::rigid(fixtures::kGolden), fixtures::kGolden, 0.0, 30, 30, kRes);
  const auto h = build_semiconjugacy(fam);
  for (const auto& z : uniform_samples(500, 3)) {
    const double value = h(z);
    EXPECT_LE(value, z.y + 1e-12);
    EXPECT_LE(z.y - value, h.epsilon + kBudget);
  }
}

TEST(Semiconjugacy, DeckEquivariance) {
  const auto& h = h50();
  for (const auto& z : uniform_samples(1000, 5)) {
    EXPECT_NEAR(h({z.x, z.y + 1.0}), h(z) + 1.0, 1e-9);
    EXPECT_NEAR(h({z.x + 1.0, z.y}), h(z), 1e-9);
  }
}

TEST(Semiconjugacy, MonotoneInRadialCoordinate) {
  const auto& h = h50();
  for (double u : {0.0, 0.31, 0.77}) {
    double prev = -INFINITY;
    for (int k = 0; k <= 4000; ++k) {
      const double value = h({u, -0.5 + 2.0 * k / 4000});
      EXPECT_GE(value, prev);
      prev = value;
    }
  }
}

TEST(Semiconjugacy, DefectWithinBudget) {
  const auto rep = check_semiconjugacy(h50(), family50()->map(), fixtures::kGolden, uniform_samples(2000, 7));
  EXPECT_EQ(rep.samples, 2000u);
  EXPECT_EQ(rep.epsilon, orbit_mesh(fixtures::kGolden, 50));
  EXPECT_LE(rep.max_defect, rep.epsilon + kBudget);
  const auto j = to_json(rep);
  EXPECT_EQ(j["samples"], 2000);
  EXPECT_EQ(j["max_defect"], rep.max_defect);
}

TEST(Semiconjugacy, CorruptedRotationNumberExceedsBudget) {
  const auto rep = check_semiconjugacy(h50(), family50()->map(), fixtures::kGolden + 0.05, uniform_samples(500, 8));
  EXPECT_GT(rep.max_defect, rep.epsilon + kBudget);
}

TEST(Semiconjugacy, CoarserHorizonStaysWithinItsBudget) {
  for (int n : {10, 20}) {
    const auto h = build_semiconjugacy(denjoy_family(n, n));
    const auto rep = check_semiconjugacy(h, family50()->map(), fixtures::kGolden, uniform_samples(500, 9));
    EXPECT_LE(rep.max_defect, rep.epsilon + kBudget) << n;
    EXPECT_GE(rep.epsilon, h50().epsilon);
  }
}

TEST(ModuloRotation, ShiftedLiftIsAtDistanceZero) {
  const auto& h = h50();
  SemiconjugacyLift shifted = h;
  shifted.eval = [h](Vec2 z) { return h(z) + 0.37; };
  EXPECT_LE(modulo_rotation_distance(h, shifted, uniform_samples(300, 10)), 1.0 / 8192 + 1e-12);
}

TEST(ModuloRotation, ProductProfilesDifferByTheirRange) {
  const auto flat = product_example(fixtures::kGolden, [](double) { return 0.0; });
  const auto bent = product_example(fixtures::kGolden, [](double y) { return 0.2 * std::sin(2 * M_PI * y); });
  std::vector<Vec2> pts;
  for (int k = 0; k < 400; ++k) pts.push_back({(k % 20) / 20.0, (k + 0.5) / 400.0});
  pts.push_back({0.0, 0.25});
  pts.push_back({0.0, 0.75});
  EXPECT_NEAR(modulo_rotation_distance(flat.h, bent.h, pts), 0.2, 1.0 / 4096);
  // a single fibre y = const is a rotation apart
  std::vector<Vec2> fibre;
  for (int k = 0; k < 50; ++k) fibre.push_back({k / 50.0, 0.3});
  EXPECT_LE(modulo_rotation_distance(flat.h, bent.h, fibre), 1.0 / 8192 + 1e-12);
  EXPECT_THROW(modulo_rotation_distance(flat.h, bent.h, {}), Error);
}

TEST(Fibres, DenjoyFibresAreEssential) {
  const GridSpec spec(128, 1, -1.0, 2.0);
  for (double xi : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const RasterSet f = fibre_raster(h50(), spec, xi);
    ASSERT_FALSE(f.empty());
    const auto rep = is_essential_annular_continuum(f);
    EXPECT_TRUE(rep.essential && rep.annular && rep.connected) << xi;
  }
}

TEST(Fibres, SkewFibreBoundariesConverge) {
  // skew product in the swapped frame: h(u, v) = v
  const GridSpec spec(kRes, 1, 0.0, 1.5);
  auto h = [](Vec2 z) { return z.y; };
  const double xi = 0.75;
  const RasterSet target = lower_boundary(fibre_raster(h, spec, xi));
  double prev = INFINITY;
  for (double d : {0.1, 0.01, 0.001}) {
    const RasterSet b = lower_boundary(fibre_raster(h, spec, xi - d));
    const double dist = hausdorff_distance(b, target) * kRes;
    EXPECT_LT(dist, prev);
    EXPECT_NEAR(dist, d * kRes, 1.5);
    prev = dist;
  }
  EXPECT_LE(prev, 3.0);
}

TEST(SampleCsv, Format) {
  SemiconjugacyLift h;
  h.eval = [](Vec2 z) { return z.x + z.y; };
  EXPECT_EQ(sample_csv(h, {{0.5, 0.25}}), "x,y,H\n0.5,0.25,0.75\n");
}
