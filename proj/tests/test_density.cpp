#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "modone/generators.hpp"
#include "modone/stats.hpp"
#include "oracles.hpp"

using namespace modone;

namespace {

RealSequence tiling_base() {
  std::vector<double> v;
  for (int n = 1; n <= 20; ++n) v.push_back(n / 20.0);
  return RealSequence(v);
}

// Centres and radii on a lattice of spacing 1/cells, so every box edge sits
// on a cell boundary and the midpoint rule is exact up to rounding.
struct LatticeBoxes {
  RealSequence base;
  ScaleFunction g;
  std::vector<oracle::Box> boxes;
};

LatticeBoxes lattice_boxes(std::size_t n, std::int64_t cells, std::int64_t max_radius_cells, std::uint32_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int64_t> centre(0, cells - 1);
  std::uniform_int_distribution<std::int64_t> radius(1, max_radius_cells);
  std::vector<double> x, r;
  std::vector<oracle::Box> boxes;
  const double cd = static_cast<double>(cells);
  for (std::size_t i = 0; i < n; ++i) {
    double c = static_cast<double>(centre(gen)) / cd;
    double rr = static_cast<double>(radius(gen)) / cd;
    x.push_back(c + static_cast<double>(i % 3));  // integer offsets must not matter
    r.push_back(rr);
    boxes.push_back({c, rr});
  }
  return {RealSequence(x), ScaleFunction::table(r), boxes};
}

}  // namespace

TEST(Rho, SingleBox) {
  RealSequence base({0.5});
  auto g = ScaleFunction::constant(0.1);
  EXPECT_DOUBLE_EQ(rho_eval(base, g, 0.45), 5.0);
  EXPECT_EQ(rho_eval(base, g, 0.7), 0.0);
  EXPECT_NEAR(rho_l2(base, g), 5.0, 1e-12);
  EXPECT_NEAR(rho_integral(base, g), 1.0, 1e-12);
}

TEST(Rho, WrapsAroundTheSeam) {
  RealSequence base({0.02});
  auto g = ScaleFunction::constant(0.1);
  EXPECT_DOUBLE_EQ(rho_eval(base, g, 0.95), 5.0);
  EXPECT_NEAR(rho_integral(base, g), 1.0, 1e-12);
}

TEST(Rho, NormalisedOnRandomInputs) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    auto y = oracle::uniform_points(200, seed);
    for (auto& v : y) v = v * 50.0 - 25.0;
    RealSequence base(y);
    for (auto g : {ScaleFunction::constant(0.45), ScaleFunction::power_log(0.5), ScaleFunction::beck_scale(1.0)}) {
      EXPECT_NEAR(rho_integral(base, g), 1.0, 1e-12);
      EXPECT_GE(rho_l2(base, g), 1.0 - 1e-12);
    }
  }
}

TEST(Rho, TilingIsFlat) {
  auto base = tiling_base();
  auto g = ScaleFunction::constant(0.1);
  for (int i = 0; i < 1000; ++i) ASSERT_NEAR(rho_eval(base, g, (i + 0.5) / 1000.0), 1.0, 1e-12);
  EXPECT_NEAR(rho_l2(base, g), 1.0, 1e-12);
}

TEST(Rho, L2MatchesRiemannSum) {
  const std::int64_t cells = 1'000'000;
  auto lb = lattice_boxes(40, cells, 60'000, 77);
  double sum = 0.0;
  for (std::int64_t i = 0; i < cells; ++i) {
    double r = oracle::rho(lb.boxes, (static_cast<double>(i) + 0.5) / static_cast<double>(cells));
    sum += r * r;
  }
  EXPECT_NEAR(rho_l2(lb.base, lb.g), sum / static_cast<double>(cells), 1e-6);
}

TEST(H, TilingExample) {
  auto base = tiling_base();
  auto g = ScaleFunction::constant(0.1);
  EXPECT_NEAR(h_eval(base, g, 1.0, 0.5), 2.0, 1e-12);
}

TEST(H, ZeroFarFromBoxes) {
  RealSequence base({0.2, 0.25});
  auto g = ScaleFunction::constant(0.01);
  EXPECT_EQ(h_eval(base, g, 0.02, 0.7), 0.0);
  EXPECT_GT(h_eval(base, g, 0.02, 0.2), 0.0);
}

TEST(H, MatchesOracleAndEnvelope) {
  auto y = oracle::uniform_points(300, 5);
  RealSequence base(y);
  auto g = ScaleFunction::power_log(0.5);
  std::vector<oracle::Box> boxes;
  double max_g = 0.0;
  for (std::size_t n = 1; n <= y.size(); ++n) {
    boxes.push_back({y[n - 1], g(n)});
    max_g = std::max(max_g, g(n));
  }
  const double s = 2.0, w = s / 300.0;
  double sup_rho = 0.0;
  for (int i = 0; i < 2000; ++i) sup_rho = std::max(sup_rho, oracle::rho(boxes, (i + 0.5) / 2000.0));
  for (int i = 0; i < 2000; ++i) {
    double x = (i + 0.25) / 2000.0;
    double h = h_eval(base, g, s, x);
    ASSERT_NEAR(h, oracle::h(boxes, w, x), 1e-9);
    ASSERT_LE(h, (2.0 * s + 2.0 * 300.0 * max_g) * sup_rho + 1e-9);
  }
}

TEST(H, WindowValidation) {
  EXPECT_THROW(h_eval(tiling_base(), ScaleFunction::constant(0.1), 10.0, 0.5), ValidationError);
}

TEST(ExpectedPairCorrelation, TilingExample) {
  auto base = tiling_base();
  auto g = ScaleFunction::constant(0.1);
  auto e = expected_pair_correlation(base, g, 1.0);
  EXPECT_NEAR(e.value, 2.0, 1e-12);
  EXPECT_NEAR(e.error_bound, 0.5, 1e-15);
  auto e2 = expected_pair_correlation(base, g, 2.0);
  EXPECT_NEAR(e2.value, 2.0 * e.value, 1e-12);
}

TEST(ExpectedPairCorrelation, MatchesQuadrature) {
  const std::int64_t cells = 200'000;
  auto lb = lattice_boxes(20, cells, 20'000, 91);
  const double s = 0.5, w = s / 20.0;  // 5000 cells
  double sum = 0.0;
  for (std::int64_t i = 0; i < cells; ++i) {
    double x = (static_cast<double>(i) + 0.5) / static_cast<double>(cells);
    sum += oracle::h(lb.boxes, w, x) * oracle::rho(lb.boxes, x);
  }
  auto e = expected_pair_correlation(lb.base, lb.g, s);
  EXPECT_NEAR(e.value, sum / static_cast<double>(cells), 1e-8);
}

namespace {

struct MonteCarlo {
  double mean, se;
};

MonteCarlo simulate(const RealSequence& base, const ScaleFunction& g, double s, int trials) {
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto x = perturb(base, {static_cast<std::uint64_t>(1000 + t), g});
    double v = pair_correlation(frac_reduce(x), s);
    sum += v;
    sq += v * v;
  }
  double mean = sum / trials;
  double var = std::max(0.0, (sq - trials * mean * mean) / (trials - 1));
  return {mean, std::sqrt(var / trials)};
}

}  // namespace

// The integral counts each index against an independent copy of itself;
// the simulated statistic has no m = n term, so their difference is the
// self term (here essentially 1, since the widths are far below s/N).
TEST(ExpectedPairCorrelation, TinyWidthsAgainstMonteCarlo) {
  auto y = oracle::uniform_points(100, 44);
  RealSequence base(y);
  auto g = ScaleFunction::constant(1e-9);
  auto e = expected_pair_correlation(base, g, 1.0);
  auto mc = simulate(base, g, 1.0, 200);
  EXPECT_NEAR(e.self_term, 1.0, 1e-12);
  EXPECT_LE(std::fabs(mc.mean - (e.value - e.self_term)), std::max(3.0 * mc.se, 1e-6));
}

TEST(ExpectedPairCorrelation, PerturbedLatticeAgainstMonteCarlo) {
  auto base = scale_by_alpha(gen_base(Arithmetic{2.0}, 2000), std::sqrt(2.0));
  auto g = ScaleFunction::constant(0.002);
  auto e = expected_pair_correlation(base, g, 1.0);
  auto mc = simulate(base, g, 1.0, 2000);
  EXPECT_GT(e.self_term, 0.1);
  EXPECT_LE(std::fabs(mc.mean - (e.value - e.self_term)), 3.0 * mc.se);
}
