#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "modone/seqcore.hpp"

using namespace modone;

namespace {

std::vector<double> points_of(const TorusPoints& t) { return {t.points().begin(), t.points().end()}; }

}  // namespace

TEST(FracReduce, SortsFractionalParts) {
  auto t = frac_reduce(RealSequence({1.25, 3.5, 2.0}));
  EXPECT_EQ(points_of(t), (std::vector<double>{0.0, 0.25, 0.5}));
}

TEST(FracReduce, IdentityOnUnitInterval) {
  EXPECT_EQ(points_of(frac_reduce(RealSequence({0.1}))), std::vector<double>{0.1});
}

TEST(FracReduce, NegativeWraps) {
  EXPECT_EQ(points_of(frac_reduce(RealSequence({-0.25}))), std::vector<double>{0.75});
}

TEST(FracReduce, TinyNegativeStaysBelowOne) {
  auto t = frac_reduce(RealSequence({-1e-20}));
  EXPECT_GE(t[0], 0.0);
  EXPECT_LT(t[0], 1.0);
}

TEST(FracReduce, KeepsDuplicates) {
  auto t = frac_reduce(RealSequence({0.5, 1.5, 2.5}));
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(points_of(t), (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(FracReduce, IdempotentOnReducedInput) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(100);
  for (auto& x : v) x = u(gen);
  auto once = points_of(frac_reduce(RealSequence(v)));
  auto twice = points_of(frac_reduce(RealSequence(once)));
  EXPECT_EQ(once, twice);
}

TEST(FracReduce, IntegerTranslation) {
  std::vector<double> v = {0.125, 0.5, 0.875, 0.25};
  std::vector<double> shifted;
  for (double x : v) shifted.push_back(x + 7.0);
  EXPECT_EQ(points_of(frac_reduce(RealSequence(v))), points_of(frac_reduce(RealSequence(shifted))));
}

TEST(CircDist, Examples) {
  EXPECT_NEAR(circ_dist(0.1, 0.9), 0.2, 1e-15);
  EXPECT_EQ(circ_dist(0.3, 0.3), 0.0);
  EXPECT_EQ(circ_dist(0.0, 0.5), 0.5);
}

TEST(CircDist, MetricOnRandomTriples) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 10000; ++i) {
    double a = u(gen), b = u(gen), c = u(gen);
    EXPECT_GE(circ_dist(a, b), 0.0);
    EXPECT_LE(circ_dist(a, b), 0.5);
    EXPECT_DOUBLE_EQ(circ_dist(a, b), circ_dist(b, a));
    EXPECT_LE(circ_dist(a, c), circ_dist(a, b) + circ_dist(b, c) + 1e-12);
  }
}

TEST(ScaleByAlpha, Examples) {
  auto a = scale_by_alpha(RealSequence({1, 2, 3}), 0.5);
  EXPECT_EQ(std::vector<double>(a.values().begin(), a.values().end()), (std::vector<double>{0.5, 1.0, 1.5}));
  auto b = scale_by_alpha(RealSequence({1, 2}), 1.0);
  EXPECT_EQ(std::vector<double>(b.values().begin(), b.values().end()), (std::vector<double>{1, 2}));
  auto c = scale_by_alpha(RealSequence({2, 4}), std::sqrt(2.0));
  EXPECT_EQ(c.at(1), 2 * std::sqrt(2.0));
  EXPECT_EQ(c.at(2), 4 * std::sqrt(2.0));
}

TEST(ScaleByAlpha, RejectsZero) { EXPECT_THROW(scale_by_alpha(RealSequence({1.0}), 0.0), ValidationError); }

TEST(RealSequence, RejectsEmpty) { EXPECT_THROW(RealSequence({}), ValidationError); }

TEST(RealSequence, OneBasedAccessAndPrefix) {
  RealSequence s({3, 5, 8});
  EXPECT_EQ(s.at(1), 3);
  EXPECT_EQ(s.at(3), 8);
  EXPECT_EQ(s.prefix(2).size(), 2u);
  EXPECT_THROW(s.prefix(0), ValidationError);
  EXPECT_THROW(s.prefix(4), ValidationError);
}

TEST(RealSequence, WellSpaced) {
  EXPECT_TRUE(RealSequence({1, 2, 3.5}).well_spaced());
  EXPECT_FALSE(RealSequence({1, 1.999, 3}).well_spaced());
  EXPECT_TRUE(RealSequence({4}).well_spaced());
}

TEST(TorusPoints, FromUnitValidates) {
  EXPECT_THROW(TorusPoints::from_unit({0.5, 1.0}), ValidationError);
  EXPECT_THROW(TorusPoints::from_unit({-0.1}), ValidationError);
  auto t = TorusPoints::from_unit({0.7, 0.2});
  EXPECT_EQ(t[0], 0.2);
  EXPECT_EQ(t[1], 0.7);
}
