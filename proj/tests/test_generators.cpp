#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "modone/generators.hpp"
#include "modone/stats.hpp"
#include "oracles.hpp"

using namespace modone;

namespace {

std::vector<double> vec(const RealSequence& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST(EvalScale, FormulaValues) {
  EXPECT_NEAR(eval_scale(ScaleFunction::beck_scale(1.0), 100), 0.10741, 5e-6);
  EXPECT_EQ(eval_scale(ScaleFunction::constant(0.1), 7), 0.1);
  EXPECT_NEAR(eval_scale(ScaleFunction::power_log(0.5), 100), 0.021460, 5e-7);
}

TEST(EvalScale, ClampedBelowMinIndex) {
  auto g = ScaleFunction::power_log(0.5);
  EXPECT_EQ(g(1), g(16));
  EXPECT_EQ(g(15), g(16));
}

TEST(EvalScale, PositiveCappedAndNonIncreasing) {
  for (double c : {0.25, 0.5, 1.0, 2.0}) {
    for (auto g : {ScaleFunction::beck_scale(c), ScaleFunction::power_log(c)}) {
      double prev = g(ScaleFunction::kMinIndex);
      for (std::size_t n = 1; n <= 200000; n += (n < 1000 ? 1 : 997)) {
        double v = g(n);
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, ScaleFunction::kCap);
        if (n >= ScaleFunction::kMinIndex) {
          EXPECT_LE(v, prev) << g.name() << " c=" << c << " n=" << n;
          prev = v;
        }
      }
    }
  }
}

TEST(EvalScale, TableOutOfRange) {
  auto g = ScaleFunction::table({0.1, 0.2});
  EXPECT_EQ(g(2), 0.2);
  EXPECT_THROW(g(3), ValidationError);
}

TEST(EvalScale, ScaledMultipliesAfterCap) {
  auto g = ScaleFunction::constant(0.3);
  EXPECT_DOUBLE_EQ(g.scaled(2.0)(5), 0.6);
  EXPECT_DOUBLE_EQ(ScaleFunction::constant(1.0).scaled(2.0)(5), 0.9);
}

TEST(GenBase, Examples) {
  EXPECT_EQ(vec(gen_base(Arithmetic{0.5}, 3)), (std::vector<double>{0.5, 1.0, 1.5}));
  EXPECT_EQ(vec(gen_base(VanDerCorput{2}, 4)), (std::vector<double>{0.5, 0.25, 0.75, 0.125}));
  EXPECT_EQ(vec(gen_base(Power{1.0}, 3)), (std::vector<double>{1, 2, 3}));
}

TEST(GenBase, RejectsBadParameters) {
  EXPECT_THROW(gen_base(Arithmetic{0.0}, 3), ValidationError);
  EXPECT_THROW(gen_base(Power{0.0}, 3), ValidationError);
  EXPECT_THROW(gen_base(VanDerCorput{1}, 3), ValidationError);
}

TEST(RadicalInverse, Base3) {
  EXPECT_DOUBLE_EQ(radical_inverse(1, 3), 1.0 / 3);
  EXPECT_DOUBLE_EQ(radical_inverse(5, 3), 2.0 / 3 + 1.0 / 9);  // 5 = 12_3
}

TEST(Perturb, ZeroWidthIsIdentity) {
  RealSequence base = gen_base(Arithmetic{2.0}, 50);
  auto out = perturb(base, {42, ScaleFunction::constant(0.0)});
  EXPECT_EQ(vec(out), vec(base));
  EXPECT_EQ(vec(gen_theorem1(ScaleFunction::constant(0.0), 5, 9)), (std::vector<double>{2, 4, 6, 8, 10}));
  EXPECT_EQ(vec(gen_converse(ScaleFunction::constant(0.0), 4, 9)), (std::vector<double>{1, 2, 3, 4}));
}

TEST(Perturb, SupportBound) {
  auto g = ScaleFunction::beck_scale(1.0);
  RealSequence base = gen_base(Arithmetic{2.0}, 20000);
  auto out = perturb(base, {5, g});
  for (std::size_t n = 1; n <= base.size(); ++n) ASSERT_LE(std::fabs(out.at(n) - base.at(n)), g(n));
}

TEST(Perturb, BitwiseDeterministicAndPrefixStable) {
  auto a = gen_theorem1(1.0, 10, 42);
  auto b = gen_theorem1(1.0, 10, 42);
  EXPECT_EQ(vec(a), vec(b));
  auto longer = gen_theorem1(1.0, 1000, 42);
  for (std::size_t n = 1; n <= 10; ++n) EXPECT_EQ(a.at(n), longer.at(n));
  EXPECT_NE(vec(gen_theorem1(1.0, 10, 43)), vec(a));
}

TEST(Perturb, DrawsLookUniform) {
  PerturbationSpec spec{17, ScaleFunction::constant(0.25)};
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 1; i <= n; ++i) {
    double z = perturbation_at(spec, i) / 0.25;
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0 / 3.0, 0.01);
}

TEST(Theorem1Generator, WellSpacedForManySeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto x = gen_theorem1(1.0, 2000, seed);
    ASSERT_TRUE(x.well_spaced()) << "seed " << seed;
    for (std::size_t n = 1; n < x.size(); ++n) ASSERT_GE(x.at(n + 1) - x.at(n), 1.1 - 1e-12);
  }
}

TEST(Theorem1Generator, EnergyLowerBoundAtTenThousand) {
  // 10^4 points need 10^8 sums (~0.8 GB), above the default in-memory cap.
  const std::size_t n = 10000;
  auto g = ScaleFunction::beck_scale(1.0);
  auto x = gen_theorem1(1.0, n, 7);
  auto e = additive_energy(x, 10.0 * eval_scale(g, n), n);
  EXPECT_GE(static_cast<double>(e.count), std::pow(static_cast<double>(n), 3) / 50.0);
}

TEST(Theorem1Generator, EnergyConstantAgainstOracleAt64) {
  const std::size_t n = 64;
  auto g = ScaleFunction::beck_scale(1.0);
  auto x = gen_theorem1(1.0, n, 7);
  double gamma = 10.0 * eval_scale(g, n);
  auto count = oracle::energy(vec(x), gamma);
  EXPECT_EQ(additive_energy(x, gamma).count, count);
  EXPECT_GE(static_cast<double>(count), std::pow(64.0, 3) / 50.0);
}

TEST(ConverseGenerator, SupportAndRange) {
  auto x = gen_converse(0.5, 5000, 3);
  for (std::size_t n = ScaleFunction::kMinIndex; n <= x.size(); ++n)
    ASSERT_LE(std::fabs(x.at(n) - static_cast<double>(n)), std::sqrt(std::log(static_cast<double>(n))) / n);
  EXPECT_THROW(gen_converse(0.0, 10, 1), ValidationError);
  EXPECT_THROW(gen_converse(0.51, 10, 1), ValidationError);
  EXPECT_NO_THROW(gen_converse(0.5, 10, 1));
  EXPECT_EQ(vec(gen_converse(0.5, 100, 8)), vec(gen_converse(0.5, 100, 8)));
}

TEST(Convergents, ThreeTenths) {
  auto cs = convergents(0.3, 10);
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0].p, 0);
  EXPECT_EQ(cs[0].q, 1);
  EXPECT_EQ(cs[1].p, 1);
  EXPECT_EQ(cs[1].q, 3);
  EXPECT_EQ(cs[2].p, 3);
  EXPECT_EQ(cs[2].q, 10);
}

TEST(Convergents, DecimalInputsReadAsTheirRationals) {
  auto cs = convergents(0.125, 1000);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.back().q, 8);
  EXPECT_EQ(cs.back().error, 0.0);
  auto ls = convergents(kLiouvilleAlpha, 1'000'000'000);
  EXPECT_EQ(ls.back().q, 1'000'000);
  EXPECT_EQ(ls.back().p, 110001);
  auto neg = convergents(-0.3, 10);
  EXPECT_EQ(neg.front().p, -1);
  EXPECT_EQ(neg.back().p, -3);
  EXPECT_EQ(neg.back().q, 10);
}

TEST(Convergents, GoldenRatioFibonacci) {
  auto cs = convergents(kGoldenRatio, 100000);
  std::int64_t f0 = 1, f1 = 1;  // p/q = F_{k+1}/F_k
  ASSERT_GE(cs.size(), 20u);
  for (const auto& c : cs) {
    EXPECT_EQ(c.q, f0);
    EXPECT_EQ(c.p, f1);
    std::int64_t f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
}

TEST(Convergents, ClassicalProperties) {
  for (double a : {kGoldenRatio, kLiouvilleAlpha, std::sqrt(2.0), 3.14159265358979, 0.6416325}) {
    auto cs = convergents(a, 1'000'000'000);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto& c = cs[i];
      EXPECT_EQ(std::gcd(c.p, c.q), 1);
      double q = static_cast<double>(c.q);
      EXPECT_LT(c.error, 1.0 / (q * q));
      if (i > 0) {
        // q_0 = q_1 = 1 when the first partial quotient after the integer part is 1.
        if (i > 1) {
          EXPECT_GT(c.q, cs[i - 1].q);
        }
        EXPECT_LT(c.error, cs[i - 1].error);
      }
    }
  }
}

TEST(Convergents, LiouvilleDefaultApproximations) {
  auto cs = convergents(kLiouvilleAlpha, 10'000'000);
  bool saw_100 = false, saw_million = false;
  for (const auto& c : cs) {
    double q = static_cast<double>(c.q);
    double target = 1.0 / (q * q * std::log(q) * std::log(std::log(q)));
    if (c.q == 100) saw_100 = c.p == 11 && c.error < target;
    if (c.q == 1'000'000) saw_million = c.p == 110001 && c.error < target;
  }
  EXPECT_TRUE(saw_100);
  EXPECT_TRUE(saw_million);
}

TEST(ConverseSchedule, LengthFormula) {
  EXPECT_EQ(converse_length(100), 247u);
  EXPECT_EQ(converse_length(16), 26u);
}

TEST(ConverseSchedule, IncreasingAndFlagged) {
  auto s = converse_schedule(kLiouvilleAlpha, 2);
  ASSERT_EQ(s.n_values.size(), 2u);
  EXPECT_FALSE(s.insufficient);
  EXPECT_LT(s.n_values[0], s.n_values[1]);
  EXPECT_EQ(s.denominators.back(), 1'000'000);
  auto few = converse_schedule(0.3, 3);
  EXPECT_TRUE(few.insufficient);
  auto golden = converse_schedule(kGoldenRatio, 5, 100000);
  for (std::size_t i = 1; i < golden.n_values.size(); ++i) EXPECT_LT(golden.n_values[i - 1], golden.n_values[i]);
}
