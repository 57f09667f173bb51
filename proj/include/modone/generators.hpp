#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modone/seqcore.hpp"

namespace modone {

enum class ScaleFamily { kBeckScale, kPowerLog, kConstant, kTable };

// Perturbation width g(n). Natural logarithms throughout.
//
//   beck_scale(c):  log n (log log n)^(1+c) / n
//   power_log(c):   (log n)^c / n
//   constant(g0):   g0
//   table(v):       v[n-1]
//
// The two logarithmic families are clamped below at n_min = 16 (log log n is
// not usable below e^e), and further at the maximiser of the formula when it
// lies above 16, so g is non-increasing for every n >= 16. All families are
// capped at 0.45, then multiplied by an optional dilation factor (used when a
// perturbed sequence is scaled by alpha).
class ScaleFunction {
 public:
  static constexpr std::size_t kMinIndex = 16;
  static constexpr double kCap = 0.45;

  static ScaleFunction beck_scale(double c);
  static ScaleFunction power_log(double c);
  static ScaleFunction constant(double g0);
  static ScaleFunction table(std::vector<double> values);

  // g scaled by `factor` > 0; the width of alpha * z_n when z_n ~ U[-g, g].
  ScaleFunction scaled(double factor) const;

  ScaleFamily family() const { return family_; }
  double parameter() const { return param_; }
  double factor() const { return factor_; }
  // Real index below which the formula is frozen (>= kMinIndex).
  double clamp_index() const { return clamp_; }
  std::string name() const;

  double operator()(std::size_t n) const;
  // Continuous-argument evaluation, t >= 1. Table family uses floor(t).
  double at(double t) const;

 private:
  ScaleFunction(ScaleFamily family, double param) : family_(family), param_(param) {}

  double raw(double t) const;

  ScaleFamily family_;
  double param_ = 0.0;
  double factor_ = 1.0;
  double clamp_ = static_cast<double>(kMinIndex);
  std::vector<double> table_;
};

double eval_scale(const ScaleFunction& g, std::size_t n);

struct PerturbationSpec {
  std::uint64_t seed = 0;
  ScaleFunction scale = ScaleFunction::constant(0.0);
};

struct Arithmetic {
  double alpha;
};
struct Power {
  double theta;
};
struct VanDerCorput {
  unsigned base;
};
using BaseKind = std::variant<Arithmetic, Power, VanDerCorput>;

// x_n for n = 1..N: alpha*n, n^theta, or the base-b radical inverse of n.
RealSequence gen_base(const BaseKind& kind, std::size_t n);

double radical_inverse(std::uint64_t n, unsigned base);

// z_n for one index; a function of (seed, n) only.
double perturbation_at(const PerturbationSpec& spec, std::size_t n);

// x_n + z_n with z_n ~ U[-g(n), g(n)] independent.
RealSequence perturb(const RealSequence& base, const PerturbationSpec& spec);

// x_n = 2n + z_n with g = beck_scale(c). Well spaced for every seed.
RealSequence gen_theorem1(double c, std::size_t n, std::uint64_t seed);
RealSequence gen_theorem1(const ScaleFunction& g, std::size_t n, std::uint64_t seed);

// x_n = n + z_n with g = power_log(c), 0 < c <= 1/2.
RealSequence gen_converse(double c, std::size_t n, std::uint64_t seed);
RealSequence gen_converse(const ScaleFunction& g, std::size_t n, std::uint64_t seed);

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double error = 0.0;  // |alpha - p/q|
};

// Continued-fraction convergents of the binary64 value `alpha` with q <= q_max,
// by exact integer Euclid on its dyadic representation.
std::vector<Convergent> convergents(double alpha, std::int64_t q_max);

struct ConverseSchedule {
  std::vector<std::int64_t> denominators;
  std::vector<std::size_t> n_values;  // floor(q sqrt(log q) (log log q)^(1/3))
  bool insufficient = false;          // fewer than `count` denominators found
};

std::size_t converse_length(std::int64_t q);

ConverseSchedule converse_schedule(double alpha, std::size_t count,
                                   std::int64_t q_max = 10'000'000);

// Liouville's constant sum_{k>=1} 10^(-k!) rounded to binary64. Its
// convergents 11/100 and 110001/10^6 satisfy |alpha - p/q| < 1/(q^2 log q log log q).
inline constexpr double kLiouvilleAlpha = 0.110001000000000000000001;

// Golden ratio (1 + sqrt 5) / 2.
inline constexpr double kGoldenRatio = 1.6180339887498948482;

}  // namespace modone
