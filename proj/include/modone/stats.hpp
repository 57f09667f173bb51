#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "modone/generators.hpp"
#include "modone/seqcore.hpp"

namespace modone {

// ---------------------------------------------------------------------------
// Correlation counts
// ---------------------------------------------------------------------------

struct WindowInterval {
  double lo;
  double hi;
};

// k-level window: k - 1 intervals [lo_j, hi_j), in units of 1/N, taken mod 1.
class CorrelationWindow {
 public:
  explicit CorrelationWindow(std::vector<WindowInterval> intervals);

  // Symmetric pair window (-s, s).
  static CorrelationWindow pair(double s);

  std::size_t k() const { return intervals_.size() + 1; }
  std::span<const WindowInterval> intervals() const { return intervals_; }

  // Product of interval lengths, the Poissonian limit.
  double poisson_limit() const;
  // True for k = 2 with lo = -hi.
  bool is_symmetric_pair() const;
  // "lo:hi,lo:hi" with round-trip precision.
  std::string descriptor() const;
  static CorrelationWindow parse(const std::string& descriptor);

 private:
  std::vector<WindowInterval> intervals_;
};

// #{ordered (m, n), m != n : ||x_m - x_n|| < s/N}.
std::uint64_t pair_count(const TorusPoints& pts, double s);
double pair_correlation(const TorusPoints& pts, double s);

// #{distinct (a_1..a_k) : {x_{a_1} - x_{a_j}} in [lo_j/N, hi_j/N) mod 1, j = 2..k}.
std::uint64_t k_level_count(const TorusPoints& pts, const CorrelationWindow& w);
double k_level_correlation(const TorusPoints& pts, const CorrelationWindow& w);

// ---------------------------------------------------------------------------
// Discrepancy
// ---------------------------------------------------------------------------

struct Discrepancy {
  double extreme;  // D_N, sup over closed [a, b] in [0, 1]
  double star;     // D*_N, anchored intervals
};

Discrepancy discrepancy(const TorusPoints& pts);
// Same, on an already sorted span of values in [0, 1).
Discrepancy discrepancy_sorted(std::span<const double> sorted);

struct ProfileGrid {
  enum class Kind { kFull, kGeometric };
  Kind kind = Kind::kFull;
  double ratio = 2.0;

  static ProfileGrid full() { return {Kind::kFull, 1.0}; }
  static ProfileGrid geometric(double ratio) { return {Kind::kGeometric, ratio}; }
};

struct DiscrepancyProfile {
  std::vector<std::size_t> n_grid;
  std::vector<double> d_values;
  std::vector<double> star_values;
  double m_value = 0.0;      // max over the grid of n * D_n
  bool approximate = false;  // grid was not every n
};

// Grid points n = ceil(ratio^j) for the geometric grid, always ending at N.
std::vector<std::size_t> profile_grid(std::size_t n, const ProfileGrid& grid);

DiscrepancyProfile discrepancy_profile(const RealSequence& seq, const ProfileGrid& grid);

// ---------------------------------------------------------------------------
// Additive energy
// ---------------------------------------------------------------------------

struct EnergyResult {
  std::uint64_t count = 0;
  double gamma = 0.0;
  std::size_t n = 0;
  double normalized = 0.0;  // count / N^3
};

inline constexpr std::size_t kDefaultEnergyCap = 8192;

// #{(a, b, c, d) in [1, N]^4 : |x_a + x_b - x_c - x_d| < gamma}, exact.
EnergyResult additive_energy(const RealSequence& seq, double gamma,
                             std::size_t max_n = kDefaultEnergyCap);

// ---------------------------------------------------------------------------
// Gap distribution
// ---------------------------------------------------------------------------

class GapDistribution {
 public:
  explicit GapDistribution(const TorusPoints& pts);

  // N * gap in circle order; the last entry is the wrap-around gap.
  std::span<const double> scaled_gaps() const { return scaled_; }
  double raw_sum() const { return raw_sum_; }
  double ecdf(double x) const;
  // sup_x |ECDF(x) - (1 - e^-x)|, evaluated at the jump points.
  double ks_vs_exponential() const { return ks_; }

 private:
  std::vector<double> scaled_;
  std::vector<double> sorted_;
  double raw_sum_ = 0.0;
  double ks_ = 0.0;
};

GapDistribution gap_distribution(const TorusPoints& pts);

// KS distance between a sample and the unit exponential law.
double ks_exponential(std::span<const double> sample);

// ---------------------------------------------------------------------------
// Density of the perturbed points
// ---------------------------------------------------------------------------
//
// For base x_1..x_N and widths g(1..N), rho_N is the density of x_n + z_n mod 1
// averaged over n: boxes of height 1/(2 g(n) N) around {x_n}, periodised on the
// circle. h_{s,N}(x) = sum_n P(||x_n + z_n - x|| < s/N) = N * int_{x-s/N}^{x+s/N} rho.

double rho_eval(const RealSequence& base, const ScaleFunction& g, double x);
double rho_integral(const RealSequence& base, const ScaleFunction& g);
double rho_l2(const RealSequence& base, const ScaleFunction& g);
double h_eval(const RealSequence& base, const ScaleFunction& g, double s, double x);

struct ExpectedPairCorrelation {
  double value = 0.0;        // int_0^1 h_{s,N} rho_N
  double error_bound = 0.0;  // s / (N g(N))
  double self_term = 0.0;    // (1/N) sum_m P(||z_m - z'_m|| < s/N), exact
};

ExpectedPairCorrelation expected_pair_correlation(const RealSequence& base, const ScaleFunction& g,
                                                  double s);

}  // namespace modone
