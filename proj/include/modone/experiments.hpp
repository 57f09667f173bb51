#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "modone/generators.hpp"
#include "modone/seqcore.hpp"
#include "modone/stats.hpp"

namespace modone {

struct Theorem1Config {
  double c = 1.0;
};
struct ConverseConfig {
  double c = 0.5;
};
using GeneratorConfig = std::variant<Arithmetic, Power, VanDerCorput, Theorem1Config, ConverseConfig>;

RealSequence generate(const GeneratorConfig& gen, std::size_t n, std::uint64_t seed);

// Perturbation width of a randomized generator, if it has one.
std::optional<ScaleFunction> generator_scale(const GeneratorConfig& gen);

// Unperturbed base of a generator (2n, n, or the deterministic sequence itself).
RealSequence generator_base(const GeneratorConfig& gen, std::size_t n);

struct AlphaMode {
  enum class Kind { kFixed, kUniformRange };
  Kind kind = Kind::kFixed;
  double lo = 1.0;  // fixed value when kind == kFixed
  double hi = 2.0;

  static AlphaMode fixed(double alpha) { return {Kind::kFixed, alpha, alpha}; }
  static AlphaMode uniform_range(double lo, double hi) { return {Kind::kUniformRange, lo, hi}; }
};

struct TrialPlan {
  GeneratorConfig generator = Theorem1Config{};
  std::vector<std::size_t> n_schedule;
  std::vector<CorrelationWindow> windows;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  AlphaMode alpha = AlphaMode::fixed(1.0);
  bool retain_values = false;

  void validate() const;
};

// Trial t uses generator seed master_seed + t; the counter-based generator
// keys every draw on it, so neighbouring seeds give independent streams.
std::uint64_t trial_seed(const TrialPlan& plan, std::size_t trial);
double trial_alpha(const TrialPlan& plan, std::size_t trial);

struct SummaryEntry {
  std::size_t n = 0;
  std::size_t window_index = 0;
  double mean = 0.0;
  double sample_variance = 0.0;
  double standard_error = 0.0;
  std::vector<double> values;  // per-trial statistic, when retained
};

struct StatSummary {
  std::size_t trials = 0;
  std::vector<CorrelationWindow> windows;
  std::vector<SummaryEntry> entries;  // ordered by (N, window)

  const SummaryEntry& at(std::size_t n, std::size_t window_index) const;
};

// Statistic of one reduced point set for one window: pair correlation for a
// symmetric k = 2 window, the k-level statistic otherwise.
double window_statistic(const TorusPoints& pts, const CorrelationWindow& w);

StatSummary run_trials(const TrialPlan& plan, unsigned threads = 1);

struct GConditionReport {
  std::vector<std::size_t> n;
  std::vector<double> g_over_disc;  // (i)   g(N) / D_N, must diverge
  std::vector<double> n_g;          // (ii)  N g(N), must diverge
  std::vector<double> stability;    // (iii) g(N (1 + M_N / (N g(N)))) / g(N), must tend to 1
  double slope_i = 0.0;
  double slope_ii = 0.0;
  double slope_iii = 0.0;
  double min_top_g_over_disc = 0.0;
  bool pass_i = false;
  bool pass_ii = false;
  bool pass_iii = false;

  bool all_pass() const { return pass_i && pass_ii && pass_iii; }
};

// Trend flags are least-squares slopes over the top decade of the grid:
// log(value) against log N for (i) and (ii), |value - 1| against log N for (iii).
// (i) additionally needs g(N) > D_N throughout the top decade; a one-decade
// slope alone cannot tell a flat trajectory from a slowly diverging one.
GConditionReport check_g_conditions(const ScaleFunction& g, const DiscrepancyProfile& profile);

struct ConverseReport {
  double s = 1.0;
  std::vector<std::size_t> n;
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::vector<double> ratio;  // mean / (2 s)
  double max_ratio = 0.0;
  double margin = 0.0;
  bool exceeds = false;  // max_ratio > 1 + margin
};

struct ConverseRequest {
  GeneratorConfig generator = ConverseConfig{};
  double alpha = kLiouvilleAlpha;
  std::vector<std::size_t> schedule;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double s = 1.0;
  double margin = 0.2;
  unsigned threads = 1;
};

ConverseReport converse_experiment(const ConverseRequest& req);
ConverseReport converse_experiment(double c, double alpha, const std::vector<std::size_t>& schedule,
                                   std::size_t trials, std::uint64_t seed);

struct EnergyCertificate {
  EnergyResult energy;
  double min_gap = 0.0;
  double lower = 0.0;  // 1/N   (E >= N^2)
  double upper = 0.0;  // 2 gamma + 1 (E <= 2 gamma N^3 + N^3 for 1-separated input)
  double upper_with_slack = 0.0;  // 2 gamma + 1 + 4/N
  bool within = false;
};

// Throws ValidationError when seq is not well spaced.
EnergyCertificate energy_certificate(const RealSequence& seq, double gamma);

struct SubsequenceRow {
  std::size_t n = 0;
  std::size_t window_index = 0;
  double target = 0.0;     // Poissonian limit of the window
  double deviation = 0.0;  // |mean - target|
  double threshold = 0.0;  // N^(-1/4)
  bool within_3x = false;
};

std::vector<SubsequenceRow> subsequence_check(const StatSummary& summary);

// int rho^2 for the dilated construction alpha * x_n: base alpha * base_n,
// widths alpha * g(n).
double rho_l2_dilated(const GeneratorConfig& gen, double alpha, std::size_t n);

// Same with alpha * n replaced by n p / q in the base (widths still alpha * g).
double rho_l2_rational(const GeneratorConfig& gen, std::int64_t p, std::int64_t q, double alpha,
                       std::size_t n);

}  // namespace modone
