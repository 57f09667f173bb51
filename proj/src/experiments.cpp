#include "modone/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "modone/rng.hpp"

namespace modone {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

RealSequence generate(const GeneratorConfig& gen, std::size_t n, std::uint64_t seed) {
  return std::visit(
      [&](const auto& g) -> RealSequence {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Theorem1Config>)
          return gen_theorem1(g.c, n, seed);
        else if constexpr (std::is_same_v<G, ConverseConfig>)
          return gen_converse(g.c, n, seed);
        else
          return gen_base(g, n);
      },
      gen);
}

std::optional<ScaleFunction> generator_scale(const GeneratorConfig& gen) {
  if (auto* t = std::get_if<Theorem1Config>(&gen)) return ScaleFunction::beck_scale(t->c);
  if (auto* c = std::get_if<ConverseConfig>(&gen)) {
    if (!(c->c > 0.0 && c->c <= 0.5)) throw ValidationError("converse construction requires 0 < c <= 1/2");
    return ScaleFunction::power_log(c->c);
  }
  return std::nullopt;
}

RealSequence generator_base(const GeneratorConfig& gen, std::size_t n) {
  if (std::holds_alternative<Theorem1Config>(gen)) return gen_base(Arithmetic{2.0}, n);
  if (std::holds_alternative<ConverseConfig>(gen)) return gen_base(Arithmetic{1.0}, n);
  return generate(gen, n, 0);
}

void TrialPlan::validate() const {
  if (trials < 1) throw ValidationError("trial plan requires trials >= 1");
  if (n_schedule.empty()) throw ValidationError("trial plan requires a non-empty N schedule");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 1) throw ValidationError("N schedule entries must be >= 1");
    if (i > 0 && n_schedule[i] <= n_schedule[i - 1]) throw ValidationError("N schedule must be strictly increasing");
  }
  if (windows.empty()) throw ValidationError("trial plan requires at least one window");
  if (alpha.kind == AlphaMode::Kind::kFixed) {
    if (alpha.lo == 0.0 || !std::isfinite(alpha.lo)) throw ValidationError("fixed alpha must be finite and non-zero");
  } else if (!(alpha.lo < alpha.hi) || !std::isfinite(alpha.lo) || !std::isfinite(alpha.hi) ||
             (alpha.lo <= 0.0 && alpha.hi >= 0.0)) {
    throw ValidationError("alpha range must satisfy lo < hi and exclude 0");
  }
}

std::uint64_t trial_seed(const TrialPlan& plan, std::size_t trial) { return plan.master_seed + trial; }

double trial_alpha(const TrialPlan& plan, std::size_t trial) {
  if (plan.alpha.kind == AlphaMode::Kind::kFixed) return plan.alpha.lo;
  double u = rng::counter_uniform(plan.master_seed, rng::Stream::kAlpha, trial);
  return plan.alpha.lo + u * (plan.alpha.hi - plan.alpha.lo);
}

const SummaryEntry& StatSummary::at(std::size_t n, std::size_t window_index) const {
  for (const auto& e : entries)
    if (e.n == n && e.window_index == window_index) return e;
  throw std::out_of_range("no summary entry for N = " + std::to_string(n));
}

double window_statistic(const TorusPoints& pts, const CorrelationWindow& w) {
  if (w.is_symmetric_pair()) return pair_correlation(pts, w.intervals()[0].hi);
  return k_level_correlation(pts, w);
}

StatSummary run_trials(const TrialPlan& plan, unsigned threads) {
  plan.validate();
  const std::size_t n_max = plan.n_schedule.back();
  const std::size_t cells = plan.n_schedule.size() * plan.windows.size();

  // values[trial][cell], cell = schedule index * windows + window index.
  std::vector<std::vector<double>> values(plan.trials, std::vector<double>(cells));
  std::vector<std::exception_ptr> errors(plan.trials);

  auto run_one = [&](std::size_t t) {
    try {
      const double alpha = trial_alpha(plan, t);
      RealSequence full = scale_by_alpha(generate(plan.generator, n_max, trial_seed(plan, t)), alpha);
      for (std::size_t si = 0; si < plan.n_schedule.size(); ++si) {
        TorusPoints pts = frac_reduce(full.prefix(plan.n_schedule[si]));
        for (std::size_t wi = 0; wi < plan.windows.size(); ++wi)
          values[t][si * plan.windows.size() + wi] = window_statistic(pts, plan.windows[wi]);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(plan.trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < plan.trials; ++t) run_one(t);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < plan.trials; t += workers) run_one(t);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t t = 0; t < plan.trials; ++t) {
    if (!errors[t]) continue;
    try {
      std::rethrow_exception(errors[t]);
    } catch (const ValidationError& e) {
      throw ValidationError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
    }
  }

  StatSummary out;
  out.trials = plan.trials;
  out.windows = plan.windows;
  const double tn = static_cast<double>(plan.trials);
  for (std::size_t si = 0; si < plan.n_schedule.size(); ++si) {
    for (std::size_t wi = 0; wi < plan.windows.size(); ++wi) {
      std::size_t cell = si * plan.windows.size() + wi;
      CompensatedSum sum;
      for (std::size_t t = 0; t < plan.trials; ++t) sum.add(values[t][cell]);
      SummaryEntry e;
      e.n = plan.n_schedule[si];
      e.window_index = wi;
      e.mean = sum.value() / tn;
      if (plan.trials > 1) {
        CompensatedSum sq;
        for (std::size_t t = 0; t < plan.trials; ++t) {
          double d = values[t][cell] - e.mean;
          sq.add(d * d);
        }
        e.sample_variance = std::max(0.0, sq.value() / (tn - 1.0));
      }
      e.standard_error = std::sqrt(e.sample_variance / tn);
      if (plan.retain_values)
        for (std::size_t t = 0; t < plan.trials; ++t) e.values.push_back(values[t][cell]);
      out.entries.push_back(std::move(e));
    }
  }
  return out;
}

GConditionReport check_g_conditions(const ScaleFunction& g, const DiscrepancyProfile& profile) {
  GConditionReport r;
  const auto& grid = profile.n_grid;
  if (grid.empty()) throw ValidationError("empty discrepancy profile");
  double running_m = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double n = static_cast<double>(grid[i]);
    const double d = profile.d_values[i];
    running_m = std::max(running_m, n * d);
    const double gn = g.at(n);
    r.n.push_back(grid[i]);
    r.g_over_disc.push_back(gn / d);
    r.n_g.push_back(n * gn);
    r.stability.push_back(g.at(n * (1.0 + running_m / (n * gn))) / gn);
  }

  std::vector<double> lx, li, lii, diii;
  const double top = static_cast<double>(grid.back()) / 10.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (static_cast<double>(grid[i]) < top) continue;
    lx.push_back(std::log(static_cast<double>(grid[i])));
    li.push_back(std::log(r.g_over_disc[i]));
    lii.push_back(std::log(r.n_g[i]));
    diii.push_back(std::abs(r.stability[i] - 1.0));
  }
  if (lx.size() < 2) throw ValidationError("condition check needs at least two grid points in the top decade");
  r.slope_i = slope(lx, li);
  r.slope_ii = slope(lx, lii);
  r.slope_iii = slope(lx, diii);
  r.min_top_g_over_disc = std::exp(*std::min_element(li.begin(), li.end()));
  r.pass_i = r.slope_i > 0.0 && r.min_top_g_over_disc > 1.0;
  r.pass_ii = r.slope_ii > 0.0;
  r.pass_iii = *std::max_element(diii.begin(), diii.end()) < 1e-12 || r.slope_iii < 0.0;
  return r;
}

ConverseReport converse_experiment(const ConverseRequest& req) {
  if (auto* c = std::get_if<ConverseConfig>(&req.generator); c && !(c->c > 0.0 && c->c <= 0.5))
    throw ValidationError("converse construction requires 0 < c <= 1/2");
  TrialPlan plan;
  plan.generator = req.generator;
  plan.n_schedule = req.schedule;
  std::sort(plan.n_schedule.begin(), plan.n_schedule.end());
  plan.n_schedule.erase(std::unique(plan.n_schedule.begin(), plan.n_schedule.end()), plan.n_schedule.end());
  plan.windows = {CorrelationWindow::pair(req.s)};
  plan.trials = req.trials;
  plan.master_seed = req.seed;
  plan.alpha = AlphaMode::fixed(req.alpha);
  StatSummary sum = run_trials(plan, req.threads);

  ConverseReport r;
  r.s = req.s;
  r.margin = req.margin;
  for (const auto& e : sum.entries) {
    r.n.push_back(e.n);
    r.mean.push_back(e.mean);
    r.standard_error.push_back(e.standard_error);
    r.ratio.push_back(e.mean / (2.0 * req.s));
    r.max_ratio = std::max(r.max_ratio, r.ratio.back());
  }
  r.exceeds = r.max_ratio > 1.0 + req.margin;
  return r;
}

ConverseReport converse_experiment(double c, double alpha, const std::vector<std::size_t>& schedule,
                                   std::size_t trials, std::uint64_t seed) {
  ConverseRequest req;
  req.generator = ConverseConfig{c};
  req.alpha = alpha;
  req.schedule = schedule;
  req.trials = trials;
  req.seed = seed;
  return converse_experiment(req);
}

EnergyCertificate energy_certificate(const RealSequence& seq, double gamma) {
  if (!seq.well_spaced()) throw ValidationError("energy certificate requires a well spaced sequence");
  EnergyCertificate c;
  auto x = seq.values();
  c.min_gap = x.size() > 1 ? x[1] - x[0] : 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) c.min_gap = std::min(c.min_gap, x[i] - x[i - 1]);
  c.energy = additive_energy(seq, gamma);
  const double n = static_cast<double>(seq.size());
  c.lower = 1.0 / n;
  c.upper = 2.0 * gamma + 1.0;
  c.upper_with_slack = c.upper + 4.0 / n;
  c.within = c.energy.normalized >= c.lower && c.energy.normalized <= c.upper_with_slack;
  return c;
}

std::vector<SubsequenceRow> subsequence_check(const StatSummary& summary) {
  if (summary.trials == 0) throw ValidationError("subsequence check requires trials >= 1");
  std::vector<std::size_t> ns;
  for (const auto& e : summary.entries)
    if (std::find(ns.begin(), ns.end(), e.n) == ns.end()) ns.push_back(e.n);
  if (ns.size() < 3) throw ValidationError("subsequence check requires at least 3 schedule points");

  std::vector<SubsequenceRow> rows;
  for (const auto& e : summary.entries) {
    SubsequenceRow row;
    row.n = e.n;
    row.window_index = e.window_index;
    row.target = summary.windows.at(e.window_index).poisson_limit();
    row.deviation = std::abs(e.mean - row.target);
    row.threshold = std::pow(static_cast<double>(e.n), -0.25);
    row.within_3x = row.deviation < 3.0 * row.threshold;
    rows.push_back(row);
  }
  return rows;
}

double rho_l2_dilated(const GeneratorConfig& gen, double alpha, std::size_t n) {
  auto g = generator_scale(gen);
  if (!g) throw ValidationError("rho diagnostic needs a randomized generator");
  return rho_l2(scale_by_alpha(generator_base(gen, n), alpha), g->scaled(std::abs(alpha)));
}

double rho_l2_rational(const GeneratorConfig& gen, std::int64_t p, std::int64_t q, double alpha,
                       std::size_t n) {
  auto g = generator_scale(gen);
  if (!g) throw ValidationError("rho diagnostic needs a randomized generator");
  if (q < 1) throw ValidationError("rational substitution needs q >= 1");
  // base_n * p / q mod 1, with the integer product reduced exactly.
  RealSequence base = generator_base(gen, n);
  std::vector<double> pts;
  pts.reserve(n);
  for (double b : base.values()) {
    auto m = static_cast<__int128>(std::llround(b)) * p;
    auto r = static_cast<std::int64_t>(((m % q) + q) % q);
    pts.push_back(static_cast<double>(r) / static_cast<double>(q));
  }
  return rho_l2(RealSequence(std::move(pts)), g->scaled(std::abs(alpha)));
}

}  // namespace modone
