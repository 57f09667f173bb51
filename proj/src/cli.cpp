#include "modone/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "modone/experiments.hpp"
#include "modone/io.hpp"

namespace modone {

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  std::optional<double> lap() {
    auto now = std::chrono::steady_clock::now();
    std::optional<double> ms;
    if (enabled_) ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

std::string join_command(const std::vector<std::string>& args) {
  std::string s = "modone";
  for (const auto& a : args) s += " " + a;
  return s;
}

struct GenOptions {
  std::string kind;
  double alpha = kGoldenRatio;
  double theta = 0.5;
  unsigned base = 2;
  double c = 1.0;
  CLI::Option* c_opt = nullptr;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::string out;
};

void add_generator_flags(CLI::App* cmd, GenOptions& g) {
  cmd->add_option("--kind", g.kind, "Generator: arith|power|vdc|theorem1|converse")
      ->required()
      ->check(CLI::IsMember({"arith", "power", "vdc", "theorem1", "converse"}));
  cmd->add_option("--alpha", g.alpha, "Rotation number for arith")->capture_default_str();
  cmd->add_option("--theta", g.theta, "Exponent for power")->capture_default_str();
  cmd->add_option("--base", g.base, "Base for vdc")->capture_default_str();
  g.c_opt = cmd->add_option("--c", g.c, "Scale parameter (theorem1: 1, converse: 0.5)");
  cmd->add_option("--n", g.n, "Number of points")->required();
}

GeneratorConfig generator_from(const GenOptions& g) {
  double c = g.c;
  if (!g.c_opt->count()) c = g.kind == "converse" ? 0.5 : 1.0;
  return parse_generator_kind(g.kind, g.alpha, g.theta, g.base, c);
}

bool randomized(const GeneratorConfig& gen) {
  return std::holds_alternative<Theorem1Config>(gen) || std::holds_alternative<ConverseConfig>(gen);
}

void emit(std::ostream& out, const ResultRecord& r) { out << to_json_line(r) << '\n'; }

// ---------------------------------------------------------------------------

int cmd_gen(const GenOptions& g, std::ostream& out) {
  GeneratorConfig gen = generator_from(g);
  if (g.n < 1) throw ValidationError("--n must be >= 1");
  if (randomized(gen) && !g.seed_opt->count())
    throw ValidationError("--seed is required for randomized generators");
  RealSequence seq = generate(gen, g.n, g.seed);
  if (g.out == "-")
    write_points(out, seq.values());
  else
    save_points(g.out, seq.values());
  return kExitOk;
}

struct StatOptions {
  std::string in;
  bool ppc = false;
  std::vector<double> s{1.0};
  bool klevel = false;
  std::size_t k = 0;
  std::vector<std::string> windows;
  bool disc = false;
  std::string profile;
  double ratio = 1.1;
  bool energy = false;
  double gamma = 1.0;
  std::size_t energy_cap = kDefaultEnergyCap;
  bool gaps = false;
  bool no_timing = false;
};

int cmd_stat(const StatOptions& o, const std::string& command, std::ostream& out) {
  if (!(o.ppc || o.klevel || o.disc || !o.profile.empty() || o.energy || o.gaps))
    throw ValidationError("stat needs at least one of --ppc, --klevel, --disc, --profile, --energy, --gaps");
  RealSequence seq(o.in == "-" ? read_points(std::cin) : load_points(o.in));
  const std::size_t n = seq.size();
  Stopwatch clock(!o.no_timing);
  TorusPoints pts = frac_reduce(seq);

  auto record = [&](std::string statistic, double value, std::string window = {}) {
    ResultRecord r;
    r.command = command;
    r.n = n;
    r.window = std::move(window);
    r.statistic = std::move(statistic);
    r.value = value;
    return r;
  };

  if (o.ppc) {
    for (double s : o.s) {
      clock.lap();
      double v = pair_correlation(pts, s);
      auto r = record("pair_correlation", v, CorrelationWindow::pair(s).descriptor());
      r.wall_time_ms = clock.lap();
      emit(out, r);
    }
  }
  if (o.klevel) {
    if (o.windows.empty()) throw ValidationError("--klevel requires --windows \"lo:hi,lo:hi\"");
    for (const auto& desc : o.windows) {
      CorrelationWindow w = CorrelationWindow::parse(desc);
      if (o.k != 0 && o.k != w.k())
        throw ValidationError("--k " + std::to_string(o.k) + " does not match window '" + desc + "' (k = " +
                              std::to_string(w.k()) + ")");
      clock.lap();
      double v = k_level_correlation(pts, w);
      auto r = record("k_level_correlation", v, w.descriptor());
      r.extra["k"] = static_cast<double>(w.k());
      r.extra["poisson_limit"] = w.poisson_limit();
      r.wall_time_ms = clock.lap();
      emit(out, r);
    }
  }
  if (o.disc) {
    clock.lap();
    Discrepancy d = discrepancy(pts);
    auto ms = clock.lap();
    auto r = record("discrepancy", d.extreme);
    r.wall_time_ms = ms;
    emit(out, r);
    auto rs = record("star_discrepancy", d.star);
    rs.wall_time_ms = ms;
    emit(out, rs);
  }
  if (!o.profile.empty()) {
    ProfileGrid grid = o.profile == "full" ? ProfileGrid::full() : ProfileGrid::geometric(o.ratio);
    clock.lap();
    DiscrepancyProfile prof = discrepancy_profile(seq, grid);
    auto ms = clock.lap();
    for (std::size_t i = 0; i < prof.n_grid.size(); ++i) {
      ResultRecord r = record("discrepancy_profile", prof.d_values[i]);
      r.n = prof.n_grid[i];
      r.extra["star"] = prof.star_values[i];
      emit(out, r);
    }
    auto m = record("max_n_discrepancy", prof.m_value);
    m.extra["approximate"] = prof.approximate ? 1.0 : 0.0;
    m.wall_time_ms = ms;
    emit(out, m);
  }
  if (o.energy) {
    clock.lap();
    EnergyResult e = additive_energy(seq, o.gamma, o.energy_cap);
    auto r = record("additive_energy", e.normalized);
    r.extra["count"] = static_cast<double>(e.count);
    r.extra["gamma"] = e.gamma;
    r.wall_time_ms = clock.lap();
    emit(out, r);
  }
  if (o.gaps) {
    clock.lap();
    GapDistribution gd = gap_distribution(pts);
    auto r = record("gap_ks_exponential", gd.ks_vs_exponential());
    r.extra["raw_sum"] = gd.raw_sum();
    r.wall_time_ms = clock.lap();
    emit(out, r);
  }
  return kExitOk;
}

int cmd_exp(const std::string& config, unsigned threads, bool no_timing, const std::string& command,
            std::ostream& out) {
  TrialPlan plan = load_plan(config);
  if (threads < 1) throw ValidationError("--threads must be >= 1");
  Stopwatch clock(!no_timing);
  StatSummary sum = run_trials(plan, threads);
  auto ms = clock.lap();
  for (const auto& e : sum.entries) {
    const CorrelationWindow& w = sum.windows[e.window_index];
    const std::string stat = w.is_symmetric_pair() ? "pair_correlation" : "k_level_correlation";
    ResultRecord r;
    r.command = command;
    r.seeds = {plan.master_seed};
    r.n = e.n;
    r.window = w.descriptor();
    r.statistic = stat + "_mean";
    r.value = e.mean;
    r.standard_error = e.standard_error;
    r.trials = sum.trials;
    r.extra["sample_variance"] = e.sample_variance;
    r.wall_time_ms = ms;
    emit(out, r);
    for (std::size_t t = 0; t < e.values.size(); ++t) {
      ResultRecord tr;
      tr.command = command;
      tr.seeds = {trial_seed(plan, t)};
      tr.n = e.n;
      tr.window = w.descriptor();
      tr.statistic = stat;
      tr.value = e.values[t];
      tr.trial = t;
      tr.extra["alpha"] = trial_alpha(plan, t);
      emit(out, tr);
    }
  }
  return kExitOk;
}

struct CheckOptions {
  bool conditions = false;
  bool energy = false;
  GenOptions gen;
  std::string scale = "beck_scale";
  double param = 1.0;
  std::string profile = "geom";
  double ratio = 1.02;
  std::string in;
  double gamma = 1.0;
  bool no_timing = false;
};

int cmd_check(CheckOptions& o, const std::string& command, std::ostream& out) {
  if (o.conditions == o.energy) throw ValidationError("check needs exactly one of --conditions or --energy");
  Stopwatch clock(!o.no_timing);
  if (o.energy) {
    if (o.in.empty()) throw ValidationError("check --energy requires --in");
    RealSequence seq(o.in == "-" ? read_points(std::cin) : load_points(o.in));
    EnergyCertificate cert = energy_certificate(seq, o.gamma);
    ResultRecord r;
    r.command = command;
    r.n = seq.size();
    r.statistic = "energy_certificate";
    r.value = cert.energy.normalized;
    r.pass = cert.within;
    r.extra = {{"count", static_cast<double>(cert.energy.count)},
               {"gamma", o.gamma},
               {"lower", cert.lower},
               {"upper", cert.upper},
               {"upper_with_slack", cert.upper_with_slack},
               {"min_gap", cert.min_gap}};
    r.wall_time_ms = clock.lap();
    emit(out, r);
    return kExitOk;
  }

  if (o.gen.kind.empty()) throw ValidationError("check --conditions requires --kind and --n for the base sequence");
  GeneratorConfig base = generator_from(o.gen);
  if (randomized(base)) throw ValidationError("check --conditions takes a deterministic base (arith|power|vdc)");
  if (o.gen.n < 1) throw ValidationError("--n must be >= 1");
  ScaleFunction g = o.scale == "beck_scale"  ? ScaleFunction::beck_scale(o.param)
                    : o.scale == "power_log" ? ScaleFunction::power_log(o.param)
                                             : ScaleFunction::constant(o.param);
  ProfileGrid grid = o.profile == "full" ? ProfileGrid::full() : ProfileGrid::geometric(o.ratio);
  DiscrepancyProfile prof = discrepancy_profile(generate(base, o.gen.n, 0), grid);
  GConditionReport rep = check_g_conditions(g, prof);
  auto ms = clock.lap();

  const struct {
    const char* name;
    double slope;
    bool pass;
    const std::vector<double>* series;
  } rows[] = {{"condition_i", rep.slope_i, rep.pass_i, &rep.g_over_disc},
              {"condition_ii", rep.slope_ii, rep.pass_ii, &rep.n_g},
              {"condition_iii", rep.slope_iii, rep.pass_iii, &rep.stability}};
  for (const auto& row : rows) {
    ResultRecord r;
    r.command = command;
    r.n = o.gen.n;
    r.statistic = row.name;
    r.value = row.slope;
    r.pass = row.pass;
    r.extra["last"] = row.series->back();
    if (row.series == &rep.g_over_disc) r.extra["min_top_decade"] = rep.min_top_g_over_disc;
    r.wall_time_ms = ms;
    emit(out, r);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistics of sequences modulo one", "modone"};
  app.require_subcommand(1);
  const std::string command = join_command(args);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a sequence and write a points file");
  add_generator_flags(gen_cmd, gen);
  gen.seed_opt = gen_cmd->add_option("--seed", gen.seed, "Master seed (randomized kinds)");
  gen_cmd->add_option("--out", gen.out, "Output points file, '-' for stdout")->required();

  StatOptions st;
  auto* stat_cmd = app.add_subcommand("stat", "Compute statistics of a points file");
  stat_cmd->add_option("--in", st.in, "Input points file, '-' for stdin")->required();
  stat_cmd->add_flag("--ppc", st.ppc, "Pair correlation");
  stat_cmd->add_option("--s", st.s, "Pair window half-width(s) s")->capture_default_str();
  stat_cmd->add_flag("--klevel", st.klevel, "k-level correlation");
  stat_cmd->add_option("--k", st.k, "Expected k of every window (checked)");
  stat_cmd->add_option("--windows", st.windows, "Window descriptor \"lo:hi,lo:hi\" (repeatable)");
  stat_cmd->add_flag("--disc", st.disc, "Extreme and star discrepancy");
  stat_cmd->add_option("--profile", st.profile, "Discrepancy profile grid")->check(CLI::IsMember({"full", "geom"}));
  stat_cmd->add_option("--ratio", st.ratio, "Geometric grid ratio")->capture_default_str();
  stat_cmd->add_flag("--energy", st.energy, "Additive energy of the raw values");
  stat_cmd->add_option("--gamma", st.gamma, "Energy scale")->capture_default_str();
  stat_cmd->add_option("--energy-cap", st.energy_cap, "Largest N for the in-memory energy count")
      ->capture_default_str();
  stat_cmd->add_flag("--gaps", st.gaps, "Gap distribution KS distance to Exp(1)");
  stat_cmd->add_flag("--no-timing", st.no_timing, "Write null wall times");

  std::string config;
  unsigned threads = 1;
  bool exp_no_timing = false;
  auto* exp_cmd = app.add_subcommand("exp", "Run a Monte Carlo trial plan");
  exp_cmd->add_option("--config", config, "Trial plan JSON file")->required();
  exp_cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();
  exp_cmd->add_flag("--no-timing", exp_no_timing, "Write null wall times");

  CheckOptions ck;
  ck.gen.alpha = kGoldenRatio;
  auto* check_cmd = app.add_subcommand("check", "Perturbation-width conditions or energy certificate");
  check_cmd->add_flag("--conditions", ck.conditions, "Check the width conditions against a base sequence");
  check_cmd->add_flag("--energy", ck.energy, "Energy certificate of a well-spaced points file");
  check_cmd->add_option("--kind", ck.gen.kind, "Base: arith|power|vdc")
      ->check(CLI::IsMember({"arith", "power", "vdc"}));
  check_cmd->add_option("--alpha", ck.gen.alpha, "Rotation number for arith")->capture_default_str();
  check_cmd->add_option("--theta", ck.gen.theta, "Exponent for power")->capture_default_str();
  check_cmd->add_option("--base", ck.gen.base, "Base for vdc")->capture_default_str();
  check_cmd->add_option("--n", ck.gen.n, "Largest N of the profile");
  ck.gen.c_opt = check_cmd->add_option("--c", ck.param, "Scale parameter (c, or g0 for constant)")
                     ->capture_default_str();
  check_cmd->add_option("--scale", ck.scale, "Width family")
      ->check(CLI::IsMember({"beck_scale", "power_log", "constant"}))
      ->capture_default_str();
  check_cmd->add_option("--profile", ck.profile, "Discrepancy grid")
      ->check(CLI::IsMember({"full", "geom"}))
      ->capture_default_str();
  check_cmd->add_option("--ratio", ck.ratio, "Geometric grid ratio")->capture_default_str();
  check_cmd->add_option("--in", ck.in, "Points file for --energy");
  check_cmd->add_option("--gamma", ck.gamma, "Energy scale")->capture_default_str();
  check_cmd->add_flag("--no-timing", ck.no_timing, "Write null wall times");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (e.get_name() == "CallForVersion" ? std::string("modone\n") : app.help());
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*stat_cmd) return cmd_stat(st, command, out);
    if (*exp_cmd) return cmd_exp(config, threads, exp_no_timing, command, out);
    if (*check_cmd) return cmd_check(ck, command, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  err << "internal error: no subcommand ran\n";
  return kExitInternal;
}

}  // namespace modone
