#include "modone/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace modone {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kPointsHeader = "# modone-points v1 n=";

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ValidationError("malformed " + what + ": '" + text + "'");
  return v;
}

template <class T>
T require(const Json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ValidationError(ctx + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(ctx + ": field '" + std::string(key) + "' has the wrong type");
  }
}

template <class T>
T optional_field(const Json& j, const char* key, T fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  return require<T>(j, key, ctx);
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed " + what + ": " + e.what());
  }
}

CorrelationWindow window_from_json(const Json& w) {
  if (w.is_string()) return CorrelationWindow::parse(w.get<std::string>());
  if (!w.is_object()) throw ValidationError("window must be a descriptor string or an object");
  auto raw = require<std::vector<std::vector<double>>>(w, "intervals", "window");
  std::vector<WindowInterval> iv;
  for (const auto& p : raw) {
    if (p.size() != 2) throw ValidationError("window interval must be a [lo, hi] pair");
    iv.push_back({p[0], p[1]});
  }
  CorrelationWindow out(std::move(iv));
  if (w.contains("k") && require<std::size_t>(w, "k", "window") != out.k())
    throw ValidationError("window k does not match the number of intervals plus one");
  return out;
}

Json generator_to_json(const GeneratorConfig& gen) {
  Json j;
  j["kind"] = generator_kind(gen);
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Arithmetic>) j["alpha"] = g.alpha;
        if constexpr (std::is_same_v<G, Power>) j["theta"] = g.theta;
        if constexpr (std::is_same_v<G, VanDerCorput>) j["base"] = g.base;
        if constexpr (std::is_same_v<G, Theorem1Config> || std::is_same_v<G, ConverseConfig>) j["c"] = g.c;
      },
      gen);
  return j;
}

GeneratorConfig generator_from_json(const Json& j) {
  const std::string ctx = "generator";
  if (!j.is_object()) throw ValidationError("generator must be an object");
  auto kind = require<std::string>(j, "kind", ctx);
  double alpha = kind == "arith" ? require<double>(j, "alpha", ctx) : 0.0;
  double theta = kind == "power" ? require<double>(j, "theta", ctx) : 0.0;
  unsigned base = kind == "vdc" ? optional_field<unsigned>(j, "base", 2u, ctx) : 2u;
  double c = kind == "theorem1" ? optional_field<double>(j, "c", 1.0, ctx)
                                : optional_field<double>(j, "c", 0.5, ctx);
  return parse_generator_kind(kind, alpha, theta, base, c);
}

}  // namespace

void write_points(std::ostream& os, std::span<const double> values) {
  os << kPointsHeader << values.size() << '\n';
  char buf[64];
  for (double v : values) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    os.write(buf, ptr - buf);
    os.put('\n');
  }
}

std::vector<double> read_points(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("points file is empty");
  line = trim(line);
  const std::string header = kPointsHeader;
  if (line.rfind(header, 0) != 0) throw ValidationError("points file lacks the '# modone-points v1' header");
  const std::string count_text = line.substr(header.size());
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), n);
  if (ec != std::errc() || ptr != count_text.data() + count_text.size())
    throw ValidationError("malformed point count in header: '" + count_text + "'");

  std::vector<double> values;
  values.reserve(n);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    values.push_back(parse_double(line, "value on line " + std::to_string(line_no)));
  }
  if (values.size() != n)
    throw ValidationError("header declares " + std::to_string(n) + " points but the file has " +
                          std::to_string(values.size()));
  return values;
}

void save_points(const std::string& path, std::span<const double> values) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  write_points(os, values);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<double> load_points(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  return read_points(is);
}

std::string to_json_line(const ResultRecord& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["command"] = r.command;
  j["seeds"] = r.seeds;
  j["N"] = r.n ? Json(*r.n) : Json(nullptr);
  j["window"] = r.window;
  j["statistic"] = r.statistic;
  j["value"] = r.value;
  if (r.error_bound) j["error_bound"] = *r.error_bound;
  if (r.standard_error) j["standard_error"] = *r.standard_error;
  if (r.trials) j["trials"] = *r.trials;
  if (r.trial) j["trial"] = *r.trial;
  if (r.pass) j["pass"] = *r.pass;
  if (!r.extra.empty()) {
    Json e = Json::object();
    for (const auto& [k, v] : r.extra) e[k] = v;
    j["extra"] = std::move(e);
  }
  j["wall_time_ms"] = r.wall_time_ms ? Json(*r.wall_time_ms) : Json(nullptr);
  return j.dump();
}

ResultRecord parse_record(const std::string& line) {
  Json j = parse_json(line, "result record");
  const std::string ctx = "result record";
  ResultRecord r;
  r.schema_version = require<int>(j, "schema_version", ctx);
  if (r.schema_version != kSchemaVersion)
    throw ValidationError("unsupported schema_version " + std::to_string(r.schema_version));
  r.command = require<std::string>(j, "command", ctx);
  r.seeds = require<std::vector<std::uint64_t>>(j, "seeds", ctx);
  if (!j.contains("N")) throw ValidationError(ctx + ": missing field 'N'");
  if (!j["N"].is_null()) r.n = require<std::size_t>(j, "N", ctx);
  r.window = require<std::string>(j, "window", ctx);
  r.statistic = require<std::string>(j, "statistic", ctx);
  r.value = require<double>(j, "value", ctx);
  if (j.contains("error_bound")) r.error_bound = require<double>(j, "error_bound", ctx);
  if (j.contains("standard_error")) r.standard_error = require<double>(j, "standard_error", ctx);
  if (j.contains("trials")) r.trials = require<std::size_t>(j, "trials", ctx);
  if (j.contains("trial")) r.trial = require<std::size_t>(j, "trial", ctx);
  if (j.contains("pass")) r.pass = require<bool>(j, "pass", ctx);
  if (j.contains("extra")) r.extra = require<std::map<std::string, double>>(j, "extra", ctx);
  if (j.contains("wall_time_ms") && !j["wall_time_ms"].is_null())
    r.wall_time_ms = require<double>(j, "wall_time_ms", ctx);
  return r;
}

GeneratorConfig parse_generator_kind(const std::string& kind, double alpha, double theta,
                                     unsigned base, double c) {
  if (kind == "arith") {
    if (!std::isfinite(alpha)) throw ValidationError("arith generator needs a finite alpha");
    return Arithmetic{alpha};
  }
  if (kind == "power") {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw ValidationError("power generator needs theta > 0");
    return Power{theta};
  }
  if (kind == "vdc") {
    if (base < 2) throw ValidationError("van der Corput base must be >= 2");
    return VanDerCorput{base};
  }
  if (kind == "theorem1") {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("theorem1 generator needs c > 0");
    return Theorem1Config{c};
  }
  if (kind == "converse") {
    if (!(c > 0.0 && c <= 0.5)) throw ValidationError("converse generator needs 0 < c <= 1/2");
    return ConverseConfig{c};
  }
  throw ValidationError("unknown generator kind '" + kind + "' (expected arith|power|vdc|theorem1|converse)");
}

std::string generator_kind(const GeneratorConfig& gen) {
  static constexpr const char* kNames[] = {"arith", "power", "vdc", "theorem1", "converse"};
  return kNames[gen.index()];
}

TrialPlan parse_plan(const std::string& json_text) {
  Json j = parse_json(json_text, "trial plan");
  const std::string ctx = "trial plan";
  if (!j.is_object()) throw ValidationError("trial plan must be a JSON object");
  static const std::vector<std::string> known = {"generator", "n_schedule", "windows", "trials",
                                                 "master_seed", "alpha_mode", "retain_values"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError("trial plan: unknown field '" + key + "'");

  TrialPlan plan;
  if (!j.contains("generator")) throw ValidationError(ctx + ": missing field 'generator'");
  plan.generator = generator_from_json(j["generator"]);
  plan.n_schedule = require<std::vector<std::size_t>>(j, "n_schedule", ctx);
  if (!j.contains("windows") || !j["windows"].is_array())
    throw ValidationError(ctx + ": 'windows' must be an array");
  for (const auto& w : j["windows"]) plan.windows.push_back(window_from_json(w));
  plan.trials = require<std::size_t>(j, "trials", ctx);
  plan.master_seed = require<std::uint64_t>(j, "master_seed", ctx);
  if (j.contains("alpha_mode")) {
    const Json& a = j["alpha_mode"];
    auto kind = require<std::string>(a, "kind", "alpha_mode");
    if (kind == "fixed")
      plan.alpha = AlphaMode::fixed(require<double>(a, "value", "alpha_mode"));
    else if (kind == "uniform_range")
      plan.alpha = AlphaMode::uniform_range(require<double>(a, "lo", "alpha_mode"), require<double>(a, "hi", "alpha_mode"));
    else
      throw ValidationError("alpha_mode kind must be 'fixed' or 'uniform_range'");
  }
  plan.retain_values = optional_field<bool>(j, "retain_values", false, ctx);
  plan.validate();
  return plan;
}

TrialPlan load_plan(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_plan(ss.str());
}

std::string plan_to_json(const TrialPlan& plan) {
  Json j;
  j["generator"] = generator_to_json(plan.generator);
  j["n_schedule"] = plan.n_schedule;
  Json ws = Json::array();
  for (const auto& w : plan.windows) ws.push_back(w.descriptor());
  j["windows"] = std::move(ws);
  j["trials"] = plan.trials;
  j["master_seed"] = plan.master_seed;
  if (plan.alpha.kind == AlphaMode::Kind::kFixed)
    j["alpha_mode"] = {{"kind", "fixed"}, {"value", plan.alpha.lo}};
  else
    j["alpha_mode"] = {{"kind", "uniform_range"}, {"lo", plan.alpha.lo}, {"hi", plan.alpha.hi}};
  j["retain_values"] = plan.retain_values;
  return j.dump(2);
}

}  // namespace modone
