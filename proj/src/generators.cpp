#include "modone/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modone/rng.hpp"

namespace modone {

namespace {

using i128 = __int128;

double beck_formula(double c, double t) {
  double l = std::log(t);
  return l * std::pow(std::log(l), 1.0 + c) / t;
}

double power_log_formula(double c, double t) { return std::pow(std::log(t), c) / t; }

// Maximiser of log t (log log t)^(1+c) / t over t >= 16. With L = log t the
// log-derivative is negative iff 1/L + (1+c)/(L log L) < 1.
double beck_peak(double c) {
  auto excess = [c](double l) { return 1.0 / l + (1.0 + c) / (l * std::log(l)) - 1.0; };
  double lo = std::log(static_cast<double>(ScaleFunction::kMinIndex));
  if (excess(lo) <= 0.0) return static_cast<double>(ScaleFunction::kMinIndex);
  double hi = lo;
  while (excess(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(hi);
}

}  // namespace

ScaleFunction ScaleFunction::beck_scale(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("beck_scale requires c > 0");
  ScaleFunction g(ScaleFamily::kBeckScale, c);
  g.clamp_ = beck_peak(c);
  return g;
}

ScaleFunction ScaleFunction::power_log(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("power_log requires c > 0");
  ScaleFunction g(ScaleFamily::kPowerLog, c);
  g.clamp_ = std::max(static_cast<double>(kMinIndex), std::exp(c));
  return g;
}

ScaleFunction ScaleFunction::constant(double g0) {
  if (!(g0 >= 0.0) || !std::isfinite(g0)) throw ValidationError("constant scale requires g0 >= 0");
  return ScaleFunction(ScaleFamily::kConstant, g0);
}

ScaleFunction ScaleFunction::table(std::vector<double> values) {
  if (values.empty()) throw ValidationError("table scale requires at least one value");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("table scale values must be >= 0");
  ScaleFunction g(ScaleFamily::kTable, 0.0);
  g.table_ = std::move(values);
  return g;
}

ScaleFunction ScaleFunction::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ValidationError("scale factor must be positive");
  ScaleFunction g = *this;
  g.factor_ *= factor;
  return g;
}

std::string ScaleFunction::name() const {
  switch (family_) {
    case ScaleFamily::kBeckScale: return "beck_scale";
    case ScaleFamily::kPowerLog: return "power_log";
    case ScaleFamily::kConstant: return "constant";
    case ScaleFamily::kTable: return "table";
  }
  return "unknown";
}

double ScaleFunction::raw(double t) const {
  switch (family_) {
    case ScaleFamily::kBeckScale: return beck_formula(param_, std::max(t, clamp_));
    case ScaleFamily::kPowerLog: return power_log_formula(param_, std::max(t, clamp_));
    case ScaleFamily::kConstant: return param_;
    case ScaleFamily::kTable: {
      auto idx = static_cast<std::size_t>(std::floor(t));
      if (idx < 1 || idx > table_.size())
        throw ValidationError("table scale index " + std::to_string(idx) + " out of range");
      return table_[idx - 1];
    }
  }
  return 0.0;
}

double ScaleFunction::at(double t) const {
  if (!(t >= 1.0)) throw ValidationError("scale function evaluated below n = 1");
  return std::min(raw(t), kCap) * factor_;
}

double ScaleFunction::operator()(std::size_t n) const { return at(static_cast<double>(n)); }

double eval_scale(const ScaleFunction& g, std::size_t n) { return g(n); }

double radical_inverse(std::uint64_t n, unsigned base) {
  double inv = 1.0 / base;
  double scale = inv;
  double out = 0.0;
  while (n > 0) {
    out += static_cast<double>(n % base) * scale;
    n /= base;
    scale *= inv;
  }
  return out;
}

RealSequence gen_base(const BaseKind& kind, std::size_t n) {
  if (n < 1) throw ValidationError("N must be at least 1");
  std::vector<double> out(n);
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Arithmetic>) {
          if (k.alpha == 0.0 || !std::isfinite(k.alpha)) throw ValidationError("arithmetic alpha must be non-zero");
          for (std::size_t i = 0; i < n; ++i) out[i] = k.alpha * static_cast<double>(i + 1);
        } else if constexpr (std::is_same_v<K, Power>) {
          if (!(k.theta > 0.0) || !std::isfinite(k.theta)) throw ValidationError("power theta must be positive");
          for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(static_cast<double>(i + 1), k.theta);
        } else {
          if (k.base < 2) throw ValidationError("van der Corput base must be at least 2");
          for (std::size_t i = 0; i < n; ++i) out[i] = radical_inverse(i + 1, k.base);
        }
      },
      kind);
  return RealSequence(std::move(out));
}

double perturbation_at(const PerturbationSpec& spec, std::size_t n) {
  double g = spec.scale(n);
  double u = rng::counter_uniform(spec.seed, rng::Stream::kPerturbation, n);
  return u * 2.0 * g - g;
}

RealSequence perturb(const RealSequence& base, const PerturbationSpec& spec) {
  std::vector<double> out(base.values().begin(), base.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += perturbation_at(spec, i + 1);
  return RealSequence(std::move(out));
}

RealSequence gen_theorem1(const ScaleFunction& g, std::size_t n, std::uint64_t seed) {
  return perturb(gen_base(Arithmetic{2.0}, n), PerturbationSpec{seed, g});
}

RealSequence gen_theorem1(double c, std::size_t n, std::uint64_t seed) {
  return gen_theorem1(ScaleFunction::beck_scale(c), n, seed);
}

RealSequence gen_converse(const ScaleFunction& g, std::size_t n, std::uint64_t seed) {
  return perturb(gen_base(Arithmetic{1.0}, n), PerturbationSpec{seed, g});
}

RealSequence gen_converse(double c, std::size_t n, std::uint64_t seed) {
  if (!(c > 0.0 && c <= 0.5)) throw ValidationError("converse construction requires 0 < c <= 1/2");
  return gen_converse(ScaleFunction::power_log(c), n, seed);
}

namespace {

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// x * 2^e as an exact integer; x * 2^e must be integral and below 2^125.
i128 scaled_integer(double x, int e) { return static_cast<i128>(std::ldexp(x, e)); }

// Partial quotients of the simplest rational in the open interval (a/b, c/d), b, d > 0.
std::vector<i128> simplest_between(i128 a, i128 b, i128 c, i128 d) {
  std::vector<i128> quotients;
  while (true) {
    i128 f = floor_div(a, b);
    if ((f + 1) * d < c) {  // f + 1 < c/d, and f + 1 > a/b always
      quotients.push_back(f + 1);
      return quotients;
    }
    quotients.push_back(f);
    i128 lo_num = a - f * b;  // (a/b - f) = lo_num / b, in [0, 1)
    i128 hi_num = c - f * d;  // (c/d - f) = hi_num / d, in (0, 1]
    if (lo_num == 0) {
      // Remaining interval (f, c/d): the tail is one integer above d / hi_num.
      quotients.push_back(floor_div(d, hi_num) + 1);
      return quotients;
    }
    // Reciprocal interval (d / hi_num, b / lo_num).
    i128 na = d, nb = hi_num, nc = b, nd = lo_num;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
}

}  // namespace

// A binary64 value stands for every real in its rounding interval. The
// expansion used is that of the simplest rational in the interval, so 0.3
// yields 3/10 rather than the dyadic 5404319552844595/18014398509481984.
// Values whose interval cannot be represented exactly in 128-bit integers
// fall back to the dyadic value itself.
std::vector<Convergent> convergents(double alpha, std::int64_t q_max) {
  if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");
  if (q_max < 1) throw ValidationError("q_max must be at least 1");
  constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
  if (std::fabs(alpha) >= 0x1.0p62) throw ValidationError("alpha too large for 64-bit convergents");

  // alpha = num / 2^den_exp exactly, den_exp >= 0.
  int exp = 0;
  std::frexp(alpha, &exp);
  const int den_exp = std::max(0, 53 - exp);

  std::vector<i128> quotients;
  i128 num = 0, den = 1;
  if (den_exp + 2 <= 120) {
    num = scaled_integer(alpha, den_exp);
    den = static_cast<i128>(1) << den_exp;
    if (den == 1) {
      quotients.push_back(num);
    } else {
      // Interval midpoints over 2^(den_exp + 2); neighbours may have half the ulp.
      const int e = den_exp + 2;
      i128 a2 = scaled_integer(alpha, e);
      i128 lo = a2 + scaled_integer(std::nextafter(alpha, -INFINITY), e);
      i128 hi = a2 + scaled_integer(std::nextafter(alpha, INFINITY), e);
      i128 d = static_cast<i128>(1) << (e + 1);
      quotients = simplest_between(lo, d, hi, d);
    }
  } else {
    // Tiny alpha: truncated dyadic Euclid.
    num = scaled_integer(alpha, 120);
    den = static_cast<i128>(1) << 120;
    for (i128 x = num, y = den; y != 0;) {
      i128 a = floor_div(x, y);
      quotients.push_back(a);
      i128 r = x - a * y;
      x = y;
      y = r;
    }
  }

  std::vector<Convergent> out;
  i128 p_prev = 1, q_prev = 0, p = quotients[0], q = 1;
  auto push = [&] {
    // |alpha - p/q| = |num q - p den| / (q den), numerator exact.
    i128 diff = num * q - p * den;
    if (diff < 0) diff = -diff;
    long double err = static_cast<long double>(diff) /
                      (static_cast<long double>(q) * static_cast<long double>(den));
    out.push_back(Convergent{static_cast<std::int64_t>(p), static_cast<std::int64_t>(q), static_cast<double>(err)});
  };
  push();
  for (std::size_t k = 1; k < quotients.size(); ++k) {
    i128 p_next = quotients[k] * p + p_prev;
    i128 q_next = quotients[k] * q + q_prev;
    if (q_next > q_max || p_next > kMax || p_next < -kMax) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    push();
  }
  return out;
}

std::size_t converse_length(std::int64_t q) {
  if (q < 16) throw ValidationError("converse schedule needs q >= 16");
  double lq = std::log(static_cast<double>(q));
  return static_cast<std::size_t>(std::floor(static_cast<double>(q) * std::sqrt(lq) * std::cbrt(std::log(lq))));
}

ConverseSchedule converse_schedule(double alpha, std::size_t count, std::int64_t q_max) {
  if (count < 1) throw ValidationError("schedule count must be at least 1");
  std::vector<std::int64_t> qs;
  for (const auto& cv : convergents(alpha, q_max))
    if (cv.q >= 16 && (qs.empty() || qs.back() != cv.q)) qs.push_back(cv.q);

  ConverseSchedule out;
  out.insufficient = qs.size() < count;
  std::size_t first = qs.size() > count ? qs.size() - count : 0;
  for (std::size_t i = first; i < qs.size(); ++i) {
    out.denominators.push_back(qs[i]);
    out.n_values.push_back(converse_length(qs[i]));
  }
  return out;
}

}  // namespace modone
