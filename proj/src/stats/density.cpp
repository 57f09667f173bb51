#include <algorithm>
#include <cmath>

#include "modone/stats.hpp"

namespace modone {

namespace {

struct Box {
  double center;  // in [0, 1)
  double radius;  // g(n) > 0
};

std::vector<Box> make_boxes(const RealSequence& base, const ScaleFunction& g) {
  std::vector<Box> boxes;
  boxes.reserve(base.size());
  auto x = base.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = g(i + 1);
    if (!(r > 0.0)) throw ValidationError("density requires g(n) > 0 for every n");
    boxes.push_back({frac(x[i]), r});
  }
  return boxes;
}

// Number of integers k with center + k in [x - r, x + r].
double periodic_cover(double x, const Box& b) {
  double lo = std::ceil(x - b.radius - b.center);
  double hi = std::floor(x + b.radius - b.center);
  return hi >= lo ? hi - lo + 1.0 : 0.0;
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Length of [c - r, c + r] intersected with the periodic window x + k +- w.
double periodic_overlap(double x, double w, const Box& b) {
  double lo = b.center - b.radius;
  double hi = b.center + b.radius;
  double k0 = std::floor(lo - x - w);
  double k1 = std::ceil(hi - x + w);
  double total = 0.0;
  for (double k = k0; k <= k1; k += 1.0) total += overlap(lo, hi, x + k - w, x + k + w);
  return total;
}

double rho_at(std::span<const Box> boxes, double x) {
  double sum = 0.0;
  for (const auto& b : boxes) sum += periodic_cover(x, b) / (2.0 * b.radius);
  return sum / static_cast<double>(boxes.size());
}

double h_at(std::span<const Box> boxes, double w, double x) {
  double sum = 0.0;
  for (const auto& b : boxes) sum += periodic_overlap(x, w, b) / (2.0 * b.radius);
  return sum;
}

struct Event {
  double pos;  // in [0, 1)
  double d_rho;
  double d_slope;
};

// rho jumps at the box edges. For h = N * int_{x-w}^{x+w} rho, each jump of
// size D at b changes h' by +N D at b - w and by -N D at b + w.
std::vector<Event> make_events(std::span<const Box> boxes, double w, bool with_h) {
  const double n = static_cast<double>(boxes.size());
  std::vector<Event> ev;
  ev.reserve(boxes.size() * (with_h ? 6 : 2));
  for (const auto& b : boxes) {
    double height = 1.0 / (2.0 * b.radius * n);
    double left = b.center - b.radius;
    double right = b.center + b.radius;
    ev.push_back({frac(left), height, 0.0});
    ev.push_back({frac(right), -height, 0.0});
    if (with_h) {
      ev.push_back({frac(left - w), 0.0, n * height});
      ev.push_back({frac(left + w), 0.0, -n * height});
      ev.push_back({frac(right - w), 0.0, -n * height});
      ev.push_back({frac(right + w), 0.0, n * height});
    }
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.pos < b.pos; });
  return ev;
}

// Midpoint of the widest cyclic gap between event positions; no kink sits
// there, so the starting state can be evaluated directly.
std::size_t widest_gap(std::span<const Event> ev, double& start) {
  std::size_t best = ev.size() - 1;
  double best_len = (ev.front().pos + 1.0) - ev.back().pos;
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    double len = ev[i + 1].pos - ev[i].pos;
    if (len > best_len) {
      best_len = len;
      best = i;
    }
  }
  start = ev[best].pos + 0.5 * best_len;
  return (best + 1) % ev.size();
}

struct SweepTotals {
  double rho = 0.0;
  double rho_sq = 0.0;
  double h_rho = 0.0;
};

// One period of the piecewise-constant rho and piecewise-linear h. Each
// segment integral is exact: rho^2 * dx and rho * (h_a + h_b) / 2 * dx.
SweepTotals sweep(std::span<const Box> boxes, double w, bool with_h) {
  auto ev = make_events(boxes, w, with_h);
  double x = 0.0;
  std::size_t first = widest_gap(ev, x);
  const double x_end = x + 1.0;
  double rho = rho_at(boxes, frac(x));
  double h = 0.0;
  double slope = 0.0;
  if (with_h) {
    const double n = static_cast<double>(boxes.size());
    h = h_at(boxes, w, frac(x));
    slope = n * (rho_at(boxes, frac(x + w)) - rho_at(boxes, frac(x - w)));
  }

  SweepTotals t;
  auto advance = [&](double to) {
    double dx = to - x;
    double h_next = h + slope * dx;
    t.rho += rho * dx;
    t.rho_sq += rho * rho * dx;
    t.h_rho += rho * 0.5 * (h + h_next) * dx;
    h = h_next;
    x = to;
  };
  for (std::size_t step = 0; step < ev.size(); ++step) {
    const Event& e = ev[(first + step) % ev.size()];
    double pos = e.pos;
    while (pos < x) pos += 1.0;
    advance(pos);
    rho += e.d_rho;
    slope += e.d_slope;
  }
  advance(x_end);
  return t;
}

double checked_window(std::size_t n, double s) {
  if (!(s > 0.0)) throw ValidationError("window requires s > 0");
  double w = s / static_cast<double>(n);
  if (!(w < 0.5)) throw ValidationError("window s/N must be below 1/2");
  return w;
}

// P(D in (a, b)) for D = z - z', z, z' ~ U[-r, r] (triangular on [-2r, 2r]).
double triangular_mass(double a, double b, double r) {
  auto cdf = [r](double t) {
    double q = 8.0 * r * r;
    if (t <= -2.0 * r) return 0.0;
    if (t <= 0.0) return (t + 2.0 * r) * (t + 2.0 * r) / q;
    if (t < 2.0 * r) return 1.0 - (2.0 * r - t) * (2.0 * r - t) / q;
    return 1.0;
  };
  return cdf(b) - cdf(a);
}

}  // namespace

double rho_eval(const RealSequence& base, const ScaleFunction& g, double x) {
  auto boxes = make_boxes(base, g);
  return rho_at(boxes, frac(x));
}

double rho_integral(const RealSequence& base, const ScaleFunction& g) {
  auto boxes = make_boxes(base, g);
  return sweep(boxes, 0.0, false).rho;
}

double rho_l2(const RealSequence& base, const ScaleFunction& g) {
  auto boxes = make_boxes(base, g);
  return sweep(boxes, 0.0, false).rho_sq;
}

double h_eval(const RealSequence& base, const ScaleFunction& g, double s, double x) {
  double w = checked_window(base.size(), s);
  auto boxes = make_boxes(base, g);
  return h_at(boxes, w, frac(x));
}

ExpectedPairCorrelation expected_pair_correlation(const RealSequence& base, const ScaleFunction& g,
                                                  double s) {
  const std::size_t n = base.size();
  double w = checked_window(n, s);
  auto boxes = make_boxes(base, g);

  ExpectedPairCorrelation out;
  out.value = sweep(boxes, w, true).h_rho;
  out.error_bound = s / (static_cast<double>(n) * g(n));

  double self = 0.0;
  for (const auto& b : boxes) {
    double reach = 2.0 * b.radius + w;
    for (double k = -std::ceil(reach); k <= std::ceil(reach); k += 1.0) self += triangular_mass(k - w, k + w, b.radius);
  }
  out.self_term = self / static_cast<double>(n);
  return out;
}

}  // namespace modone
