#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "modone/stats.hpp"

namespace modone {

namespace {

// Candidate ranges are widened by this much, then filtered with the exact
// membership predicate, so counts agree bit-for-bit with brute force.
constexpr double kSlack = 1e-12;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto* first = text.data();
  auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    throw ValidationError("malformed number '" + std::string(text) + "'");
  return v;
}

// {d} in [lo/N, hi/N) mod 1.
bool in_window(double d, double lo_scaled, double width) { return frac(d - lo_scaled) < width; }

}  // namespace

CorrelationWindow::CorrelationWindow(std::vector<WindowInterval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw ValidationError("correlation window needs k >= 2 (at least one interval)");
  for (const auto& iv : intervals_)
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw ValidationError("window interval requires lo < hi");
}

CorrelationWindow CorrelationWindow::pair(double s) {
  if (!(s > 0.0)) throw ValidationError("pair window requires s > 0");
  return CorrelationWindow({{-s, s}});
}

double CorrelationWindow::poisson_limit() const {
  double p = 1.0;
  for (const auto& iv : intervals_) p *= iv.hi - iv.lo;
  return p;
}

bool CorrelationWindow::is_symmetric_pair() const {
  return intervals_.size() == 1 && intervals_[0].lo == -intervals_[0].hi;
}

std::string CorrelationWindow::descriptor() const {
  std::string out;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) out += ',';
    out += format_double(intervals_[i].lo);
    out += ':';
    out += format_double(intervals_[i].hi);
  }
  return out;
}

CorrelationWindow CorrelationWindow::parse(const std::string& descriptor) {
  std::vector<WindowInterval> out;
  std::stringstream ss(descriptor);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError("window interval '" + item + "' is not lo:hi");
    std::string_view sv(item);
    out.push_back({parse_double(sv.substr(0, colon)), parse_double(sv.substr(colon + 1))});
  }
  return CorrelationWindow(std::move(out));
}

std::uint64_t pair_count(const TorusPoints& pts, double s) {
  const std::size_t n = pts.size();
  if (!(s > 0.0)) throw ValidationError("pair correlation requires s > 0");
  const double w = s / static_cast<double>(n);
  if (!(w < 0.5)) throw ValidationError("pair window s/N must be below 1/2");
  const double stop = std::min(w + kSlack, 0.5);
  auto y = pts.points();

  // Each unordered pair is visited once, from the endpoint whose forward
  // (increasing, wrapping) gap to the other is below 1/2.
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t step = 1; step < n; ++step) {
      std::size_t j = i + step;
      double gap;
      if (j < n) {
        gap = y[j] - y[i];
      } else {
        j -= n;
        gap = (y[j] + 1.0) - y[i];
      }
      if (!(gap < stop)) break;
      if (circ_dist(y[i], y[j]) < w) ++count;
    }
  }
  return 2 * count;
}

double pair_correlation(const TorusPoints& pts, double s) {
  return static_cast<double>(pair_count(pts, s)) / static_cast<double>(pts.size());
}

std::uint64_t k_level_count(const TorusPoints& pts, const CorrelationWindow& w) {
  const std::size_t n = pts.size();
  const std::size_t k = w.k();
  if (n < k) throw ValidationError("k-level correlation requires N >= k");
  const double nd = static_cast<double>(n);
  auto y = pts.points();

  struct Scaled {
    double lo;
    double hi;
    double width;
  };
  std::vector<Scaled> windows;
  for (const auto& iv : w.intervals()) {
    Scaled sc{iv.lo / nd, iv.hi / nd, (iv.hi - iv.lo) / nd};
    if (!(sc.width < 0.5)) throw ValidationError("k-level window width / N must be below 1/2");
    windows.push_back(sc);
  }

  std::vector<std::vector<std::uint32_t>> cand(k - 1);
  std::vector<std::uint32_t> chosen;
  chosen.reserve(k);

  // Distinct-entry assignments, one candidate per coordinate.
  auto count_assignments = [&](auto&& self, std::size_t level) -> std::uint64_t {
    if (level == cand.size()) return 1;
    std::uint64_t total = 0;
    for (std::uint32_t c : cand[level]) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      chosen.push_back(c);
      total += self(self, level + 1);
      chosen.pop_back();
    }
    return total;
  };

  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool empty = false;
    for (std::size_t j = 0; j < windows.size() && !empty; ++j) {
      auto& out = cand[j];
      out.clear();
      // {y_i - y_p} in [lo, hi)  <=>  y_p in (y_i - hi, y_i - lo] mod 1.
      const double start = frac(y[i] - windows[j].hi - kSlack);
      const double span_len = windows[j].width + 2.0 * kSlack;
      std::size_t first = static_cast<std::size_t>(std::lower_bound(y.begin(), y.end(), start) - y.begin());
      for (std::size_t step = 0; step < n; ++step) {
        std::size_t p = first + step;
        double off;
        if (p < n) {
          off = y[p] - start;
        } else {
          p -= n;
          off = (y[p] + 1.0) - start;
        }
        if (off > span_len) break;
        if (p != i && in_window(y[i] - y[p], windows[j].lo, windows[j].width))
          out.push_back(static_cast<std::uint32_t>(p));
      }
      empty = out.empty();
    }
    if (empty) continue;
    chosen.assign(1, static_cast<std::uint32_t>(i));
    total += count_assignments(count_assignments, 0);
  }
  return total;
}

double k_level_correlation(const TorusPoints& pts, const CorrelationWindow& w) {
  return static_cast<double>(k_level_count(pts, w)) / static_cast<double>(pts.size());
}

}  // namespace modone
