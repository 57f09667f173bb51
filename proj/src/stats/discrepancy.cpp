#include <algorithm>
#include <cmath>

#include "modone/stats.hpp"

namespace modone {

Discrepancy discrepancy_sorted(std::span<const double> y) {
  if (y.empty()) throw ValidationError("discrepancy of an empty point set");
  const double n = static_cast<double>(y.size());
  // With y_1 <= ... <= y_N: excess_i = i/N - y_i, deficit_i = y_i - (i-1)/N.
  // The closed-interval sup pairs the best excess with the best deficit.
  double excess = 0.0;
  double deficit = 0.0;
  double star = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double e = static_cast<double>(i + 1) / n - y[i];
    double d = y[i] - static_cast<double>(i) / n;
    excess = std::max(excess, e);
    deficit = std::max(deficit, d);
    star = std::max(star, std::max(e, d));
  }
  return {excess + deficit, star};
}

Discrepancy discrepancy(const TorusPoints& pts) { return discrepancy_sorted(pts.points()); }

std::vector<std::size_t> profile_grid(std::size_t n, const ProfileGrid& grid) {
  if (n < 1) throw ValidationError("profile needs N >= 1");
  std::vector<std::size_t> out;
  if (grid.kind == ProfileGrid::Kind::kFull) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i + 1;
    return out;
  }
  if (!(grid.ratio > 1.0)) throw ValidationError("geometric grid ratio must exceed 1");
  for (int j = 0;; ++j) {
    double v = std::ceil(std::pow(grid.ratio, j));
    if (v >= static_cast<double>(n)) break;
    auto m = static_cast<std::size_t>(v);
    if (out.empty() || out.back() != m) out.push_back(m);
  }
  out.push_back(n);
  return out;
}

DiscrepancyProfile discrepancy_profile(const RealSequence& seq, const ProfileGrid& grid) {
  DiscrepancyProfile prof;
  prof.n_grid = profile_grid(seq.size(), grid);
  prof.approximate = grid.kind != ProfileGrid::Kind::kFull;

  auto xs = seq.values();
  std::vector<double> sorted;
  sorted.reserve(seq.size());
  std::size_t have = 0;
  for (std::size_t n : prof.n_grid) {
    auto mid = static_cast<std::ptrdiff_t>(sorted.size());
    for (; have < n; ++have) sorted.push_back(frac(xs[have]));
    std::sort(sorted.begin() + mid, sorted.end());
    std::inplace_merge(sorted.begin(), sorted.begin() + mid, sorted.end());
    Discrepancy d = discrepancy_sorted(sorted);
    prof.d_values.push_back(d.extreme);
    prof.star_values.push_back(d.star);
    prof.m_value = std::max(prof.m_value, static_cast<double>(n) * d.extreme);
  }
  return prof;
}

EnergyResult additive_energy(const RealSequence& seq, double gamma, std::size_t max_n) {
  if (!(gamma > 0.0)) throw ValidationError("additive energy requires gamma > 0");
  const std::size_t n = seq.size();
  if (n > max_n)
    throw ValidationError("additive energy: N = " + std::to_string(n) + " exceeds the in-memory cap of " +
                          std::to_string(max_n) + " (raise the cap to trade memory for size)");
  auto x = seq.values();
  std::vector<double> sums;
  sums.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) sums.push_back(x[a] + x[b]);
  std::sort(sums.begin(), sums.end());

  // Ordered pairs (u, v) of sums with |S_u - S_v| < gamma: the diagonal plus
  // twice the strictly-later partners found by a two-pointer sweep.
  const std::size_t m = sums.size();
  std::uint64_t off_diag = 0;
  std::size_t j = 0;
  for (std::size_t u = 0; u < m; ++u) {
    if (j < u + 1) j = u + 1;
    while (j < m && sums[j] - sums[u] < gamma) ++j;
    off_diag += j - u - 1;
  }
  EnergyResult r;
  r.count = static_cast<std::uint64_t>(m) + 2 * off_diag;
  r.gamma = gamma;
  r.n = n;
  const double nd = static_cast<double>(n);
  r.normalized = static_cast<double>(r.count) / (nd * nd * nd);
  return r;
}

double ks_exponential(std::span<const double> sample) {
  if (sample.empty()) throw ValidationError("KS statistic of an empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double f = -std::expm1(-s[i]);
    ks = std::max(ks, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return ks;
}

GapDistribution::GapDistribution(const TorusPoints& pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw ValidationError("gap distribution requires N >= 2");
  auto y = pts.points();
  const double nd = static_cast<double>(n);
  scaled_.reserve(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double g = y[i + 1] - y[i];
    raw_sum_ += g;
    scaled_.push_back(nd * g);
  }
  double wrap = (y[0] + 1.0) - y[n - 1];
  raw_sum_ += wrap;
  scaled_.push_back(nd * wrap);
  sorted_ = scaled_;
  std::sort(sorted_.begin(), sorted_.end());
  ks_ = ks_exponential(sorted_);
}

double GapDistribution::ecdf(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

GapDistribution gap_distribution(const TorusPoints& pts) { return GapDistribution(pts); }

}  // namespace modone
