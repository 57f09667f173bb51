#include "modone/seqcore.hpp"

#include <algorithm>
#include <cmath>

namespace modone {

RealSequence::RealSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("sequence must contain at least one value");
}

RealSequence RealSequence::prefix(std::size_t n) const {
  if (n < 1 || n > values_.size())
    throw ValidationError("prefix length " + std::to_string(n) + " out of range");
  return RealSequence(std::vector<double>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)));
}

bool RealSequence::well_spaced() const {
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (!(values_[i] - values_[i - 1] >= 1.0)) return false;
  return true;
}

TorusPoints TorusPoints::from_unit(std::vector<double> points) {
  if (points.empty()) throw ValidationError("point set must not be empty");
  for (double p : points)
    if (!(p >= 0.0 && p < 1.0)) throw ValidationError("torus point outside [0, 1): " + std::to_string(p));
  std::sort(points.begin(), points.end());
  return TorusPoints(std::move(points));
}

double frac(double x) {
  double f = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return f >= 1.0 ? 0.0 : f;
}

TorusPoints frac_reduce(const RealSequence& seq) {
  std::vector<double> pts;
  pts.reserve(seq.size());
  for (double x : seq.values()) pts.push_back(frac(x));
  std::sort(pts.begin(), pts.end());
  return TorusPoints(std::move(pts));
}

double circ_dist(double u, double v) {
  double f = frac(u - v);
  return std::min(f, 1.0 - f);
}

RealSequence scale_by_alpha(const RealSequence& seq, double alpha) {
  if (alpha == 0.0 || !std::isfinite(alpha)) throw ValidationError("alpha must be finite and non-zero");
  std::vector<double> out;
  out.reserve(seq.size());
  for (double x : seq.values()) out.push_back(alpha * x);
  return RealSequence(std::move(out));
}

}  // namespace modone
