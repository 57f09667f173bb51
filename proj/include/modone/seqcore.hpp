#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modone {

// Raised for bad parameters or malformed inputs. The CLI maps it to exit
// code 1; anything else escaping a command is treated as an internal error.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raw real values x_1..x_N, before reduction modulo 1.
class RealSequence {
 public:
  explicit RealSequence(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  // 1-based access, x_n for n in [1, N].
  double at(std::size_t n) const { return values_.at(n - 1); }

  // First n values as a new sequence (1 <= n <= size()).
  RealSequence prefix(std::size_t n) const;

  // x_{n+1} - x_n >= 1 for every n, checked exactly.
  bool well_spaced() const;

 private:
  std::vector<double> values_;
};

// Fractional parts sorted ascending on the circle [0, 1).
class TorusPoints {
 public:
  // Validates 0 <= p < 1 for every entry and sorts.
  static TorusPoints from_unit(std::vector<double> points);

  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }

 private:
  explicit TorusPoints(std::vector<double> sorted) : points_(std::move(sorted)) {}
  friend TorusPoints frac_reduce(const RealSequence& seq);

  std::vector<double> points_;
};

// {x} = x - floor(x), always in [0, 1) including for negative x.
double frac(double x);

TorusPoints frac_reduce(const RealSequence& seq);

// ||u - v||, the distance from u - v to the nearest integer.
double circ_dist(double u, double v);

RealSequence scale_by_alpha(const RealSequence& seq, double alpha);

}  // namespace modone
