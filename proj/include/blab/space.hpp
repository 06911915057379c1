#pragma once

#include <span>
#include <string>
#include <vector>

namespace blab {

// The weighted half-space R^{n+1}_+ with dm = dx_1...dx_n x_{n+1}^{2 lambda} dx_{n+1}.
struct SpaceParams {
  int n = 0;
  double lambda = 0.5;

  SpaceParams() = default;
  SpaceParams(int n_, double lambda_);

  int dim() const { return n + 1; }
  double lower_dimension() const { return n + 1.0; }
  double upper_dimension() const { return n + 1.0 + 2.0 * lambda; }
  bool operator==(const SpaceParams&) const = default;
};

using Coords = std::span<const double>;

// Axis-aligned box [lo, hi) in R^{n+1}.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  Box() = default;
  Box(std::vector<double> lo_, std::vector<double> hi_);

  int dim() const { return static_cast<int>(lo.size()); }
  double side(int j) const { return hi[j] - lo[j]; }
  double max_side() const;
  std::vector<double> center() const;
  bool contains(Coords x) const;         // half-open
  bool contains_closed(Coords x) const;
  bool operator==(const Box&) const = default;
};

// int_a^b x^{2 lambda} dx, stable when a and b are close.
double weighted_interval_measure(double a, double b, double lambda);

double distance(Coords x, Coords y);
double distance_squared(Coords x, Coords y);

// Euclidean distance between two closed boxes.
double box_distance(const Box& a, const Box& b);

void require_point(const SpaceParams& params, Coords x);

std::string format_coords(Coords x);

}  // namespace blab
