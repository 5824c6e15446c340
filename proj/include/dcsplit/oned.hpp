#pragma once

#include "dcsplit/field.hpp"

namespace dcsplit {

// Piecewise-linear function of one variable.
struct PLFunction1D {
  std::vector<double> knots;   // strictly increasing
  std::vector<double> values;

  static PLFunction1D from_samples(std::vector<double> knots, std::vector<double> values);
  std::vector<double> slopes() const;
};

// Total variation of the piecewise-constant derivative (open interval, no
// boundary jumps).
double derivative_variation(const PLFunction1D& fn);

// Jordan decomposition of the slope sequence: g collects positive slope
// increments, h the negative ones; g - h = fn at every knot and
// g(a) = fn(a), h(a) = 0.
std::pair<PLFunction1D, PLFunction1D> dc_split_1d(const PLFunction1D& fn);

// 1D restriction of a bivariate field to the segment p0 -> p1 (breakpoints at
// mesh-edge crossings); returns its derivative variation.
double segment_oracle(const PLField& field, const Vec2& p0, const Vec2& p1);

PLFunction1D restrict_to_segment(const PLField& field, const Vec2& p0, const Vec2& p1);

}  // namespace dcsplit
