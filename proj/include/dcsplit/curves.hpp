#pragma once

#include "dcsplit/field.hpp"

#include <cstdint>

namespace dcsplit {

// Closed convex polygonal curve in natural (arc-length) parametrization.
struct ClosedConvexCurve {
  std::vector<Vec2> vertices;             // ccw
  std::vector<double> cumulative_length;  // size n+1, starts at 0, ends at T_r
  double total_length = 0;                // T_r

  static ClosedConvexCurve from_vertices(std::vector<Vec2> verts);

  int segment_count() const { return static_cast<int>(vertices.size()); }
  Vec2 segment_direction(int i) const;
  Vec2 point_at(double t) const;
};

ClosedConvexCurve make_square(double half_side, const Vec2& center = Vec2(0, 0));
ClosedConvexCurve make_regular_polygon(int k, double radius, const Vec2& center = Vec2(0, 0),
                                       double phase = 0.0);
ClosedConvexCurve make_rectangle(double width, double height, double angle_rad,
                                 const Vec2& center = Vec2(0, 0));

// Restriction Phi(t) = field(r(t)). Breakpoints are the curve vertices plus
// all curve/mesh-edge crossings; slopes are exact directional derivatives.
CurveRestriction restrict_to_curve(const PLField& field, const ClosedConvexCurve& curve);

// Cyclic total variation of the piecewise-constant slope sequence.
double variation_of_slope(const CurveRestriction& restriction);

// Lifted tangents (r'. Phi') per interval; planar parts are unit vectors.
struct LiftedCurve {
  std::vector<double> breakpoints;
  std::vector<Vec3> tangents;
};

LiftedCurve lift_curve(const PLField& field, const ClosedConvexCurve& curve);

// Cyclic sum of angles between successive lifted tangents.
double turn_of_lifted_curve(const PLField& field, const ClosedConvexCurve& curve);
double turn_from_restriction(const CurveRestriction& restriction);

// Planar total turning of the curve itself (2*pi for convex loops).
double planar_turn(const CurveRestriction& restriction);

// theta(x) = x / sqrt(1 + x^2)
inline double theta_transform(double x) { return x / std::sqrt(1.0 + x * x); }

struct ThetaBoundsReport {
  double turn = 0;
  double lower = 0;   // cyclic variation of theta(slope)
  double upper = 0;   // planar turn + lower
  double scale = 1;   // sqrt(1 + L^2) applied to the upper comparison
  bool ok = false;
};

ThetaBoundsReport theta_bounds_check(const PLField& field, const ClosedConvexCurve& curve);

// Convex positively homogeneous PL function psi(q) = max_v <v, q>.
struct HomogeneousConvexPL {
  std::vector<Vec2> generators;

  double value(const Vec2& q) const;
  double lipschitz() const;  // max generator norm
};

// Slope sequence of psi(r(t)) along the curve (breakpoints where the active
// generator changes, plus curve corners).
CurveRestriction restrict_homogeneous(const HomogeneousConvexPL& psi,
                                      const ClosedConvexCurve& curve);

struct HomogeneousBoundReport {
  double variation = 0;
  double bound = 0;  // 2 P(subdifferential at 0) + L * T_r
  bool ok = false;
};

// Throws "origin not enclosed" unless the origin is strictly inside the curve.
HomogeneousBoundReport homogeneous_bound_check(const HomogeneousConvexPL& psi, const ClosedConvexCurve& curve);

// Deterministic nested families of convex curves strictly inside the domain:
// squares and regular k-gons at several centers and scales plus thin
// rectangles with aspect ratios down to 10^-level.
std::vector<ClosedConvexCurve> curve_family(const std::vector<Vec2>& domain, int level,
                                            uint64_t seed);

// Per-level sup of variation_of_slope over curve_family(level).
std::vector<double> dc_condition_estimate(const PLField& field, int levels, uint64_t seed);

// Per-level sup of turn_of_lifted_curve over the same families.
std::vector<double> turn_estimate(const PLField& field, int levels, uint64_t seed);

}  // namespace dcsplit
