#pragma once

#include "dcsplit/geometry.hpp"

#include <memory>

namespace dcsplit {

// Scale-aware value tolerance: 1e-8 * (1 + max |value|).
inline double tol_num(double max_abs_value) { return 1e-8 * (1.0 + max_abs_value); }

// Piecewise-linear scalar field on a shared triangulation.
struct PLField {
  std::shared_ptr<const Triangulation> mesh;
  Eigen::VectorXd values;

  PLField() = default;
  PLField(std::shared_ptr<const Triangulation> m, Eigen::VectorXd v);

  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

struct GradientSample {
  int triangle_index;
  Vec2 gradient;
};

// Gradient of the affine interpolant on one triangle.
Vec2 triangle_gradient(const PLField& field, int triangle);

std::vector<GradientSample> gradient_samples(const PLField& field);

// Barycentric-linear value at p. Throws "point outside domain" when p is not
// inside the mesh domain within tol_geom. Ties on shared edges resolve to the
// lowest triangle index; both triangles agree there.
double evaluate(const PLField& field, const Vec2& p);

// Value of the interpolant of a given triangle at p (no containment check).
double evaluate_in_triangle(const PLField& field, int triangle, const Vec2& p);

// Max over triangles of the gradient norm.
double lipschitz_constant(const PLField& field);

PLField add(const PLField& a, const PLField& b);
PLField scale(const PLField& a, double lambda);
PLField negate(const PLField& a);

// Restriction of a field to a closed polygonal curve in arc length.
struct CurveRestriction {
  std::vector<double> breakpoints;  // 0 = t[0] < ... < t[m] = T_r
  std::vector<double> values;       // field at breakpoints
  std::vector<double> slopes;       // directional derivative per interval
  std::vector<Vec2> directions;     // unit tangent per interval
};

}  // namespace dcsplit
