#include "dcsplit/field.hpp"

#include <cmath>

namespace dcsplit {

PLField::PLField(std::shared_ptr<const Triangulation> m, Eigen::VectorXd v)
    : mesh(std::move(m)), values(std::move(v)) {
  if (!mesh) throw Error("field requires a mesh");
  if (values.size() != static_cast<Eigen::Index>(mesh->vertices.size()))
    throw Error("value count does not match vertex count");
  if (!values.allFinite()) throw Error("field values must be finite");
}

Vec2 triangle_gradient(const PLField& field, int t) {
  const auto& tr = field.mesh->triangles[t];
  const Vec2 &a = field.mesh->vertices[tr[0]], &b = field.mesh->vertices[tr[1]],
             &c = field.mesh->vertices[tr[2]];
  Eigen::Matrix2d M;
  M << b.x() - a.x(), b.y() - a.y(), c.x() - a.x(), c.y() - a.y();
  Eigen::Vector2d rhs(field.values[tr[1]] - field.values[tr[0]],
                      field.values[tr[2]] - field.values[tr[0]]);
  return M.partialPivLu().solve(rhs);
}

std::vector<GradientSample> gradient_samples(const PLField& field) {
  std::vector<GradientSample> out;
  out.reserve(field.mesh->triangles.size());
  for (int t = 0; t < static_cast<int>(field.mesh->triangles.size()); ++t)
    out.push_back({t, triangle_gradient(field, t)});
  return out;
}

double evaluate_in_triangle(const PLField& field, int t, const Vec2& p) {
  const auto& tr = field.mesh->triangles[t];
  const Vec2& a = field.mesh->vertices[tr[0]];
  for (int k = 0; k < 3; ++k) {
    if (field.mesh->vertices[tr[k]] == p) return field.values[tr[k]];
  }
  Vec2 g = triangle_gradient(field, t);
  return field.values[tr[0]] + g.dot(p - a);
}

double evaluate(const PLField& field, const Vec2& p) {
  int t = field.mesh->locate_with_tolerance(p);
  if (t < 0) throw Error("point outside domain");
  return evaluate_in_triangle(field, t, p);
}

double lipschitz_constant(const PLField& field) {
  double L = 0;
  for (int t = 0; t < static_cast<int>(field.mesh->triangles.size()); ++t)
    L = std::max(L, triangle_gradient(field, t).norm());
  return L;
}

namespace {
void require_same_mesh(const PLField& a, const PLField& b) {
  if (a.mesh != b.mesh) throw Error("incompatible meshes");
}
}  // namespace

PLField add(const PLField& a, const PLField& b) {
  require_same_mesh(a, b);
  return PLField(a.mesh, a.values + b.values);
}

PLField scale(const PLField& a, double lambda) { return PLField(a.mesh, lambda * a.values); }

PLField negate(const PLField& a) { return PLField(a.mesh, -a.values); }

}  // namespace dcsplit
