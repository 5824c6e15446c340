#include "dcsplit/oned.hpp"

#include <algorithm>
#include <cmath>

namespace dcsplit {

PLFunction1D PLFunction1D::from_samples(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size()) throw Error("knot and value counts differ");
  if (knots.size() < 2) throw Error("need at least two knots");
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i] < knots[i + 1])) throw Error("knots must be strictly increasing");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error("values must be finite");
  }
  return PLFunction1D{std::move(knots), std::move(values)};
}

std::vector<double> PLFunction1D::slopes() const {
  std::vector<double> s(knots.size() - 1);
  for (size_t i = 0; i + 1 < knots.size(); ++i)
    s[i] = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
  return s;
}

double derivative_variation(const PLFunction1D& fn) {
  std::vector<double> s = fn.slopes();
  double v = 0;
  for (size_t i = 0; i + 1 < s.size(); ++i) v += std::fabs(s[i + 1] - s[i]);
  return v;
}

std::pair<PLFunction1D, PLFunction1D> dc_split_1d(const PLFunction1D& fn) {
  std::vector<double> s = fn.slopes();
  size_t m = s.size();
  std::vector<double> gs(m), hs(m);
  gs[0] = s[0];
  hs[0] = 0.0;
  for (size_t i = 1; i < m; ++i) {
    double delta = s[i] - s[i - 1];
    gs[i] = gs[i - 1] + std::max(delta, 0.0);
    hs[i] = hs[i - 1] + std::max(-delta, 0.0);
  }
  PLFunction1D g, h;
  g.knots = fn.knots;
  h.knots = fn.knots;
  g.values.resize(fn.knots.size());
  h.values.resize(fn.knots.size());
  g.values[0] = fn.values[0];
  h.values[0] = 0.0;
  for (size_t i = 0; i < m; ++i) {
    double dt = fn.knots[i + 1] - fn.knots[i];
    g.values[i + 1] = g.values[i] + gs[i] * dt;
    h.values[i + 1] = h.values[i] + hs[i] * dt;
  }
  return {std::move(g), std::move(h)};
}

PLFunction1D restrict_to_segment(const PLField& field, const Vec2& p0, const Vec2& p1) {
  const Triangulation& mesh = *field.mesh;
  if (point_in_convex_polygon(mesh.domain, p0) < 0 || point_in_convex_polygon(mesh.domain, p1) < 0)
    throw Error("segment outside domain");
  double len = (p1 - p0).norm();
  if (len == 0) throw Error("degenerate segment");

  std::vector<double> ts{0.0, len};
  std::vector<int> candidates;
  mesh.candidate_edges_on_segment(p0, p1, candidates);
  for (int e : candidates) {
    const Vec2& u = mesh.vertices[mesh.edges[e][0]];
    const Vec2& v = mesh.vertices[mesh.edges[e][1]];
    double t;
    if (segment_intersection(p0, p1, u, v, t)) ts.push_back(t * len);
  }
  std::sort(ts.begin(), ts.end());
  double spacing = 1e-12 * len;
  std::vector<double> knots;
  for (double t : ts) {
    if (knots.empty() || t - knots.back() > spacing) knots.push_back(t);
  }
  if (knots.size() < 2) knots = {0.0, len};
  knots.front() = 0.0;
  knots.back() = len;

  Vec2 dir = (p1 - p0) / len;
  std::vector<double> vals;
  vals.reserve(knots.size());
  for (double t : knots) vals.push_back(evaluate(field, p0 + t * dir));
  return PLFunction1D::from_samples(std::move(knots), std::move(vals));
}

double segment_oracle(const PLField& field, const Vec2& p0, const Vec2& p1) {
  return derivative_variation(restrict_to_segment(field, p0, p1));
}

}  // namespace dcsplit
