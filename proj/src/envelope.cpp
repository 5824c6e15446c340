#include "dcsplit/envelope.hpp"

#include "dcsplit/decompose.hpp"

#include <algorithm>
#include <cmath>

namespace dcsplit {

double ConvexPLFunction::value(const Vec2& p) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const LowerHullFace& f : faces) best = std::max(best, f.plane_value(p));
  return best;
}

RegionSamples gather_region_samples(const PLField& field, const std::vector<Vec2>& region_in) {
  std::vector<Vec2> region = normalize_convex_polygon(region_in);
  const Triangulation& mesh = *field.mesh;
  RegionSamples out;

  double scale = mesh.max_abs_coord;
  for (const Vec2& p : region)
    scale = std::max({scale, std::fabs(p.x()), std::fabs(p.y())});
  double merge_tol = tol_geom(scale);

  // Mesh vertices are pairwise distinct: append directly. The few boundary
  // samples that follow are merged against everything collected so far.
  for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
    if (point_in_convex_polygon(region, mesh.vertices[v]) >= 0) {
      out.points.push_back(mesh.vertices[v]);
      out.values.push_back(field.values[v]);
      out.mesh_vertex.push_back(v);
      out.mesh_edge.push_back(-1);
    }
  }

  auto push_merged = [&](const Vec2& p, double v, int edge) {
    for (size_t i = 0; i < out.points.size(); ++i) {
      if ((out.points[i] - p).norm() <= merge_tol) return;
    }
    out.points.push_back(p);
    out.values.push_back(v);
    out.mesh_vertex.push_back(-1);
    out.mesh_edge.push_back(edge);
  };

  for (const Vec2& p : region) push_merged(p, evaluate(field, p), -1);

  int nr = static_cast<int>(region.size());
  std::vector<int> candidates;
  for (int i = 0; i < nr; ++i) {
    const Vec2& a = region[i];
    const Vec2& b = region[(i + 1) % nr];
    mesh.candidate_edges_on_segment(a, b, candidates);
    for (int e : candidates) {
      const Vec2& u = mesh.vertices[mesh.edges[e][0]];
      const Vec2& v = mesh.vertices[mesh.edges[e][1]];
      double t;
      if (segment_intersection(a, b, u, v, t)) {
        Vec2 p = a + t * (b - a);
        push_merged(p, evaluate(field, p), e);
      }
    }
  }
  return out;
}

namespace {

ConvexPLFunction minorant_from_samples(const PLField& field, const std::vector<Vec2>& region,
                                       const RegionSamples& samples) {
  if (samples.points.size() < 3) throw Error("degenerate region");
  std::vector<Vec3> lifted;
  lifted.reserve(samples.points.size());
  for (size_t i = 0; i < samples.points.size(); ++i)
    lifted.emplace_back(samples.points[i].x(), samples.points[i].y(), samples.values[i]);

  ConvexPLFunction out;
  try {
    out.faces = lower_hull_3d(lifted);
  } catch (const Error&) {
    throw Error("degenerate region");
  }
  out.domain = region;

  Eigen::VectorXd vals(field.mesh->vertices.size());
  for (int v = 0; v < static_cast<int>(field.mesh->vertices.size()); ++v)
    vals[v] = out.value(field.mesh->vertices[v]);
  out.as_field = PLField(field.mesh, std::move(vals));
  return out;
}

}  // namespace

ConvexPLFunction convex_minorant(const PLField& field, const std::vector<Vec2>& region_in) {
  std::vector<Vec2> region = normalize_convex_polygon(region_in);
  RegionSamples samples = gather_region_samples(field, region);
  return minorant_from_samples(field, region, samples);
}

ConvexityReport check_convexity(const PLField& field, const std::vector<Vec2>& region_in) {
  std::vector<Vec2> region = normalize_convex_polygon(region_in);
  RegionSamples samples = gather_region_samples(field, region);
  ConvexPLFunction minorant = minorant_from_samples(field, region, samples);

  ConvexityReport rep;
  for (size_t i = 0; i < samples.points.size(); ++i) {
    double deficit = samples.values[i] - minorant.value(samples.points[i]);
    if (deficit > rep.worst_violation) {
      rep.worst_violation = deficit;
      rep.witness_vertex = samples.mesh_vertex[i];
      rep.witness_edge = samples.mesh_edge[i];
    }
  }
  double tol = tol_num(field.max_abs());
  rep.is_convex = rep.worst_violation <= tol;
  return rep;
}

ConvexPLFunction convex_extension(const ConvexPLFunction& fn,
                                  const std::vector<Vec2>& target_in) {
  std::vector<Vec2> target = normalize_convex_polygon(target_in);
  for (const Vec2& p : fn.domain) {
    if (point_in_convex_polygon(target, p) < 0)
      throw Error("target domain must contain the function domain");
  }
  ConvexPLFunction out;
  out.faces = fn.faces;
  out.domain = target;
  out.as_field = fn.as_field;  // same master mesh; values unchanged (max over the same planes)
  return out;
}

std::pair<ConvexPLFunction, ConvexPLFunction> split_finite_convex(const FiniteFunction& fn) {
  ConvexityReport rep = check_convexity(fn.field, fn.support_hull);
  if (!rep.is_convex) throw Error("not convex on support");

  ConvexPLFunction minorant = convex_minorant(fn.field, fn.support_hull);
  ConvexPLFunction f_tilde = convex_extension(minorant, fn.field.mesh->domain);

  // f_bar = f_tilde - fn on the master nodes, clipped at zero so boundary
  // spill from supports touching the domain boundary cannot break convexity.
  Eigen::VectorXd bar = f_tilde.as_field.values - fn.field.values;
  bar = bar.cwiseMax(0.0);

  ConvexPLFunction f_bar;
  PLField bar_field(fn.field.mesh, bar);
  std::vector<Vec3> lifted;
  lifted.reserve(fn.field.mesh->vertices.size());
  for (int v = 0; v < static_cast<int>(fn.field.mesh->vertices.size()); ++v)
    lifted.emplace_back(fn.field.mesh->vertices[v].x(), fn.field.mesh->vertices[v].y(), bar[v]);
  f_bar.faces = lower_hull_3d(lifted);
  f_bar.domain = normalize_convex_polygon(fn.field.mesh->domain);
  f_bar.as_field = std::move(bar_field);
  return {std::move(f_tilde), std::move(f_bar)};
}

}  // namespace dcsplit
