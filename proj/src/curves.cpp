#include "dcsplit/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace dcsplit {

namespace {
// atan2 of (|u x v|, u . v): equal to the clamped arccos of the normalized
// dot product but exact for parallel tangents, which the refinement
// invariant (inserting partition points never changes the sum) needs.
double angle_between(const Vec3& u, const Vec3& v) {
  return std::atan2(u.cross(v).norm(), u.dot(v));
}
double angle_between(const Vec2& u, const Vec2& v) {
  double cross = u.x() * v.y() - u.y() * v.x();
  return std::atan2(std::fabs(cross), u.dot(v));
}
}  // namespace

ClosedConvexCurve ClosedConvexCurve::from_vertices(std::vector<Vec2> verts) {
  std::vector<Vec2> v = normalize_convex_polygon(std::move(verts));
  ClosedConvexCurve c;
  c.vertices = std::move(v);
  c.cumulative_length.resize(c.vertices.size() + 1);
  c.cumulative_length[0] = 0;
  for (size_t i = 0; i < c.vertices.size(); ++i) {
    const Vec2& a = c.vertices[i];
    const Vec2& b = c.vertices[(i + 1) % c.vertices.size()];
    c.cumulative_length[i + 1] = c.cumulative_length[i] + (b - a).norm();
  }
  c.total_length = c.cumulative_length.back();
  return c;
}

Vec2 ClosedConvexCurve::segment_direction(int i) const {
  const Vec2& a = vertices[i];
  const Vec2& b = vertices[(i + 1) % vertices.size()];
  return (b - a).normalized();
}

Vec2 ClosedConvexCurve::point_at(double t) const {
  t = std::clamp(t, 0.0, total_length);
  int n = segment_count();
  int i = static_cast<int>(std::upper_bound(cumulative_length.begin(), cumulative_length.end(), t) -
                           cumulative_length.begin()) -
          1;
  i = std::clamp(i, 0, n - 1);
  double local = t - cumulative_length[i];
  return vertices[i] + local * segment_direction(i);
}

ClosedConvexCurve make_square(double half_side, const Vec2& center) {
  double s = half_side;
  return ClosedConvexCurve::from_vertices({center + Vec2(-s, -s), center + Vec2(s, -s),
                                           center + Vec2(s, s), center + Vec2(-s, s)});
}

ClosedConvexCurve make_regular_polygon(int k, double radius, const Vec2& center, double phase) {
  std::vector<Vec2> verts;
  verts.reserve(k);
  for (int i = 0; i < k; ++i) {
    double a = phase + 2.0 * M_PI * i / k;
    verts.push_back(center + radius * Vec2(std::cos(a), std::sin(a)));
  }
  return ClosedConvexCurve::from_vertices(std::move(verts));
}

ClosedConvexCurve make_rectangle(double width, double height, double angle_rad,
                                 const Vec2& center) {
  Vec2 u(std::cos(angle_rad), std::sin(angle_rad));
  Vec2 w(-u.y(), u.x());
  double a = 0.5 * width, b = 0.5 * height;
  return ClosedConvexCurve::from_vertices({center - a * u - b * w, center + a * u - b * w,
                                           center + a * u + b * w, center - a * u + b * w});
}

CurveRestriction restrict_to_curve(const PLField& field, const ClosedConvexCurve& curve) {
  const Triangulation& mesh = *field.mesh;
  for (const Vec2& v : curve.vertices) {
    if (point_in_convex_polygon(mesh.domain, v) < 0) throw Error("curve outside domain");
  }

  int n = curve.segment_count();
  std::vector<double> ts;
  ts.push_back(0.0);
  std::vector<int> candidates;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = curve.vertices[i];
    const Vec2& b = curve.vertices[(i + 1) % n];
    double t0 = curve.cumulative_length[i];
    double seg_len = curve.cumulative_length[i + 1] - t0;
    ts.push_back(t0);
    mesh.candidate_edges_on_segment(a, b, candidates);
    for (int e : candidates) {
      const Vec2& u = mesh.vertices[mesh.edges[e][0]];
      const Vec2& v = mesh.vertices[mesh.edges[e][1]];
      double t;
      if (segment_intersection(a, b, u, v, t)) ts.push_back(t0 + t * seg_len);
    }
  }
  ts.push_back(curve.total_length);
  std::sort(ts.begin(), ts.end());
  double spacing = 1e-12 * curve.total_length;
  std::vector<double> bp;
  for (double t : ts) {
    if (bp.empty() || t - bp.back() > spacing) bp.push_back(t);
  }
  if (bp.back() < curve.total_length - spacing)
    bp.push_back(curve.total_length);
  else
    bp.back() = curve.total_length;
  bp.front() = 0.0;

  CurveRestriction r;
  r.breakpoints = bp;
  r.values.reserve(bp.size());
  for (double t : bp) r.values.push_back(evaluate(field, curve.point_at(t)));
  int m = static_cast<int>(bp.size()) - 1;
  r.slopes.reserve(m);
  r.directions.reserve(m);
  for (int i = 0; i < m; ++i) {
    double tm = 0.5 * (bp[i] + bp[i + 1]);
    int seg = static_cast<int>(std::upper_bound(curve.cumulative_length.begin(),
                                                curve.cumulative_length.end(), tm) -
                               curve.cumulative_length.begin()) -
              1;
    seg = std::clamp(seg, 0, n - 1);
    Vec2 dir = curve.segment_direction(seg);
    int tri = mesh.locate_with_tolerance(curve.point_at(tm));
    if (tri < 0) throw Error("curve outside domain");
    r.slopes.push_back(triangle_gradient(field, tri).dot(dir));
    r.directions.push_back(dir);
  }
  return r;
}

double variation_of_slope(const CurveRestriction& r) {
  int m = static_cast<int>(r.slopes.size());
  if (m < 2) throw Error("restriction needs at least two segments");
  double v = 0;
  for (int i = 0; i < m; ++i) v += std::fabs(r.slopes[(i + 1) % m] - r.slopes[i]);
  return v;
}

LiftedCurve lift_curve(const PLField& field, const ClosedConvexCurve& curve) {
  CurveRestriction r = restrict_to_curve(field, curve);
  LiftedCurve lc;
  lc.breakpoints = r.breakpoints;
  lc.tangents.reserve(r.slopes.size());
  for (size_t i = 0; i < r.slopes.size(); ++i)
    lc.tangents.emplace_back(r.directions[i].x(), r.directions[i].y(), r.slopes[i]);
  return lc;
}

double turn_from_restriction(const CurveRestriction& r) {
  int m = static_cast<int>(r.slopes.size());
  if (m < 2) throw Error("degenerate segment");
  double turn = 0;
  for (int i = 0; i < m; ++i) {
    Vec3 u(r.directions[i].x(), r.directions[i].y(), r.slopes[i]);
    Vec3 v(r.directions[(i + 1) % m].x(), r.directions[(i + 1) % m].y(), r.slopes[(i + 1) % m]);
    turn += angle_between(u, v);
  }
  return turn;
}

double turn_of_lifted_curve(const PLField& field, const ClosedConvexCurve& curve) {
  return turn_from_restriction(restrict_to_curve(field, curve));
}

double planar_turn(const CurveRestriction& r) {
  int m = static_cast<int>(r.directions.size());
  double turn = 0;
  for (int i = 0; i < m; ++i) turn += angle_between(r.directions[i], r.directions[(i + 1) % m]);
  return turn;
}

ThetaBoundsReport theta_bounds_check(const PLField& field, const ClosedConvexCurve& curve) {
  CurveRestriction r = restrict_to_curve(field, curve);
  ThetaBoundsReport rep;
  rep.turn = turn_from_restriction(r);
  int m = static_cast<int>(r.slopes.size());
  double lower = 0;
  for (int i = 0; i < m; ++i)
    lower += std::fabs(theta_transform(r.slopes[(i + 1) % m]) - theta_transform(r.slopes[i]));
  rep.lower = lower;
  rep.upper = planar_turn(r) + lower;
  double L = lipschitz_constant(field);
  rep.scale = std::sqrt(1.0 + L * L);
  double tol = 1e-9 * (1.0 + rep.turn);
  rep.ok = (rep.lower <= rep.turn + tol) && (rep.turn <= rep.upper * rep.scale + tol);
  return rep;
}

double HomogeneousConvexPL::value(const Vec2& q) const {
  if (generators.empty()) throw Error("homogeneous function needs generators");
  double best = generators[0].dot(q);
  for (const Vec2& v : generators) best = std::max(best, v.dot(q));
  return best;
}

double HomogeneousConvexPL::lipschitz() const {
  double L = 0;
  for (const Vec2& v : generators) L = std::max(L, v.norm());
  return L;
}

CurveRestriction restrict_homogeneous(const HomogeneousConvexPL& psi,
                                      const ClosedConvexCurve& curve) {
  if (psi.generators.empty()) throw Error("homogeneous function needs generators");
  CurveRestriction r;
  r.breakpoints.push_back(0.0);
  int n = curve.segment_count();
  for (int i = 0; i < n; ++i) {
    const Vec2& a = curve.vertices[i];
    Vec2 dir = curve.segment_direction(i);
    double t0 = curve.cumulative_length[i];
    double seg_len = curve.cumulative_length[i + 1] - t0;

    // Upper envelope of the lines t -> <v, a> + t <v, dir> over [0, seg_len].
    struct Line {
      double m, c;
    };
    std::vector<Line> lines;
    lines.reserve(psi.generators.size());
    for (const Vec2& v : psi.generators) lines.push_back({v.dot(dir), v.dot(a)});
    std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
      return x.m != y.m ? x.m < y.m : x.c < y.c;
    });
    std::vector<Line> dedup;
    for (const Line& l : lines) {
      if (!dedup.empty() && dedup.back().m == l.m)
        dedup.back() = l;  // same slope: keep the larger intercept
      else
        dedup.push_back(l);
    }
    auto cross_at = [](const Line& p, const Line& q) { return (p.c - q.c) / (q.m - p.m); };
    std::vector<Line> env;  // active pieces by increasing slope
    for (const Line& l : dedup) {
      while (env.size() >= 2 &&
             cross_at(env.back(), l) <= cross_at(env[env.size() - 2], env.back()))
        env.pop_back();
      env.push_back(l);
    }
    std::vector<double> act(env.size());  // where each piece becomes active
    act[0] = -std::numeric_limits<double>::infinity();
    for (size_t k = 1; k < env.size(); ++k) act[k] = cross_at(env[k - 1], env[k]);
    for (size_t k = 0; k < env.size(); ++k) {
      double begin = std::max(act[k], 0.0);
      double end = (k + 1 < env.size()) ? std::min(act[k + 1], seg_len) : seg_len;
      if (end - begin <= 1e-15 * seg_len) continue;
      if (begin > 0.0 && t0 + begin > r.breakpoints.back() + 1e-12 * curve.total_length)
        r.breakpoints.push_back(t0 + begin);
      r.slopes.push_back(env[k].m);
      r.directions.push_back(dir);
    }
    r.breakpoints.push_back(curve.cumulative_length[i + 1]);
  }
  for (double t : r.breakpoints) r.values.push_back(psi.value(curve.point_at(t)));
  return r;
}

HomogeneousBoundReport homogeneous_bound_check(const HomogeneousConvexPL& psi, const ClosedConvexCurve& curve) {
  if (point_in_convex_polygon(curve.vertices, Vec2(0, 0)) <= 0)
    throw Error("origin not enclosed");
  HomogeneousBoundReport rep;
  rep.variation = variation_of_slope(restrict_homogeneous(psi, curve));
  double perimeter = hull_boundary_length(psi.generators);
  rep.bound = 2.0 * perimeter + psi.lipschitz() * curve.total_length;
  rep.ok = rep.variation <= rep.bound + 1e-9 * (1.0 + rep.bound);
  return rep;
}

// ---------------------------------------------------------------------------
// Curve families

namespace {

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Largest centered rectangle with direction u and aspect ratio `aspect`
// fitting strictly inside the domain; returns the half-length along u.
double fit_rect_half_length(const std::vector<Vec2>& domain, const Vec2& center, const Vec2& u,
                            double aspect) {
  Vec2 w(-u.y(), u.x());
  double best = std::numeric_limits<double>::infinity();
  int n = static_cast<int>(domain.size());
  for (int i = 0; i < n; ++i) {
    Vec2 a = domain[i], b = domain[(i + 1) % n];
    Vec2 edge = b - a;
    double len = edge.norm();
    if (len == 0) continue;
    Vec2 inward(-edge.y() / len, edge.x() / len);
    double room = inward.dot(a - center) * -1.0;  // distance from center to edge line
    double denom = std::fabs(inward.dot(u)) + aspect * std::fabs(inward.dot(w));
    if (denom < 1e-300) continue;
    best = std::min(best, room / denom);
  }
  return best;
}

void add_curve(std::vector<ClosedConvexCurve>& out, ClosedConvexCurve c) {
  out.push_back(std::move(c));
}

void family_sublevel(const std::vector<Vec2>& domain, int l, uint64_t seed,
                     std::vector<ClosedConvexCurve>& out) {
  Vec2 c0 = polygon_centroid(domain);
  double r0 = inradius_at(domain, c0);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(l));

  auto fitted_kgon = [&](int k, double scale, const Vec2& center, double phase) {
    double r = inradius_at(domain, center);
    if (r <= 0) return;
    add_curve(out, make_regular_polygon(k, 0.95 * scale * r, center, phase));
  };
  auto fitted_square = [&](double scale, const Vec2& center) {
    double r = inradius_at(domain, center);
    if (r <= 0) return;
    // circumradius of the square is half_side * sqrt(2)
    add_curve(out, make_square(0.95 * scale * r / std::sqrt(2.0), center));
  };
  auto thin_rect = [&](double aspect, double angle, const Vec2& center) {
    Vec2 u(std::cos(angle), std::sin(angle));
    double hl = fit_rect_half_length(domain, center, u, aspect);
    if (!(hl > 0) || !std::isfinite(hl)) return;
    hl *= 0.92;
    add_curve(out, make_rectangle(2.0 * hl, 2.0 * aspect * hl, angle, center));
  };

  switch (l) {
    case 1:
      fitted_square(0.9, c0);
      fitted_square(0.55, c0);
      fitted_kgon(8, 0.9, c0, 0.0);
      fitted_kgon(4, 0.7, c0, M_PI / 4);
      thin_rect(0.1, 0.0, c0);
      thin_rect(0.1, M_PI / 2, c0);
      break;
    case 2:
      fitted_kgon(16, 0.92, c0, 0.0);
      fitted_kgon(32, 0.93, c0, 0.0);
      fitted_kgon(64, 0.94, c0, 0.0);
      fitted_square(0.3, c0);
      for (int j = 0; j < 4; ++j) thin_rect(0.01, j * M_PI / 4, c0);
      for (int j = 0; j < 2; ++j) {
        Vec2 center = c0 + 0.3 * r0 * Vec2(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
        fitted_kgon(8, 0.8, center, uniform01(rng));
      }
      break;
    case 3:
      for (int j = 0; j < 6; ++j) thin_rect(1e-3, j * M_PI / 6, c0);
      fitted_kgon(64, 0.6, c0, 0.0);
      fitted_square(0.15, c0);
      break;
    case 4:
      for (int j = 0; j < 8; ++j) thin_rect(1e-4, j * M_PI / 8, c0);
      for (int j = 0; j < 3; ++j) {
        Vec2 center = c0 + 0.35 * r0 * Vec2(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
        fitted_kgon(16, 0.7, center, uniform01(rng));
      }
      break;
    default:
      for (int j = 0; j < 12; ++j) thin_rect(std::pow(10.0, -l), j * M_PI / 12, c0);
      fitted_kgon(64, 0.95, c0, 0.0);
      break;
  }
}

}  // namespace

std::vector<ClosedConvexCurve> curve_family(const std::vector<Vec2>& domain_in, int level,
                                            uint64_t seed) {
  if (level < 1) throw Error("level must be at least 1");
  std::vector<Vec2> domain = normalize_convex_polygon(domain_in);
  std::vector<ClosedConvexCurve> out;
  for (int l = 1; l <= level; ++l) family_sublevel(domain, l, seed, out);
  return out;
}

std::vector<double> dc_condition_estimate(const PLField& field, int levels, uint64_t seed) {
  if (levels < 1) throw Error("levels must be at least 1");
  std::vector<Vec2> domain = normalize_convex_polygon(field.mesh->domain);
  std::vector<double> out;
  double sup = 0;  // families nest, so the per-level sup is cumulative
  std::vector<ClosedConvexCurve> sub;
  for (int l = 1; l <= levels; ++l) {
    sub.clear();
    family_sublevel(domain, l, seed, sub);
    for (const auto& curve : sub)
      sup = std::max(sup, variation_of_slope(restrict_to_curve(field, curve)));
    out.push_back(sup);
  }
  return out;
}

std::vector<double> turn_estimate(const PLField& field, int levels, uint64_t seed) {
  if (levels < 1) throw Error("levels must be at least 1");
  std::vector<Vec2> domain = normalize_convex_polygon(field.mesh->domain);
  std::vector<double> out;
  double sup = 0;
  std::vector<ClosedConvexCurve> sub;
  for (int l = 1; l <= levels; ++l) {
    sub.clear();
    family_sublevel(domain, l, seed, sub);
    for (const auto& curve : sub)
      sup = std::max(sup, turn_of_lifted_curve(field, curve));
    out.push_back(sup);
  }
  return out;
}

}  // namespace dcsplit
