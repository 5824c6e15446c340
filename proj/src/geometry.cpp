#include "dcsplit/geometry.hpp"

#include "dcsplit/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>

namespace dcsplit {

int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return exact::orient2d(a.x(), a.y(), b.x(), b.y(), c.x(), c.y());
}

// ---------------------------------------------------------------------------
// Polygons

double polygon_area(const std::vector<Vec2>& poly) {
  double s = 0;
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

double polygon_perimeter(const std::vector<Vec2>& poly) {
  double s = 0;
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) s += (poly[(i + 1) % n] - poly[i]).norm();
  return s;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
  double a2 = 0;
  Vec2 c(0, 0);
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    double w = p.x() * q.y() - q.x() * p.y();
    a2 += w;
    c += w * (p + q);
  }
  if (std::fabs(a2) < 1e-300) {
    Vec2 m(0, 0);
    for (const Vec2& p : poly) m += p;
    return m / static_cast<double>(n);
  }
  return c / (3.0 * a2);
}

std::vector<Vec2> normalize_convex_polygon(std::vector<Vec2> poly) {
  std::vector<Vec2> out;
  for (const Vec2& p : poly) {
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3) throw Error("domain must be convex");
  if (polygon_area(out) < 0) std::reverse(out.begin(), out.end());
  int n = static_cast<int>(out.size());
  int strict = 0;
  for (int i = 0; i < n; ++i) {
    int s = orient(out[i], out[(i + 1) % n], out[(i + 2) % n]);
    if (s < 0) throw Error("domain must be convex");
    if (s > 0) ++strict;
  }
  if (strict < 3) throw Error("domain must be convex");
  return out;
}

int point_in_convex_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  int n = static_cast<int>(poly.size());
  bool on_boundary = false;
  for (int i = 0; i < n; ++i) {
    int s = orient(poly[i], poly[(i + 1) % n], p);
    if (s < 0) return -1;
    if (s == 0) on_boundary = true;
  }
  return on_boundary ? 0 : 1;
}

double inradius_at(const std::vector<Vec2>& poly, const Vec2& p) {
  double r = std::numeric_limits<double>::infinity();
  int n = static_cast<int>(poly.size());
  for (int i = 0; i < n; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % n];
    Vec2 d = b - a;
    double len = d.norm();
    if (len == 0) continue;
    double dist = (d.x() * (p.y() - a.y()) - d.y() * (p.x() - a.x())) / len;
    r = std::min(r, dist);
  }
  return r;
}

std::vector<Vec2> convex_hull_2d(const std::vector<Vec2>& points) {
  if (points.empty()) throw Error("empty point set");
  for (const Vec2& p : points) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw Error("empty point set");
  }
  std::vector<Vec2> pts = points;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  int n = static_cast<int>(pts.size());
  if (n == 1) return {pts[0]};
  if (n == 2) return {pts[0], pts[1]};

  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {  // upper chain
    while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 2) return {pts[0], pts[n - 1]};  // fully collinear
  return hull;
}

double hull_boundary_length(const std::vector<Vec2>& points) {
  std::vector<Vec2> h = convex_hull_2d(points);
  if (h.size() == 1) return 0;
  if (h.size() == 2) return 2.0 * (h[1] - h[0]).norm();
  return polygon_perimeter(h);
}

bool segment_intersection(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                          double& t_on_a) {
  Vec2 d1 = a1 - a0, d2 = b1 - b0;
  double denom = d1.x() * d2.y() - d1.y() * d2.x();
  if (denom == 0) return false;
  Vec2 w = b0 - a0;
  double t = (w.x() * d2.y() - w.y() * d2.x()) / denom;
  double s = (w.x() * d1.y() - w.y() * d1.x()) / denom;
  const double slack = 1e-9;
  if (t < -slack || t > 1 + slack || s < -slack || s > 1 + slack) return false;
  t_on_a = std::clamp(t, 0.0, 1.0);
  return true;
}

// ---------------------------------------------------------------------------
// Triangulation

namespace {

uint64_t coord_key(const Vec2& p) {
  uint64_t a, b;
  double x = p.x() == 0.0 ? 0.0 : p.x();  // normalize -0
  double y = p.y() == 0.0 ? 0.0 : p.y();
  std::memcpy(&a, &x, 8);
  std::memcpy(&b, &y, 8);
  return a * 0x9e3779b97f4a7c15ULL ^ (b + 0x517cc1b727220a95ULL);
}

struct NodeSet {
  std::vector<Vec2> pts;
  std::unordered_map<uint64_t, std::vector<int>> index;

  int find_exact(const Vec2& p) const {
    auto it = index.find(coord_key(p));
    if (it == index.end()) return -1;
    for (int i : it->second) {
      if (pts[i] == p) return i;
    }
    return -1;
  }
  int add(const Vec2& p) {
    int i = find_exact(p);
    if (i >= 0) return i;
    pts.push_back(p);
    index[coord_key(p)].push_back(static_cast<int>(pts.size()) - 1);
    return static_cast<int>(pts.size()) - 1;
  }
  int snap(const Vec2& p, double tol) const {
    int i = find_exact(p);
    if (i >= 0) return i;
    int best = -1;
    double best_d = tol;
    for (int j = 0; j < static_cast<int>(pts.size()); ++j) {
      double d = (pts[j] - p).norm();
      if (d < best_d || (d == best_d && (best < 0 || j < best))) {
        best = j;
        best_d = d;
      }
    }
    return best;
  }
};

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, int axis, double c, bool keep_ge) {
  std::vector<Vec2> out;
  int n = static_cast<int>(poly.size());
  auto inside = [&](const Vec2& p) { return keep_ge ? p[axis] >= c : p[axis] <= c; };
  for (int i = 0; i < n; ++i) {
    const Vec2& cur = poly[i];
    const Vec2& nxt = poly[(i + 1) % n];
    bool ci = inside(cur), ni = inside(nxt);
    if (ci) out.push_back(cur);
    if (ci != ni) {
      double t = (c - cur[axis]) / (nxt[axis] - cur[axis]);
      Vec2 q = cur + t * (nxt - cur);
      q[axis] = c;
      out.push_back(q);
    }
  }
  return out;
}

void build_connectivity(Triangulation& tri) {
  std::unordered_map<uint64_t, std::array<int, 2>> edge_map;
  auto ekey = [](int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
  };
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = tri.triangles[t][k], b = tri.triangles[t][(k + 1) % 3];
      auto [it, fresh] = edge_map.try_emplace(ekey(a, b), std::array<int, 2>{t, -1});
      if (!fresh) {
        if (it->second[1] != -1) throw Error("mesh edge shared by more than two triangles");
        it->second[1] = t;
      }
    }
  }
  tri.neighbors.assign(tri.triangles.size(), {-1, -1, -1});
  tri.edges.clear();
  tri.edge_triangles.clear();
  // deterministic edge ordering: by (lo, hi) vertex indices
  std::vector<std::pair<uint64_t, std::array<int, 2>>> sorted(edge_map.begin(), edge_map.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, tris] : sorted) {
    int lo = static_cast<int>(key >> 32), hi = static_cast<int>(key & 0xffffffffu);
    tri.edges.push_back({lo, hi});
    tri.edge_triangles.push_back(tris);
  }
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = tri.triangles[t][k], b = tri.triangles[t][(k + 1) % 3];
      auto& pair = edge_map[ekey(a, b)];
      tri.neighbors[t][k] = (pair[0] == t) ? pair[1] : pair[0];
    }
  }
}

void build_bins(Triangulation& tri) {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Vec2& p : tri.vertices) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
    tri.max_abs_coord = std::max({tri.max_abs_coord, std::fabs(p.x()), std::fabs(p.y())});
  }
  int nb = std::clamp(static_cast<int>(std::sqrt(tri.triangles.size() / 2.0 + 1.0)), 1, 1024);
  tri.bins_x = tri.bins_y = nb;
  tri.bin_origin = Vec2(xmin, ymin);
  tri.bin_dx = std::max((xmax - xmin) / nb, 1e-300);
  tri.bin_dy = std::max((ymax - ymin) / nb, 1e-300);
  tri.triangle_bins.assign(static_cast<size_t>(nb) * nb, {});
  tri.edge_bins.assign(static_cast<size_t>(nb) * nb, {});

  auto bin_range = [&](const Vec2& lo, const Vec2& hi, int& i0, int& i1, int& j0, int& j1) {
    i0 = std::clamp(static_cast<int>((lo.x() - xmin) / tri.bin_dx), 0, nb - 1);
    i1 = std::clamp(static_cast<int>((hi.x() - xmin) / tri.bin_dx), 0, nb - 1);
    j0 = std::clamp(static_cast<int>((lo.y() - ymin) / tri.bin_dy), 0, nb - 1);
    j1 = std::clamp(static_cast<int>((hi.y() - ymin) / tri.bin_dy), 0, nb - 1);
  };
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t) {
    const auto& tr = tri.triangles[t];
    Vec2 lo = tri.vertices[tr[0]].cwiseMin(tri.vertices[tr[1]]).cwiseMin(tri.vertices[tr[2]]);
    Vec2 hi = tri.vertices[tr[0]].cwiseMax(tri.vertices[tr[1]]).cwiseMax(tri.vertices[tr[2]]);
    int i0, i1, j0, j1;
    bin_range(lo, hi, i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) tri.triangle_bins[static_cast<size_t>(j) * nb + i].push_back(t);
  }
  for (int e = 0; e < static_cast<int>(tri.edges.size()); ++e) {
    Vec2 a = tri.vertices[tri.edges[e][0]], b = tri.vertices[tri.edges[e][1]];
    int i0, i1, j0, j1;
    bin_range(a.cwiseMin(b), a.cwiseMax(b), i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) tri.edge_bins[static_cast<size_t>(j) * nb + i].push_back(e);
  }
}

bool point_in_triangle(const Triangulation& tri, int t, const Vec2& p) {
  const auto& tr = tri.triangles[t];
  return orient(tri.vertices[tr[0]], tri.vertices[tr[1]], p) >= 0 &&
         orient(tri.vertices[tr[1]], tri.vertices[tr[2]], p) >= 0 &&
         orient(tri.vertices[tr[2]], tri.vertices[tr[0]], p) >= 0;
}

}  // namespace

int Triangulation::locate(const Vec2& p) const {
  int i = std::clamp(static_cast<int>((p.x() - bin_origin.x()) / bin_dx), 0, bins_x - 1);
  int j = std::clamp(static_cast<int>((p.y() - bin_origin.y()) / bin_dy), 0, bins_y - 1);
  for (int t : triangle_bins[static_cast<size_t>(j) * bins_x + i]) {
    if (point_in_triangle(*this, t, p)) return t;
  }
  return -1;
}

int Triangulation::locate_with_tolerance(const Vec2& p) const {
  int t = locate(p);
  if (t >= 0) return t;
  double tol = tol_geom(std::max(max_abs_coord, std::max(std::fabs(p.x()), std::fabs(p.y()))));
  int pi = std::clamp(static_cast<int>((p.x() - bin_origin.x()) / bin_dx), 0, bins_x - 1);
  int pj = std::clamp(static_cast<int>((p.y() - bin_origin.y()) / bin_dy), 0, bins_y - 1);
  int best = -1;
  double best_v = -tol;
  for (int j = std::max(0, pj - 1); j <= std::min(bins_y - 1, pj + 1); ++j) {
    for (int i = std::max(0, pi - 1); i <= std::min(bins_x - 1, pi + 1); ++i) {
      for (int t2 : triangle_bins[static_cast<size_t>(j) * bins_x + i]) {
        const auto& tr = triangles[t2];
        double v = std::numeric_limits<double>::max();
        for (int k = 0; k < 3; ++k) {
          Vec2 a = vertices[tr[k]], b = vertices[tr[(k + 1) % 3]];
          Vec2 d = b - a;
          double len = d.norm();
          if (len == 0) continue;
          v = std::min(v, (d.x() * (p.y() - a.y()) - d.y() * (p.x() - a.x())) / len);
        }
        if (v > best_v || (v == best_v && best >= 0 && t2 < best)) {
          best = t2;
          best_v = v;
        }
      }
    }
  }
  return best;
}

void Triangulation::candidate_edges_on_segment(const Vec2& a, const Vec2& b,
                                               std::vector<int>& out) const {
  out.clear();
  double len = (b - a).norm();
  double step = 0.5 * std::min(bin_dx, bin_dy);
  int nsteps = std::max(1, std::min(static_cast<int>(len / step) + 1, 1 << 20));
  std::vector<uint32_t> bins;
  bins.reserve(nsteps + 2);
  for (int s = 0; s <= nsteps; ++s) {
    Vec2 p = a + (static_cast<double>(s) / nsteps) * (b - a);
    int i = std::clamp(static_cast<int>((p.x() - bin_origin.x()) / bin_dx), 0, bins_x - 1);
    int j = std::clamp(static_cast<int>((p.y() - bin_origin.y()) / bin_dy), 0, bins_y - 1);
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        int ii = i + di, jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= bins_x || jj >= bins_y) continue;
        bins.push_back(static_cast<uint32_t>(jj) * bins_x + ii);
      }
    }
  }
  std::sort(bins.begin(), bins.end());
  bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
  for (uint32_t bin : bins) {
    const auto& list = edge_bins[bin];
    out.insert(out.end(), list.begin(), list.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

Triangulation triangulate_grid(const std::vector<Vec2>& domain_in, int nx, int ny) {
  if (nx < 2 || ny < 2) throw Error("nx and ny must be at least 2");
  std::vector<Vec2> domain = normalize_convex_polygon(domain_in);

  double xmin = domain[0].x(), xmax = xmin, ymin = domain[0].y(), ymax = ymin;
  for (const Vec2& p : domain) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  std::vector<double> xs(nx), ys(ny);
  for (int i = 0; i < nx; ++i) xs[i] = xmin + i * (xmax - xmin) / (nx - 1);
  for (int j = 0; j < ny; ++j) ys[j] = ymin + j * (ymax - ymin) / (ny - 1);
  xs[nx - 1] = xmax;
  ys[ny - 1] = ymax;

  Triangulation tri;
  tri.domain = domain;

  bool is_rect = domain.size() == 4;
  if (is_rect) {
    for (const Vec2& p : domain) {
      if ((p.x() != xmin && p.x() != xmax) || (p.y() != ymin && p.y() != ymax)) is_rect = false;
    }
  }

  if (is_rect) {
    tri.vertices.reserve(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) tri.vertices.emplace_back(xs[i], ys[j]);
    auto vid = [&](int i, int j) { return j * nx + i; };
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        tri.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        tri.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
    }
  } else {
    NodeSet nodes;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        Vec2 p(xs[i], ys[j]);
        if (point_in_convex_polygon(domain, p) >= 0) nodes.add(p);
      }
    }
    for (const Vec2& p : domain) nodes.add(p);
    int nd = static_cast<int>(domain.size());
    for (int e = 0; e < nd; ++e) {
      Vec2 p = domain[e], q = domain[(e + 1) % nd];
      for (int i = 0; i < nx; ++i) {
        double c = xs[i];
        if ((p.x() < c && q.x() > c) || (p.x() > c && q.x() < c)) {
          double t = (c - p.x()) / (q.x() - p.x());
          nodes.add(Vec2(c, p.y() + t * (q.y() - p.y())));
        }
      }
      for (int j = 0; j < ny; ++j) {
        double c = ys[j];
        if ((p.y() < c && q.y() > c) || (p.y() > c && q.y() < c)) {
          double t = (c - p.y()) / (q.y() - p.y());
          nodes.add(Vec2(p.x() + t * (q.x() - p.x()), c));
        }
      }
    }

    double scale = std::max({std::fabs(xmin), std::fabs(xmax), std::fabs(ymin), std::fabs(ymax)});
    double snap_tol = tol_geom(scale);
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        std::vector<Vec2> cell = clip_halfplane(domain, 0, xs[i], true);
        if (cell.size() >= 3) cell = clip_halfplane(cell, 0, xs[i + 1], false);
        if (cell.size() >= 3) cell = clip_halfplane(cell, 1, ys[j], true);
        if (cell.size() >= 3) cell = clip_halfplane(cell, 1, ys[j + 1], false);
        if (cell.size() < 3) continue;

        std::vector<int> ids;
        for (const Vec2& p : cell) {
          int id = nodes.snap(p, snap_tol);
          if (id < 0) throw Error("internal: unsnapped clip vertex");
          if (ids.empty() || ids.back() != id) ids.push_back(id);
        }
        while (ids.size() > 1 && ids.front() == ids.back()) ids.pop_back();
        if (ids.size() < 3) continue;

        // full grid cells keep the fixed corner-to-corner diagonal
        int c00 = nodes.find_exact(Vec2(xs[i], ys[j]));
        int c10 = nodes.find_exact(Vec2(xs[i + 1], ys[j]));
        int c11 = nodes.find_exact(Vec2(xs[i + 1], ys[j + 1]));
        int c01 = nodes.find_exact(Vec2(xs[i], ys[j + 1]));
        bool full = ids.size() == 4 && c00 >= 0 && c10 >= 0 && c11 >= 0 && c01 >= 0;
        if (full) {
          std::vector<int> want = {c00, c10, c11, c01};
          std::vector<int> a = ids, b = want;
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          full = (a == b);
        }
        if (full) {
          tri.triangles.push_back({c00, c10, c11});
          tri.triangles.push_back({c00, c11, c01});
          continue;
        }
        int m = 0;
        for (int k = 1; k < static_cast<int>(ids.size()); ++k)
          if (ids[k] < ids[m]) m = k;
        int nids = static_cast<int>(ids.size());
        for (int k = 1; k + 1 < nids; ++k) {
          int a = ids[m], b = ids[(m + k) % nids], c = ids[(m + k + 1) % nids];
          if (orient(nodes.pts[a], nodes.pts[b], nodes.pts[c]) > 0)
            tri.triangles.push_back({a, b, c});
        }
      }
    }
    tri.vertices = nodes.pts;
  }

  build_connectivity(tri);
  build_bins(tri);
  return tri;
}

Triangulation finalize_triangulation(Triangulation tri) {
  tri.domain = normalize_convex_polygon(tri.domain);
  build_connectivity(tri);
  build_bins(tri);
  return tri;
}

// ---------------------------------------------------------------------------
// Lower convex hull of lifted points

namespace {

constexpr int kOmega = -1;  // symbolic vertex at vertical infinity

struct HullFaceRec {
  int a, b, c;  // c == kOmega for lid faces; real faces ccw in projection
  bool alive = true;
};

struct HullBuilder {
  const std::vector<Vec3>& pts;  // deduped
  std::vector<HullFaceRec> faces;
  int stride;                 // vertex count + 1 (omega remapped to stride - 1)
  bool dense;                 // flat table for mesh-sized inputs, hash map beyond
  std::vector<int> edge_flat;
  std::unordered_map<int64_t, int> edge_map;
  std::vector<int> vis_buffer;

  explicit HullBuilder(const std::vector<Vec3>& p)
      : pts(p), stride(static_cast<int>(p.size()) + 1) {
    dense = static_cast<int64_t>(stride) * stride <= (1 << 23);
    if (dense) edge_flat.assign(static_cast<size_t>(stride) * stride, -1);
  }

  int64_t dkey(int u, int v) const {
    int64_t uu = u == kOmega ? stride - 1 : u;
    int64_t vv = v == kOmega ? stride - 1 : v;
    return uu * stride + vv;
  }

  int edge_lookup(int64_t key) const {
    if (dense) return edge_flat[key];
    auto it = edge_map.find(key);
    return it == edge_map.end() ? -1 : it->second;
  }
  void edge_set(int64_t key, int f) {
    if (dense) {
      if (edge_flat[key] != -1) throw Error("internal: duplicate hull edge");
      edge_flat[key] = f;
    } else {
      if (!edge_map.emplace(key, f).second) throw Error("internal: duplicate hull edge");
    }
  }
  void edge_erase(int64_t key) {
    if (dense)
      edge_flat[key] = -1;
    else
      edge_map.erase(key);
  }

  void add_face(int a, int b, int c) {
    // canonicalize: omega, if present, goes last
    if (a == kOmega) {
      int t = a; a = b; b = c; c = t;
    } else if (b == kOmega) {
      int t = c; c = b; b = a; a = t;
    }
    faces.push_back({a, b, c, true});
    int f = static_cast<int>(faces.size()) - 1;
    const int vs[3] = {a, b, c};
    for (int k = 0; k < 3; ++k) edge_set(dkey(vs[k], vs[(k + 1) % 3]), f);
  }

  void drop_face(int f) {
    auto& fr = faces[f];
    fr.alive = false;
    const int vs[3] = {fr.a, fr.b, fr.c};
    for (int k = 0; k < 3; ++k) edge_erase(dkey(vs[k], vs[(k + 1) % 3]));
  }

  // lifted p strictly below the extended lifted line through a and b
  bool below_lifted_line(int a, int b, const Vec3& p) const {
    const Vec3& A = pts[a];
    const Vec3& B = pts[b];
    int k = std::fabs(B.x() - A.x()) >= std::fabs(B.y() - A.y()) ? 0 : 1;
    int s = exact::orient2d(A[k], A.z(), B[k], B.z(), p[k], p.z());
    return B[k] > A[k] ? s < 0 : s > 0;
  }

  bool visible(const HullFaceRec& f, const Vec3& p) const {
    if (f.c == kOmega) {
      const Vec3& A = pts[f.a];
      const Vec3& B = pts[f.b];
      int s = exact::orient2d(A.x(), A.y(), B.x(), B.y(), p.x(), p.y());
      if (s != 0) return s > 0;
      return below_lifted_line(f.a, f.b, p);
    }
    return exact::orient3d(pts[f.a].data(), pts[f.b].data(), pts[f.c].data(), p.data()) < 0;
  }

  void insert(int pi) {
    const Vec3& p = pts[pi];
    std::vector<int>& vis = vis_buffer;
    vis.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].alive && visible(faces[f], p)) vis.push_back(f);
    }
    if (vis.empty()) return;  // on or above the current hull
    for (int f : vis) drop_face(f);
    for (int f : vis) {
      const HullFaceRec fr = faces[f];  // copy: add_face may reallocate
      const int vs[3] = {fr.a, fr.b, fr.c};
      for (int k = 0; k < 3; ++k) {
        int x = vs[k], y = vs[(k + 1) % 3];
        if (edge_lookup(dkey(y, x)) == -1) continue;  // twin also deleted
        add_face(x, y, pi);
      }
    }
  }
};

}  // namespace

std::vector<LowerHullFace> lower_hull_3d(const std::vector<Vec3>& points) {
  for (const Vec3& p : points) {
    if (!p.allFinite()) throw Error("degenerate domain");
  }
  if (points.size() < 3) throw Error("degenerate domain");

  // Sort lexicographically and keep the lowest lift per projected point.
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const Vec3 &a = points[i], &b = points[j];
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    if (a.z() != b.z()) return a.z() < b.z();
    return i < j;
  });
  std::vector<Vec3> kept;
  std::vector<int> orig;
  for (int idx : order) {
    if (!kept.empty() && kept.back().x() == points[idx].x() &&
        kept.back().y() == points[idx].y())
      continue;
    kept.push_back(points[idx]);
    orig.push_back(idx);
  }
  if (kept.size() < 3) throw Error("degenerate domain");

  int i2 = -1;
  for (int i = 2; i < static_cast<int>(kept.size()); ++i) {
    if (exact::orient2d(kept[0].x(), kept[0].y(), kept[1].x(), kept[1].y(), kept[i].x(),
                        kept[i].y()) != 0) {
      i2 = i;
      break;
    }
  }
  if (i2 < 0) throw Error("degenerate domain");

  HullBuilder hb(kept);
  int a = 0, b = 1, c = i2;
  if (exact::orient2d(kept[a].x(), kept[a].y(), kept[b].x(), kept[b].y(), kept[c].x(),
                      kept[c].y()) < 0)
    std::swap(b, c);
  hb.add_face(a, b, c);
  hb.add_face(b, a, kOmega);
  hb.add_face(c, b, kOmega);
  hb.add_face(a, c, kOmega);

  for (int i = 2; i < static_cast<int>(kept.size()); ++i) {
    if (i == i2) continue;
    hb.insert(i);
  }

  std::vector<LowerHullFace> out;
  for (const auto& fr : hb.faces) {
    if (!fr.alive || fr.c == kOmega) continue;
    // rotate so the smallest original index comes first (stable output)
    int ids[3] = {fr.a, fr.b, fr.c};
    int rot = 0;
    for (int k = 1; k < 3; ++k)
      if (orig[ids[k]] < orig[ids[rot]]) rot = k;
    LowerHullFace face;
    for (int k = 0; k < 3; ++k) {
      int ki = ids[(rot + k) % 3];
      face.vertex_indices[k] = orig[ki];
      face.projected_triangle[k] = kept[ki].head<2>();
    }
    const Vec3 &A = points[face.vertex_indices[0]], &B = points[face.vertex_indices[1]],
               &C = points[face.vertex_indices[2]];
    Eigen::Matrix2d M;
    M << B.x() - A.x(), B.y() - A.y(), C.x() - A.x(), C.y() - A.y();
    Eigen::Vector2d rhs(B.z() - A.z(), C.z() - A.z());
    face.gradient = M.partialPivLu().solve(rhs);
    face.offset = A.z() - face.gradient.dot(A.head<2>());
    out.push_back(face);
  }
  std::sort(out.begin(), out.end(), [](const LowerHullFace& f, const LowerHullFace& g) {
    return f.vertex_indices < g.vertex_indices;
  });
  return out;
}

std::vector<std::vector<int>> merge_coplanar_faces(const std::vector<LowerHullFace>& faces,
                                                   double tol) {
  std::vector<std::vector<int>> groups;
  std::vector<char> used(faces.size(), 0);
  for (int i = 0; i < static_cast<int>(faces.size()); ++i) {
    if (used[i]) continue;
    std::vector<int> g{i};
    used[i] = 1;
    for (int j = i + 1; j < static_cast<int>(faces.size()); ++j) {
      if (used[j]) continue;
      if ((faces[i].gradient - faces[j].gradient).norm() <= tol &&
          std::fabs(faces[i].offset - faces[j].offset) <= tol) {
        g.push_back(j);
        used[j] = 1;
      }
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace dcsplit
