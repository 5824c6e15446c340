#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dcsplit {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Point2 = Eigen::Vector2d;
using LiftedPoint = Eigen::Vector3d;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scale-aware geometric tolerance: 1e-9 * (1 + max |coordinate|).
inline double tol_geom(double max_abs_coord) { return 1e-9 * (1.0 + max_abs_coord); }

int orient(const Vec2& a, const Vec2& b, const Vec2& c);  // exact sign of the ccw turn

// ---------------------------------------------------------------------------
// Convex polygons

double polygon_area(const std::vector<Vec2>& poly);
double polygon_perimeter(const std::vector<Vec2>& poly);
Vec2 polygon_centroid(const std::vector<Vec2>& poly);

// Dedupes consecutive equal vertices and orients counterclockwise.
// Throws "domain must be convex" when the result is not a convex polygon.
std::vector<Vec2> normalize_convex_polygon(std::vector<Vec2> poly);

// +1 strictly inside, 0 on the boundary, -1 strictly outside (exact).
int point_in_convex_polygon(const std::vector<Vec2>& poly, const Vec2& p);

// Distance from an interior point to the polygon boundary.
double inradius_at(const std::vector<Vec2>& poly, const Vec2& p);

// Extreme points of the input in counterclockwise order. Collinear input
// yields the two endpoints; a single point yields itself.
std::vector<Vec2> convex_hull_2d(const std::vector<Vec2>& points);

// Perimeter of the hull of a point set, counting a degenerate segment hull as
// a doubled segment (a closed loop around it) and a single point as zero.
double hull_boundary_length(const std::vector<Vec2>& points);

// ---------------------------------------------------------------------------
// Triangulations of gridded convex domains

struct Triangulation {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;          // ccw vertex indices
  std::vector<std::array<int, 3>> neighbors;          // across edge (v[k], v[k+1]); -1 on boundary
  std::vector<std::array<int, 2>> edges;              // unique undirected edges (lo, hi)
  std::vector<std::array<int, 2>> edge_triangles;     // triangles adjacent to each edge; -1 if none
  std::vector<Vec2> domain;                           // convex domain polygon, ccw

  // Uniform bins for point location and segment stabbing.
  int bins_x = 0, bins_y = 0;
  Vec2 bin_origin{0, 0};
  double bin_dx = 1, bin_dy = 1;
  std::vector<std::vector<int>> triangle_bins;
  std::vector<std::vector<int>> edge_bins;

  double max_abs_coord = 0;

  int locate(const Vec2& p) const;                    // containing triangle, lowest index wins; -1 if outside
  int locate_with_tolerance(const Vec2& p) const;     // as above, accepting points within tol_geom
  void candidate_edges_on_segment(const Vec2& a, const Vec2& b, std::vector<int>& out) const;
  bool is_interior_edge(int e) const { return edge_triangles[e][1] >= 0; }
};

// Deterministic triangulation of a convex polygonal domain on an nx-by-ny
// grid of its bounding box. Full cells split along the (i,j)-(i+1,j+1)
// diagonal; boundary cells are clipped and fanned. For an axis-aligned
// rectangular domain the vertex order is row-major.
Triangulation triangulate_grid(const std::vector<Vec2>& domain, int nx, int ny);

// Builds adjacency, edge lists and bins for a triangulation assembled from
// explicit vertices/triangles/domain.
Triangulation finalize_triangulation(Triangulation tri);

// ---------------------------------------------------------------------------
// Lower convex hulls of lifted point sets

struct LowerHullFace {
  Vec2 gradient;                      // plane z = gradient . (x, y) + offset
  double offset = 0;
  std::array<int, 3> vertex_indices;  // into the input point list, ccw in projection
  std::array<Vec2, 3> projected_triangle;

  double plane_value(const Vec2& p) const { return gradient.dot(p) + offset; }
};

// Faces of the lower convex hull (the graph of the largest convex function
// below the lifted points). Throws "degenerate domain" when all projections
// are collinear.
std::vector<LowerHullFace> lower_hull_3d(const std::vector<Vec3>& points);

// Groups faces whose planes agree within tolerance; reporting helper only.
std::vector<std::vector<int>> merge_coplanar_faces(const std::vector<LowerHullFace>& faces,
                                                   double tol);

// Intersection parameter helpers ------------------------------------------------

// Proper or endpoint intersection of segments a0a1 and b0b1. Returns true and
// the parameter t along a0a1 when the segments cross; parallel segments
// report no intersection.
bool segment_intersection(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                          double& t_on_a);

}  // namespace dcsplit
