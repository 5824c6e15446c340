#pragma once

#include "dcsplit/field.hpp"

namespace dcsplit {

// Convex PL function represented by its supporting planes (lower-hull faces).
// The canonical value anywhere is the max over face planes, which coincides
// with the hull surface on the build region and with the natural convex
// extension beyond it.
struct ConvexPLFunction {
  std::vector<LowerHullFace> faces;
  std::vector<Vec2> domain;  // ccw convex polygon
  PLField as_field;          // max-over-planes sampled at the master mesh nodes

  double value(const Vec2& p) const;
};

struct ConvexityReport {
  bool is_convex = false;
  double worst_violation = 0;  // max over region nodes of field - minorant
  int witness_vertex = -1;     // master mesh vertex, when the witness is a node
  int witness_edge = -1;       // master mesh edge, when the witness is a crossing point
};

// Sample points that pin down a field on a convex region: mesh vertices
// inside or on the region, the region's vertices, and region-boundary /
// mesh-edge crossings. Values are PL evaluations of the field.
struct RegionSamples {
  std::vector<Vec2> points;
  std::vector<double> values;
  std::vector<int> mesh_vertex;  // >= 0 when the sample is a mesh vertex
  std::vector<int> mesh_edge;    // >= 0 when the sample is an edge crossing
};

RegionSamples gather_region_samples(const PLField& field, const std::vector<Vec2>& region);

// Largest convex function below the field on the region: the lower hull of
// the lifted region samples. Throws "degenerate region" when the region
// holds fewer than three non-collinear samples.
ConvexPLFunction convex_minorant(const PLField& field, const std::vector<Vec2>& region);

ConvexityReport check_convexity(const PLField& field, const std::vector<Vec2>& region);

// Same planes over a larger domain (the max-of-planes extension formula).
ConvexPLFunction convex_extension(const ConvexPLFunction& fn,
                                  const std::vector<Vec2>& target_domain);

struct FiniteFunction;  // decompose module

// Splits a finite function, convex on its support hull, into the convex
// extension f_tilde and the convex complement f_bar with
// fn = f_tilde - f_bar on the whole domain. Throws "not convex on support".
std::pair<ConvexPLFunction, ConvexPLFunction> split_finite_convex(const FiniteFunction& fn);

}  // namespace dcsplit
