#pragma once

#include "dcsplit/curves.hpp"
#include "dcsplit/decompose.hpp"

#include <optional>
#include <string>

namespace dcsplit {

// On-disk field description: a convex domain plus either a grid with values
// (row-major for rectangular domains) or an explicit mesh; values may name a
// preset formula instead of listing numbers.
struct FieldDocument {
  std::string name;
  std::string units;
  std::vector<Vec2> domain;
  bool has_grid = false;
  int nx = 0, ny = 0;
  bool has_mesh = false;
  std::vector<Vec2> mesh_vertices;
  std::vector<std::array<int, 3>> mesh_triangles;
  std::vector<double> values;  // used when preset is empty
  std::string preset;
};

inline constexpr const char* kSchemaVersion = "dc-split/1";

FieldDocument parse_field_document(const std::string& text);
FieldDocument load_field_document(const std::string& path);
std::string write_field_document(const FieldDocument& doc);

bool preset_exists(const std::string& name);
double preset_value(const std::string& name, double x, double y);
FieldDocument preset_document(const std::string& name);

// Grid size a level-refined preset uses at the given diagnostics level.
// Presets whose sampling is tied to the level (the oscillatory one) refine;
// all others keep their document grid.
std::pair<int, int> preset_grid_for_level(const std::string& name, int level);

PLField build_field(const FieldDocument& doc);
PLField build_field_for_level(const FieldDocument& doc, int level);

// Number formatting used by every writer: decimal, 17 significant digits.
std::string format_number(double v);

struct CheckLevel {
  int level = 0;
  double variation_sup = 0;
  double turn_sup = 0;
};

struct CheckReport {
  std::vector<CheckLevel> levels;
  std::string variation_classification;  // "plateau" or "growth"
  std::string turn_classification;
  uint64_t seed = 0;
};

std::string classify_series(const std::vector<double>& series);

// Structured result documents (deterministic byte-for-byte for fixed inputs).
std::string write_decompose_document(const FieldDocument& doc, double eps, int max_iter,
                                     const DCPair& pair, const DecompositionTrace& trace,
                                     const std::vector<double>& condition_estimate);
std::string write_check_document(const FieldDocument& doc, const CheckReport& report);
std::string write_restrict_summary(const FieldDocument& doc, const CurveRestriction& restriction,
                                   double variation, double turn);
std::string write_plot_data(const CurveRestriction& restriction);

// Parallelism cap from DC_SPLIT_THREADS (>= 1). Throws Error when the
// variable is set but not a positive integer.
int thread_cap();

}  // namespace dcsplit
